#include "biovalent/statement.hpp"

#include "biovalent/numfmt.hpp"

#include "json.hpp"

#include <map>

namespace biovalent::report {

namespace {

using ordered_json = nlohmann::ordered_json;

void add_to(std::vector<FinancialLine>& lines, const std::string& name, double amount) {
  for (auto& l : lines)
    if (l.name == name) {
      l.amount_eur += amount;
      return;
    }
  lines.push_back({name, amount});
}

double sum(const std::vector<FinancialLine>& lines) {
  double total = 0;
  for (const auto& l : lines) total += l.amount_eur;
  return total;
}

struct Row {
  std::string section;
  std::string line;
  std::optional<double> eur;
  std::optional<double> co2e_kg;
  std::optional<double> bde;
};

std::vector<Row> layout(const ImpactStatement& s) {
  std::vector<Row> rows;
  for (const auto& r : s.revenues) rows.push_back({"Revenue", r.name, r.amount_eur, {}, {}});
  for (const auto& e : s.expenses) rows.push_back({"Expenses / Footprints", e.name, e.amount_eur, e.co2e_kg, e.bde});
  rows.push_back({"Expenses / Footprints", s.total_expenses.name, s.total_expenses.amount_eur,
                  s.total_expenses.co2e_kg, s.total_expenses.bde});
  for (const auto& g : s.gains) rows.push_back({"Losses and Gains", g.name, g.amount_eur, {}, {}});
  if (s.carbon_offset) rows.push_back({"Impact pricing", s.carbon_offset->name, s.carbon_offset->cost_eur,
                                       s.carbon_offset->co2e_kg, {}});
  for (const auto& b : s.biodiversity_offsets) rows.push_back({"Impact pricing", b.name, b.cost_eur, {}, b.bde});
  const auto net = [&](const NetPosition& n) {
    rows.push_back({"Net Income / Footprint", n.name, n.net_income_eur, n.co2e_kg, n.bde});
  };
  net(s.without_offsets);
  for (const auto& n : s.with_offsets) net(n);
  return rows;
}

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

LedgerSummary LedgerSummary::from_csv(const CsvTable& table) {
  static constexpr std::string_view kColumns[] = {"section", "line", "amount_eur"};
  table.require_schema(kColumns);
  const auto c_section = table.column("section");
  const auto c_line = table.column("line");
  const auto c_amount = table.column("amount_eur");
  LedgerSummary out;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const std::string section = table.text(r, c_section);
    const std::string line = table.text(r, c_line);
    if (line.empty()) throw table.error(r, c_line, "line name is empty");
    const double amount = table.number(r, c_amount);
    if (section == "revenue") add_to(out.revenues, line, amount);
    else if (section == "expense") add_to(out.expenses, line, amount);
    else if (section == "gain") add_to(out.gains, line, amount);
    else throw table.error(r, c_section, "expected revenue, expense or gain, got \"" + section + "\"");
  }
  return out;
}

LedgerSummary LedgerSummary::from_lines(std::span<const footprint::LineFootprint> lines) {
  LedgerSummary out;
  for (const auto& l : lines)
    if (!l.physical) add_to(out.expenses, l.statement_line, l.nominal_eur);
  return out;
}

std::vector<StatementFootprint> statement_footprints(std::span<const footprint::CategoryFootprint> lines) {
  std::vector<StatementFootprint> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back({l.name, l.co2e_kg, l.bde.value});
  return out;
}

ImpactStatement assemble_statement(const LedgerSummary& summary, std::span<const StatementFootprint> footprints,
                                   const std::optional<CarbonPricing>& carbon,
                                   std::span<const BiodiversityOffset> biodiversity,
                                   const StatementOptions& options) {
  ImpactStatement s;
  s.revenues = summary.revenues;
  s.gains = summary.gains;

  std::map<std::string, const StatementFootprint*> by_line;
  for (const auto& f : footprints) {
    if (by_line.count(f.line)) throw StructuralError("footprint for statement line \"" + f.line + "\" given twice");
    by_line[f.line] = &f;
  }
  for (const auto& e : summary.expenses) {
    ExpenseLine line{e.name, e.amount_eur, 0.0, 0.0};
    if (auto it = by_line.find(e.name); it != by_line.end()) {
      line.co2e_kg = it->second->co2e_kg;
      line.bde = it->second->bde;
      by_line.erase(it);
    }
    s.expenses.push_back(line);
  }
  // Footprints left over have no financial line; keep them in input order.
  for (const auto& f : footprints) {
    if (!by_line.count(f.line)) continue;
    s.warnings.push_back("statement line \"" + f.line + "\" has a footprint but no financial line; shown at 0 EUR");
    s.expenses.push_back({f.line, 0.0, f.co2e_kg, f.bde});
  }

  s.total_expenses.name = "Total Expenses / Footprints";
  for (const auto& e : s.expenses) {
    s.total_expenses.amount_eur += e.amount_eur;
    s.total_expenses.co2e_kg += e.co2e_kg;
    s.total_expenses.bde += e.bde;
  }
  s.total_revenue_eur = sum(s.revenues);
  s.total_gains_eur = sum(s.gains);

  const double co2e = s.total_expenses.co2e_kg;
  const double bde = s.total_expenses.bde;
  const double base_income = s.total_revenue_eur + s.total_gains_eur - s.total_expenses.amount_eur;

  if (carbon) {
    if (!(carbon->fraction >= 0 && carbon->fraction <= 1)) throw ScenarioError("carbon offset fraction must lie in [0, 1]");
    const double offset_kg = carbon->fraction * co2e;
    const auto quote = offsets::carbon_offset_cost(offset_kg / 1000.0, carbon->unit_price, carbon->fx_rate);
    s.carbon_offset = PricingLine{"Carbon offsets", "", quote.cost_eur, -offset_kg, 0.0};
  }

  s.without_offsets = NetPosition{"Net footprint without offsets", "", base_income, co2e, bde};

  for (const auto& b : biodiversity) {
    if (b.scenario.empty()) throw ScenarioError("biodiversity offset needs a scenario name");
    if (!(b.fraction >= 0 && b.fraction <= 1))
      throw ScenarioError("scenario \"" + b.scenario + "\": fraction must lie in [0, 1]");
    for (const auto& existing : s.biodiversity_offsets)
      if (existing.scenario == b.scenario) throw ScenarioError("scenario \"" + b.scenario + "\" given twice");
    const std::string label = b.label.empty() ? b.scenario : b.label;
    PricingLine pricing{"Biodiversity offsets in " + label, b.scenario, b.annual_cost_eur, 0.0, -(b.fraction * bde)};
    s.biodiversity_offsets.push_back(pricing);

    NetPosition net{"Net footprint with offsets in " + label, b.scenario, base_income - b.annual_cost_eur, co2e,
                    bde + pricing.bde};
    if (s.carbon_offset) {
      net.co2e_kg = co2e + s.carbon_offset->co2e_kg;
      if (options.deduct_carbon_offset_cost) net.net_income_eur -= s.carbon_offset->cost_eur;
    }
    s.with_offsets.push_back(net);
  }
  return s;
}

const NetPosition& net_positions(const ImpactStatement& statement, std::string_view scenario) {
  if (scenario.empty()) return statement.without_offsets;
  for (const auto& n : statement.with_offsets)
    if (n.scenario == scenario) return n;
  std::string known;
  for (const auto& n : statement.with_offsets) known += (known.empty() ? "" : ", ") + n.scenario;
  throw SelectionError("unknown scenario \"" + std::string(scenario) + "\" (known: " +
                       (known.empty() ? "none" : known) + ")");
}

std::string format_keur(double eur) { return format_grouped(eur / 1000.0); }
std::string format_tco2e(double kg) { return format_grouped(kg / 1000.0); }
std::string format_nbde(double bde) { return format_fixed(bde / 1e-9, 2); }

std::string statement_csv(const ImpactStatement& statement) {
  std::string out = "section,line,financial_keur,carbon_tco2e,biodiversity_nbde\n";
  for (const auto& row : layout(statement)) {
    const std::vector<std::string> fields{row.section, row.line, row.eur ? format_keur(*row.eur) : "-",
                                          row.co2e_kg ? format_tco2e(*row.co2e_kg) : "-",
                                          row.bde ? format_nbde(*row.bde) : "-"};
    out += csv_record(fields);
    out += '\n';
  }
  return out;
}

std::string statement_json(const ImpactStatement& statement) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : layout(statement)) {
    ordered_json j;
    j["section"] = row.section;
    j["line"] = row.line;
    j["financial_eur"] = optional_number(row.eur);
    j["carbon_kgco2e"] = optional_number(row.co2e_kg);
    j["biodiversity_bde"] = optional_number(row.bde);
    j["display"] = {{"financial_keur", row.eur ? format_keur(*row.eur) : "-"},
                    {"carbon_tco2e", row.co2e_kg ? format_tco2e(*row.co2e_kg) : "-"},
                    {"biodiversity_nbde", row.bde ? format_nbde(*row.bde) : "-"}};
    rows.push_back(std::move(j));
  }
  ordered_json doc;
  doc["rows"] = std::move(rows);
  doc["warnings"] = statement.warnings;
  return doc.dump(2) + "\n";
}

}  // namespace biovalent::report
