#include "biovalent/footprint.hpp"

#include "biovalent/numfmt.hpp"

#include <array>
#include <cmath>

namespace biovalent::footprint {

namespace {

struct Prefix {
  char symbol;
  double scale;
};

// Largest first.
constexpr std::array<Prefix, 3> kPrefixes{{{'n', 1e-9}, {'p', 1e-12}, {'f', 1e-15}}};

template <typename KeyFn>
std::vector<CategoryFootprint> aggregate_by(std::span<const LineFootprint> lines, KeyFn key) {
  std::map<std::string, CategoryFootprint> groups;
  for (const auto& line : lines) {
    const std::string name = key(line);
    auto& g = groups[name];
    g.name = name;
    ++g.lines;
    g.consumption_eur += line.consumption_eur;
    g.nominal_eur += line.nominal_eur;
    g.bf += line.bf;
    g.co2e_kg += line.co2e_kg;
  }
  std::vector<CategoryFootprint> out;
  for (auto& [name, g] : groups) {
    g.bde = biodiversity_equivalent(g.bf);
    if (g.consumption_eur > 0) {
      g.bde_intensity = g.bde.value / g.consumption_eur;
      g.co2e_intensity = g.co2e_kg / g.consumption_eur;
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

std::string BdeQuantity::display() const { return format_bde(value); }

LineResult line_footprint(double amount, const EcosystemVector& bde_per_unit, double co2e_per_unit) {
  return LineResult{amount * bde_per_unit, amount * co2e_per_unit};
}

BdeQuantity biodiversity_equivalent(const EcosystemVector& bf) {
  return BdeQuantity{bf(0) * kBdeWeights(0) + bf(1) * kBdeWeights(1) + bf(2) * kBdeWeights(2)};
}

std::vector<LineFootprint> compute_line_footprints(const ledger::MappedConsumption& consumption,
                                                   const characterization::ImpactFactorSet& factors,
                                                   CoverageMode mode, Diagnostics* diagnostics) {
  std::vector<LineFootprint> out;
  out.reserve(consumption.monetary.size() + consumption.physical.size());
  const auto& index = factors.index();

  for (const auto& m : consumption.monetary) {
    LineFootprint line{m.account_id, m.category, m.statement_line, false, false, m.harmonized_eur, m.nominal_eur};
    const auto region = index.find_region(m.target.region);
    const auto sector = index.find_sector(m.target.sector);
    if (!region || !sector) {
      const std::string what = "no impact factor for " + m.target.region + ":" + m.target.sector + " (account " +
                               m.account_id + ")";
      if (mode == CoverageMode::strict) throw CoverageError(what);
      if (diagnostics) diagnostics->warn(what + "; counted as zero");
      line.flagged = true;
      out.push_back(std::move(line));
      continue;
    }
    const auto pos = index.position(*region, *sector);
    const auto r = line_footprint(m.harmonized_eur, factors.bde(pos), factors.co2e(pos));
    line.bf = r.bf;
    line.co2e_kg = r.co2e_kg;
    line.flagged = factors.zero_coverage()[pos];
    out.push_back(std::move(line));
  }

  for (const auto& p : consumption.physical) {
    LineFootprint line{p.account_id, p.category, p.statement_line, true, false, 0.0, 0.0};
    const auto r = line_footprint(p.quantity, p.intensity.bde_per_unit, p.intensity.co2e_per_unit);
    line.bf = r.bf;
    line.co2e_kg = r.co2e_kg;
    out.push_back(std::move(line));
  }
  return out;
}

double carbon_footprint(std::span<const LineFootprint> lines) {
  double total = 0;
  for (const auto& l : lines) total += l.co2e_kg;
  return total;
}

std::vector<CategoryFootprint> aggregate_categories(std::span<const LineFootprint> lines,
                                                    const CategoryMap& categories) {
  for (const auto& l : lines) {
    if (l.category.empty()) throw CategorizationError("line of account \"" + l.account_id + "\" has no category tag");
    if (!categories.empty() && !categories.count(l.category))
      throw CategorizationError("category tag \"" + l.category + "\" is not in the category map");
  }
  return aggregate_by(lines, [&](const LineFootprint& l) {
    return categories.empty() ? l.category : categories.at(l.category);
  });
}

std::vector<CategoryFootprint> aggregate_statement_lines(std::span<const LineFootprint> lines) {
  for (const auto& l : lines)
    if (l.statement_line.empty())
      throw CategorizationError("line of account \"" + l.account_id + "\" has no statement line");
  return aggregate_by(lines, [](const LineFootprint& l) { return l.statement_line; });
}

CategoryFootprint total_footprint(std::span<const LineFootprint> lines) {
  auto rows = aggregate_by(lines, [](const LineFootprint&) { return std::string("Total"); });
  if (rows.empty()) {
    CategoryFootprint empty;
    empty.name = "Total";
    return empty;
  }
  return rows.front();
}

std::string format_bde(double value) {
  const double magnitude = std::fabs(value);
  if (magnitude >= 1e-18 && magnitude < 1e-6) {
    // Pick the prefix on the rounded mantissa so 999.996e-12 becomes "1.00 nBDe", not "1000.00 pBDe".
    for (auto it = kPrefixes.rbegin(); it != kPrefixes.rend(); ++it) {
      const std::string text = format_fixed(value / it->scale, 2);
      const double shown = std::fabs(*parse_double(text));
      if (shown >= 1.0 && shown < 1000.0) return text + " " + it->symbol + "BDe";
    }
  }
  return format_scientific(value, 2) + " BDe";
}

std::optional<double> parse_bde(std::string_view text) {
  text = trim(text);
  if (!text.ends_with("BDe")) return std::nullopt;
  text.remove_suffix(3);
  double scale = 1.0;
  if (!text.empty() && text.back() != ' ') {
    bool known = false;
    for (const auto& p : kPrefixes)
      if (text.back() == p.symbol) {
        scale = p.scale;
        known = true;
      }
    if (!known) return std::nullopt;
    text.remove_suffix(1);
  }
  const auto mantissa = parse_double(text);
  if (!mantissa) return std::nullopt;
  return *mantissa * scale;
}

}  // namespace biovalent::footprint
