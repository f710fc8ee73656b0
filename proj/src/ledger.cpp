#include "biovalent/ledger.hpp"

#include "biovalent/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace biovalent::ledger {

std::size_t Ledger::credit_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const LedgerEntry& e) { return e.is_credit(); }));
}

Ledger parse_ledger(const CsvTable& table) {
  static constexpr std::string_view kColumns[] = {"account_id", "account_name", "year",     "kind",
                                                  "amount",     "unit",         "category", "statement_line"};
  table.require_schema(kColumns);
  const auto id_col = table.column("account_id");
  const auto name_col = table.column("account_name");
  const auto year_col = table.column("year");
  const auto kind_col = table.column("kind");
  const auto amount_col = table.column("amount");
  const auto unit_col = table.column("unit");
  const auto category_col = table.column("category");
  const auto line_col = table.column("statement_line");

  Ledger ledger;
  ledger.entries.reserve(table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    LedgerEntry e;
    e.account_id = std::string(trim(table.text(r, id_col)));
    e.account_name = std::string(trim(table.cell(r, name_col)));
    if (trim(table.cell(r, year_col)).empty()) throw table.error(r, year_col, "missing year");
    e.year = static_cast<int>(table.integer(r, year_col));
    const auto kind = trim(table.text(r, kind_col));
    if (kind == "monetary")
      e.kind = EntryKind::monetary;
    else if (kind == "physical")
      e.kind = EntryKind::physical;
    else
      throw table.error(r, kind_col, "kind must be monetary or physical");
    e.amount = table.number(r, amount_col);
    e.unit = std::string(trim(table.cell(r, unit_col)));
    if (e.kind == EntryKind::physical && e.unit.empty()) throw table.error(r, unit_col, "physical entry needs a unit");
    e.category = std::string(trim(table.cell(r, category_col)));
    e.statement_line = std::string(trim(table.cell(r, line_col)));
    ledger.entries.push_back(std::move(e));
  }
  return ledger;
}

Ledger read_ledger(const std::filesystem::path& path) { return parse_ledger(CsvTable::read_file(path)); }

void InflationTable::set(int year, double factor) {
  if (!std::isfinite(factor)) throw ConfigurationError("inflation factor for " + std::to_string(year) + " is not finite");
  factors_[year] = factor;
}

double InflationTable::factor(int year) const {
  auto it = factors_.find(year);
  if (it == factors_.end()) throw ConfigurationError("no inflation factor for year " + std::to_string(year));
  return it->second;
}

InflationTable InflationTable::from_csv(const CsvTable& table) {
  static constexpr std::string_view kColumns[] = {"year", "inflation_factor"};
  table.require_schema(kColumns);
  const auto year_col = table.column("year");
  const auto factor_col = table.column("inflation_factor");
  InflationTable out;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const auto year = static_cast<int>(table.integer(r, year_col));
    if (out.contains(year)) throw table.error(r, year_col, "duplicate year");
    out.set(year, table.number(r, factor_col));
  }
  return out;
}

double adjust_inflation(double financial_price, double inflation_factor) {
  return financial_price * (1.0 - inflation_factor);
}

double compute_bpcf(const BasicPriceInputs& in) {
  const double wedge = in.taxes - in.subsidies + in.vat + in.margins;
  const double denominator = in.supply + wedge;
  if (denominator == 0.0) throw DegenerateSectorError(0, "basic price conversion factor has a zero denominator");
  return wedge / denominator;
}

double harmonize_price(double financial_price, double inflation_factor, double bpcf) {
  return adjust_inflation(financial_price, inflation_factor) * (1.0 - bpcf);
}

void BasicPriceTable::set(const std::string& sector, const BasicPriceInputs& inputs) {
  if (!(inputs.supply > 0)) throw ConfigurationError("sector \"" + sector + "\": total supply must be positive");
  double bpcf = 0;
  try {
    bpcf = compute_bpcf(inputs);
  } catch (const DegenerateSectorError&) {
    throw DegenerateSectorError(0, "sector \"" + sector + "\": basic price conversion factor has a zero denominator");
  }
  if (!std::isfinite(bpcf)) throw ConfigurationError("sector \"" + sector + "\": conversion factor is not finite");
  bpcf_[sector] = bpcf;
}

double BasicPriceTable::bpcf(const std::string& sector) const {
  auto it = bpcf_.find(sector);
  if (it == bpcf_.end()) throw ConfigurationError("no basic-price inputs for sector \"" + sector + "\"");
  return it->second;
}

BasicPriceTable BasicPriceTable::from_csv(const CsvTable& table) {
  static constexpr std::string_view kColumns[] = {"sector", "tax", "sub", "vat", "ttm", "sup"};
  table.require_schema(kColumns);
  BasicPriceTable out;
  const auto sector_col = table.column("sector");
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const std::string sector(trim(table.text(r, sector_col)));
    if (out.contains(sector)) throw table.error(r, sector_col, "duplicate sector");
    BasicPriceInputs in{table.number(r, table.column("tax")), table.number(r, table.column("sub")),
                        table.number(r, table.column("vat")), table.number(r, table.column("ttm")),
                        table.number(r, table.column("sup"))};
    try {
      out.set(sector, in);
    } catch (const Error& e) {
      throw table.error(r, table.column("sup"), e.what());
    }
  }
  return out;
}

void AccountMapping::map_monetary(const std::string& account_id, MonetaryTarget target) {
  if (target.region.empty() || target.sector.empty())
    throw ConfigurationError("account \"" + account_id + "\" needs a region and a sector");
  if (!targets_.emplace(account_id, std::move(target)).second)
    throw ConfigurationError("account \"" + account_id + "\" mapped twice");
}

void AccountMapping::map_physical(const std::string& account_id, PhysicalIntensity intensity) {
  if (intensity.unit.empty()) throw ConfigurationError("physical account \"" + account_id + "\" needs a unit");
  if (!intensity.bde_per_unit.allFinite() || (intensity.bde_per_unit.array() < 0).any() ||
      !std::isfinite(intensity.co2e_per_unit) || intensity.co2e_per_unit < 0)
    throw ConfigurationError("physical account \"" + account_id + "\": intensities must be finite and >= 0");
  if (!targets_.emplace(account_id, std::move(intensity)).second)
    throw ConfigurationError("account \"" + account_id + "\" mapped twice");
}

const AccountTarget* AccountMapping::find(const std::string& account_id) const {
  auto it = targets_.find(account_id);
  return it == targets_.end() ? nullptr : &it->second;
}

AccountMapping AccountMapping::from_csv(const CsvTable& table) {
  static constexpr std::string_view kColumns[] = {"account_id",     "consumption_region", "sector",
                                                  "unit",           "bde_terrestrial",    "bde_freshwater",
                                                  "bde_marine",     "co2e_per_unit"};
  table.require_schema(kColumns);
  AccountMapping out;
  const auto id_col = table.column("account_id");
  const auto region_col = table.column("consumption_region");
  const auto sector_col = table.column("sector");
  const auto unit_col = table.column("unit");
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const std::string id(trim(table.text(r, id_col)));
    const std::string region(trim(table.cell(r, region_col)));
    const std::string sector(trim(table.cell(r, sector_col)));
    const std::string unit(trim(table.cell(r, unit_col)));
    try {
      if (!region.empty() || !sector.empty()) {
        if (!unit.empty()) throw table.error(r, unit_col, "monetary mapping must leave unit blank");
        out.map_monetary(id, {region, sector});
        continue;
      }
      if (unit.empty()) throw table.error(r, region_col, "mapping needs region+sector or a physical unit");
      PhysicalIntensity p;
      p.unit = unit;
      p.bde_per_unit << table.number(r, table.column("bde_terrestrial")),
          table.number(r, table.column("bde_freshwater")), table.number(r, table.column("bde_marine"));
      p.co2e_per_unit = table.number(r, table.column("co2e_per_unit"));
      out.map_physical(id, std::move(p));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw table.error(r, id_col, e.what());
    }
  }
  return out;
}

MappedConsumption map_accounts(const Ledger& ledger, const AccountMapping& mapping,
                               const HarmonizationTables& tables) {
  std::set<std::string> unmapped;
  for (const auto& e : ledger.entries)
    if (!mapping.find(e.account_id)) unmapped.insert(e.account_id);
  if (!unmapped.empty()) throw MappingError({unmapped.begin(), unmapped.end()});

  MappedConsumption out;
  std::map<std::string, AuditRow> audit;
  for (const auto& e : ledger.entries) {
    const auto& target = *mapping.find(e.account_id);
    auto& row = audit[e.account_id];
    row.account_id = e.account_id;
    if (row.account_name.empty()) row.account_name = e.account_name;
    ++row.entries;

    if (e.kind == EntryKind::monetary) {
      const auto* t = std::get_if<MonetaryTarget>(&target);
      if (!t) throw ConfigurationError("monetary account \"" + e.account_id + "\" is mapped to a physical intensity");
      if (!tables.inflation) throw ConfigurationError("monetary entries need an inflation table");
      const double inflation = tables.inflation->factor(e.year);
      const double bpcf = tables.basic_prices ? tables.basic_prices->bpcf(t->sector) : 0.0;
      const double nominal = e.amount * tables.fx_to_eur;
      MonetaryLine line{e.account_id, e.category, e.statement_line, e.year, *t, nominal,
                        harmonize_price(nominal, inflation, bpcf)};
      out.by_sector[{t->region, t->sector}] += line.harmonized_eur;
      row.target = t->region + ":" + t->sector;
      out.monetary.push_back(std::move(line));
    } else {
      const auto* p = std::get_if<PhysicalIntensity>(&target);
      if (!p) throw ConfigurationError("physical account \"" + e.account_id + "\" is mapped to a product sector");
      if (p->unit != e.unit)
        throw UnitError("account \"" + e.account_id + "\" records [" + e.unit + "] but its intensity is per [" +
                        p->unit + "]");
      row.target = "physical:" + p->unit;
      out.physical.push_back({e.account_id, e.category, e.statement_line, e.year, e.amount, *p});
    }
  }
  for (auto& [id, row] : audit) out.audit.push_back(std::move(row));
  return out;
}

}  // namespace biovalent::ledger
