#pragma once

// Organisational consumption accounts and their harmonisation to the basic
// prices and base year of the impact factors.

#include "biovalent/csv.hpp"
#include "biovalent/errors.hpp"
#include "biovalent/types.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace biovalent::ledger {

enum class EntryKind { monetary, physical };

struct LedgerEntry {
  std::string account_id;
  std::string account_name;
  int year = 0;
  EntryKind kind = EntryKind::monetary;
  double amount = 0.0;  ///< euro for monetary entries, `unit` otherwise
  std::string unit;
  std::string category;
  std::string statement_line;

  bool is_credit() const noexcept { return amount < 0; }
};

struct Ledger {
  std::vector<LedgerEntry> entries;

  std::size_t credit_count() const;
};

/// Columns account_id, account_name, year, kind, amount, unit, category,
/// statement_line. Unknown columns, bad numerals and missing years are errors.
Ledger parse_ledger(const CsvTable& table);
Ledger read_ledger(const std::filesystem::path& path);

/// Inflation factor per accounting year, relative to the factor base year.
/// IF is the fraction of the nominal amount attributable to price change, so
/// the adjusted price is FAP * (1 - IF); IF < 0 means deflation.
class InflationTable {
 public:
  void set(int year, double factor);
  /// Throws ConfigurationError when the year is missing.
  double factor(int year) const;
  bool contains(int year) const { return factors_.count(year) > 0; }

  /// Columns year, inflation_factor.
  static InflationTable from_csv(const CsvTable& table);

 private:
  std::map<int, double> factors_;
};

/// National-accounts components for one product sector, in currency units.
struct BasicPriceInputs {
  double taxes = 0.0;        ///< taxes on products excluding invoiced VAT
  double subsidies = 0.0;    ///< subsidies on products
  double vat = 0.0;          ///< VAT not deductible by the purchaser
  double margins = 0.0;      ///< trade and transport margins
  double supply = 0.0;       ///< total supply at basic prices
};

double adjust_inflation(double financial_price, double inflation_factor);

/// (TAX - SUB + VAT + TTM) / (SUP + TAX - SUB + VAT + TTM). Negative when
/// subsidies dominate. Throws DegenerateSectorError on a zero denominator.
double compute_bpcf(const BasicPriceInputs& inputs);

/// FAP * (1 - IF) * (1 - BPCF).
double harmonize_price(double financial_price, double inflation_factor, double bpcf);

class BasicPriceTable {
 public:
  void set(const std::string& sector, const BasicPriceInputs& inputs);
  bool contains(const std::string& sector) const { return bpcf_.count(sector) > 0; }
  /// Throws ConfigurationError for sectors without inputs.
  double bpcf(const std::string& sector) const;

  /// Columns sector, tax, sub, vat, ttm, sup.
  static BasicPriceTable from_csv(const CsvTable& table);

 private:
  std::map<std::string, double> bpcf_;
};

struct MonetaryTarget {
  std::string region;
  std::string sector;
};

struct PhysicalIntensity {
  std::string unit;
  EcosystemVector bde_per_unit = EcosystemVector::Zero();
  double co2e_per_unit = 0.0;  ///< kg CO2e per unit
};

using AccountTarget = std::variant<MonetaryTarget, PhysicalIntensity>;

class AccountMapping {
 public:
  void map_monetary(const std::string& account_id, MonetaryTarget target);
  void map_physical(const std::string& account_id, PhysicalIntensity intensity);
  const AccountTarget* find(const std::string& account_id) const;

  /// Columns account_id, consumption_region, sector, unit, bde_terrestrial,
  /// bde_freshwater, bde_marine, co2e_per_unit. Monetary accounts fill
  /// region and sector; physical accounts fill unit and the intensities.
  static AccountMapping from_csv(const CsvTable& table);

 private:
  std::map<std::string, AccountTarget> targets_;
};

struct MonetaryLine {
  std::string account_id;
  std::string category;
  std::string statement_line;
  int year = 0;
  MonetaryTarget target;
  double nominal_eur = 0.0;
  double harmonized_eur = 0.0;
};

struct PhysicalLine {
  std::string account_id;
  std::string category;
  std::string statement_line;
  int year = 0;
  double quantity = 0.0;
  PhysicalIntensity intensity;
};

struct AuditRow {
  std::string account_id;
  std::string account_name;
  std::string target;  ///< "region:sector" or "physical:<unit>"
  std::size_t entries = 0;
};

struct MappedConsumption {
  std::vector<MonetaryLine> monetary;
  std::vector<PhysicalLine> physical;
  std::map<std::pair<std::string, std::string>, double> by_sector;  ///< harmonized euro per (region, sector)
  std::vector<AuditRow> audit;  ///< one row per account, ordered by id
};

struct HarmonizationTables {
  const InflationTable* inflation = nullptr;     ///< required when monetary entries exist
  const BasicPriceTable* basic_prices = nullptr;  ///< null: purchaser prices are used as basic prices
  double fx_to_eur = 1.0;                         ///< ledger currency -> euro
};

/// Harmonizes monetary entries, attaches intensities to physical ones and
/// groups monetary amounts per (region, sector). Unmapped accounts raise a
/// MappingError listing all of them.
MappedConsumption map_accounts(const Ledger& ledger, const AccountMapping& mapping,
                               const HarmonizationTables& tables);

}  // namespace biovalent::ledger
