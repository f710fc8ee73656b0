#pragma once

// The financial-environmental impact statement: an income statement whose
// expense lines carry carbon and biodiversity footprints, extended with
// offset pricing lines and net positions per offset scenario.

#include "biovalent/csv.hpp"
#include "biovalent/footprint.hpp"
#include "biovalent/offsets.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace biovalent::report {

struct FinancialLine {
  std::string name;
  double amount_eur = 0.0;
};

/// Financial side of the statement, in full euro.
struct LedgerSummary {
  std::vector<FinancialLine> revenues;
  std::vector<FinancialLine> expenses;
  std::vector<FinancialLine> gains;  ///< losses and gains, signed

  /// Columns section (revenue | expense | gain), line, amount_eur.
  static LedgerSummary from_csv(const CsvTable& table);
  /// Expenses only: nominal euro of monetary lines summed per statement line.
  static LedgerSummary from_lines(std::span<const footprint::LineFootprint> lines);
};

struct StatementFootprint {
  std::string line;
  double co2e_kg = 0.0;
  double bde = 0.0;
};

std::vector<StatementFootprint> statement_footprints(std::span<const footprint::CategoryFootprint> lines);

struct ExpenseLine {
  std::string name;
  double amount_eur = 0.0;
  double co2e_kg = 0.0;
  double bde = 0.0;
};

struct PricingLine {
  std::string name;
  std::string scenario;  ///< empty for the carbon line
  double cost_eur = 0.0;
  double co2e_kg = 0.0;  ///< negative: footprint removed
  double bde = 0.0;      ///< negative: footprint removed
};

struct NetPosition {
  std::string name;
  std::string scenario;  ///< empty for the position without offsets
  double net_income_eur = 0.0;
  double co2e_kg = 0.0;
  double bde = 0.0;
};

struct CarbonPricing {
  double unit_price = 0.0;  ///< per tCO2e, pricing currency
  double fx_rate = 1.0;     ///< euro per pricing-currency unit
  double fraction = 1.0;    ///< share of the carbon footprint offset
};

struct BiodiversityOffset {
  std::string scenario;
  std::string label;            ///< e.g. "Finland"
  double annual_cost_eur = 0.0;
  double fraction = 1.0;        ///< share of the biodiversity footprint offset
};

struct StatementOptions {
  /// Whether the carbon offset line is charged against net income. The
  /// published statement layout leaves it out and charges only the
  /// selected biodiversity offset.
  bool deduct_carbon_offset_cost = false;
};

struct ImpactStatement {
  std::vector<FinancialLine> revenues;
  std::vector<ExpenseLine> expenses;
  std::vector<FinancialLine> gains;
  ExpenseLine total_expenses;
  double total_revenue_eur = 0.0;
  double total_gains_eur = 0.0;
  std::optional<PricingLine> carbon_offset;
  std::vector<PricingLine> biodiversity_offsets;
  NetPosition without_offsets;
  std::vector<NetPosition> with_offsets;
  std::vector<std::string> warnings;
};

/// Joins financial lines with per-line footprints and offset prices.
/// A footprint line without a financial counterpart is kept at 0 euro and warned about.
ImpactStatement assemble_statement(const LedgerSummary& summary, std::span<const StatementFootprint> footprints,
                                   const std::optional<CarbonPricing>& carbon,
                                   std::span<const BiodiversityOffset> biodiversity,
                                   const StatementOptions& options = {});

/// Net position for a scenario; "" selects the position without offsets.
/// Throws SelectionError for unknown scenarios.
const NetPosition& net_positions(const ImpactStatement& statement, std::string_view scenario);

/// k-euro / tCO2e / nBDe table with space-grouped thousands ("243 742") and two-decimal nBDe ("68.79").
std::string statement_csv(const ImpactStatement& statement);
std::string statement_json(const ImpactStatement& statement);

std::string format_keur(double eur);
std::string format_tco2e(double kg);
std::string format_nbde(double bde);

}  // namespace biovalent::report
