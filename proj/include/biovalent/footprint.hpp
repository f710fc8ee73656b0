#pragma once

#include "biovalent/characterization.hpp"
#include "biovalent/errors.hpp"
#include "biovalent/ledger.hpp"
#include "biovalent/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace biovalent::footprint {

/// Species-share weights for terrestrial, freshwater and marine ecosystems.
/// They sum to 0.999 and are used as published, without renormalisation.
inline const EcosystemVector kBdeWeights{0.801, 0.096, 0.102};

/// A biodiversity-equivalent value: the global potentially disappeared fraction.
struct BdeQuantity {
  double value = 0.0;

  std::string display() const;
};

struct LineResult {
  EcosystemVector bf = EcosystemVector::Zero();
  double co2e_kg = 0.0;
};

/// bf[eco] = amount * bde_per_unit[eco]; co2e = amount * co2e_per_unit.
LineResult line_footprint(double amount, const EcosystemVector& bde_per_unit, double co2e_per_unit);

BdeQuantity biodiversity_equivalent(const EcosystemVector& bf);

struct LineFootprint {
  std::string account_id;
  std::string category;
  std::string statement_line;
  bool physical = false;
  bool flagged = false;          ///< factor missing or zero-coverage
  double consumption_eur = 0.0;  ///< harmonized euro; 0 for physical lines
  double nominal_eur = 0.0;
  EcosystemVector bf = EcosystemVector::Zero();
  double co2e_kg = 0.0;

  BdeQuantity bde() const { return biodiversity_equivalent(bf); }
};

enum class CoverageMode {
  strict,   ///< a monetary line whose (region, sector) has no factor is an error
  lenient,  ///< such a line contributes zero and is flagged
};

/// Applies the factor set to harmonized monetary lines and direct intensities to physical lines.
std::vector<LineFootprint> compute_line_footprints(const ledger::MappedConsumption& consumption,
                                                   const characterization::ImpactFactorSet& factors,
                                                   CoverageMode mode = CoverageMode::strict,
                                                   Diagnostics* diagnostics = nullptr);

/// Total kg CO2e.
double carbon_footprint(std::span<const LineFootprint> lines);
inline double to_tonnes(double kg) { return kg / 1000.0; }

struct CategoryFootprint {
  std::string name;
  std::size_t lines = 0;
  double consumption_eur = 0.0;  ///< harmonized
  double nominal_eur = 0.0;
  EcosystemVector bf = EcosystemVector::Zero();
  BdeQuantity bde;
  double co2e_kg = 0.0;
  std::optional<double> bde_intensity;   ///< BDe per harmonized euro; undefined without consumption
  std::optional<double> co2e_intensity;  ///< kg CO2e per harmonized euro
};

/// Line tag -> reporting category. An empty map reports the tags themselves.
using CategoryMap = std::map<std::string, std::string>;

/// Per-category sums; every line lands in exactly one category. Ordered by name.
std::vector<CategoryFootprint> aggregate_categories(std::span<const LineFootprint> lines,
                                                    const CategoryMap& categories = {});

/// Per income-statement line sums, ordered by name.
std::vector<CategoryFootprint> aggregate_statement_lines(std::span<const LineFootprint> lines);

/// Grand total as a single row named "Total".
CategoryFootprint total_footprint(std::span<const LineFootprint> lines);

/// "68.79 nBDe", "250.00 fBDe", or scientific ("1.20e-05 BDe") outside [1e-18, 1e-6).
std::string format_bde(double value);
/// Inverse of format_bde for its own output.
std::optional<double> parse_bde(std::string_view text);

}  // namespace biovalent::footprint
