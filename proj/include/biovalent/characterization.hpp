#pragma once

// Turns attributed driver quantities into biodiversity impact factors per
// euro of final consumption: region concordance, driver concordance,
// spatial characterization, climate characterization and totalization.

#include "biovalent/csv.hpp"
#include "biovalent/errors.hpp"
#include "biovalent/mrio.hpp"
#include "biovalent/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace biovalent::characterization {

/// MRIO region -> characterization countries. A country belongs to exactly one region.
class RegionConcordance {
 public:
  /// `continent` is optional and only used for characterization-factor fallback.
  void add(const std::string& mrio_region, const std::string& country, const std::string& continent = {});

  bool contains(const std::string& mrio_region) const { return regions_.count(mrio_region) > 0; }
  /// Throws ConcordanceError for unmapped regions.
  const std::vector<std::string>& countries(const std::string& mrio_region) const;
  std::size_t frequency(const std::string& mrio_region) const { return countries(mrio_region).size(); }
  std::optional<std::string> continent_of(const std::string& country) const;

  /// Every listed region must map to at least one country.
  void validate(std::span<const std::string> mrio_regions) const;

  /// Columns mrio_region, country_iso3 and optionally continent.
  static RegionConcordance from_csv(const CsvTable& table);

 private:
  std::map<std::string, std::vector<std::string>> regions_;
  std::map<std::string, std::string> owner_;
  std::map<std::string, std::string> continent_;
};

struct DriverTarget {
  std::string driver;
  double weight = 1.0;
};

struct DriverMapping {
  std::vector<DriverTarget> targets;
  std::optional<std::string> exclusion_reason;
  bool excluded() const noexcept { return exclusion_reason.has_value(); }
};

/// MRIO stressor -> weighted characterization drivers, or an explicit exclusion.
class DriverConcordance {
 public:
  /// Weights must be positive and sum to one (1e-9).
  void map(const std::string& stressor, std::vector<DriverTarget> targets);
  /// Unweighted mean over `drivers`.
  void map_average(const std::string& stressor, const std::vector<std::string>& drivers);
  void exclude(const std::string& stressor, std::string reason);

  const DriverMapping* find(const std::string& stressor) const;
  const std::map<std::string, DriverMapping>& mappings() const noexcept { return mappings_; }

  /// Columns mrio_stressor, lcia_driver, weight, note. A stressor whose rows
  /// all leave weight blank is averaged uniformly. lcia_driver "EXCLUDED"
  /// marks an exclusion; the reason goes in note.
  static DriverConcordance from_csv(const CsvTable& table);

 private:
  std::map<std::string, DriverMapping> mappings_;
};

inline constexpr const char* kGlobalArea = "GLO";

enum class CfSource { country, continent, global, missing, not_applicable };

struct CfLookup {
  double value = 0.0;
  CfSource source = CfSource::missing;
};

/// cf[driver, area, ecosystem]. Areas are country codes, continent codes or "GLO".
class CharacterizationTable {
 public:
  /// `unit` is the stressor unit the factor applies per (e.g. "m2"); it must
  /// be the same for every entry of a driver.
  void set(const std::string& driver, const std::string& area, Ecosystem ecosystem, double cf,
           const std::string& unit);

  bool has_driver(const std::string& driver) const { return units_.count(driver) > 0; }
  std::optional<std::string> unit(const std::string& driver) const;

  /// Country value, then the country's continent, then the global value.
  /// Drivers that carry no entries at all for an ecosystem report not_applicable.
  CfLookup lookup(const std::string& driver, const std::string& country, Ecosystem ecosystem,
                  const RegionConcordance* continents = nullptr) const;

 private:
  std::map<std::tuple<std::string, std::string, int>, double> values_;
  std::map<std::string, std::string> units_;
  std::map<std::pair<std::string, int>, bool> ecosystems_;
};

/// Non-spatial climate factors per kg of gas and 100-year GWP per gas.
class ClimateCharacterization {
 public:
  static constexpr const char* kReferenceGas = "CO2";

  void set_gwp(const std::string& gas, double gwp);
  void set_factor(const std::string& gas, Ecosystem ecosystem, double cf);
  /// Applies to freshwater and marine unless those are set explicitly.
  void set_aquatic(const std::string& gas, double cf);

  double gwp(const std::string& gas) const;
  bool has_factor(const std::string& gas) const { return factors_.count(gas) > 0; }
  EcosystemVector factor(const std::string& gas) const;
  EcosystemVector reference_factor() const { return factor(kReferenceGas); }

 private:
  struct Entry {
    std::optional<double> by_ecosystem[3];
    std::optional<double> aquatic;
  };
  std::map<std::string, Entry> factors_;
  std::map<std::string, double> gwp_{{kReferenceGas, 1.0}};
};

struct CharacterizationData {
  CharacterizationTable spatial;
  ClimateCharacterization climate;
};

/// Columns driver, country_iso3, ecosystem, cf, unit. Drivers named
/// "climate:<gas>" feed the climate table (ecosystem may be "aquatic").
CharacterizationData read_characterization(const CsvTable& table);

// ---------------------------------------------------------------------------

/// Per-run record of fallbacks, gaps and exclusions.
struct CoverageReport {
  std::size_t country_hits = 0;
  std::size_t continental_fallbacks = 0;
  std::size_t global_fallbacks = 0;
  std::vector<std::string> missing_cells;  ///< "driver/country/ecosystem", value taken as zero
  std::vector<std::pair<std::string, std::string>> excluded;  ///< stressor, reason
  std::size_t degenerate_share_columns = 0;
  std::size_t zero_demand_columns = 0;
  std::vector<std::string> warnings;
};

struct ShareTensor {
  mrio::RegionSectorIndex index;
  Eigen::MatrixXd values;          ///< regions x N
  std::vector<bool> degenerate;    ///< columns with zero attribution total
};

/// Column-normalises the attribution tensor.
ShareTensor driver_share(const mrio::AttributionTensor<double>& attribution);

struct CountryAllocation {
  mrio::RegionSectorIndex index;
  std::vector<std::string> countries;
  Eigen::MatrixXd values;  ///< countries x N
};

/// Splits each region's share equally over its countries.
CountryAllocation allocate_to_countries(const ShareTensor& share, const RegionConcordance& concordance);

struct DriverFactor {
  mrio::RegionSectorIndex index;
  std::vector<std::string> countries;
  std::string unit;        ///< stressor unit (per euro)
  Eigen::MatrixXd values;  ///< countries x N
};

DriverFactor driver_monetary_factor(const CountryAllocation& allocation,
                                    const mrio::IntensityTable<double>& intensity);

struct EffectiveCf {
  std::vector<std::string> countries;
  std::string unit;
  Eigen::MatrixXd values;  ///< countries x 3
  std::optional<std::string> exclusion_note;
};

/// Weighted combination of the characterization drivers a stressor maps to.
EffectiveCf map_driver_categories(const std::string& stressor, const DriverConcordance& concordance,
                                  const CharacterizationTable& cf, std::span<const std::string> countries,
                                  const RegionConcordance* continents = nullptr,
                                  CoverageReport* coverage = nullptr);

struct LocatedFactor {
  mrio::RegionSectorIndex index;
  std::vector<std::string> countries;
  std::array<Eigen::MatrixXd, 3> by_ecosystem;  ///< countries x N each

  /// Sum over countries for one (j,k) column.
  EcosystemVector column_total(std::size_t column) const;
};

/// bd[c,(j,k),eco] = dr[c,(j,k)] * cf_eff[c,eco].
LocatedFactor biodiversity_factor(const DriverFactor& dr, const EffectiveCf& cf_eff);

/// Scalar form: co2e_per_eur * cf_climate[CO2, eco].
EcosystemVector climate_biodiversity_factor(double co2e_per_eur, const ClimateCharacterization& climate);

struct GasIntensity {
  std::string gas;
  Eigen::VectorXd per_eur;  ///< kg gas per euro, length N
};

struct ClimateFactors {
  Eigen::VectorXd co2e_per_eur;  ///< length N
  Eigen::MatrixXd by_ecosystem;  ///< N x 3
};

/// Gases are folded into CO2e through their GWP and characterized with the
/// CO2 factor, except gases that carry their own climate factor.
ClimateFactors climate_biodiversity_factors(std::size_t size, std::span<const GasIntensity> gases,
                                            const ClimateCharacterization& climate);

class ImpactFactorSet {
 public:
  ImpactFactorSet() = default;
  ImpactFactorSet(mrio::RegionSectorIndex index, Eigen::MatrixXd bde_per_eur, Eigen::VectorXd co2e_per_eur,
                  std::vector<bool> zero_coverage, std::map<std::string, std::string> provenance = {});

  const mrio::RegionSectorIndex& index() const noexcept { return index_; }
  const Eigen::MatrixXd& bde_per_eur() const noexcept { return bde_; }    ///< N x 3
  const Eigen::VectorXd& co2e_per_eur() const noexcept { return co2e_; }  ///< N
  const std::vector<bool>& zero_coverage() const noexcept { return zero_coverage_; }
  const std::map<std::string, std::string>& provenance() const noexcept { return provenance_; }
  std::map<std::string, std::string>& provenance() noexcept { return provenance_; }

  bool contains(const std::string& region, const std::string& sector) const;
  EcosystemVector bde(std::size_t position) const { return bde_.row(static_cast<Eigen::Index>(position)).transpose(); }
  double co2e(std::size_t position) const { return co2e_(static_cast<Eigen::Index>(position)); }

  bool operator==(const ImpactFactorSet& other) const;

 private:
  mrio::RegionSectorIndex index_;
  Eigen::MatrixXd bde_;
  Eigen::VectorXd co2e_;
  std::vector<bool> zero_coverage_;
  std::map<std::string, std::string> provenance_;
};

/// bde_per_eur[(j,k),eco] = sum over countries and drivers + climate factor.
ImpactFactorSet total_factor(const mrio::RegionSectorIndex& index, std::span<const LocatedFactor> located,
                             const ClimateFactors& climate, std::map<std::string, std::string> provenance = {});

// ---------------------------------------------------------------------------

struct ClimateStressor {
  std::string stressor;  ///< satellite row name
  std::string gas;       ///< key into ClimateCharacterization
};

/// Everything needed to derive the factor set. Shares come from the origin
/// system, per-euro intensities from the intensity system; both may be the
/// same table or two differently dated ones.
struct FactorInputs {
  const mrio::MrioSystem<double>* origin = nullptr;
  const mrio::SatelliteTable<double>* origin_satellite = nullptr;
  const mrio::MrioSystem<double>* intensity = nullptr;
  const mrio::SatelliteTable<double>* intensity_satellite = nullptr;
  const RegionConcordance* regions = nullptr;
  const DriverConcordance* drivers = nullptr;
  const CharacterizationData* characterization = nullptr;
  std::vector<ClimateStressor> climate_stressors;
  std::map<std::string, std::string> provenance;
};

struct FactorBuild {
  ImpactFactorSet factors;
  CoverageReport coverage;
};

FactorBuild build_factor_set(const FactorInputs& inputs);

}  // namespace biovalent::characterization
