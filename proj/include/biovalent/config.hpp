#pragma once

// Run configuration, read from a JSON file. Relative paths resolve against
// the directory holding the config file.

#include "biovalent/characterization.hpp"
#include "biovalent/footprint.hpp"
#include "biovalent/mrio.hpp"
#include "biovalent/offsets.hpp"
#include "biovalent/statement.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace biovalent::pipeline {

struct MrioFiles {
  std::filesystem::path flows;
  std::filesystem::path final_demand;
  std::optional<std::filesystem::path> gross_output;
  std::filesystem::path satellite;
  std::optional<int> year;
};

struct StressorAggregation {
  std::string pattern;  ///< ECMAScript regex, matched against whole names
  std::string name;
};

struct PipelineConfig {
  std::filesystem::path source;  ///< the config file, for messages
  std::string name;

  std::optional<MrioFiles> mrio;    ///< tables for per-euro intensities
  std::optional<MrioFiles> origin;  ///< tables for driver origin shares; defaults to `mrio`
  mrio::LeontiefMethod method = mrio::LeontiefMethod::direct;
  std::vector<StressorAggregation> aggregate;
  /// Precomputed factor set. When present the MRIO stage is skipped.
  std::optional<std::filesystem::path> factor_set;

  std::optional<std::filesystem::path> characterization;
  std::optional<std::filesystem::path> region_concordance;
  std::optional<std::filesystem::path> driver_concordance;
  std::vector<characterization::ClimateStressor> climate_stressors;
  std::map<std::string, double> gwp;

  std::filesystem::path ledger;
  std::filesystem::path account_mapping;
  std::optional<std::filesystem::path> inflation;
  std::optional<std::filesystem::path> basic_prices;
  std::optional<std::filesystem::path> income_statement;
  double fx_to_eur = 1.0;
  footprint::CoverageMode coverage_mode = footprint::CoverageMode::strict;
  footprint::CategoryMap categories;

  std::vector<offsets::OffsetScenario> scenarios;
  std::optional<report::CarbonPricing> carbon;
  report::StatementOptions statement;
  std::vector<double> iso_shares{0.01, 0.05, 0.10};
};

/// Throws ConfigurationError on unknown keys, wrong types or missing entries.
PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir,
                            const std::filesystem::path& source = "config");
PipelineConfig load_config(const std::filesystem::path& path);

/// Scenario objects: name, country, c0 | average_gain, t_rec, horizon_years,
/// land_price_eur_per_ha, fraction, carbon_price, fx_rate, averaging, notes.
std::vector<offsets::OffsetScenario> parse_scenarios(std::string_view json_text, const std::string& source);

}  // namespace biovalent::pipeline
