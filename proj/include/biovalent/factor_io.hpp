#pragma once

#include "biovalent/characterization.hpp"
#include "biovalent/csv.hpp"

#include <string>

namespace biovalent::characterization {

/// Factor-set exchange file: one row per (consumption_region, sector,
/// ecosystem) with columns consumption_region, sector, ecosystem,
/// bde_per_eur, co2e_per_eur, coverage_flag ("ok" | "zero_coverage").
/// Provenance travels as leading "# key=value" comment lines. Numbers are
/// written in shortest round-trip form, so export/import is lossless.
std::string write_factor_set(const ImpactFactorSet& set);

ImpactFactorSet read_factor_set(const CsvTable& table);

}  // namespace biovalent::characterization
