#pragma once

#include "biovalent/csv.hpp"
#include "biovalent/mrio.hpp"

#include <optional>

namespace biovalent::mrio {

/// Reads the region:sector index from the header of a flow-matrix file.
/// Labels must form a complete region-major grid.
RegionSectorIndex index_from_labels(const std::vector<std::string>& labels, const CsvTable& table);

/// Flow matrix: header "label,<region:sector>...", one row per region:sector.
/// Final demand: header "label,<region>...", rows region:sector.
/// Gross output (optional): columns label,output.
EconomicCore<double> read_economic_core(const CsvTable& flows, const CsvTable& final_demand,
                                        const CsvTable* gross_output = nullptr);

/// Satellite: columns stressor, unit, then one column per region:sector.
SatelliteTable<double> read_satellite(const CsvTable& table, const RegionSectorIndex& index);

}  // namespace biovalent::mrio
