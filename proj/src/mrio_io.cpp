#include "biovalent/mrio_io.hpp"

#include "biovalent/numfmt.hpp"

namespace biovalent::mrio {

namespace {

// Maps each data row's label to a matrix row; every label exactly once.
std::vector<Eigen::Index> row_order(const CsvTable& table, const RegionSectorIndex& index) {
  std::vector<Eigen::Index> order(table.row_count());
  std::vector<bool> seen(index.size(), false);
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const auto& label = table.text(r, 0);
    std::size_t pos = 0;
    try {
      pos = index.position_of_label(trim(label));
    } catch (const StructuralError& e) {
      throw table.error(r, 0, e.what());
    }
    if (seen[pos]) throw table.error(r, 0, "duplicate row " + std::string(label));
    seen[pos] = true;
    order[r] = static_cast<Eigen::Index>(pos);
  }
  for (std::size_t n = 0; n < index.size(); ++n)
    if (!seen[n]) throw ParseError(table.source(), 0, "", "missing row " + index.label(n));
  return order;
}

}  // namespace

RegionSectorIndex index_from_labels(const std::vector<std::string>& labels, const CsvTable& table) {
  std::vector<std::string> regions;
  std::vector<std::string> sectors;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& raw : labels) {
    const auto label = std::string(trim(raw));
    const auto colon = label.find(':');
    if (colon == std::string::npos)
      throw ParseError(table.source(), 0, label, "column label is not of the form region:sector");
    auto region = label.substr(0, colon);
    auto sector = label.substr(colon + 1);
    if (std::find(regions.begin(), regions.end(), region) == regions.end()) regions.push_back(region);
    if (std::find(sectors.begin(), sectors.end(), sector) == sectors.end()) sectors.push_back(sector);
    pairs.emplace_back(std::move(region), std::move(sector));
  }
  RegionSectorIndex index;
  try {
    index = RegionSectorIndex(regions, sectors);
  } catch (const StructuralError& e) {
    throw ParseError(table.source(), 0, "", e.what());
  }
  if (pairs.size() != index.size())
    throw ParseError(table.source(), 0, "", "labels do not form a complete region x sector grid");
  for (std::size_t n = 0; n < pairs.size(); ++n)
    if (pairs[n].first != regions[index.region_of(n)] || pairs[n].second != sectors[index.sector_of(n)])
      throw ParseError(table.source(), 0, labels[n], "labels must be ordered region-major");
  return index;
}

EconomicCore<double> read_economic_core(const CsvTable& flows, const CsvTable& final_demand,
                                        const CsvTable* gross_output) {
  if (flows.header().size() < 2) throw ParseError(flows.source(), 0, "", "flow matrix has no columns");
  const std::vector<std::string> labels(flows.header().begin() + 1, flows.header().end());
  RegionSectorIndex index = index_from_labels(labels, flows);
  const auto n = static_cast<Eigen::Index>(index.size());

  if (flows.row_count() != index.size())
    throw ParseError(flows.source(), 0, "",
                     "expected " + std::to_string(n) + " rows, found " + std::to_string(flows.row_count()));
  Matrix<double> z(n, n);
  const auto z_rows = row_order(flows, index);
  for (std::size_t r = 0; r < flows.row_count(); ++r)
    for (Eigen::Index c = 0; c < n; ++c) z(z_rows[r], c) = flows.number(r, static_cast<std::size_t>(c) + 1);

  std::vector<std::size_t> demand_cols;
  for (const auto& region : index.regions()) demand_cols.push_back(final_demand.column(region));
  if (final_demand.header().size() != index.region_count() + 1)
    throw ParseError(final_demand.source(), 0, "", "final demand must have one column per region");
  if (final_demand.row_count() != index.size())
    throw ParseError(final_demand.source(), 0, "",
                     "expected " + std::to_string(n) + " rows, found " + std::to_string(final_demand.row_count()));
  Matrix<double> y(n, static_cast<Eigen::Index>(index.region_count()));
  const auto y_rows = row_order(final_demand, index);
  for (std::size_t r = 0; r < final_demand.row_count(); ++r)
    for (std::size_t j = 0; j < demand_cols.size(); ++j)
      y(y_rows[r], static_cast<Eigen::Index>(j)) = final_demand.number(r, demand_cols[j]);

  std::optional<Vector<double>> x;
  if (gross_output) {
    static constexpr std::string_view kCols[] = {"label", "output"};
    gross_output->require_schema(kCols);
    const auto label_col = gross_output->column("label");
    const auto value_col = gross_output->column("output");
    if (label_col != 0) throw ParseError(gross_output->source(), 0, "label", "must be the first column");
    if (gross_output->row_count() != index.size())
      throw ParseError(gross_output->source(), 0, "", "expected " + std::to_string(n) + " rows");
    x = Vector<double>(n);
    const auto x_rows = row_order(*gross_output, index);
    for (std::size_t r = 0; r < gross_output->row_count(); ++r) (*x)(x_rows[r]) = gross_output->number(r, value_col);
  }
  return make_core(std::move(index), std::move(z), std::move(y), std::move(x));
}

SatelliteTable<double> read_satellite(const CsvTable& table, const RegionSectorIndex& index) {
  const auto name_col = table.column("stressor");
  const auto unit_col = table.column("unit");
  std::vector<std::size_t> cols;
  for (std::size_t n = 0; n < index.size(); ++n) cols.push_back(table.column(index.label(n)));
  if (table.header().size() != index.size() + 2)
    throw ParseError(table.source(), 0, "", "unexpected extra columns in satellite table");

  std::vector<StressorRow<double>> rows;
  rows.reserve(table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    StressorRow<double> row{std::string(trim(table.text(r, name_col))), std::string(trim(table.text(r, unit_col))),
                            Vector<double>(static_cast<Eigen::Index>(index.size()))};
    for (std::size_t n = 0; n < cols.size(); ++n) row.values(static_cast<Eigen::Index>(n)) = table.number(r, cols[n]);
    rows.push_back(std::move(row));
  }
  try {
    return SatelliteTable<double>(index, std::move(rows));
  } catch (const Error& e) {
    throw ParseError(table.source(), 0, "", e.what());
  }
}

}  // namespace biovalent::mrio
