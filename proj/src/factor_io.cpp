#include "biovalent/factor_io.hpp"

#include "biovalent/numfmt.hpp"

namespace biovalent::characterization {

namespace {

constexpr std::string_view kColumns[] = {"consumption_region", "sector",       "ecosystem",
                                         "bde_per_eur",        "co2e_per_eur", "coverage_flag"};

}  // namespace

std::string write_factor_set(const ImpactFactorSet& set) {
  std::string out;
  for (const auto& [key, value] : set.provenance()) {
    if (key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos)
      throw InputError("provenance entry \"" + key + "\" cannot be serialised");
    out += "# " + key + "=" + value + "\n";
  }
  out += csv_record(std::vector<std::string>(std::begin(kColumns), std::end(kColumns))) + "\n";

  const auto& index = set.index();
  for (std::size_t n = 0; n < index.size(); ++n) {
    const auto co2e = format_shortest(set.co2e(n));
    const std::string flag = set.zero_coverage()[n] ? "zero_coverage" : "ok";
    const auto bde = set.bde(n);
    for (Ecosystem eco : kEcosystems) {
      const std::vector<std::string> fields{index.regions()[index.region_of(n)], index.sectors()[index.sector_of(n)],
                                            std::string(to_string(eco)), format_shortest(bde(index_of(eco))), co2e,
                                            flag};
      out += csv_record(fields) + "\n";
    }
  }
  return out;
}

ImpactFactorSet read_factor_set(const CsvTable& table) {
  table.require_schema(kColumns);
  const auto region_col = table.column("consumption_region");
  const auto sector_col = table.column("sector");
  const auto eco_col = table.column("ecosystem");
  const auto bde_col = table.column("bde_per_eur");
  const auto co2e_col = table.column("co2e_per_eur");
  const auto flag_col = table.column("coverage_flag");

  std::vector<std::string> regions;
  std::vector<std::string> sectors;
  auto note = [](std::vector<std::string>& list, const std::string& code) {
    if (std::find(list.begin(), list.end(), code) == list.end()) list.push_back(code);
  };
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    note(regions, std::string(trim(table.text(r, region_col))));
    note(sectors, std::string(trim(table.text(r, sector_col))));
  }
  mrio::RegionSectorIndex index;
  try {
    index = mrio::RegionSectorIndex(regions, sectors);
  } catch (const StructuralError& e) {
    throw ParseError(table.source(), 0, "", e.what());
  }

  const auto n = static_cast<Eigen::Index>(index.size());
  Eigen::MatrixXd bde = Eigen::MatrixXd::Zero(n, 3);
  Eigen::VectorXd co2e = Eigen::VectorXd::Zero(n);
  std::vector<bool> zero(index.size(), false);
  std::vector<int> seen(index.size() * 3, 0);
  std::vector<std::optional<std::pair<double, bool>>> per_position(index.size());

  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const auto pos = index.position(trim(table.cell(r, region_col)), trim(table.cell(r, sector_col)));
    const auto eco = parse_ecosystem(trim(table.text(r, eco_col)));
    if (!eco) throw table.error(r, eco_col, "unknown ecosystem \"" + table.cell(r, eco_col) + "\"");
    const auto slot = pos * 3 + static_cast<std::size_t>(index_of(*eco));
    if (seen[slot]++) throw table.error(r, eco_col, "duplicate row");

    const std::string flag(trim(table.text(r, flag_col)));
    if (flag != "ok" && flag != "zero_coverage")
      throw table.error(r, flag_col, "coverage_flag must be ok or zero_coverage");
    const double c = table.number(r, co2e_col);
    const bool z = flag == "zero_coverage";
    if (per_position[pos] && (per_position[pos]->first != c || per_position[pos]->second != z))
      throw table.error(r, co2e_col, "co2e_per_eur / coverage_flag differ between ecosystem rows");
    per_position[pos] = {c, z};

    bde(static_cast<Eigen::Index>(pos), index_of(*eco)) = table.number(r, bde_col);
    co2e(static_cast<Eigen::Index>(pos)) = c;
    zero[pos] = z;
  }
  for (std::size_t s = 0; s < seen.size(); ++s)
    if (!seen[s])
      throw ParseError(table.source(), 0, "",
                       "missing row for " + index.label(s / 3) + " / " +
                           std::string(to_string(kEcosystems[s % 3])));

  std::map<std::string, std::string> provenance;
  for (const auto& line : table.comments()) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    provenance[line.substr(0, eq)] = line.substr(eq + 1);
  }
  try {
    return ImpactFactorSet(std::move(index), std::move(bde), std::move(co2e), std::move(zero), std::move(provenance));
  } catch (const Error& e) {
    throw ParseError(table.source(), 0, "", e.what());
  }
}

}  // namespace biovalent::characterization
