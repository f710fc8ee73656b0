#include "biovalent/characterization.hpp"

#include "biovalent/numfmt.hpp"

#include <cmath>
#include <set>

namespace biovalent::characterization {

// ---------------------------------------------------------------------------
// RegionConcordance

void RegionConcordance::add(const std::string& mrio_region, const std::string& country,
                            const std::string& continent) {
  if (mrio_region.empty() || country.empty()) throw ConcordanceError("empty region or country code");
  if (auto it = owner_.find(country); it != owner_.end())
    throw ConcordanceError("country \"" + country + "\" mapped to both \"" + it->second + "\" and \"" +
                           mrio_region + "\"");
  owner_[country] = mrio_region;
  regions_[mrio_region].push_back(country);
  if (!continent.empty()) continent_[country] = continent;
}

const std::vector<std::string>& RegionConcordance::countries(const std::string& mrio_region) const {
  auto it = regions_.find(mrio_region);
  if (it == regions_.end() || it->second.empty())
    throw ConcordanceError("MRIO region \"" + mrio_region + "\" has no country mapping");
  return it->second;
}

std::optional<std::string> RegionConcordance::continent_of(const std::string& country) const {
  auto it = continent_.find(country);
  if (it == continent_.end()) return std::nullopt;
  return it->second;
}

void RegionConcordance::validate(std::span<const std::string> mrio_regions) const {
  for (const auto& r : mrio_regions) countries(r);
}

RegionConcordance RegionConcordance::from_csv(const CsvTable& table) {
  static constexpr std::string_view kRequired[] = {"mrio_region", "country_iso3"};
  static constexpr std::string_view kOptional[] = {"continent"};
  table.require_schema(kRequired, kOptional);
  const auto region_col = table.column("mrio_region");
  const auto country_col = table.column("country_iso3");
  const auto continent_col = table.find_column("continent");
  RegionConcordance concordance;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    try {
      concordance.add(std::string(trim(table.text(r, region_col))), std::string(trim(table.text(r, country_col))),
                      continent_col ? std::string(trim(table.cell(r, *continent_col))) : std::string{});
    } catch (const ConcordanceError& e) {
      throw table.error(r, country_col, e.what());
    }
  }
  return concordance;
}

// ---------------------------------------------------------------------------
// DriverConcordance

void DriverConcordance::map(const std::string& stressor, std::vector<DriverTarget> targets) {
  if (targets.empty()) throw ConcordanceError("stressor \"" + stressor + "\" maps to no driver");
  double sum = 0;
  for (const auto& t : targets) {
    if (!(t.weight > 0)) throw ConcordanceError("stressor \"" + stressor + "\": non-positive weight");
    sum += t.weight;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw ConcordanceError("stressor \"" + stressor + "\": weights sum to " + format_shortest(sum));
  if (!mappings_.emplace(stressor, DriverMapping{std::move(targets), std::nullopt}).second)
    throw ConcordanceError("stressor \"" + stressor + "\" mapped twice");
}

void DriverConcordance::map_average(const std::string& stressor, const std::vector<std::string>& drivers) {
  std::vector<DriverTarget> targets;
  for (const auto& d : drivers) targets.push_back({d, 1.0 / static_cast<double>(drivers.size())});
  map(stressor, std::move(targets));
}

void DriverConcordance::exclude(const std::string& stressor, std::string reason) {
  if (reason.empty()) throw ConcordanceError("exclusion of \"" + stressor + "\" needs a reason");
  if (!mappings_.emplace(stressor, DriverMapping{{}, std::move(reason)}).second)
    throw ConcordanceError("stressor \"" + stressor + "\" mapped twice");
}

const DriverMapping* DriverConcordance::find(const std::string& stressor) const {
  auto it = mappings_.find(stressor);
  return it == mappings_.end() ? nullptr : &it->second;
}

DriverConcordance DriverConcordance::from_csv(const CsvTable& table) {
  static constexpr std::string_view kRequired[] = {"mrio_stressor", "lcia_driver", "weight"};
  static constexpr std::string_view kOptional[] = {"note"};
  table.require_schema(kRequired, kOptional);
  const auto stressor_col = table.column("mrio_stressor");
  const auto driver_col = table.column("lcia_driver");
  const auto weight_col = table.column("weight");
  const auto note_col = table.find_column("note");

  struct Pending {
    std::size_t first_row = 0;
    std::vector<std::string> drivers;
    std::vector<std::optional<double>> weights;
    std::optional<std::string> exclusion;
  };
  std::vector<std::pair<std::string, Pending>> pending;
  auto slot = [&](const std::string& name, std::size_t row) -> Pending& {
    for (auto& [n, p] : pending)
      if (n == name) return p;
    pending.push_back({name, Pending{row, {}, {}, std::nullopt}});
    return pending.back().second;
  };

  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const std::string stressor(trim(table.text(r, stressor_col)));
    const std::string driver(trim(table.text(r, driver_col)));
    auto& p = slot(stressor, r);
    if (driver == "EXCLUDED") {
      std::string reason = note_col ? std::string(trim(table.cell(r, *note_col))) : std::string{};
      if (reason.empty()) throw table.error(r, note_col.value_or(driver_col), "exclusion needs a reason");
      if (p.exclusion || !p.drivers.empty()) throw table.error(r, driver_col, "stressor both mapped and excluded");
      p.exclusion = std::move(reason);
      continue;
    }
    if (p.exclusion) throw table.error(r, driver_col, "stressor both mapped and excluded");
    p.drivers.push_back(driver);
    const auto& w = table.cell(r, weight_col);
    p.weights.push_back(trim(w).empty() ? std::nullopt : std::optional<double>(table.number(r, weight_col)));
  }

  DriverConcordance concordance;
  for (auto& [name, p] : pending) {
    try {
      if (p.exclusion) {
        concordance.exclude(name, *p.exclusion);
        continue;
      }
      const auto given = std::count_if(p.weights.begin(), p.weights.end(), [](auto& w) { return w.has_value(); });
      if (given == 0) {
        concordance.map_average(name, p.drivers);
      } else if (static_cast<std::size_t>(given) == p.weights.size()) {
        std::vector<DriverTarget> targets;
        for (std::size_t i = 0; i < p.drivers.size(); ++i) targets.push_back({p.drivers[i], *p.weights[i]});
        concordance.map(name, std::move(targets));
      } else {
        throw ConcordanceError("stressor \"" + name + "\" mixes blank and explicit weights");
      }
    } catch (const ConcordanceError& e) {
      throw table.error(p.first_row, weight_col, e.what());
    }
  }
  return concordance;
}

// ---------------------------------------------------------------------------
// CharacterizationTable

void CharacterizationTable::set(const std::string& driver, const std::string& area, Ecosystem ecosystem, double cf,
                                const std::string& unit) {
  if (!std::isfinite(cf) || cf < 0)
    throw InputError("characterization factor for " + driver + "/" + area + " must be finite and >= 0");
  if (auto it = units_.find(driver); it != units_.end() && it->second != unit)
    throw UnitError("driver \"" + driver + "\" uses unit [" + it->second + "] and [" + unit + "]");
  units_[driver] = unit;
  if (!values_.emplace(std::tuple{driver, area, index_of(ecosystem)}, cf).second)
    throw InputError("duplicate characterization factor " + driver + "/" + area + "/" +
                     std::string(to_string(ecosystem)));
  ecosystems_[{driver, index_of(ecosystem)}] = true;
}

std::optional<std::string> CharacterizationTable::unit(const std::string& driver) const {
  auto it = units_.find(driver);
  if (it == units_.end()) return std::nullopt;
  return it->second;
}

CfLookup CharacterizationTable::lookup(const std::string& driver, const std::string& country, Ecosystem ecosystem,
                                       const RegionConcordance* continents) const {
  const int e = index_of(ecosystem);
  if (!ecosystems_.count({driver, e})) return {0.0, CfSource::not_applicable};
  auto get = [&](const std::string& area) -> std::optional<double> {
    auto it = values_.find(std::tuple{driver, area, e});
    if (it == values_.end()) return std::nullopt;
    return it->second;
  };
  if (auto v = get(country)) return {*v, CfSource::country};
  if (continents) {
    if (auto continent = continents->continent_of(country))
      if (auto v = get(*continent)) return {*v, CfSource::continent};
  }
  if (auto v = get(kGlobalArea)) return {*v, CfSource::global};
  return {0.0, CfSource::missing};
}

// ---------------------------------------------------------------------------
// ClimateCharacterization

void ClimateCharacterization::set_gwp(const std::string& gas, double gwp) {
  if (!std::isfinite(gwp) || gwp < 0) throw InputError("GWP of " + gas + " must be finite and >= 0");
  if (gas == kReferenceGas && gwp != 1.0) throw InputError("GWP of CO2 must be 1");
  gwp_[gas] = gwp;
}

void ClimateCharacterization::set_factor(const std::string& gas, Ecosystem ecosystem, double cf) {
  if (!std::isfinite(cf) || cf < 0) throw InputError("climate factor of " + gas + " must be finite and >= 0");
  factors_[gas].by_ecosystem[index_of(ecosystem)] = cf;
}

void ClimateCharacterization::set_aquatic(const std::string& gas, double cf) {
  if (!std::isfinite(cf) || cf < 0) throw InputError("climate factor of " + gas + " must be finite and >= 0");
  factors_[gas].aquatic = cf;
}

double ClimateCharacterization::gwp(const std::string& gas) const {
  auto it = gwp_.find(gas);
  if (it == gwp_.end()) throw ConfigurationError("no GWP for gas \"" + gas + "\"");
  return it->second;
}

EcosystemVector ClimateCharacterization::factor(const std::string& gas) const {
  auto it = factors_.find(gas);
  if (it == factors_.end()) throw ConfigurationError("no climate characterization factor for \"" + gas + "\"");
  const auto& entry = it->second;
  EcosystemVector v;
  v(0) = entry.by_ecosystem[0].value_or(0.0);
  v(1) = entry.by_ecosystem[1].value_or(entry.aquatic.value_or(0.0));
  v(2) = entry.by_ecosystem[2].value_or(entry.aquatic.value_or(0.0));
  return v;
}

CharacterizationData read_characterization(const CsvTable& table) {
  static constexpr std::string_view kRequired[] = {"driver", "country_iso3", "ecosystem", "cf", "unit"};
  table.require_schema(kRequired);
  const auto driver_col = table.column("driver");
  const auto area_col = table.column("country_iso3");
  const auto eco_col = table.column("ecosystem");
  const auto cf_col = table.column("cf");
  const auto unit_col = table.column("unit");

  CharacterizationData data;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const std::string driver(trim(table.text(r, driver_col)));
    const std::string eco_text(trim(table.text(r, eco_col)));
    const double cf = table.number(r, cf_col);
    try {
      if (driver.starts_with("climate:")) {
        const auto gas = driver.substr(8);
        if (eco_text == "aquatic")
          data.climate.set_aquatic(gas, cf);
        else if (auto eco = parse_ecosystem(eco_text))
          data.climate.set_factor(gas, *eco, cf);
        else
          throw table.error(r, eco_col, "unknown ecosystem \"" + eco_text + "\"");
        continue;
      }
      auto eco = parse_ecosystem(eco_text);
      if (!eco) throw table.error(r, eco_col, "unknown ecosystem \"" + eco_text + "\"");
      data.spatial.set(driver, std::string(trim(table.text(r, area_col))), *eco, cf,
                       std::string(trim(table.text(r, unit_col))));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw table.error(r, cf_col, e.what());
    }
  }
  return data;
}

// ---------------------------------------------------------------------------
// Operations

ShareTensor driver_share(const mrio::AttributionTensor<double>& attribution) {
  const auto& t = attribution.values;
  ShareTensor share{attribution.index, Eigen::MatrixXd::Zero(t.rows(), t.cols()),
                    std::vector<bool>(static_cast<std::size_t>(t.cols()), false)};
  for (Eigen::Index c = 0; c < t.cols(); ++c) {
    const double total = t.col(c).sum();
    if (total == 0.0) {
      share.degenerate[static_cast<std::size_t>(c)] = true;
      continue;
    }
    share.values.col(c) = t.col(c) / total;
  }
  return share;
}

CountryAllocation allocate_to_countries(const ShareTensor& share, const RegionConcordance& concordance) {
  const auto& regions = share.index.regions();
  if (static_cast<std::size_t>(share.values.rows()) != regions.size())
    throw StructuralError("share tensor rows do not match the region index");
  CountryAllocation out{share.index, {}, {}};
  std::size_t total = 0;
  for (const auto& r : regions) total += concordance.frequency(r);
  out.values.resize(static_cast<Eigen::Index>(total), share.values.cols());
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto& countries = concordance.countries(regions[i]);
    const double frequency = static_cast<double>(countries.size());
    for (const auto& c : countries) {
      out.countries.push_back(c);
      out.values.row(row++) = share.values.row(static_cast<Eigen::Index>(i)) / frequency;
    }
  }
  return out;
}

DriverFactor driver_monetary_factor(const CountryAllocation& allocation,
                                    const mrio::IntensityTable<double>& intensity) {
  if (!(allocation.index == intensity.index) || allocation.values.cols() != intensity.values.size())
    throw StructuralError("allocation and intensity tables use different (region, sector) indices");
  return DriverFactor{allocation.index, allocation.countries, intensity.unit,
                      allocation.values * intensity.values.asDiagonal()};
}

EffectiveCf map_driver_categories(const std::string& stressor, const DriverConcordance& concordance,
                                  const CharacterizationTable& cf, std::span<const std::string> countries,
                                  const RegionConcordance* continents, CoverageReport* coverage) {
  const auto* mapping = concordance.find(stressor);
  if (!mapping) throw ConcordanceError("stressor \"" + stressor + "\" is neither mapped nor excluded");

  EffectiveCf out{{countries.begin(), countries.end()}, {},
                  Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(countries.size()), 3), std::nullopt};
  if (mapping->excluded()) {
    out.exclusion_note = *mapping->exclusion_reason;
    if (coverage) coverage->excluded.emplace_back(stressor, *mapping->exclusion_reason);
    return out;
  }

  for (const auto& target : mapping->targets) {
    const auto unit = cf.unit(target.driver);
    if (!unit) throw ConcordanceError("characterization driver \"" + target.driver + "\" has no factors");
    if (out.unit.empty())
      out.unit = *unit;
    else if (out.unit != *unit)
      throw UnitError("stressor \"" + stressor + "\" maps to drivers in [" + out.unit + "] and [" + *unit + "]");

    for (std::size_t c = 0; c < countries.size(); ++c) {
      for (Ecosystem eco : kEcosystems) {
        const auto hit = cf.lookup(target.driver, countries[c], eco, continents);
        if (coverage) {
          switch (hit.source) {
            case CfSource::country:
              ++coverage->country_hits;
              break;
            case CfSource::continent:
              ++coverage->continental_fallbacks;
              break;
            case CfSource::global:
              ++coverage->global_fallbacks;
              break;
            case CfSource::missing:
              coverage->missing_cells.push_back(target.driver + "/" + countries[c] + "/" +
                                                std::string(to_string(eco)));
              break;
            case CfSource::not_applicable:
              break;
          }
        }
        out.values(static_cast<Eigen::Index>(c), index_of(eco)) += target.weight * hit.value;
      }
    }
  }
  return out;
}

EcosystemVector LocatedFactor::column_total(std::size_t column) const {
  EcosystemVector v;
  for (int e = 0; e < 3; ++e) v(e) = by_ecosystem[static_cast<std::size_t>(e)].col(static_cast<Eigen::Index>(column)).sum();
  return v;
}

LocatedFactor biodiversity_factor(const DriverFactor& dr, const EffectiveCf& cf_eff) {
  if (dr.countries != cf_eff.countries)
    throw StructuralError("driver factor and characterization factor list different countries");
  if (!cf_eff.exclusion_note && dr.unit != cf_eff.unit)
    throw UnitError("driver quantity in [" + dr.unit + "] but characterization factor per [" + cf_eff.unit + "]");
  LocatedFactor out{dr.index, dr.countries, {}};
  for (int e = 0; e < 3; ++e) out.by_ecosystem[static_cast<std::size_t>(e)] = cf_eff.values.col(e).asDiagonal() * dr.values;
  return out;
}

EcosystemVector climate_biodiversity_factor(double co2e_per_eur, const ClimateCharacterization& climate) {
  return co2e_per_eur * climate.reference_factor();
}

ClimateFactors climate_biodiversity_factors(std::size_t size, std::span<const GasIntensity> gases,
                                            const ClimateCharacterization& climate) {
  const auto n = static_cast<Eigen::Index>(size);
  ClimateFactors out{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, 3)};
  for (const auto& g : gases) {
    if (g.per_eur.size() != n) throw StructuralError("gas intensity \"" + g.gas + "\" has the wrong length");
    const double gwp = climate.gwp(g.gas);
    out.co2e_per_eur += gwp * g.per_eur;
    if (g.gas != ClimateCharacterization::kReferenceGas && climate.has_factor(g.gas))
      out.by_ecosystem += g.per_eur * climate.factor(g.gas).transpose();
    else
      out.by_ecosystem += (gwp * g.per_eur) * climate.reference_factor().transpose();
  }
  return out;
}

ImpactFactorSet::ImpactFactorSet(mrio::RegionSectorIndex index, Eigen::MatrixXd bde_per_eur,
                                 Eigen::VectorXd co2e_per_eur, std::vector<bool> zero_coverage,
                                 std::map<std::string, std::string> provenance)
    : index_(std::move(index)),
      bde_(std::move(bde_per_eur)),
      co2e_(std::move(co2e_per_eur)),
      zero_coverage_(std::move(zero_coverage)),
      provenance_(std::move(provenance)) {
  const auto n = static_cast<Eigen::Index>(index_.size());
  if (bde_.rows() != n || bde_.cols() != 3 || co2e_.size() != n ||
      zero_coverage_.size() != static_cast<std::size_t>(n))
    throw StructuralError("impact factor set dimensions do not match its index");
  if (!bde_.allFinite() || !co2e_.allFinite()) throw InputError("impact factors must be finite");
  if ((bde_.array() < 0).any() || (co2e_.array() < 0).any()) throw InputError("impact factors must be >= 0");
}

bool ImpactFactorSet::contains(const std::string& region, const std::string& sector) const {
  return index_.find_region(region) && index_.find_sector(sector);
}

bool ImpactFactorSet::operator==(const ImpactFactorSet& other) const {
  return index_ == other.index_ && bde_ == other.bde_ && co2e_ == other.co2e_ &&
         zero_coverage_ == other.zero_coverage_ && provenance_ == other.provenance_;
}

namespace {

ImpactFactorSet assemble(const mrio::RegionSectorIndex& index, Eigen::MatrixXd spatial, const ClimateFactors& climate,
                         std::map<std::string, std::string> provenance) {
  const auto n = static_cast<Eigen::Index>(index.size());
  if (climate.by_ecosystem.rows() != n || climate.co2e_per_eur.size() != n)
    throw StructuralError("climate factors do not match the (region, sector) index");
  Eigen::MatrixXd bde = spatial + climate.by_ecosystem;
  std::vector<bool> zero(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < n; ++c) zero[static_cast<std::size_t>(c)] = bde.row(c).isZero(0);
  return ImpactFactorSet(index, std::move(bde), climate.co2e_per_eur, std::move(zero), std::move(provenance));
}

}  // namespace

ImpactFactorSet total_factor(const mrio::RegionSectorIndex& index, std::span<const LocatedFactor> located,
                             const ClimateFactors& climate, std::map<std::string, std::string> provenance) {
  const auto n = static_cast<Eigen::Index>(index.size());
  Eigen::MatrixXd spatial = Eigen::MatrixXd::Zero(n, 3);
  for (const auto& f : located) {
    if (!(f.index == index)) throw StructuralError("located factor uses a different (region, sector) index");
    for (int e = 0; e < 3; ++e) spatial.col(e) += f.by_ecosystem[static_cast<std::size_t>(e)].colwise().sum().transpose();
  }
  return assemble(index, std::move(spatial), climate, std::move(provenance));
}

FactorBuild build_factor_set(const FactorInputs& in) {
  if (!in.origin || !in.origin_satellite || !in.intensity || !in.intensity_satellite || !in.regions || !in.drivers ||
      !in.characterization)
    throw ConfigurationError("factor inputs are incomplete");
  const auto& index = in.intensity->index();
  if (!(in.origin->index() == index)) throw StructuralError("origin and intensity tables use different indices");
  if (!(in.origin_satellite->index() == index) || !(in.intensity_satellite->index() == index))
    throw StructuralError("satellite tables do not match the economic core index");
  in.regions->validate(index.regions());

  std::vector<std::string> countries;
  for (const auto& r : index.regions())
    for (const auto& c : in.regions->countries(r)) countries.push_back(c);

  std::set<std::string> climate_rows;
  for (const auto& cs : in.climate_stressors) climate_rows.insert(cs.stressor);

  FactorBuild out;
  auto& coverage = out.coverage;
  const auto n = static_cast<Eigen::Index>(index.size());
  Eigen::MatrixXd spatial = Eigen::MatrixXd::Zero(n, 3);
  std::vector<bool> zero_demand(index.size(), false);

  for (const auto& row : in.intensity_satellite->rows()) {
    if (climate_rows.count(row.name)) continue;
    const auto cf_eff = map_driver_categories(row.name, *in.drivers, in.characterization->spatial, countries,
                                              in.regions, &coverage);
    if (cf_eff.exclusion_note) continue;

    const auto* origin_row = in.origin_satellite->find(row.name);
    if (!origin_row) throw InputError("stressor \"" + row.name + "\" missing from the origin satellite table");
    if (origin_row->unit != row.unit)
      throw UnitError("stressor \"" + row.name + "\" has different units in origin and intensity tables");

    const auto share = driver_share(in.origin->attribute(*origin_row));
    coverage.degenerate_share_columns +=
        static_cast<std::size_t>(std::count(share.degenerate.begin(), share.degenerate.end(), true));
    const auto intensity = in.intensity->intensity(row);
    for (std::size_t c = 0; c < index.size(); ++c)
      if (intensity.zero_demand[c]) zero_demand[c] = true;

    const auto located = biodiversity_factor(driver_monetary_factor(allocate_to_countries(share, *in.regions), intensity),
                                             cf_eff);
    for (int e = 0; e < 3; ++e)
      spatial.col(e) += located.by_ecosystem[static_cast<std::size_t>(e)].colwise().sum().transpose();
  }

  for (const auto& [stressor, mapping] : in.drivers->mappings())
    if (!in.intensity_satellite->find(stressor))
      coverage.warnings.push_back("concordance stressor \"" + stressor + "\" not present in the satellite table");
  for (const auto& cell : coverage.missing_cells)
    coverage.warnings.push_back("no characterization factor for " + cell + "; taken as zero");

  std::vector<GasIntensity> gases;
  for (const auto& cs : in.climate_stressors) {
    const auto intensity = in.intensity->intensity(in.intensity_satellite->row(cs.stressor));
    for (std::size_t c = 0; c < index.size(); ++c)
      if (intensity.zero_demand[c]) zero_demand[c] = true;
    gases.push_back({cs.gas, intensity.values});
  }
  coverage.zero_demand_columns = static_cast<std::size_t>(std::count(zero_demand.begin(), zero_demand.end(), true));
  const auto climate = climate_biodiversity_factors(index.size(), gases, in.characterization->climate);

  out.factors = assemble(index, std::move(spatial), climate, in.provenance);
  return out;
}

}  // namespace biovalent::characterization
