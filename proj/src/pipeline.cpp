#include "biovalent/pipeline.hpp"

#include "biovalent/csv.hpp"
#include "biovalent/factor_io.hpp"
#include "biovalent/ledger.hpp"
#include "biovalent/mrio_io.hpp"
#include "biovalent/numfmt.hpp"

#include "json.hpp"

#include <fstream>

namespace biovalent::pipeline {

namespace {

namespace fs = std::filesystem;

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

struct LoadedMrio {
  mrio::MrioSystem<double> system;
  mrio::SatelliteTable<double> satellite;
};

LoadedMrio load_mrio(const MrioFiles& files, const PipelineConfig& config, Diagnostics& diagnostics) {
  const auto flows = CsvTable::read_file(files.flows);
  const auto demand = CsvTable::read_file(files.final_demand);
  std::optional<CsvTable> output;
  if (files.gross_output) output = CsvTable::read_file(*files.gross_output);
  auto core = mrio::read_economic_core(flows, demand, output ? &*output : nullptr);
  auto satellite = mrio::read_satellite(CsvTable::read_file(files.satellite), core.index);
  for (const auto& agg : config.aggregate)
    satellite = mrio::aggregate_stressor_rows(satellite, agg.pattern, agg.name, &diagnostics);
  mrio::LeontiefOptions options;
  options.method = config.method;
  return LoadedMrio{mrio::MrioSystem<double>::build(std::move(core), options), std::move(satellite)};
}

characterization::FactorBuild build_factors(const PipelineConfig& config, Diagnostics& diagnostics) {
  auto [intensity, intensity_sat, regions, drivers, cf] = stage("ingest", [&] {
    auto loaded = load_mrio(*config.mrio, config, diagnostics);
    auto regions = characterization::RegionConcordance::from_csv(CsvTable::read_file(*config.region_concordance));
    auto drivers = characterization::DriverConcordance::from_csv(CsvTable::read_file(*config.driver_concordance));
    auto cf = characterization::read_characterization(CsvTable::read_file(*config.characterization));
    for (const auto& [gas, gwp] : config.gwp) cf.climate.set_gwp(gas, gwp);
    return std::tuple(std::move(loaded.system), std::move(loaded.satellite), std::move(regions), std::move(drivers),
                      std::move(cf));
  });
  std::optional<LoadedMrio> origin;
  if (config.origin) origin = stage("ingest", [&] { return load_mrio(*config.origin, config, diagnostics); });

  return stage("factors", [&] {
    characterization::FactorInputs in;
    in.intensity = &intensity;
    in.intensity_satellite = &intensity_sat;
    in.origin = origin ? &origin->system : &intensity;
    in.origin_satellite = origin ? &origin->satellite : &intensity_sat;
    in.regions = &regions;
    in.drivers = &drivers;
    in.characterization = &cf;
    in.climate_stressors = config.climate_stressors;
    if (!config.name.empty()) in.provenance["name"] = config.name;
    if (config.mrio->year) in.provenance["intensity_year"] = std::to_string(*config.mrio->year);
    const auto* origin_files = config.origin ? &*config.origin : &*config.mrio;
    if (origin_files->year) in.provenance["origin_year"] = std::to_string(*origin_files->year);
    in.provenance["leontief_method"] = config.method == mrio::LeontiefMethod::direct ? "direct" : "iterative";
    auto build = characterization::build_factor_set(in);
    for (const auto& w : build.coverage.warnings) diagnostics.warn(w);
    return build;
  });
}

std::optional<std::string> opt_number(const std::optional<double>& v) {
  return v ? std::optional(format_shortest(*v)) : std::nullopt;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, const RunOptions& options) {
  PipelineResult r;
  const Target target = options.target;

  if (config.factor_set) {
    if (config.mrio) r.diagnostics.warn("precomputed factor set given; MRIO tables are not read");
    r.factors = stage("ingest", [&] { return characterization::read_factor_set(CsvTable::read_file(*config.factor_set)); });
    r.factors_imported = true;
  } else {
    auto build = build_factors(config, r.diagnostics);
    r.factors = std::move(build.factors);
    r.coverage = std::move(build.coverage);
  }
  if (target == Target::factors) return r;

  r.consumption = stage("harmonize", [&] {
    const auto ledger = ledger::read_ledger(config.ledger);
    const auto mapping = ledger::AccountMapping::from_csv(CsvTable::read_file(config.account_mapping));
    std::optional<ledger::InflationTable> inflation;
    std::optional<ledger::BasicPriceTable> prices;
    if (config.inflation) inflation = ledger::InflationTable::from_csv(CsvTable::read_file(*config.inflation));
    if (config.basic_prices) prices = ledger::BasicPriceTable::from_csv(CsvTable::read_file(*config.basic_prices));
    ledger::HarmonizationTables tables;
    tables.inflation = inflation ? &*inflation : nullptr;
    tables.basic_prices = prices ? &*prices : nullptr;
    tables.fx_to_eur = config.fx_to_eur;
    return ledger::map_accounts(ledger, mapping, tables);
  });

  stage("footprint", [&] {
    r.lines = footprint::compute_line_footprints(*r.consumption, *r.factors, config.coverage_mode, &r.diagnostics);
    r.categories = footprint::aggregate_categories(r.lines, config.categories);
    r.statement_lines = footprint::aggregate_statement_lines(r.lines);
    r.total = footprint::total_footprint(r.lines);
  });
  if (target == Target::footprint) return r;

  if (target == Target::statement || target == Target::all) {
    stage("offsets", [&] {
      std::vector<const offsets::OffsetScenario*> selected;
      if (options.scenario) {
        for (const auto& s : config.scenarios)
          if (s.name == *options.scenario) selected.push_back(&s);
        if (selected.empty()) throw SelectionError("unknown scenario \"" + *options.scenario + "\"");
      } else {
        for (const auto& s : config.scenarios) selected.push_back(&s);
      }
      for (const auto* s : selected) r.quotes.emplace_back(*s, offsets::quote_offset(r.total.bde.value, *s));
    });

    r.statement = stage("statement", [&] {
      report::LedgerSummary summary = config.income_statement
                                          ? report::LedgerSummary::from_csv(CsvTable::read_file(*config.income_statement))
                                          : report::LedgerSummary::from_lines(r.lines);
      const auto footprints = report::statement_footprints(r.statement_lines);
      std::vector<report::BiodiversityOffset> bio;
      for (const auto& [s, q] : r.quotes) bio.push_back({s.name, s.country, q.annual_cost_eur, s.fraction});
      auto st = report::assemble_statement(summary, footprints, config.carbon, bio, config.statement);
      for (const auto& w : st.warnings) r.diagnostics.warn(w);
      return st;
    });
    if (target == Target::statement) return r;
  }

  stage("quadrant", [&] {
    r.quadrants.push_back(report::quadrant_data(r.categories, report::FootprintKind::biodiversity, config.iso_shares));
    r.quadrants.push_back(report::quadrant_data(r.categories, report::FootprintKind::carbon, config.iso_shares));
  });
  return r;
}

std::string footprint_csv(const PipelineResult& result) {
  std::string out = "group,name,consumption_eur,bde,bde_display,tco2e,bde_intensity,co2e_intensity\n";
  const auto row = [&](const char* group, const footprint::CategoryFootprint& c) {
    const std::vector<std::string> fields{group,
                                          c.name,
                                          format_shortest(c.consumption_eur),
                                          format_shortest(c.bde.value),
                                          c.bde.display(),
                                          format_shortest(footprint::to_tonnes(c.co2e_kg)),
                                          opt_number(c.bde_intensity).value_or(""),
                                          opt_number(c.co2e_intensity).value_or("")};
    out += csv_record(fields) + "\n";
  };
  for (const auto& c : result.categories) row("category", c);
  for (const auto& c : result.statement_lines) row("statement_line", c);
  row("total", result.total);
  return out;
}

std::string footprint_json(const PipelineResult& result) {
  using nlohmann::ordered_json;
  const auto entry = [](const footprint::CategoryFootprint& c) {
    ordered_json j;
    j["name"] = c.name;
    j["lines"] = c.lines;
    j["consumption_eur"] = c.consumption_eur;
    j["bde"] = c.bde.value;
    j["bde_display"] = c.bde.display();
    j["tco2e"] = footprint::to_tonnes(c.co2e_kg);
    j["bde_intensity"] = c.bde_intensity ? ordered_json(*c.bde_intensity) : ordered_json(nullptr);
    j["co2e_intensity"] = c.co2e_intensity ? ordered_json(*c.co2e_intensity) : ordered_json(nullptr);
    return j;
  };
  ordered_json doc;
  doc["categories"] = ordered_json::array();
  for (const auto& c : result.categories) doc["categories"].push_back(entry(c));
  doc["statement_lines"] = ordered_json::array();
  for (const auto& c : result.statement_lines) doc["statement_lines"].push_back(entry(c));
  doc["total"] = entry(result.total);
  doc["flagged_accounts"] = ordered_json::array();
  for (const auto& l : result.lines)
    if (l.flagged) doc["flagged_accounts"].push_back(l.account_id);
  return doc.dump(2) + "\n";
}

std::vector<OutputFile> render_outputs(const PipelineResult& result, Target target, Format format) {
  const std::string ext = format == Format::csv ? ".csv" : ".json";
  std::vector<OutputFile> out;
  const bool all = target == Target::all;
  if ((all || target == Target::factors) && result.factors)
    out.push_back({"factors.csv", characterization::write_factor_set(*result.factors)});
  if ((all || target == Target::footprint) && result.consumption)
    out.push_back({"footprint" + ext, format == Format::csv ? footprint_csv(result) : footprint_json(result)});
  if ((all || target == Target::statement) && result.statement)
    out.push_back({"statement" + ext, format == Format::csv ? report::statement_csv(*result.statement)
                                                            : report::statement_json(*result.statement)});
  if ((all || target == Target::quadrant) && !result.quadrants.empty()) {
    out.push_back({"quadrant" + ext, format == Format::csv ? report::quadrant_csv(result.quadrants)
                                                           : report::quadrant_json(result.quadrants)});
    out.push_back({"quadrant.svg", report::render_quadrant(result.quadrants)});
  }
  return out;
}

void write_outputs(std::span<const OutputFile> files, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw InputError("cannot create " + directory.string() + ": " + ec.message());

  std::vector<fs::path> staged;
  const auto cleanup = [&] {
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const auto& f : files) {
    const auto tmp = directory / ("." + f.name + ".tmp");
    staged.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << f.content;
    out.close();
    if (!out) {
      cleanup();
      throw InputError("cannot write " + tmp.string());
    }
  }
  std::vector<fs::path> placed;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto dest = directory / files[i].name;
    fs::rename(staged[i], dest, ec);
    if (ec) {
      for (const auto& p : placed) fs::remove(p, ec);
      cleanup();
      throw InputError("cannot write " + dest.string());
    }
    placed.push_back(dest);
  }
}

}  // namespace biovalent::pipeline
