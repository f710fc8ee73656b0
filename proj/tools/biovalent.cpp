// biovalent: biodiversity and carbon footprint accounting from the command line.

#include "biovalent/pipeline.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>

namespace {

using namespace biovalent;

struct Args {
  std::string config;
  std::string scenario;
  std::string format = "csv";
  std::string out = "out";
};

void add_common(CLI::App* cmd, Args& args, bool writes) {
  cmd->add_option("--config", args.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--scenario", args.scenario, "Restrict offsets to one scenario");
  if (writes) {
    cmd->add_option("--format", args.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", args.out, "Output directory");
  }
}

void print_warnings(const Diagnostics& d) {
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << "\n";
}

int run(pipeline::Target target, const Args& args) {
  const auto config = pipeline::load_config(args.config);
  pipeline::RunOptions options;
  options.target = target;
  if (!args.scenario.empty()) options.scenario = args.scenario;
  const auto result = pipeline::run_pipeline(config, options);
  print_warnings(result.diagnostics);
  const auto format = args.format == "json" ? pipeline::Format::json : pipeline::Format::csv;
  const auto files = pipeline::render_outputs(result, target, format);
  pipeline::write_outputs(files, args.out);
  for (const auto& f : files) std::cout << (std::filesystem::path(args.out) / f.name).string() << "\n";
  return 0;
}

int validate(const Args& args) {
  const auto config = pipeline::load_config(args.config);
  pipeline::RunOptions options;
  if (!args.scenario.empty()) options.scenario = args.scenario;
  const auto result = pipeline::run_pipeline(config, options);
  print_warnings(result.diagnostics);
  if (result.factors_imported) {
    std::cout << "factor set: imported\n";
  } else if (result.coverage) {
    const auto& c = *result.coverage;
    std::cout << "factor set: " << result.factors->index().size() << " positions, " << c.country_hits
              << " country CFs, " << c.continental_fallbacks << " continental, " << c.global_fallbacks
              << " global fallbacks, " << c.missing_cells.size() << " missing cells, " << c.excluded.size()
              << " excluded stressors\n";
  }
  std::size_t flagged = 0;
  for (const auto& l : result.lines) flagged += l.flagged;
  std::cout << "ledger: " << result.lines.size() << " lines, " << flagged << " flagged\n";
  std::cout << "footprint: " << result.total.bde.display() << ", " << footprint::to_tonnes(result.total.co2e_kg)
            << " tCO2e\n";
  std::cout << "ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biodiversity and carbon footprint accounting"};
  app.require_subcommand(1);
  Args args;

  const std::map<std::string, pipeline::Target> targets{{"factors", pipeline::Target::factors},
                                                        {"footprint", pipeline::Target::footprint},
                                                        {"statement", pipeline::Target::statement},
                                                        {"quadrant", pipeline::Target::quadrant},
                                                        {"run", pipeline::Target::all}};
  const std::map<std::string, std::string> help{{"factors", "Build and export the impact factor set"},
                                                {"footprint", "Per-category and per-statement-line footprints"},
                                                {"statement", "Financial-environmental impact statement"},
                                                {"quadrant", "Quadrant of opportunities (data and SVG)"},
                                                {"run", "All outputs"}};
  std::map<std::string, CLI::App*> commands;
  for (const auto& [name, target] : targets) {
    commands[name] = app.add_subcommand(name, help.at(name));
    add_common(commands[name], args, true);
  }
  auto* validate_cmd = app.add_subcommand("validate", "Load every input and run all stages without writing");
  add_common(validate_cmd, args, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) return validate(args);
    for (const auto& [name, target] : targets)
      if (*commands[name]) return run(target, args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
