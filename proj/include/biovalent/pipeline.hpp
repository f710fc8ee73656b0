#pragma once

// End-to-end run: ingest, factors (or a precomputed factor set), harmonize,
// footprint, offsets, statement, quadrant. Stage failures surface as
// StageError carrying the stage name.

#include "biovalent/config.hpp"
#include "biovalent/quadrant.hpp"
#include "biovalent/statement.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace biovalent::pipeline {

/// How far a run goes.
enum class Target { factors, footprint, statement, quadrant, all };

enum class Format { csv, json };

struct RunOptions {
  Target target = Target::all;
  std::optional<std::string> scenario;  ///< restrict offsets and statement to one scenario
};

struct PipelineResult {
  std::optional<characterization::ImpactFactorSet> factors;
  bool factors_imported = false;
  std::optional<characterization::CoverageReport> coverage;

  std::optional<ledger::MappedConsumption> consumption;
  std::vector<footprint::LineFootprint> lines;
  std::vector<footprint::CategoryFootprint> categories;
  std::vector<footprint::CategoryFootprint> statement_lines;
  footprint::CategoryFootprint total;

  std::vector<std::pair<offsets::OffsetScenario, offsets::OffsetQuote>> quotes;
  std::optional<report::ImpactStatement> statement;
  std::vector<report::QuadrantAnalysis> quadrants;  ///< biodiversity, then carbon

  Diagnostics diagnostics;
};

PipelineResult run_pipeline(const PipelineConfig& config, const RunOptions& options = {});

struct OutputFile {
  std::string name;
  std::string content;
};

/// Serializes what `target` produced. The factor set is always CSV.
std::vector<OutputFile> render_outputs(const PipelineResult& result, Target target, Format format);

/// Writes every file or none: a failure removes what was already written.
void write_outputs(std::span<const OutputFile> files, const std::filesystem::path& directory);

/// Per category, per statement line and total.
std::string footprint_csv(const PipelineResult& result);
std::string footprint_json(const PipelineResult& result);

}  // namespace biovalent::pipeline
