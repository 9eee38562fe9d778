#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tpb/dfo.hpp"
#include "tpb/problems.hpp"
#include "tpb/types.hpp"

namespace tpb {

/// Full benchmark grid: every combination of problem pair, dimension, budget
/// factor, algorithm, parameter sweep value, instance and seed becomes one
/// independent run.
struct ExperimentConfig {
  std::vector<std::pair<FunctionKind, FunctionKind>> problems;
  std::vector<int> dims;
  std::vector<int> budget_factors; // budget = factor * dim
  std::vector<std::string> algorithms; // subset of {tpb, tpb1, tpb2}
  std::vector<int> weight_counts;
  std::vector<int> degrees;
  std::vector<double> first_phase_ratios;
  int instances = 5;
  int seeds = 1;
  int workers = 0; // 0 = hardware concurrency
  std::string out_dir = "tpb-out";
  int front_resolution = 1000;
  OptimizerKind optimizer = OptimizerKind::TrustRegion;

  void validate() const; // throws ConfigError
};

/// The curated 8-pair suite, dims {2,3,5,10,20}, budget factors {20,30,40},
/// algorithm tpb with its default parameters.
ExperimentConfig default_config();

/// Applies one "key=value" setting; shared by the config-file parser and the
/// CLI flag handler. Throws ConfigError naming the offending key.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

/// Reads a flat key=value file ('#' starts a comment) over the defaults.
ExperimentConfig parse_config(const std::string& path);

/// Executes the whole grid with a bounded worker pool, writing one run
/// directory (ledger.jsonl, trace.csv, meta.json, model.txt) per run plus
/// summary and report tables. Runs already completed on disk (keyed by a
/// stable hash of their sub-config) are skipped, so re-running is a no-op.
/// Returns 0 on success, 1 when any run failed.
int run_experiment(const ExperimentConfig& cfg);

/// Rebuilds the report tables (ECDF CSVs per algorithm/dim/budget group, the
/// wall-time table and the per-problem final-indicator table) from completed
/// runs. Returns 0, or 1 when no runs are found.
int emit_reports(const std::string& out_dir);

} // namespace tpb
