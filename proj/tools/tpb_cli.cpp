// Experiment driver: expands the configured run grid, executes it with a
// worker pool, and writes ledgers, traces and report tables under --out.
//
// Exit codes: 0 success, 1 run failures (or no runs for --reports-only),
// 2 configuration errors.

#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tpb/bezier.hpp"
#include "tpb/experiment.hpp"

namespace {

// Reloads a dumped model and prints the decision vectors it interpolates on
// an equally spaced parameter grid.
int eval_model(const std::string& path, int count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "cannot read model file '%s'\n", path.c_str());
    return 1;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const auto model = tpb::parse_model(ss.str());
  for (const auto& t : tpb::simplex_grid(model.objective_dim, count, true)) {
    const tpb::Vec x = tpb::evaluate(model, t);
    for (int m = 0; m < t.size(); ++m) std::printf("%.17g ", t[m]);
    for (int n = 0; n < x.size(); ++n)
      std::printf("%.17g%s", x[n], n + 1 < x.size() ? " " : "");
    std::printf("\n");
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-phase Bezier-simplex interpolation benchmark driver"};

  std::string config_path;
  std::string problems, dims, budget_factors, algos, weight_counts, degrees,
      ratios, optimizer;
  int instances = -1, seeds = -1, workers = -1, front_resolution = -1;
  std::string out_dir;
  bool reports_only = false;
  std::string model_path;
  int model_count = 11;

  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--problems", problems,
                 "comma list of kind/kind pairs (e.g. sphere/ellipsoid)");
  app.add_option("--dims", dims, "comma list of search-space dimensions");
  app.add_option("--budget-factors", budget_factors,
                 "comma list; budget = factor * dim");
  app.add_option("--algos", algos, "comma subset of tpb,tpb1,tpb2");
  app.add_option("--K", weight_counts, "comma list of weight counts");
  app.add_option("--D", degrees, "comma list of model degrees");
  app.add_option("--r1st", ratios, "comma list of first-phase budget ratios");
  app.add_option("--instances", instances, "instances per problem");
  app.add_option("--seeds", seeds, "seeds per instance");
  app.add_option("--workers", workers, "worker threads (0 = all cores)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--front-resolution", front_resolution,
                 "reference front resolution");
  app.add_option("--optimizer", optimizer, "tr or nelder-mead");
  app.add_flag("--reports-only", reports_only,
               "rebuild report tables from completed runs and exit");
  app.add_option("--eval-model", model_path,
                 "reload a dumped model file and print interpolated points");
  app.add_option("--eval-count", model_count,
                 "grid size for --eval-model (default 11)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return 2;
  }

  try {
    if (!model_path.empty()) return eval_model(model_path, model_count);
    tpb::ExperimentConfig cfg = config_path.empty()
                                    ? tpb::default_config()
                                    : tpb::parse_config(config_path);

    // Flags override file values.
    if (!problems.empty()) tpb::apply_config_entry(cfg, "problems", problems);
    if (!dims.empty()) tpb::apply_config_entry(cfg, "dims", dims);
    if (!budget_factors.empty())
      tpb::apply_config_entry(cfg, "budget-factors", budget_factors);
    if (!algos.empty()) tpb::apply_config_entry(cfg, "algos", algos);
    if (!weight_counts.empty()) tpb::apply_config_entry(cfg, "K", weight_counts);
    if (!degrees.empty()) tpb::apply_config_entry(cfg, "D", degrees);
    if (!ratios.empty()) tpb::apply_config_entry(cfg, "r1st", ratios);
    if (instances >= 0)
      tpb::apply_config_entry(cfg, "instances", std::to_string(instances));
    if (seeds >= 0) tpb::apply_config_entry(cfg, "seeds", std::to_string(seeds));
    if (workers >= 0)
      tpb::apply_config_entry(cfg, "workers", std::to_string(workers));
    if (!out_dir.empty()) tpb::apply_config_entry(cfg, "out", out_dir);
    if (front_resolution >= 0)
      tpb::apply_config_entry(cfg, "front-resolution",
                              std::to_string(front_resolution));
    if (!optimizer.empty()) tpb::apply_config_entry(cfg, "optimizer", optimizer);

    cfg.validate();

    if (reports_only) return tpb::emit_reports(cfg.out_dir);
    return tpb::run_experiment(cfg);
  } catch (const tpb::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
