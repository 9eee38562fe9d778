#include "tpb/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tpb/assess.hpp"
#include "tpb/rng.hpp"
#include "tpb/tpb.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace tpb {

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for key '" + key + "': '" + s + "'");
  }
}

double parse_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number for key '" + key + "': '" + s + "'");
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string pair_name(const std::pair<FunctionKind, FunctionKind>& p) {
  return to_string(p.first) + "/" + to_string(p.second);
}

// One cell of the run grid.
struct RunSpec {
  std::pair<FunctionKind, FunctionKind> problem;
  int dim = 0;
  int budget_factor = 0;
  std::string algorithm;
  int weights = 3;
  int degree = 2;
  double ratio = 0.9;
  int instance = 1;
  int seed = 1;
  OptimizerKind optimizer = OptimizerKind::TrustRegion;

  std::string canonical() const {
    std::ostringstream os;
    os << pair_name(problem) << ";n=" << dim << ";bf=" << budget_factor
       << ";algo=" << algorithm << ";k=" << weights << ";d=" << degree
       << ";r=" << fmt_double(ratio) << ";inst=" << instance << ";seed=" << seed
       << ";opt=" << to_string(optimizer);
    return os.str();
  }

  std::string key() const {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical())));
    return buf;
  }
};

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

std::string ledger_to_jsonl(const EvaluationLedger& ledger) {
  std::ostringstream os;
  for (const auto& entry : ledger) {
    json line;
    line["eval"] = entry.eval_index;
    line["x"] = vec_to_json(entry.x);
    line["f"] = vec_to_json(entry.f);
    os << line.dump() << '\n';
  }
  return os.str();
}

std::string trace_to_csv(const IndicatorTrace& trace) {
  std::ostringstream os;
  os << "eval_index,indicator_value\n";
  for (const auto& [e, v] : trace.series)
    os << e << ',' << fmt_double(v) << '\n';
  return os.str();
}

RunResult dispatch_run(const RunSpec& spec, const ProblemInstance& problem) {
  TpbConfig cfg;
  cfg.num_weights = spec.weights;
  cfg.degree = spec.degree;
  cfg.first_phase_ratio = spec.ratio;
  cfg.budget = spec.budget_factor * spec.dim;
  cfg.optimizer = spec.optimizer;
  cfg.seed = static_cast<std::uint64_t>(spec.seed);
  if (spec.algorithm == "tpb") return run_tpb(problem, cfg);
  if (spec.algorithm == "tpb1") return run_tpb1(problem, cfg);
  if (spec.algorithm == "tpb2") return run_tpb2(problem, cfg);
  throw ConfigError("unknown algorithm '" + spec.algorithm + "'");
}

} // namespace

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  using FK = FunctionKind;
  cfg.problems = {{FK::Sphere, FK::Sphere},         {FK::Sphere, FK::Ellipsoid},
                  {FK::Sphere, FK::Rosenbrock},     {FK::Ellipsoid, FK::Ellipsoid},
                  {FK::Rosenbrock, FK::Rosenbrock}, {FK::Sphere, FK::Rastrigin},
                  {FK::Rastrigin, FK::Rastrigin},   {FK::Sphere, FK::SchwefelLike}};
  cfg.dims = {2, 3, 5, 10, 20};
  cfg.budget_factors = {20, 30, 40};
  cfg.algorithms = {"tpb"};
  cfg.weight_counts = {3};
  cfg.degrees = {2};
  cfg.first_phase_ratios = {0.9};
  return cfg;
}

void ExperimentConfig::validate() const {
  if (problems.empty() || dims.empty() || budget_factors.empty() ||
      algorithms.empty() || weight_counts.empty() || degrees.empty() ||
      first_phase_ratios.empty())
    throw ConfigError("config: every sweep list must be non-empty");
  for (const auto& a : algorithms)
    if (a != "tpb" && a != "tpb1" && a != "tpb2")
      throw ConfigError("config: unknown algorithm '" + a + "'");
  for (int d : dims)
    if (d < 2) throw ConfigError("config: dims must be >= 2");
  for (int f : budget_factors)
    if (f < 1) throw ConfigError("config: budget factors must be >= 1");
  for (int k : weight_counts)
    if (k < 3) throw ConfigError("config: K must be >= 3");
  for (int d : degrees)
    if (d < 1) throw ConfigError("config: D must be >= 1");
  for (double r : first_phase_ratios)
    if (!(r > 0.0 && r < 1.0))
      throw ConfigError("config: r1st must lie in (0,1)");
  if (instances < 1) throw ConfigError("config: instances must be >= 1");
  if (seeds < 1) throw ConfigError("config: seeds must be >= 1");
  if (workers < 0) throw ConfigError("config: workers must be >= 0");
  if (front_resolution < 100)
    throw ConfigError("config: front resolution must be >= 100");
  if (out_dir.empty()) throw ConfigError("config: out dir must not be empty");
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "problems") {
    cfg.problems.clear();
    for (const auto& item : split_csv(value)) {
      const auto slash = item.find('/');
      if (slash == std::string::npos)
        throw ConfigError("bad value for key 'problems': '" + item +
                          "' (expected kind/kind)");
      cfg.problems.emplace_back(parse_function_kind(trim(item.substr(0, slash))),
                                parse_function_kind(trim(item.substr(slash + 1))));
    }
  } else if (key == "dims") {
    cfg.dims.clear();
    for (const auto& item : split_csv(value)) cfg.dims.push_back(parse_int(key, item));
  } else if (key == "budget-factors" || key == "budget_factors") {
    cfg.budget_factors.clear();
    for (const auto& item : split_csv(value))
      cfg.budget_factors.push_back(parse_int(key, item));
  } else if (key == "algos" || key == "algorithms") {
    cfg.algorithms = split_csv(value);
  } else if (key == "K" || key == "k") {
    cfg.weight_counts.clear();
    for (const auto& item : split_csv(value))
      cfg.weight_counts.push_back(parse_int(key, item));
  } else if (key == "D" || key == "d") {
    cfg.degrees.clear();
    for (const auto& item : split_csv(value))
      cfg.degrees.push_back(parse_int(key, item));
  } else if (key == "r1st") {
    cfg.first_phase_ratios.clear();
    for (const auto& item : split_csv(value))
      cfg.first_phase_ratios.push_back(parse_double(key, item));
  } else if (key == "instances") {
    cfg.instances = parse_int(key, value);
  } else if (key == "seeds") {
    cfg.seeds = parse_int(key, value);
  } else if (key == "workers") {
    cfg.workers = parse_int(key, value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "front-resolution" || key == "front_resolution") {
    cfg.front_resolution = parse_int(key, value);
  } else if (key == "optimizer") {
    cfg.optimizer = parse_optimizer_kind(value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  ExperimentConfig cfg = default_config();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config file line " + std::to_string(line_no) +
                        ": expected key=value");
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

namespace {

json meta_to_json(const RunSpec& spec, const RunResult& result,
                  const IndicatorTrace& trace, double ref_hv) {
  json m;
  m["key"] = spec.key();
  m["problem"] = pair_name(spec.problem);
  m["dim"] = spec.dim;
  m["budget_factor"] = spec.budget_factor;
  m["budget"] = spec.budget_factor * spec.dim;
  m["algorithm"] = spec.algorithm;
  m["weights"] = spec.weights;
  m["degree"] = spec.degree;
  m["r1st"] = spec.ratio;
  m["instance"] = spec.instance;
  m["seed"] = spec.seed;
  m["optimizer"] = to_string(spec.optimizer);
  m["budget_opt"] = result.meta.budget_opt;
  m["phase1_evals"] = result.meta.phase1_evals;
  m["phase2_evals"] = result.meta.phase2_evals;
  m["evals"] = result.ledger.size();
  m["fit_degenerate"] = result.meta.fit_degenerate;
  m["wall_seconds"] = result.meta.wall_seconds;
  m["eval_seconds"] = result.meta.eval_seconds;
  m["ref_hv"] = ref_hv;
  m["final_indicator"] =
      trace.series.empty() ? json() : json(trace.series.back().second);
  json best = json::array();
  for (const auto& b : result.meta.best_per_weight) best.push_back(vec_to_json(b));
  m["best_per_weight"] = best;
  m["targets"] = trace.targets;
  m["hit_at"] = trace.hit_at;
  return m;
}

struct RunOutcome {
  RunSpec spec;
  bool ok = false;
  bool skipped = false;
  std::string error;
};

// Summary row from a run's meta.json; keeps resumed and fresh runs uniform.
std::string summary_row(const json& m, const std::string& status) {
  std::ostringstream os;
  os << m["key"].get<std::string>() << ',' << m["problem"].get<std::string>()
     << ',' << m["dim"] << ',' << m["budget_factor"] << ','
     << m["algorithm"].get<std::string>() << ',' << m["weights"] << ','
     << m["degree"] << ',' << fmt_double(m["r1st"].get<double>()) << ','
     << m["instance"] << ',' << m["seed"] << ',' << status << ',' << m["evals"]
     << ',';
  if (m["final_indicator"].is_null())
    os << "inf";
  else
    os << fmt_double(m["final_indicator"].get<double>());
  const double wall = m["wall_seconds"].get<double>();
  const double evals = m["eval_seconds"].get<double>();
  os << ',' << fmt_double(wall) << ',' << fmt_double(evals) << ','
     << fmt_double(wall - evals);
  return os.str();
}

constexpr const char* kSummaryHeader =
    "key,problem,dim,budget_factor,algorithm,K,D,r1st,instance,seed,status,"
    "evals,final_indicator,wall_seconds,eval_seconds,overhead_seconds";

} // namespace

int run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  const fs::path out_dir(cfg.out_dir);
  const fs::path runs_dir = out_dir / "runs";
  const fs::path cache_dir = out_dir / "cache";
  fs::create_directories(runs_dir);
  fs::create_directories(cache_dir);

  std::vector<RunSpec> specs;
  for (const auto& problem : cfg.problems)
    for (int dim : cfg.dims)
      for (int bf : cfg.budget_factors)
        for (const auto& algo : cfg.algorithms)
          for (int k : cfg.weight_counts)
            for (int d : cfg.degrees)
              for (double r : cfg.first_phase_ratios)
                for (int inst = 1; inst <= cfg.instances; ++inst)
                  for (int seed = 1; seed <= cfg.seeds; ++seed)
                    specs.push_back(RunSpec{problem, dim, bf, algo, k, d, r,
                                            inst, seed, cfg.optimizer});

  unsigned n_workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                       : std::thread::hardware_concurrency();
  if (n_workers == 0) n_workers = 1;

  // Reference fronts are shared across budgets/algorithms; build them before
  // the run pool so workers only ever read them. Each front is computed by
  // one thread and written to the cache exactly once.
  std::map<std::string, ReferenceData> fronts;
  {
    std::vector<ProblemInstance> distinct;
    for (const auto& spec : specs) {
      auto inst = make_problem(spec.problem.first, spec.problem.second, spec.dim,
                               static_cast<std::uint64_t>(spec.instance));
      if (!fronts.count(inst.key())) {
        fronts.emplace(inst.key(), ReferenceData{});
        distinct.push_back(std::move(inst));
      }
    }
    std::atomic<std::size_t> front_cursor{0};
    std::mutex fronts_mutex;
    auto front_worker = [&]() {
      for (;;) {
        const std::size_t i = front_cursor.fetch_add(1);
        if (i >= distinct.size()) return;
        ReferenceData data =
            reference_front(distinct[i], cfg.front_resolution, cache_dir.string());
        std::lock_guard<std::mutex> lock(fronts_mutex);
        fronts[distinct[i].key()] = std::move(data);
      }
    };
    std::vector<std::thread> front_pool;
    const unsigned front_workers =
        std::min<unsigned>(n_workers, std::max<std::size_t>(distinct.size(), 1));
    for (unsigned t = 0; t < front_workers; ++t) front_pool.emplace_back(front_worker);
    for (auto& t : front_pool) t.join();
  }

  std::vector<RunOutcome> outcomes(specs.size());
  std::atomic<std::size_t> cursor{0};
  std::mutex log_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= specs.size()) return;
      const RunSpec& spec = specs[i];
      RunOutcome& outcome = outcomes[i];
      outcome.spec = spec;
      const fs::path run_dir = runs_dir / spec.key();
      try {
        if (fs::exists(run_dir / "done")) {
          outcome.ok = true;
          outcome.skipped = true;
          continue;
        }
        const auto problem =
            make_problem(spec.problem.first, spec.problem.second, spec.dim,
                         static_cast<std::uint64_t>(spec.instance));
        const auto& refdata = fronts.at(problem.key());
        const RunResult result = dispatch_run(spec, problem);
        const IndicatorTrace trace = build_trace(result.ledger, refdata);

        fs::create_directories(run_dir);
        write_file_atomic(run_dir / "run.json",
                          json{{"spec", spec.canonical()}}.dump(2) + "\n");
        write_file_atomic(run_dir / "ledger.jsonl", ledger_to_jsonl(result.ledger));
        write_file_atomic(run_dir / "trace.csv", trace_to_csv(trace));
        if (!result.meta.model.control_points.empty())
          write_file_atomic(run_dir / "model.txt", dump_model(result.meta.model));
        write_file_atomic(run_dir / "meta.json",
                          meta_to_json(spec, result, trace, refdata.ref_hv).dump(2) + "\n");
        write_file_atomic(run_dir / "done", "ok\n");
        outcome.ok = true;
      } catch (const std::exception& e) {
        outcome.ok = false;
        outcome.error = e.what();
        std::lock_guard<std::mutex> lock(log_mutex);
        std::fprintf(stderr, "run %s failed: %s\n", spec.key().c_str(), e.what());
      }
    }
  };

  std::vector<std::thread> pool;
  const unsigned run_workers = std::min<unsigned>(n_workers, specs.size());
  for (unsigned t = 0; t < run_workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // Summary over all runs, resumed ones included.
  std::ostringstream summary;
  summary << kSummaryHeader << '\n';
  bool any_failed = false;
  for (const auto& outcome : outcomes) {
    const fs::path run_dir = runs_dir / outcome.spec.key();
    if (outcome.ok) {
      const json m = json::parse(read_file(run_dir / "meta.json"));
      summary << summary_row(m, "ok") << '\n';
    } else {
      any_failed = true;
      summary << outcome.spec.key() << ',' << pair_name(outcome.spec.problem)
              << ',' << outcome.spec.dim << ',' << outcome.spec.budget_factor
              << ',' << outcome.spec.algorithm << ',' << outcome.spec.weights
              << ',' << outcome.spec.degree << ','
              << fmt_double(outcome.spec.ratio) << ',' << outcome.spec.instance
              << ',' << outcome.spec.seed << ",failed,0,inf,0,0,0\n";
    }
  }
  write_file_atomic(out_dir / "summary.csv", summary.str());

  emit_reports(cfg.out_dir);
  return any_failed ? 1 : 0;
}

int emit_reports(const std::string& out_dir_str) {
  const fs::path out_dir(out_dir_str);
  const fs::path runs_dir = out_dir / "runs";

  std::vector<json> metas;
  if (fs::exists(runs_dir)) {
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(runs_dir))
      if (entry.is_directory() && fs::exists(entry.path() / "done"))
        dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs)
      metas.push_back(json::parse(read_file(dir / "meta.json")));
  }
  if (metas.empty()) {
    std::fprintf(stderr, "emit_reports: no completed runs under %s\n",
                 out_dir_str.c_str());
    return 1;
  }

  const fs::path reports_dir = out_dir / "reports";
  fs::create_directories(reports_dir);

  // ECDF per (algorithm, dim, budget factor).
  std::map<std::tuple<std::string, int, int>, std::vector<const json*>> groups;
  for (const auto& m : metas)
    groups[{m["algorithm"].get<std::string>(), m["dim"].get<int>(),
            m["budget_factor"].get<int>()}]
        .push_back(&m);

  for (const auto& [group_key, members] : groups) {
    const auto& [algo, dim, bf] = group_key;
    std::vector<IndicatorTrace> traces;
    traces.reserve(members.size());
    for (const json* m : members) {
      IndicatorTrace t;
      t.targets = (*m)["targets"].get<std::vector<double>>();
      t.hit_at = (*m)["hit_at"].get<std::vector<int>>();
      traces.push_back(std::move(t));
    }
    const int budget = bf * dim;
    std::vector<int> grid(budget);
    for (int e = 1; e <= budget; ++e) grid[e - 1] = e;
    const auto curve = ecdf(traces, grid);

    std::ostringstream csv;
    csv << "evals_per_dim,fraction\n";
    for (const auto& [e, frac] : curve)
      csv << fmt_double(static_cast<double>(e) / dim) << ',' << fmt_double(frac)
          << '\n';
    std::ostringstream name;
    name << "ecdf_" << algo << "_n" << dim << "_bf" << bf << ".csv";
    write_file_atomic(reports_dir / name.str(), csv.str());
  }

  // Wall-time table per (algorithm, dim); overhead excludes evaluation time.
  {
    std::map<std::pair<std::string, int>, std::vector<std::pair<double, double>>> times;
    for (const auto& m : metas)
      times[{m["algorithm"].get<std::string>(), m["dim"].get<int>()}].emplace_back(
          m["wall_seconds"].get<double>(), m["eval_seconds"].get<double>());
    std::ostringstream csv;
    csv << "algorithm,dim,runs,mean_wall_seconds,mean_eval_seconds,"
           "mean_overhead_seconds\n";
    for (const auto& [key, entries] : times) {
      double wall = 0.0, eval = 0.0;
      for (const auto& [w, e] : entries) {
        wall += w;
        eval += e;
      }
      const double count = static_cast<double>(entries.size());
      csv << key.first << ',' << key.second << ',' << entries.size() << ','
          << fmt_double(wall / count) << ',' << fmt_double(eval / count) << ','
          << fmt_double((wall - eval) / count) << '\n';
    }
    write_file_atomic(reports_dir / "walltime.csv", csv.str());
  }

  // Final indicator per problem row, one column per algorithm.
  {
    std::set<std::string> algos;
    for (const auto& m : metas) algos.insert(m["algorithm"].get<std::string>());
    std::map<std::tuple<std::string, int, int, int, int>, std::map<std::string, double>>
        rows;
    for (const auto& m : metas) {
      const double v = m["final_indicator"].is_null()
                           ? std::numeric_limits<double>::infinity()
                           : m["final_indicator"].get<double>();
      rows[{m["problem"].get<std::string>(), m["dim"].get<int>(),
            m["budget_factor"].get<int>(), m["instance"].get<int>(),
            m["seed"].get<int>()}][m["algorithm"].get<std::string>()] = v;
    }
    std::ostringstream csv;
    csv << "problem,dim,budget_factor,instance,seed";
    for (const auto& a : algos) csv << ',' << a;
    csv << '\n';
    for (const auto& [key, by_algo] : rows) {
      const auto& [problem, dim, bf, inst, seed] = key;
      csv << problem << ',' << dim << ',' << bf << ',' << inst << ',' << seed;
      for (const auto& a : algos) {
        csv << ',';
        const auto it = by_algo.find(a);
        if (it != by_algo.end()) csv << fmt_double(it->second);
      }
      csv << '\n';
    }
    write_file_atomic(reports_dir / "final_indicator.csv", csv.str());
  }

  return 0;
}

} // namespace tpb
