#include "tpb/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "tpb/assess.hpp"
#include "tpb/bezier.hpp"
#include "tpb/dfo.hpp"
#include "tpb/rng.hpp"

namespace tpb {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double base_function(FunctionKind kind, const Vec& z) {
  const int n = static_cast<int>(z.size());
  switch (kind) {
    case FunctionKind::Sphere:
      return z.squaredNorm();
    case FunctionKind::Ellipsoid: {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const double expo = (n > 1) ? 6.0 * i / (n - 1) : 0.0;
        sum += std::pow(10.0, expo) * z[i] * z[i];
      }
      return sum;
    }
    case FunctionKind::Rosenbrock: {
      // Evaluated at z + 1 so the minimum sits at z = 0.
      double sum = 0.0;
      for (int i = 0; i + 1 < n; ++i) {
        const double u = z[i] + 1.0;
        const double v = z[i + 1] + 1.0;
        sum += 100.0 * (u * u - v) * (u * u - v) + (u - 1.0) * (u - 1.0);
      }
      return sum;
    }
    case FunctionKind::Rastrigin: {
      double cos_sum = 0.0;
      for (int i = 0; i < n; ++i) cos_sum += std::cos(kTwoPi * z[i]);
      return 10.0 * (n - cos_sum) + z.squaredNorm();
    }
    case FunctionKind::SchwefelLike: {
      // Weak quadratic envelope over deep periodic wells: distant local
      // minima stay almost as good as the global one.
      double sum = 0.0;
      for (int i = 0; i < n; ++i)
        sum += 0.1 * z[i] * z[i] + 10.0 * (1.0 - std::cos(kTwoPi * z[i]));
      return sum;
    }
  }
  throw std::logic_error("base_function: unreachable");
}

bool needs_rotation(FunctionKind kind) {
  return kind == FunctionKind::Ellipsoid || kind == FunctionKind::Rosenbrock ||
         kind == FunctionKind::SchwefelLike;
}

Mat random_rotation(int n, Rng& rng) {
  Mat gauss(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) gauss(r, c) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(gauss);
  Mat q = qr.householderQ();
  const Mat r_factor = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < n; ++c)
    if (r_factor(c, c) < 0.0) q.col(c) = -q.col(c);
  return q;
}

} // namespace

FunctionKind parse_function_kind(const std::string& name) {
  if (name == "sphere") return FunctionKind::Sphere;
  if (name == "ellipsoid") return FunctionKind::Ellipsoid;
  if (name == "rosenbrock") return FunctionKind::Rosenbrock;
  if (name == "rastrigin") return FunctionKind::Rastrigin;
  if (name == "schwefel-like") return FunctionKind::SchwefelLike;
  throw ConfigError("unknown function kind '" + name + "'");
}

std::string to_string(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::Sphere: return "sphere";
    case FunctionKind::Ellipsoid: return "ellipsoid";
    case FunctionKind::Rosenbrock: return "rosenbrock";
    case FunctionKind::Rastrigin: return "rastrigin";
    case FunctionKind::SchwefelLike: return "schwefel-like";
  }
  return "?";
}

bool is_multimodal(FunctionKind kind) {
  return kind == FunctionKind::Rastrigin || kind == FunctionKind::SchwefelLike;
}

std::string ProblemInstance::key() const {
  std::ostringstream os;
  os << to_string(f1_kind) << '_' << to_string(f2_kind) << "_n" << dim << "_s" << seed;
  return os.str();
}

ProblemInstance make_problem(FunctionKind f1, FunctionKind f2, int dim,
                             std::uint64_t instance_seed) {
  if (dim < 2) throw std::invalid_argument("make_problem: dim must be >= 2");

  ProblemInstance inst;
  inst.dim = dim;
  inst.f1_kind = f1;
  inst.f2_kind = f2;
  inst.seed = instance_seed;
  inst.lower = Vec::Constant(dim, -5.0);
  inst.upper = Vec::Constant(dim, 5.0);

  Rng rng(fnv1a(inst.key()));
  inst.shift1 = Vec(dim);
  for (int i = 0; i < dim; ++i) inst.shift1[i] = rng.uniform(-4.0, 4.0);
  inst.shift2 = Vec(dim);
  for (int i = 0; i < dim; ++i) inst.shift2[i] = rng.uniform(-4.0, 4.0);
  inst.rot1 = needs_rotation(f1) ? random_rotation(dim, rng) : Mat::Identity(dim, dim);
  inst.rot2 = needs_rotation(f2) ? random_rotation(dim, rng) : Mat::Identity(dim, dim);
  return inst;
}

Vec evaluate_objectives(const ProblemInstance& instance, const Vec& x) {
  if (x.size() != instance.dim)
    throw std::invalid_argument("evaluate_objectives: dimension mismatch");
  Vec f(2);
  f[0] = base_function(instance.f1_kind, instance.rot1 * (x - instance.shift1));
  f[1] = base_function(instance.f2_kind, instance.rot2 * (x - instance.shift2));
  return f;
}

Vec analytic_pareto_point(const ProblemInstance& instance, double t) {
  if (instance.f1_kind != FunctionKind::Sphere ||
      instance.f2_kind != FunctionKind::Sphere)
    throw std::invalid_argument(
        "analytic_pareto_point: only sphere/sphere instances have an analytic front");
  return instance.shift1 + t * (instance.shift2 - instance.shift1);
}

namespace {

ReferenceData finalize_reference(std::vector<Vec> front_points) {
  ReferenceData data;
  data.front = std::move(front_points);
  std::sort(data.front.begin(), data.front.end(),
            [](const Vec& a, const Vec& b) {
              return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
            });
  data.ref.ideal = data.front.front();
  data.ref.nadir = data.front.front();
  for (const auto& f : data.front) {
    data.ref.ideal = data.ref.ideal.cwiseMin(f);
    data.ref.nadir = data.ref.nadir.cwiseMax(f);
  }
  std::vector<Vec> normalized;
  normalized.reserve(data.front.size());
  for (const auto& f : data.front) normalized.push_back(normalize(f, data.ref));
  data.ref_hv = hypervolume_2d(normalized, Vec::Constant(2, 1.0));
  return data;
}

std::vector<Vec> thin_front(std::vector<Vec> front, int cap) {
  if (static_cast<int>(front.size()) <= cap) return front;
  std::sort(front.begin(), front.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  std::vector<Vec> kept;
  kept.reserve(cap);
  const double stride = static_cast<double>(front.size() - 1) / (cap - 1);
  long long prev = -1;
  for (int j = 0; j < cap; ++j) {
    const auto idx = static_cast<long long>(std::llround(j * stride));
    if (idx != prev) kept.push_back(front[static_cast<std::size_t>(idx)]);
    prev = idx;
  }
  return kept;
}

// Kronecker sequence built on the generalized golden ratio; deterministic
// space-filling scan of the box.
std::vector<double> kronecker_alphas(int dim) {
  double phi = 1.5;
  for (int it = 0; it < 64; ++it)
    phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
  std::vector<double> alphas(dim);
  double a = 1.0 / phi;
  for (int i = 0; i < dim; ++i) {
    alphas[i] = a;
    a /= phi;
  }
  return alphas;
}

ReferenceData brute_force_reference(const ProblemInstance& instance, int resolution) {
  const long long scan_count =
      static_cast<long long>(resolution) * static_cast<long long>(resolution);
  const auto alphas = kronecker_alphas(instance.dim);
  const Vec width = instance.upper - instance.lower;
  Vec x(instance.dim);
  Vec best_x1 = instance.lower, best_x2 = instance.lower;
  double best_f1 = std::numeric_limits<double>::infinity();
  double best_f2 = std::numeric_limits<double>::infinity();
  std::vector<Vec> all_f;
  all_f.reserve(static_cast<std::size_t>(scan_count));
  for (long long k = 0; k < scan_count; ++k) {
    for (int i = 0; i < instance.dim; ++i) {
      double u = 0.5 + (k + 1) * alphas[i];
      u -= std::floor(u);
      x[i] = instance.lower[i] + width[i] * u;
    }
    Vec f = evaluate_objectives(instance, x);
    if (f[0] < best_f1) { best_f1 = f[0]; best_x1 = x; }
    if (f[1] < best_f2) { best_f2 = f[1]; best_x2 = x; }
    all_f.push_back(std::move(f));
  }

  // Scalarized local refinements: polish both extremes, then fill the middle
  // with a sweep of weighted-sum problems on scan-normalized objectives.
  std::vector<Vec> refined;
  const int refine_budget = 200 * (instance.dim + 1);
  auto run_refinement = [&](const std::function<double(const Vec&)>& scalar,
                            const Vec& start) {
    ScalarProblem sp;
    sp.lower = instance.lower;
    sp.upper = instance.upper;
    sp.max_evals = refine_budget;
    sp.objective = [&](const Vec& y) {
      Vec f = evaluate_objectives(instance, y);
      refined.push_back(f);
      return scalar(f);
    };
    (void)optimize(sp, start);
  };

  run_refinement([](const Vec& f) { return f[0]; }, best_x1);
  run_refinement([](const Vec& f) { return f[1]; }, best_x2);

  RefPoints scan_ref;
  scan_ref.ideal = Vec(2);
  scan_ref.nadir = Vec(2);
  for (int m = 0; m < 2; ++m) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& f : all_f) { lo = std::min(lo, f[m]); hi = std::max(hi, f[m]); }
    for (const auto& f : refined) { lo = std::min(lo, f[m]); hi = std::max(hi, f[m]); }
    scan_ref.ideal[m] = lo;
    scan_ref.nadir[m] = hi;
  }
  for (const auto& w : simplex_grid(2, 19, false)) {
    // Warm start each weighted problem from the best scanned point for it.
    std::size_t best_idx = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < all_f.size(); i += 97) {
      const double v = normalized_weighted_sum(w, all_f[i], scan_ref);
      if (v < best_val) { best_val = v; best_idx = i; }
    }
    for (int i = 0; i < instance.dim; ++i) {
      double u = 0.5 + (static_cast<long long>(best_idx) + 1) * alphas[i];
      u -= std::floor(u);
      x[i] = instance.lower[i] + width[i] * u;
    }
    run_refinement(
        [&, w](const Vec& f) { return normalized_weighted_sum(w, f, scan_ref); }, x);
  }

  all_f.insert(all_f.end(), refined.begin(), refined.end());
  auto front = nondominated_filter(all_f);
  front = thin_front(std::move(front), std::max(resolution, 2));
  return finalize_reference(std::move(front));
}

} // namespace

std::string dump_reference(const ReferenceData& data) {
  std::ostringstream os;
  char buf[64];
  os << "# reference front v1\n";
  std::snprintf(buf, sizeof(buf), "%.17g", data.ref_hv);
  os << "ref_hv " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g %.17g", data.ref.ideal[0], data.ref.ideal[1]);
  os << "z_ideal " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g %.17g", data.ref.nadir[0], data.ref.nadir[1]);
  os << "z_nadir " << buf << '\n';
  for (const auto& f : data.front) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", f[0], f[1]);
    os << buf << '\n';
  }
  return os.str();
}

ReferenceData parse_reference(const std::string& text) {
  std::istringstream is(text);
  ReferenceData data;
  data.ref.ideal = Vec(2);
  data.ref.nadir = Vec(2);
  std::string line;
  bool have_hv = false, have_ideal = false, have_nadir = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    if (line.rfind("ref_hv", 0) == 0) {
      ls >> tag >> data.ref_hv;
      have_hv = true;
    } else if (line.rfind("z_ideal", 0) == 0) {
      ls >> tag >> data.ref.ideal[0] >> data.ref.ideal[1];
      have_ideal = true;
    } else if (line.rfind("z_nadir", 0) == 0) {
      ls >> tag >> data.ref.nadir[0] >> data.ref.nadir[1];
      have_nadir = true;
    } else {
      Vec f(2);
      ls >> f[0] >> f[1];
      if (!ls) throw std::invalid_argument("parse_reference: bad front line");
      data.front.push_back(std::move(f));
    }
  }
  if (!have_hv || !have_ideal || !have_nadir || data.front.empty())
    throw std::invalid_argument("parse_reference: incomplete file");
  return data;
}

ReferenceData reference_front(const ProblemInstance& instance, int resolution,
                              const std::string& cache_dir) {
  if (resolution < 100)
    throw std::invalid_argument("reference_front: resolution must be >= 100");

  namespace fs = std::filesystem;
  fs::path cache_file;
  if (!cache_dir.empty()) {
    cache_file = fs::path(cache_dir) /
                 (instance.key() + "_r" + std::to_string(resolution) + ".front");
    if (fs::exists(cache_file)) {
      std::ifstream in(cache_file);
      std::stringstream ss;
      ss << in.rdbuf();
      return parse_reference(ss.str());
    }
  }

  ReferenceData data;
  if (instance.f1_kind == FunctionKind::Sphere &&
      instance.f2_kind == FunctionKind::Sphere) {
    std::vector<Vec> front;
    front.reserve(resolution);
    for (int i = 0; i < resolution; ++i) {
      const double t = static_cast<double>(i) / (resolution - 1);
      front.push_back(evaluate_objectives(instance, analytic_pareto_point(instance, t)));
    }
    data = finalize_reference(std::move(front));
  } else {
    data = brute_force_reference(instance, resolution);
  }

  if (!cache_dir.empty()) {
    fs::create_directories(cache_file.parent_path());
    const fs::path tmp = cache_file.string() + ".tmp";
    {
      std::ofstream out(tmp);
      out << dump_reference(data);
    }
    fs::rename(tmp, cache_file);
  }
  return data;
}

} // namespace tpb
