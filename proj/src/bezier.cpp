#include "tpb/bezier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tpb {

std::int64_t multinomial_coefficient(int degree, const MultiIndex& d) {
  int sum = 0;
  for (int e : d) {
    if (e < 0) throw std::invalid_argument("multinomial_coefficient: negative entry");
    sum += e;
  }
  if (sum != degree)
    throw std::invalid_argument("multinomial_coefficient: entries do not sum to the degree");

  // Product of binomials: D!/(d_1!...d_M!) = prod_k binom(partial_sum_k, d_k).
  // Each binomial is built multiplicatively with exact division.
  std::int64_t result = 1;
  int upper = 0;
  for (int e : d) {
    for (int i = 1; i <= e; ++i) {
      ++upper;
      result = result * upper / i;
    }
  }
  return result;
}

namespace {

void enumerate_rec(int dim, int remaining, MultiIndex& prefix,
                   std::vector<MultiIndex>& out) {
  if (dim == 1) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    prefix.push_back(e);
    enumerate_rec(dim - 1, remaining - e, prefix, out);
    prefix.pop_back();
  }
}

std::int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// t^d with 0^0 = 1; exact at simplex vertices.
double monomial(const Vec& t, const MultiIndex& d) {
  double v = 1.0;
  for (int m = 0; m < static_cast<int>(d.size()); ++m) {
    for (int i = 0; i < d[m]; ++i) v *= t[m];
  }
  return v;
}

} // namespace

std::vector<MultiIndex> enumerate_multi_indices(int dim, int degree) {
  if (dim < 1 || degree < 0)
    throw std::invalid_argument("enumerate_multi_indices: need dim >= 1 and degree >= 0");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(binom(degree + dim - 1, dim - 1)));
  MultiIndex prefix;
  enumerate_rec(dim, degree, prefix, out);
  return out;
}

bool is_simplex_param(const Vec& t, double tol) {
  if (t.size() == 0) return false;
  double sum = 0.0;
  for (int i = 0; i < t.size(); ++i) {
    if (t[i] < -tol) return false;
    sum += t[i];
  }
  return std::abs(sum - 1.0) <= tol;
}

bool BezierSimplexModel::well_formed() const {
  const auto expected = binom(degree + objective_dim - 1, objective_dim - 1);
  if (static_cast<std::int64_t>(control_points.size()) != expected) return false;
  if (index_set.size() != control_points.size()) return false;
  for (const auto& p : control_points)
    if (p.size() != decision_dim) return false;
  return true;
}

const Vec& BezierSimplexModel::control_point(const MultiIndex& d) const {
  for (std::size_t i = 0; i < index_set.size(); ++i)
    if (index_set[i] == d) return control_points[i];
  throw std::invalid_argument("control_point: multi-index not in the model");
}

Vec evaluate(const BezierSimplexModel& model, const Vec& t) {
  if (t.size() != model.objective_dim)
    throw std::invalid_argument("evaluate: parameter dimension does not match the model");
  Vec result = Vec::Zero(model.decision_dim);
  for (std::size_t i = 0; i < model.index_set.size(); ++i) {
    const auto& d = model.index_set[i];
    const double w =
        static_cast<double>(multinomial_coefficient(model.degree, d)) * monomial(t, d);
    result += w * model.control_points[i];
  }
  return result;
}

FitResult fit_ols(const std::vector<std::pair<Vec, Vec>>& samples,
                  int objective_dim, int degree, int decision_dim) {
  if (samples.empty()) throw std::invalid_argument("fit_ols: no samples");
  for (const auto& [t, x] : samples) {
    if (!is_simplex_param(t, 1e-9))
      throw std::invalid_argument("fit_ols: sample parameter is not on the simplex");
    if (x.size() != decision_dim)
      throw std::invalid_argument("fit_ols: sample point has the wrong dimension");
  }

  const auto indices = enumerate_multi_indices(objective_dim, degree);
  const int n_ctrl = static_cast<int>(indices.size());
  const int n_samples = static_cast<int>(samples.size());

  // One row of Bernstein terms per sample, one column per control point.
  Mat design(n_samples, n_ctrl);
  Mat rhs(n_samples, decision_dim);
  for (int r = 0; r < n_samples; ++r) {
    for (int c = 0; c < n_ctrl; ++c) {
      design(r, c) = static_cast<double>(multinomial_coefficient(degree, indices[c])) *
                     monomial(samples[r].first, indices[c]);
    }
    rhs.row(r) = samples[r].second.transpose();
  }

  FitResult out;
  Eigen::ColPivHouseholderQR<Mat> qr(design);
  qr.setThreshold(1e-10);
  Mat coeffs;
  if (qr.rank() < n_ctrl) {
    // Rank deficient: minimum-norm least-squares solution instead of the
    // normal equations.
    out.degenerate = true;
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(design);
    cod.setThreshold(1e-10);
    coeffs = cod.solve(rhs);
  } else {
    coeffs = (design.transpose() * design).ldlt().solve(design.transpose() * rhs);
  }

  out.residual = (design * coeffs - rhs).squaredNorm();
  out.model.objective_dim = objective_dim;
  out.model.degree = degree;
  out.model.decision_dim = decision_dim;
  out.model.index_set = indices;
  out.model.control_points.reserve(indices.size());
  for (int c = 0; c < n_ctrl; ++c)
    out.model.control_points.push_back(coeffs.row(c).transpose());
  return out;
}

std::vector<Vec> simplex_grid(int dim, int count, bool drop_extremes) {
  if (dim < 2) throw std::invalid_argument("simplex_grid: dim must be >= 2");
  if (count < 0) throw std::invalid_argument("simplex_grid: count must be >= 0");

  std::vector<Vec> grid;
  if (dim == 2) {
    const int total = count + 2; // including both extremes
    const double denom = static_cast<double>(total - 1);
    for (int i = 0; i < total; ++i) {
      if (drop_extremes && (i == 0 || i == total - 1)) continue;
      Vec t(2);
      t[0] = static_cast<double>(i) / denom;
      t[1] = static_cast<double>(total - 1 - i) / denom;
      grid.push_back(std::move(t));
    }
    return grid;
  }

  // Simplex-lattice design: points d/n over all multi-indices with sum n.
  // The requested size must match a lattice exactly.
  const int wanted = count + dim;
  int n = 1;
  while (binom(n + dim - 1, dim - 1) < wanted) ++n;
  if (binom(n + dim - 1, dim - 1) != wanted)
    throw std::invalid_argument(
        "simplex_grid: for dim > 2, count + dim must equal a lattice size "
        "binom(n+dim-1, dim-1)");
  for (const auto& d : enumerate_multi_indices(dim, n)) {
    if (drop_extremes &&
        std::any_of(d.begin(), d.end(), [n](int e) { return e == n; }))
      continue;
    Vec t(dim);
    for (int m = 0; m < dim; ++m) t[m] = static_cast<double>(d[m]) / n;
    grid.push_back(std::move(t));
  }
  return grid;
}

std::string dump_model(const BezierSimplexModel& model) {
  std::ostringstream os;
  os << "bezier-simplex " << model.objective_dim << ' ' << model.degree << ' '
     << model.decision_dim << '\n';
  char buf[32];
  for (std::size_t i = 0; i < model.index_set.size(); ++i) {
    for (int e : model.index_set[i]) os << e << ' ';
    const Vec& p = model.control_points[i];
    for (int n = 0; n < p.size(); ++n) {
      std::snprintf(buf, sizeof(buf), "%.17g", p[n]);
      os << buf << (n + 1 < p.size() ? " " : "");
    }
    os << '\n';
  }
  return os.str();
}

BezierSimplexModel parse_model(const std::string& text) {
  std::istringstream is(text);
  std::string tag;
  BezierSimplexModel model;
  is >> tag >> model.objective_dim >> model.degree >> model.decision_dim;
  if (tag != "bezier-simplex" || !is)
    throw std::invalid_argument("parse_model: bad header");
  model.index_set = enumerate_multi_indices(model.objective_dim, model.degree);
  model.control_points.reserve(model.index_set.size());
  for (const auto& expected : model.index_set) {
    MultiIndex d(model.objective_dim);
    for (int& e : d) is >> e;
    Vec p(model.decision_dim);
    for (int n = 0; n < model.decision_dim; ++n) is >> p[n];
    if (!is) throw std::invalid_argument("parse_model: truncated record");
    if (d != expected)
      throw std::invalid_argument("parse_model: control points out of order");
    model.control_points.push_back(std::move(p));
  }
  return model;
}

} // namespace tpb
