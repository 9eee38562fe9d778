#include <doctest.h>

#include <cmath>

#include "tpb/bezier.hpp"
#include "tpb/rng.hpp"

using namespace tpb;

namespace {

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// Uniform point on the standard simplex via sorted-uniform gaps.
Vec random_simplex_param(int dim, Rng& rng) {
  std::vector<double> cuts{0.0, 1.0};
  for (int i = 0; i < dim - 1; ++i) cuts.push_back(rng.uniform());
  std::sort(cuts.begin(), cuts.end());
  Vec t(dim);
  for (int i = 0; i < dim; ++i) t[i] = cuts[i + 1] - cuts[i];
  return t;
}

BezierSimplexModel random_model(int objective_dim, int degree, int decision_dim,
                                Rng& rng) {
  BezierSimplexModel model;
  model.objective_dim = objective_dim;
  model.degree = degree;
  model.decision_dim = decision_dim;
  model.index_set = enumerate_multi_indices(objective_dim, degree);
  for (std::size_t i = 0; i < model.index_set.size(); ++i) {
    Vec p(decision_dim);
    for (int n = 0; n < decision_dim; ++n) p[n] = rng.uniform(-5.0, 5.0);
    model.control_points.push_back(p);
  }
  return model;
}

// Straightforward degree-2, two-parameter expansion; generates fixtures
// independently of evaluate().
Vec reference_eval_d2m2(const std::vector<Vec>& ctrl, double t1, double t2) {
  // ctrl in index order (0,2), (1,1), (2,0)
  return t2 * t2 * ctrl[0] + 2.0 * t1 * t2 * ctrl[1] + t1 * t1 * ctrl[2];
}

double ols_loss(const BezierSimplexModel& model,
                const std::vector<std::pair<Vec, Vec>>& samples) {
  double loss = 0.0;
  for (const auto& [t, x] : samples) loss += (x - evaluate(model, t)).squaredNorm();
  return loss;
}

} // namespace

TEST_SUITE("bezier") {

TEST_CASE("multinomial coefficient") {
  CHECK(multinomial_coefficient(2, {2, 0}) == 1);
  CHECK(multinomial_coefficient(2, {1, 1}) == 2);
  CHECK(multinomial_coefficient(3, {1, 2}) == 3);
  CHECK(multinomial_coefficient(4, {2, 2}) == 6);
  CHECK(multinomial_coefficient(6, {2, 2, 2}) == 90);
  CHECK_THROWS_AS(multinomial_coefficient(3, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(multinomial_coefficient(1, {2, -1}), std::invalid_argument);
}

TEST_CASE("multi-index enumeration is lexicographic and complete") {
  const auto idx22 = enumerate_multi_indices(2, 2);
  REQUIRE(idx22.size() == 3);
  CHECK(idx22[0] == MultiIndex{0, 2});
  CHECK(idx22[1] == MultiIndex{1, 1});
  CHECK(idx22[2] == MultiIndex{2, 0});

  const auto idx21 = enumerate_multi_indices(2, 1);
  REQUIRE(idx21.size() == 2);
  CHECK(idx21[0] == MultiIndex{0, 1});
  CHECK(idx21[1] == MultiIndex{1, 0});

  CHECK(enumerate_multi_indices(3, 2).size() == 6);
  CHECK(enumerate_multi_indices(4, 3).size() == 20);
}

TEST_CASE("evaluation matches the Bernstein expansion") {
  Rng rng(7);
  auto model = random_model(2, 2, 3, rng);

  const Vec mid = evaluate(model, make_vec({0.5, 0.5}));
  const Vec expected = 0.25 * model.control_points[2] + 0.5 * model.control_points[1] +
                       0.25 * model.control_points[0];
  CHECK((mid - expected).cwiseAbs().maxCoeff() < 1e-14);

  // Extreme parameters reproduce the extreme control points exactly.
  const Vec at_e1 = evaluate(model, make_vec({1.0, 0.0}));
  CHECK((at_e1 - model.control_point({2, 0})).cwiseAbs().maxCoeff() == 0.0);
  const Vec at_e2 = evaluate(model, make_vec({0.0, 1.0}));
  CHECK((at_e2 - model.control_point({0, 2})).cwiseAbs().maxCoeff() == 0.0);

  auto line = random_model(2, 1, 4, rng);
  const Vec p = evaluate(line, make_vec({0.3, 0.7}));
  const Vec lerp = 0.3 * line.control_point({1, 0}) + 0.7 * line.control_point({0, 1});
  CHECK((p - lerp).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(evaluate(model, make_vec({1.0, 0.0, 0.0})), std::invalid_argument);
}

TEST_CASE("partition of unity") {
  Rng rng(11);
  for (int m : {2, 3}) {
    for (int degree : {1, 2, 3}) {
      const auto indices = enumerate_multi_indices(m, degree);
      for (int rep = 0; rep < 200; ++rep) {
        const Vec t = random_simplex_param(m, rng);
        double sum = 0.0;
        for (const auto& d : indices) {
          double term = static_cast<double>(multinomial_coefficient(degree, d));
          for (int i = 0; i < m; ++i)
            for (int e = 0; e < d[i]; ++e) term *= t[i];
          sum += term;
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("convex hull property") {
  Rng rng(13);
  for (int rep = 0; rep < 50; ++rep) {
    auto model = random_model(2, 3, 2, rng);
    Vec lo = model.control_points[0];
    Vec hi = model.control_points[0];
    for (const auto& p : model.control_points) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Vec t = random_simplex_param(2, rng);
    const Vec b = evaluate(model, t);
    for (int n = 0; n < b.size(); ++n) {
      CHECK(b[n] >= lo[n] - 1e-12);
      CHECK(b[n] <= hi[n] + 1e-12);
    }
  }
}

TEST_CASE("degree-1 fit interpolates the vertices") {
  const Vec a = make_vec({1.0, 2.0, 3.0});
  const Vec b = make_vec({-1.0, 0.5, 4.0});
  const auto fit = fit_ols({{make_vec({1.0, 0.0}), a}, {make_vec({0.0, 1.0}), b}},
                           2, 1, 3);
  CHECK_FALSE(fit.degenerate);
  CHECK((fit.model.control_point({1, 0}) - a).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((fit.model.control_point({0, 1}) - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fit recovers a known degree-2 model exactly") {
  Rng rng(17);
  for (int n : {2, 10}) {
    std::vector<Vec> ctrl; // index order (0,2), (1,1), (2,0)
    for (int i = 0; i < 3; ++i) {
      Vec p(n);
      for (int j = 0; j < n; ++j) p[j] = rng.uniform(-5.0, 5.0);
      ctrl.push_back(p);
    }
    std::vector<std::pair<Vec, Vec>> samples;
    for (double t1 : {1.0, 0.5, 0.0})
      samples.emplace_back(make_vec({t1, 1.0 - t1}),
                           reference_eval_d2m2(ctrl, t1, 1.0 - t1));
    const auto fit = fit_ols(samples, 2, 2, n);
    CHECK_FALSE(fit.degenerate);
    for (int i = 0; i < 3; ++i)
      CHECK((fit.model.control_points[i] - ctrl[i]).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("fitting collinear samples keeps the curve on the segment") {
  // 10 samples on a straight segment; a degree-2 fit must stay on it.
  const Vec a = make_vec({-2.0, 1.0, 0.0});
  const Vec dir = make_vec({3.0, -1.5, 2.0});
  std::vector<std::pair<Vec, Vec>> samples;
  for (int i = 0; i < 10; ++i) {
    const double u = i / 9.0;
    samples.emplace_back(make_vec({u, 1.0 - u}), Vec(a + u * dir));
  }
  const auto fit = fit_ols(samples, 2, 2, 3);
  const double dir2 = dir.squaredNorm();
  for (int i = 0; i <= 100; ++i) {
    const double u = i / 100.0;
    const Vec b = evaluate(fit.model, make_vec({u, 1.0 - u}));
    const double proj = (b - a).dot(dir) / dir2;
    const Vec closest = a + proj * dir;
    CHECK((b - closest).norm() < 1e-8);
  }
}

TEST_CASE("fit idempotence at matching sample counts") {
  Rng rng(19);
  for (int degree : {1, 2, 3}) {
    auto model = random_model(2, degree, 3, rng);
    const int n_ctrl = static_cast<int>(model.control_points.size());
    std::vector<std::pair<Vec, Vec>> samples;
    for (int k = 0; k < n_ctrl; ++k) {
      const double t1 = static_cast<double>(k) / (n_ctrl - 1);
      const Vec t = make_vec({t1, 1.0 - t1});
      samples.emplace_back(t, evaluate(model, t));
    }
    const auto fit = fit_ols(samples, 2, degree, 3);
    CHECK_FALSE(fit.degenerate);
    for (int i = 0; i < n_ctrl; ++i)
      CHECK((fit.model.control_points[i] - model.control_points[i])
                .cwiseAbs()
                .maxCoeff() < 1e-8);
  }
}

TEST_CASE("fitted control points are a loss minimum") {
  Rng rng(23);
  std::vector<std::pair<Vec, Vec>> samples;
  for (int k = 0; k < 7; ++k) {
    const Vec t = random_simplex_param(2, rng);
    Vec x(3);
    for (int n = 0; n < 3; ++n) x[n] = rng.uniform(-5.0, 5.0);
    samples.emplace_back(t, x);
  }
  auto fit = fit_ols(samples, 2, 2, 3);
  const double base = ols_loss(fit.model, samples);
  CHECK(base == doctest::Approx(fit.residual).epsilon(1e-9));
  for (std::size_t i = 0; i < fit.model.control_points.size(); ++i) {
    for (int n = 0; n < 3; ++n) {
      for (double delta : {1e-3, -1e-3}) {
        auto perturbed = fit.model;
        perturbed.control_points[i][n] += delta;
        CHECK(ols_loss(perturbed, samples) >= base - 1e-12);
      }
    }
  }
}

TEST_CASE("rank-deficient fits fall back to minimum norm") {
  // Two distinct samples cannot pin down three control points.
  const auto fit = fit_ols({{make_vec({1.0, 0.0}), make_vec({1.0, 1.0})},
                            {make_vec({0.0, 1.0}), make_vec({2.0, 0.0})}},
                           2, 2, 2);
  CHECK(fit.degenerate);
  CHECK(fit.residual < 1e-18);
  CHECK(fit.model.well_formed());
  CHECK_THROWS_AS(fit_ols({}, 2, 2, 2), std::invalid_argument);
}

TEST_CASE("simplex grid") {
  const auto g4 = simplex_grid(2, 4, true);
  REQUIRE(g4.size() == 4);
  CHECK(g4[0][0] == 0.2);
  CHECK(g4[0][1] == 0.8);
  CHECK(g4[1][0] == 0.4);
  CHECK(g4[2][0] == 0.6);
  CHECK(g4[3][0] == 0.8);
  CHECK(g4[3][1] == 0.2);

  const auto g1 = simplex_grid(2, 1, true);
  REQUIRE(g1.size() == 1);
  CHECK(g1[0][0] == 0.5);

  CHECK(simplex_grid(2, 0, true).empty());

  const auto full = simplex_grid(2, 3, false);
  REQUIRE(full.size() == 5);
  CHECK(full.front()[0] == 0.0);
  CHECK(full.back()[0] == 1.0);

  // Three objectives: lattice sizes only.
  const auto lattice = simplex_grid(3, 3, true); // wanted 6 = binom(4,2)
  CHECK(lattice.size() == 3);
  for (const auto& t : lattice) CHECK(is_simplex_param(t, 1e-12));
  CHECK_THROWS_AS(simplex_grid(3, 4, true), std::invalid_argument);
}

TEST_CASE("model serialization round trip") {
  Rng rng(29);
  for (int rep = 0; rep < 10; ++rep) {
    auto model = random_model(2, 1 + static_cast<int>(rng.below(3)), 4, rng);
    const std::string text = dump_model(model);
    const auto back = parse_model(text);
    CHECK(back.degree == model.degree);
    CHECK(back.decision_dim == model.decision_dim);
    for (std::size_t i = 0; i < model.control_points.size(); ++i)
      CHECK((back.control_points[i] - model.control_points[i]).cwiseAbs().maxCoeff() ==
            0.0);
    CHECK(dump_model(back) == text);
  }
  CHECK_THROWS_AS(parse_model("nonsense"), std::invalid_argument);
}

} // TEST_SUITE
