#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tpb/rng.hpp"
#include "tpb/scalarize.hpp"

using namespace tpb;

namespace {

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

EvaluationLedger ledger_of(std::initializer_list<std::initializer_list<double>> fs) {
  EvaluationLedger ledger(static_cast<int>(fs.size()));
  for (auto f : fs) ledger.push(Vec::Zero(2), make_vec(f));
  return ledger;
}

} // namespace

TEST_SUITE("scalarize") {

TEST_CASE("weight sets sweep from the first extreme to the last") {
  const auto w3 = weight_set(3, 2);
  REQUIRE(w3.size() == 3);
  CHECK(w3[0][0] == 1.0);
  CHECK(w3[0][1] == 0.0);
  CHECK(w3[1][0] == 0.5);
  CHECK(w3[2][1] == 1.0);

  const auto w2 = weight_set(2, 2);
  REQUIRE(w2.size() == 2);
  CHECK(w2[0][0] == 1.0);
  CHECK(w2[1][1] == 1.0);

  const auto w5 = weight_set(5, 2);
  REQUIRE(w5.size() == 5);
  CHECK(w5[1][0] == 0.75);
  CHECK(w5[1][1] == 0.25);
  CHECK(w5[3][0] == 0.25);

  CHECK_THROWS_AS(weight_set(1, 2), ConfigError);
}

TEST_CASE("every weight sums to one and all unit vectors appear") {
  for (int count : {2, 3, 5, 9, 17}) {
    const auto weights = weight_set(count, 2);
    int extremes = 0;
    for (const auto& w : weights) {
      CHECK(std::abs(w.sum() - 1.0) <= 1e-12);
      CHECK(w.minCoeff() >= 0.0);
      if (w.maxCoeff() == 1.0) ++extremes;
    }
    CHECK(extremes == 2);
  }
}

TEST_CASE("weighted sum") {
  CHECK(weighted_sum(make_vec({0.5, 0.5}), make_vec({2.0, 4.0})) ==
        doctest::Approx(3.0));
  CHECK(weighted_sum(make_vec({1.0, 0.0}), make_vec({7.0, -3.0})) ==
        doctest::Approx(7.0));
  CHECK(weighted_sum(make_vec({0.2, 0.8}), make_vec({0.0, 0.0})) == 0.0);
  CHECK_THROWS_AS(weighted_sum(make_vec({1.0}), make_vec({1.0, 2.0})),
                  std::invalid_argument);
}

TEST_CASE("weighted sum is linear in the objectives") {
  Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    Vec w(3), f(3), h(3);
    for (int i = 0; i < 3; ++i) {
      w[i] = rng.uniform();
      f[i] = rng.uniform(-10.0, 10.0);
      h[i] = rng.uniform(-10.0, 10.0);
    }
    const double alpha = rng.uniform(-2.0, 2.0);
    const double beta = rng.uniform(-2.0, 2.0);
    const double lhs = weighted_sum(w, alpha * f + beta * h);
    const double rhs = alpha * weighted_sum(w, f) + beta * weighted_sum(w, h);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("normalization maps ideal to zero and nadir to one") {
  RefPoints ref{make_vec({0.0, 0.0}), make_vec({2.0, 4.0})};
  const Vec mid = normalize(make_vec({1.0, 2.0}), ref);
  CHECK(mid[0] == doctest::Approx(0.5));
  CHECK(mid[1] == doctest::Approx(0.5));

  const Vec at_ideal = normalize(ref.ideal, ref);
  CHECK(at_ideal.cwiseAbs().maxCoeff() == 0.0);
  const Vec at_nadir = normalize(ref.nadir, ref);
  CHECK(at_nadir[0] == doctest::Approx(1.0));
  CHECK(at_nadir[1] == doctest::Approx(1.0));

  // Degenerate dimension: denominator replaced by one, no blow-up.
  RefPoints flat{make_vec({3.0, 0.0}), make_vec({3.0, 1.0})};
  const Vec guarded = normalize(make_vec({5.0, 0.5}), flat);
  CHECK(guarded[0] == doctest::Approx(2.0));
  CHECK(guarded[1] == doctest::Approx(0.5));
}

TEST_CASE("reference points from the ledger") {
  auto ledger = ledger_of({{1.0, 4.0}, {3.0, 2.0}});
  auto ref = update_ref_points(ledger);
  CHECK(ref.ideal[0] == 1.0);
  CHECK(ref.ideal[1] == 2.0);
  CHECK(ref.nadir[0] == 3.0);
  CHECK(ref.nadir[1] == 4.0);

  auto single = ledger_of({{5.0, 5.0}});
  ref = update_ref_points(single);
  CHECK(ref.ideal[0] == ref.nadir[0]);
  const Vec guarded = normalize(make_vec({6.0, 5.0}), ref);
  CHECK(guarded[0] == doctest::Approx(1.0)); // denominator guard active
  CHECK(guarded[1] == 0.0);

  auto three = ledger_of({{0.0, 1.0}, {1.0, 0.0}, {0.5, 0.5}});
  ref = update_ref_points(three);
  CHECK(ref.ideal.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ref.nadir[0] == 1.0);
  CHECK(ref.nadir[1] == 1.0);

  EvaluationLedger empty(4);
  CHECK_THROWS_AS(update_ref_points(empty), std::invalid_argument);
}

TEST_CASE("orderings survive positive affine rescaling of one objective") {
  Rng rng(37);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 12;
    EvaluationLedger ledger(n), rescaled(n);
    const double scale = rng.uniform(0.1, 5.0);
    const double shift = rng.uniform(-10.0, 10.0);
    const int target = static_cast<int>(rng.below(2));
    std::vector<Vec> fs;
    for (int i = 0; i < n; ++i) {
      Vec f(2);
      f[0] = rng.uniform(-5.0, 5.0);
      f[1] = rng.uniform(-5.0, 5.0);
      fs.push_back(f);
      ledger.push(Vec::Zero(2), f);
      Vec g = f;
      g[target] = scale * g[target] + shift;
      rescaled.push(Vec::Zero(2), g);
    }
    const auto ref_a = update_ref_points(ledger);
    const auto ref_b = update_ref_points(rescaled);
    Vec w(2);
    w[0] = rng.uniform(0.05, 0.95);
    w[1] = 1.0 - w[0];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double da = normalized_weighted_sum(w, ledger[i].f, ref_a) -
                          normalized_weighted_sum(w, ledger[j].f, ref_a);
        const double db = normalized_weighted_sum(w, rescaled[i].f, ref_b) -
                          normalized_weighted_sum(w, rescaled[j].f, ref_b);
        if (std::abs(da) < 1e-9) continue; // tie within noise
        CHECK(da * db > 0.0);
      }
    }
  }
}

} // TEST_SUITE
