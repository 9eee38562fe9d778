#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tpb/assess.hpp"
#include "tpb/rng.hpp"

using namespace tpb;

namespace {

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// O(n^2) oracle with duplicate collapse, independent of the sweep.
std::vector<Vec> brute_force_filter(const std::vector<Vec>& points) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < points.size() && keep; ++j)
      if (j != i && dominates(points[j], points[i])) keep = false;
    for (const auto& f : out)
      if ((f.array() == points[i].array()).all()) keep = false;
    if (keep) out.push_back(points[i]);
  }
  return out;
}

bool same_point_set(std::vector<Vec> a, std::vector<Vec> b) {
  auto lex = [](const Vec& u, const Vec& v) {
    for (int i = 0; i < u.size(); ++i) {
      if (u[i] < v[i]) return true;
      if (u[i] > v[i]) return false;
    }
    return false;
  };
  std::sort(a.begin(), a.end(), lex);
  std::sort(b.begin(), b.end(), lex);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((a[i].array() != b[i].array()).any()) return false;
  return true;
}

std::vector<Vec> random_points(int count, Rng& rng, double lo = 0.0, double hi = 1.0) {
  std::vector<Vec> points;
  points.reserve(count);
  for (int i = 0; i < count; ++i)
    points.push_back(make_vec({rng.uniform(lo, hi), rng.uniform(lo, hi)}));
  return points;
}

ReferenceData unit_refdata(double ref_hv) {
  ReferenceData data;
  data.ref_hv = ref_hv;
  data.ref.ideal = Vec::Zero(2);
  data.ref.nadir = Vec::Constant(2, 1.0);
  data.front = {make_vec({0.0, 1.0}), make_vec({0.5, 0.5}), make_vec({1.0, 0.0})};
  return data;
}

} // namespace

TEST_SUITE("assess") {

TEST_CASE("dominance relation") {
  CHECK(dominates(make_vec({1, 2}), make_vec({1, 3})));
  CHECK_FALSE(dominates(make_vec({1, 2}), make_vec({1, 2})));
  CHECK_FALSE(dominates(make_vec({1, 3}), make_vec({2, 2})));
  CHECK_FALSE(dominates(make_vec({2, 2}), make_vec({1, 3})));
  CHECK_THROWS_AS(dominates(make_vec({1}), make_vec({1, 2})), std::invalid_argument);
}

TEST_CASE("dominance is a strict partial order") {
  Rng rng(53);
  for (int rep = 0; rep < 300; ++rep) {
    // Coarse coordinates make ties and comparabilities frequent.
    auto coarse = [&rng]() {
      return make_vec({static_cast<double>(rng.below(4)),
                       static_cast<double>(rng.below(4)),
                       static_cast<double>(rng.below(4))});
    };
    const Vec a = coarse(), b = coarse(), c = coarse();
    CHECK_FALSE(dominates(a, a));
    if (dominates(a, b)) CHECK_FALSE(dominates(b, a));
    if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
  }
}

TEST_CASE("nondominated filter") {
  const auto front = nondominated_filter(
      {make_vec({1, 2}), make_vec({2, 1}), make_vec({2, 2})});
  CHECK(same_point_set(front, {make_vec({1, 2}), make_vec({2, 1})}));

  const auto single = nondominated_filter({make_vec({3, 4})});
  REQUIRE(single.size() == 1);
  CHECK(single[0][0] == 3.0);

  CHECK(nondominated_filter({}).empty());

  Rng rng(59);
  for (int rep = 0; rep < 20; ++rep) {
    const auto points = random_points(100, rng);
    CHECK(same_point_set(nondominated_filter(points), brute_force_filter(points)));
  }
}

TEST_CASE("archive insertion") {
  Archive archive;
  CHECK(archive.insert(Vec::Zero(2), make_vec({1, 2})));
  CHECK_FALSE(archive.insert(Vec::Zero(2), make_vec({2, 3}))); // dominated
  CHECK(archive.size() == 1);
  CHECK(archive.insert(Vec::Zero(2), make_vec({2, 1}))); // incomparable
  CHECK(archive.size() == 2);
  CHECK(archive.insert(Vec::Zero(2), make_vec({0.5, 0.5}))); // dominates both
  CHECK(archive.size() == 1);

  // Functional form leaves the input unchanged.
  const Archive grown = archive_insert(archive, Vec::Zero(2), make_vec({0.1, 0.9}));
  CHECK(grown.size() == 2);
  CHECK(archive.size() == 1);
}

TEST_CASE("streaming archives equal batch filtering") {
  Rng rng(61);
  for (int rep = 0; rep < 20; ++rep) {
    const auto points = random_points(200, rng);
    Archive archive;
    for (const auto& f : points) archive.insert(Vec::Zero(2), f);
    std::vector<Vec> streamed;
    for (const auto& [x, f] : archive.points()) streamed.push_back(f);
    CHECK(same_point_set(streamed, nondominated_filter(points)));

    // Insertion order is irrelevant to the final contents.
    auto shuffled = points;
    rng.shuffle(shuffled);
    Archive archive2;
    for (const auto& f : shuffled) archive2.insert(Vec::Zero(2), f);
    std::vector<Vec> streamed2;
    for (const auto& [x, f] : archive2.points()) streamed2.push_back(f);
    CHECK(same_point_set(streamed, streamed2));
  }
}

TEST_CASE("hypervolume hand cases") {
  const Vec ref = Vec::Constant(2, 1.0);
  CHECK(std::abs(hypervolume_2d({make_vec({0.25, 0.25})}, ref) - 0.5625) < 1e-12);
  CHECK(std::abs(hypervolume_2d({make_vec({0.2, 0.8}), make_vec({0.8, 0.2})}, ref) -
                 0.28) < 1e-12);
  CHECK(hypervolume_2d({}, ref) == 0.0);
  CHECK(hypervolume_2d({make_vec({1.5, 1.5})}, ref) == 0.0); // outside
  CHECK(hypervolume_2d({make_vec({0.5, 1.0})}, ref) == 0.0); // boundary
}

TEST_CASE("hypervolume is monotone and permutation invariant") {
  Rng rng(67);
  const Vec ref = Vec::Constant(2, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    auto points = random_points(40, rng, 0.0, 1.2);
    const double base = hypervolume_2d(points, ref);
    auto shuffled = points;
    rng.shuffle(shuffled);
    CHECK(hypervolume_2d(shuffled, ref) == doctest::Approx(base).epsilon(1e-12));
    points.push_back(make_vec({rng.uniform(), rng.uniform()}));
    CHECK(hypervolume_2d(points, ref) >= base - 1e-15);
  }
}

TEST_CASE("indicator value regimes") {
  const auto refdata = unit_refdata(0.8);

  // An archive equal to the reference front has zero regret.
  Archive on_front;
  for (const auto& f : refdata.front) on_front.insert(Vec::Zero(2), f);
  const double hv_front = hypervolume_2d(refdata.front, Vec::Constant(2, 1.0));
  ReferenceData exact = refdata;
  exact.ref_hv = hv_front;
  CHECK(std::abs(indicator_value(on_front, exact)) <= 1e-9);

  // A point that does not reach the region of interest pays its distance.
  Archive far_away;
  far_away.insert(Vec::Zero(2), make_vec({2.0, 2.0}));
  CHECK(indicator_value(far_away, refdata) ==
        doctest::Approx(0.8 + std::sqrt(2.0)).epsilon(1e-12));

  // Beating the reference ideal in one objective costs nothing; only the
  // exceedance over the nadir counts.
  Archive lopsided;
  lopsided.insert(Vec::Zero(2), make_vec({-0.5, 1.2}));
  CHECK(indicator_value(lopsided, refdata) == doctest::Approx(0.8 + 0.2).epsilon(1e-12));

  // One interior point: regret is ref_hv minus its rectangle.
  Archive interior;
  interior.insert(Vec::Zero(2), make_vec({0.25, 0.5}));
  CHECK(indicator_value(interior, refdata) ==
        doctest::Approx(0.8 - 0.75 * 0.5).epsilon(1e-12));

  Archive empty;
  CHECK(std::isinf(indicator_value(empty, refdata)));
}

TEST_CASE("traces are non-increasing and consistent with their hits") {
  Rng rng(71);
  EvaluationLedger ledger(120);
  for (int i = 0; i < 120; ++i)
    ledger.push(Vec::Zero(2), make_vec({rng.uniform(), rng.uniform()}));
  const auto refdata = unit_refdata(0.8);
  const auto trace = build_trace(ledger, refdata);
  REQUIRE(trace.series.size() == 120);
  for (std::size_t i = 1; i < trace.series.size(); ++i)
    CHECK(trace.series[i].second <= trace.series[i - 1].second + 1e-15);
  REQUIRE(trace.targets.size() == 31);
  for (std::size_t k = 0; k < trace.targets.size(); ++k) {
    if (trace.hit_at[k] < 0) continue;
    const auto& s = trace.series[trace.hit_at[k] - 1];
    CHECK(s.second <= trace.targets[k]);
  }
}

TEST_CASE("ecdf on constructed traces") {
  IndicatorTrace all_hit;
  all_hit.targets.assign(31, 1.0);
  all_hit.hit_at.assign(31, 1);
  const auto constant_one = ecdf({all_hit}, {1, 5, 10});
  for (const auto& [e, frac] : constant_one) CHECK(frac == 1.0);

  IndicatorTrace no_hit;
  no_hit.targets.assign(31, 1.0);
  no_hit.hit_at.assign(31, -1);
  const auto constant_zero = ecdf({no_hit}, {1, 5, 10});
  for (const auto& [e, frac] : constant_zero) CHECK(frac == 0.0);

  // Two traces with hand-placed hit times: trace A hits targets 0..9 at
  // eval 3, trace B hits targets 0..4 at eval 7. 62 pairs total.
  IndicatorTrace a, b;
  a.targets.assign(31, 1.0);
  b.targets.assign(31, 1.0);
  a.hit_at.assign(31, -1);
  b.hit_at.assign(31, -1);
  for (int k = 0; k < 10; ++k) a.hit_at[k] = 3;
  for (int k = 0; k < 5; ++k) b.hit_at[k] = 7;
  const auto curve = ecdf({a, b}, {1, 3, 7, 100});
  CHECK(curve[0].second == 0.0);
  CHECK(curve[1].second == doctest::Approx(10.0 / 62.0));
  CHECK(curve[2].second == doctest::Approx(15.0 / 62.0));
  CHECK(curve[3].second == doctest::Approx(15.0 / 62.0));
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].second >= curve[i - 1].second);
    CHECK(curve[i].second >= 0.0);
    CHECK(curve[i].second <= 1.0);
  }

  CHECK_THROWS_AS(ecdf({}, {1}), std::invalid_argument);
}

} // TEST_SUITE
