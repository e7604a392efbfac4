#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "rwb/clustering.hpp"
#include "rwb/data.hpp"

using namespace rwb;
using testing_util::line;

namespace {

std::size_t fractional_points(const WeightedPointSet& P, const ClusteringResult& r) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < P.size(); ++i)
    if (r.inlier_weights[i] > 0.0 && r.inlier_weights[i] < P.weight(i)) ++c;
  return c;
}

}  // namespace

TEST_CASE("k-means++ seeding") {
  const auto P = line({0, 1, 5, 9});
  auto all = kmeanspp_seed(P, 4, 3);
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<std::size_t>{0, 1, 2, 3});

  auto two = kmeanspp_seed(line({0, 100}), 2, 1);
  std::sort(two.begin(), two.end());
  CHECK(two == std::vector<std::size_t>{0, 1});

  CHECK(kmeanspp_seed(P, 1, 42).size() == 1);
  CHECK(kmeanspp_seed(P, 3, 8) == kmeanspp_seed(P, 3, 8));
  try {
    kmeanspp_seed(P, 5, 0);
    FAIL("expected TOO_FEW_POINTS");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewPoints);
  }
}

TEST_CASE("first k-means++ draw follows the weights") {
  // P = {0 w1, 10 w3}: the heavy point should come first about 3/4 of the time
  const auto P = line({0, 10}, {1, 3});
  int heavy = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) heavy += kmeanspp_seed(P, 1, s)[0] == 1;
  CHECK(heavy / 2000.0 == doctest::Approx(0.75).epsilon(0.05));
}

TEST_CASE("Lloyd") {
  const auto fix = lloyd_weighted(line({0, 2, 10, 12}), testing_util::line_points({1, 11}));
  CHECK(fix.iterations == 0);
  CHECK(fix.cost == doctest::Approx(4.0));

  const auto r = lloyd_weighted(line({0, 2}), testing_util::line_points({0}));
  CHECK(r.centers[0][0] == doctest::Approx(1.0));
  CHECK(r.cost == doctest::Approx(2.0));
}

TEST_CASE("Lloyd on two separated balls stays below the within-ball variance") {
  std::mt19937_64 rng(4);
  PointMatrix pts(2);
  std::vector<std::vector<double>> ball[2];
  for (int b = 0; b < 2; ++b)
    for (int i = 0; i < 50; ++i) {
      const std::vector<double> x{b * 20.0 + standard_normal(rng), standard_normal(rng)};
      pts.push_back(x);
      ball[b].push_back(x);
    }
  const WeightedPointSet P(pts, std::vector<double>(100, 1.0));
  double variance = 0.0;
  for (auto& B : ball) {
    double mx = 0, my = 0;
    for (auto& x : B) mx += x[0], my += x[1];
    mx /= B.size(), my /= B.size();
    for (auto& x : B) variance += (x[0] - mx) * (x[0] - mx) + (x[1] - my) * (x[1] - my);
  }
  PointMatrix seeds(2);
  seeds.push_back(ball[0][0]);
  seeds.push_back(ball[1][0]);
  const auto r = lloyd_weighted(P, seeds);
  CHECK(r.cost <= variance * (1 + 1e-12));
  for (std::size_t i = 1; i < r.cost_history.size(); ++i) CHECK(r.cost_history[i] <= r.cost_history[i - 1] + 1e-12);
}

TEST_CASE("k-means-- examples") {
  const auto P = line({0, 1, 10});
  const auto r = kmeans_minus_minus(P, 1, 1.0, 0);
  CHECK(r.centers[0][0] == doctest::Approx(0.5));
  CHECK(r.cost == doctest::Approx(0.5));
  CHECK(r.inlier_weights == std::vector<double>{1, 1, 0});
  CHECK(r.outlier_weight == 1.0);

  const auto Q = line({0, 10}, {2, 1});
  const auto f = kmeans_minus_minus(Q, 1, 1.5, 0);
  CHECK(f.centers[0][0] == doctest::Approx(0.0));
  CHECK(f.cost == doctest::Approx(0.0));
  CHECK(f.inlier_weights[0] == doctest::Approx(1.5));
  CHECK(f.inlier_weights[1] == 0.0);
}

TEST_CASE("k-means-- with z = 0 follows Lloyd") {
  std::mt19937_64 rng(2);
  const auto P = testing_util::random_integral(rng, 30, 3, 3);
  const auto a = kmeans_minus_minus(P, 4, 0.0, 17);
  const auto b = lloyd_weighted(P, gather(P, kmeanspp_seed(P, 4, 17)));
  CHECK(a.centers == b.centers);
  CHECK(a.cost == b.cost);
}

TEST_CASE("k-means-- structure on random instances") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 25; ++rep) {
    const auto P = testing_util::random_integral(rng, 20, 2, 4);
    const double z = 0.37 * (rep + 1);
    const auto r = kmeans_minus_minus(P, 3, z, rep);
    double inl = 0.0;
    for (double w : r.inlier_weights) inl += w;
    CHECK(r.outlier_weight == doctest::Approx(z));
    CHECK(inl + r.outlier_weight == doctest::Approx(P.total()).epsilon(1e-9));
    double cw = 0.0;
    for (double w : r.center_weights) cw += w;
    CHECK(cw == doctest::Approx(inl).epsilon(1e-9));
    CHECK(fractional_points(P, r) <= 1);
    CHECK(r.k() == 3);
    for (std::size_t i = 1; i < r.cost_history.size(); ++i)
      CHECK(r.cost_history[i] <= r.cost_history[i - 1] * (1 + 1e-12) + 1e-12);
    const auto again = kmeans_minus_minus(P, 3, z, rep);
    CHECK(again.centers == r.centers);
    CHECK(again.cost == r.cost);
  }
}

TEST_CASE("k-means-- refuses to drop everything") {
  try {
    kmeans_minus_minus(line({0, 1}), 1, 2.0, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::TooFewPoints || e.code() == ErrorCode::BadOutlierMass ||
           e.code() == ErrorCode::InvalidInput));
  }
}

TEST_CASE("Gonzalez traversal") {
  CHECK(gonzalez_kcenter(line({0, 1, 10}, {1, 3, 1}), 1) == std::vector<std::size_t>{1});
  CHECK(gonzalez_kcenter(line({0, 1, 10}), 2) == std::vector<std::size_t>{0, 2});
  auto all = gonzalez_kcenter(line({0, 1, 10}), 3);
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<std::size_t>{0, 1, 2});
  CHECK_THROWS_AS(gonzalez_kcenter(line({0, 1}), 3), Error);
}

TEST_CASE("Gonzalez covering radius is within twice the optimum") {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    const auto P = testing_util::random_integral(rng, 8, 2, 1);
    const std::size_t t = 2;
    auto radius = [&](const std::vector<std::size_t>& c) {
      double r = 0.0;
      for (std::size_t i = 0; i < P.size(); ++i) {
        double best = 1e300;
        for (std::size_t s : c) best = std::min(best, squared_distance(P.point(i), P.point(s)));
        r = std::max(r, best);
      }
      return std::sqrt(r);
    };
    double opt = 1e300;  // optimum over centers drawn from the support (within 2x of the free optimum)
    for (std::size_t a = 0; a < P.size(); ++a)
      for (std::size_t b = a + 1; b < P.size(); ++b) opt = std::min(opt, radius({a, b}));
    CHECK(radius(gonzalez_kcenter(P, t)) <= 2.0 * opt + 1e-12);
  }
}

TEST_CASE("cluster summary") {
  const auto one = cluster_summary(line({0, 1, 2}), testing_util::line_points({5}));
  CHECK(one.size() == 1);
  CHECK(one.weight(0) == 3.0);

  // 1 is equidistant from 0 and 2 and goes to the first center
  const auto tie = cluster_summary(line({1}), testing_util::line_points({0, 2}));
  REQUIRE(tie.size() == 2);
  CHECK(tie.point(0)[0] == 0.0);
  CHECK(tie.weight(0) == 1.0);
  CHECK(tie.weight(1) == 0.0);

  const auto P = line({0, 1, 10});
  const auto r = kmeans_minus_minus(P, 1, 1.0, 0);
  CHECK(r.summary().total() == doctest::Approx(2.0));
}
