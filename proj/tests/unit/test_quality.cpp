#include <random>

#include "doctest.h"
#include "habitminer/error.hpp"
#include "habitminer/quality.hpp"
#include "oracles.hpp"

using namespace habitminer;

namespace {

PointSet ps(std::vector<Point> pts) { return PointSet{std::move(pts), "t"}; }

Clustering labelled(std::vector<int> labels, Method m = Method::KMeans) {
  Clustering c;
  c.method = m;
  c.k = canonicalize_labels(labels);
  c.labels = std::move(labels);
  return c;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("silhouette of coincident pairs is 1") {
  const auto pts = ps({{0, 0}, {0, 0}, {10, 10}, {10, 10}});
  CHECK(silhouette_score(pts, labelled({0, 0, 1, 1})) == 1.0);
  CHECK(code_of([&] { silhouette_score(pts, labelled({0, 0, 0, 0})); }) == ErrorCode::DegenerateClustering);
}

TEST_CASE("silhouette of the split unit square matches the direct formula") {
  const std::vector<Point> sq{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const std::vector<int> l{0, 0, 1, 1};
  CHECK(silhouette_score(ps(sq), labelled(l)) == doctest::Approx(oracle::silhouette(sq, l)).epsilon(1e-12));
}

TEST_CASE("silhouette ignores noise and scores singletons as 0") {
  const std::vector<Point> pts{{0, 0}, {0, 1}, {50, 50}, {9, 9}};
  std::vector<int> l{0, 0, kNoise, 1};
  const auto c = labelled(l, Method::Dbscan);
  const double s = silhouette_score(ps(pts), c);
  CHECK(s == doctest::Approx(oracle::silhouette(pts, l)).epsilon(1e-12));
  CHECK(code_of([&] { silhouette_score(ps(pts), labelled({0, 0, kNoise, kNoise}, Method::Dbscan)); }) ==
        ErrorCode::DegenerateClustering);
}

TEST_CASE("silhouette matches the oracle on random labelled sets") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial * 2;
    const auto pts = oracle::random_points(rng, n);
    std::uniform_int_distribution<int> lab(0, 1 + trial % 6);
    std::vector<int> l(n);
    for (auto& x : l) x = lab(rng);
    l[0] = 0;
    l[1] = 1;
    const double s = silhouette_score(ps(pts), labelled(l));
    CHECK(s == doctest::Approx(oracle::silhouette(pts, labelled(l).labels)).epsilon(1e-12));
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("noise metric examples") {
  CHECK(noise_metric(std::vector<Point>{{8, 9}}) == 0.0);
  CHECK(noise_metric(std::vector<Point>{{8.0, 8.5}, {8.0, 9.5}}) == 0.5);
  CHECK(noise_metric(std::vector<Point>{{0, 0}, {0, 3}, {0, 6}}) == 4.0);
  CHECK(code_of([] { noise_metric(std::vector<Point>{}); }) == ErrorCode::EmptyCluster);
  CHECK(mean_pairwise_distance(std::vector<Point>{{0, 0}, {0, 3}, {0, 6}}) == 4.0);
  CHECK(mean_pairwise_distance(std::vector<Point>{{8, 9}}) == 0.0);
}

TEST_CASE("noise metric agrees with the pairwise oracle and scales linearly") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    auto pts = oracle::random_points(rng, 1 + trial * 3);
    const double p = noise_metric(pts);
    CHECK(p == doctest::Approx(oracle::noise_metric(pts)).epsilon(1e-12));
    auto doubled = pts;
    for (auto& q : doubled) q = {2 * q.start, 2 * q.end};
    CHECK(noise_metric(doubled) == 2 * p);
    auto moved = pts;
    for (auto& q : moved) q = {q.start + 3.25, q.end - 1.5};
    CHECK(noise_metric(moved) == doctest::Approx(p).epsilon(1e-12));
    std::shuffle(pts.begin(), pts.end(), rng);
    CHECK(noise_metric(pts) == doctest::Approx(p).epsilon(1e-12));
    const auto n = static_cast<double>(pts.size());
    if (pts.size() > 1)
      CHECK(mean_pairwise_distance(pts) == doctest::Approx(p * 2.0 / (n - 1)).epsilon(1e-12));
  }
}

TEST_CASE("noise metric is zero exactly for coincident members") {
  CHECK(noise_metric(std::vector<Point>(7, Point{3, 4})) == 0.0);
  CHECK(noise_metric(std::vector<Point>{{3, 4}, {3, 4}, {3, 4.000001}}) > 0.0);
}

TEST_CASE("per-cluster noise skips noise points") {
  const auto pts = ps({{0, 0}, {0, 3}, {0, 6}, {100, 100}, {9, 9}});
  const auto c = labelled({0, 0, 0, kNoise, 1}, Method::Dbscan);
  CHECK(noise_per_cluster(pts, c, NoiseNormalization::Members) == std::vector<double>{4.0, 0.0});
  CHECK(noise_per_cluster(pts, c, NoiseNormalization::Pairs) == std::vector<double>{4.0, 0.0});
  ClusterQuality q{.noise_per_cluster = {1.0, 3.0, 3.0}};
  CHECK(q.worst() == 3.0);
  CHECK(q.worst_cluster() == 1);
  CHECK(ClusterQuality{}.worst_cluster() == -1);
}

TEST_CASE("knee of the k-distance curve") {
  const std::vector<double> curve{10, 9.8, 9.6, 2.0, 1.9, 1.8, 1.7};
  CHECK(knee_index(curve) == 3);
  const std::vector<double> line{5, 4, 3, 2, 1};
  CHECK(knee_index(line) == 0);
  CHECK(knee_index(std::vector<double>{3, 1}) == 0);
}

TEST_CASE("elbow eps") {
  CHECK(elbow_eps(ps({{1, 1}, {1, 1}, {1, 1}}), 1) == kMinElbowEps);
  CHECK(code_of([] { elbow_eps(ps({{1, 1}, {2, 2}}), 2); }) == ErrorCode::TooFewPoints);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = ps(oracle::random_points(rng, 10 + trial));
    const int v = 1 + trial % 5;
    const auto curve = k_distance_curve(pts, v);
    CHECK(curve.v == v);
    REQUIRE(curve.sorted_distances.size() == pts.size());
    CHECK(std::is_sorted(curve.sorted_distances.rbegin(), curve.sorted_distances.rend()));
    // independent v-th neighbour distance for point 0
    std::vector<double> d;
    for (std::size_t j = 1; j < pts.size(); ++j) d.push_back(oracle::dist(pts.points[0], pts.points[j]));
    std::sort(d.begin(), d.end());
    CHECK(std::find(curve.sorted_distances.begin(), curve.sorted_distances.end(), d[v - 1]) !=
          curve.sorted_distances.end());
    const double e = elbow_eps(pts, v);
    CHECK(e > 0.0);
    CHECK(e == curve.sorted_distances[knee_index(curve.sorted_distances)]);
  }
}

TEST_CASE("normalization names") {
  CHECK(parse_noise_normalization("pairs") == NoiseNormalization::Pairs);
  CHECK(parse_noise_normalization("members") == NoiseNormalization::Members);
  CHECK(to_string(NoiseNormalization::Members) == "members");
  CHECK_THROWS_AS(parse_noise_normalization("median"), Error);
}
