#include <algorithm>
#include <random>

#include "doctest.h"
#include "habitminer/clustering.hpp"
#include "habitminer/error.hpp"
#include "oracles.hpp"

using namespace habitminer;

namespace {

PointSet ps(std::vector<Point> pts) { return PointSet{std::move(pts), "t"}; }

const std::vector<Point> kBlobPair{{8, 9}, {8.1, 9.1}, {20, 21}, {20.1, 21.1}};

}  // namespace

TEST_CASE("euclidean") {
  CHECK(euclidean({8, 9}, {8, 9}) == 0.0);
  CHECK(euclidean({0, 0}, {3, 4}) == 5.0);
  CHECK(euclidean({8.5, 9.0}, {10.5, 9.0}) == 2.0);
  CHECK(euclidean({1, 7}, {4, 2}) == euclidean({4, 2}, {1, 7}));
}

TEST_CASE("canonical labels follow first appearance") {
  std::vector<int> l{4, 4, -1, 1, 7, 1};
  CHECK(canonicalize_labels(l) == 3);
  CHECK(l == std::vector<int>{0, 0, -1, 1, 2, 1});
}

TEST_CASE("k-means separates the blob pair") {
  const auto c = kmeans(ps(kBlobPair), {.k = 2});
  CHECK(c.labels == std::vector<int>{0, 0, 1, 1});
  CHECK(c.k == 2);
  CHECK(inertia(kBlobPair, c.labels) == doctest::Approx(oracle::min_inertia(kBlobPair, 2)));
}

TEST_CASE("k-means with k = n is exact, k > n fails") {
  const auto c = kmeans(ps(kBlobPair), {.k = 4});
  CHECK(c.labels == std::vector<int>{0, 1, 2, 3});
  CHECK(inertia(kBlobPair, c.labels) == 0.0);
  try {
    kmeans(ps({{1, 2}, {3, 4}, {5, 6}}), {.k = 5});
    FAIL("expected TooFewPoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewPoints);
  }
}

TEST_CASE("k-means inertia never rises within a run and the best run wins") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pts = oracle::random_points(rng, 10 + trial * 3);
    const auto d = kmeans_detailed(ps(pts), {.k = 2 + trial % 5, .restarts = 6, .seed = 99u + trial});
    REQUIRE(d.runs.size() == 6);
    for (const auto& run : d.runs) {
      for (std::size_t i = 1; i < run.history.size(); ++i) CHECK(run.history[i] <= run.history[i - 1] + 1e-9);
      CHECK(d.inertia <= run.inertia);
    }
    for (int c = 0; c < d.clustering.k; ++c) CHECK_FALSE(d.clustering.members(c).empty());
    CHECK(d.inertia == doctest::Approx(inertia(pts, d.clustering.labels)));
  }
}

TEST_CASE("k-means is deterministic per seed") {
  std::mt19937_64 rng(5);
  const auto pts = oracle::random_points(rng, 60);
  const auto a = kmeans(ps(pts), {.k = 4, .seed = 17});
  const auto b = kmeans(ps(pts), {.k = 4, .seed = 17});
  CHECK(a.labels == b.labels);
}

TEST_CASE("k-means keeps every cluster populated on duplicate-heavy data") {
  std::vector<Point> pts(6, Point{5, 6});
  pts.push_back({9, 9});
  const auto c = kmeans(ps(pts), {.k = 3});
  CHECK(c.k == 3);
  for (int id = 0; id < 3; ++id) CHECK_FALSE(c.members(id).empty());
}

TEST_CASE("agglomerative agrees with k-means on the blob pair for every linkage") {
  for (auto link : {Linkage::Ward, Linkage::Complete, Linkage::Average, Linkage::Single}) {
    CHECK(agglomerative(ps(kBlobPair), {.k = 2, .linkage = link}).labels == std::vector<int>{0, 0, 1, 1});
    CHECK(agglomerative(ps(kBlobPair), {.k = 4, .linkage = link}).labels == std::vector<int>{0, 1, 2, 3});
  }
}

TEST_CASE("single linkage merges the nearest collinear pair first") {
  const auto c = agglomerative(ps({{0, 0}, {0, 1}, {0, 4}}), {.k = 2, .linkage = Linkage::Single});
  CHECK(c.labels == std::vector<int>{0, 0, 1});
  const auto d = build_dendrogram(ps({{0, 0}, {0, 1}, {0, 4}}), Linkage::Single);
  REQUIRE(d.merges.size() == 2);
  CHECK(d.merges[0].left == 0);
  CHECK(d.merges[0].right == 1);
  CHECK(d.merges[0].cost == 1.0);
  CHECK(d.merges[1].cost == 3.0);
}

TEST_CASE("agglomerative matches greedy merging recomputed from members") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    const auto pts = oracle::random_points(rng, 4 + trial % 30);
    for (auto link : {Linkage::Ward, Linkage::Complete, Linkage::Average, Linkage::Single}) {
      const auto dendro = build_dendrogram(ps(pts), link);
      for (int k = 1; k <= std::min<int>(6, static_cast<int>(pts.size())); ++k) {
        auto expected = oracle::agglomerative(pts, k, link);
        auto got = dendro.cut(k);
        canonicalize_labels(got);
        CHECK(got == expected);
      }
    }
  }
}

TEST_CASE("dbscan basics") {
  const std::vector<Point> chain{{0, 0}, {0, 0.9}, {0, 1.8}, {0, 9}};
  const auto c = dbscan(ps(chain), {.eps = 1.0, .min_points = 2});
  CHECK(c.labels == std::vector<int>{0, 0, 0, kNoise});
  CHECK(c.k == 1);
  CHECK(c.noise_count() == 1);

  const auto all = dbscan(ps(chain), {.eps = 20.0, .min_points = 4});
  CHECK(all.labels == std::vector<int>{0, 0, 0, 0});

  const auto none = dbscan(ps({{0, 0}, {5, 5}, {10, 10}}), {.eps = 1.0, .min_points = 2});
  CHECK(none.k == 0);
  CHECK(none.noise_count() == 3);
}

TEST_CASE("dbscan border points go to the first claiming cluster") {
  // (2,0) has only three neighbours (itself and two cores), one core from each side
  const std::vector<Point> pts{{3, 0}, {3.5, 0.5}, {3.5, -0.5}, {3.8, 0},  // right group first
                               {2, 0},
                               {1, 0}, {0.5, 0.5}, {0.5, -0.5}, {0.2, 0}};
  const auto c = dbscan(ps(pts), {.eps = 1.0, .min_points = 4});
  CHECK(c.labels == std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1, 1});
  CHECK(c.labels == oracle::dbscan(pts, 1.0, 4));
}

TEST_CASE("dbscan matches the reachability closure on random data") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> eps(0.3, 4.0);
  for (int trial = 0; trial < 150; ++trial) {
    const auto pts = oracle::random_points(rng, 5 + trial % 70, 0.0, 12.0);
    const double e = eps(rng);
    const int v = 1 + trial % 6;
    CHECK(dbscan(ps(pts), {.eps = e, .min_points = v}).labels == oracle::dbscan(pts, e, v));
  }
}

TEST_CASE("dbscan partition survives permutation up to relabelling when no border ties exist") {
  std::mt19937_64 rng(4);
  const auto pts = oracle::random_points(rng, 80, 0.0, 24.0);
  auto perm = std::vector<std::size_t>(pts.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Point> shuffled;
  for (auto i : perm) shuffled.push_back(pts[i]);
  // min_points 1 makes every point core, so there are no border points at all
  const auto a = dbscan(ps(pts), {.eps = 1.5, .min_points = 1});
  const auto b = dbscan(ps(shuffled), {.eps = 1.5, .min_points = 1});
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      CHECK((a.labels[perm[i]] == a.labels[perm[j]]) == (b.labels[i] == b.labels[j]));
}

TEST_CASE("linkage names") {
  CHECK(parse_linkage("ward") == Linkage::Ward);
  CHECK(parse_linkage("single") == Linkage::Single);
  CHECK(to_string(Linkage::Average) == "average");
  CHECK_THROWS_AS(parse_linkage("centroid"), Error);
}
