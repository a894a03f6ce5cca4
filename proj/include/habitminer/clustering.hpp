#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "habitminer/core.hpp"

namespace habitminer {

/// Label carried by points DBSCAN could not reach from any core point.
inline constexpr int kNoise = -1;

enum class Method { KMeans, Agglomerative, Dbscan };
enum class Linkage { Ward, Complete, Average, Single };

std::string_view to_string(Method method);
std::string_view to_string(Linkage linkage);
Linkage parse_linkage(std::string_view text);

struct KMeansParams {
  int k = 2;
  int restarts = 10;
  int max_iterations = 300;
  /// Lloyd stops once the summed squared centroid shift drops to this.
  double convergence_tol = 1e-6;
  std::uint64_t seed = 0;
};

struct AgglomerativeParams {
  int k = 2;
  Linkage linkage = Linkage::Ward;
};

struct DbscanParams {
  double eps = 1.0;
  int min_points = 4;
};

using ClusterParams = std::variant<KMeansParams, AgglomerativeParams, DbscanParams>;

/// Cluster ids are 0..k-1, numbered in order of each cluster's first member.
struct Clustering {
  Method method = Method::KMeans;
  ClusterParams params;
  std::vector<int> labels;
  int k = 0;

  std::size_t noise_count() const;
  /// Indices of the members of `cluster`, ascending.
  std::vector<std::size_t> members(int cluster) const;
};

double euclidean(Point a, Point b);
double squared_distance(Point a, Point b);

/// Renumbers labels so cluster ids follow first appearance; noise untouched.
/// Returns the resulting cluster count.
int canonicalize_labels(std::vector<int>& labels);

/// Within-cluster sum of squared distances to each cluster's centroid.
double inertia(std::span<const Point> points, std::span<const int> labels);

struct KMeansRun {
  std::vector<int> labels;
  double inertia = 0.0;
  /// Inertia after every Lloyd iteration and every refinement move.
  std::vector<double> history;
};

struct KMeansDetail {
  Clustering clustering;
  double inertia = 0.0;
  std::vector<KMeansRun> runs;
};

/// k-means++ seeded Lloyd iteration followed by single-point (Hartigan)
/// moves; best of `restarts` runs by inertia.
Clustering kmeans(const PointSet& points, const KMeansParams& params);
KMeansDetail kmeans_detailed(const PointSet& points, const KMeansParams& params);

/// Merge sequence of a bottom-up clustering. A merge joins the clusters whose
/// smallest member indices are `left` < `right`; the result keeps `left`.
struct Dendrogram {
  struct Merge {
    std::size_t left;
    std::size_t right;
    double cost;
  };
  std::size_t point_count = 0;
  Linkage linkage = Linkage::Ward;
  std::vector<Merge> merges;

  /// Labels after applying the first point_count - k merges.
  std::vector<int> cut(int k) const;
};

Dendrogram build_dendrogram(const PointSet& points, Linkage linkage);
Clustering agglomerative(const PointSet& points, const AgglomerativeParams& params);

Clustering dbscan(const PointSet& points, const DbscanParams& params);

}  // namespace habitminer
