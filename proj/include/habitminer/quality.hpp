#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "habitminer/clustering.hpp"
#include "habitminer/core.hpp"

namespace habitminer {

/// Smallest eps elbow_eps will hand back when the knee sits at distance 0.
inline constexpr double kMinElbowEps = 1e-6;

/// How the pairwise-distance sum of a cluster is scaled into its sparsity
/// score. `Members` divides by the member count n; `Pairs` divides by the
/// number of pairs n(n-1)/2, i.e. the mean pairwise distance.
enum class NoiseNormalization { Members, Pairs };

std::string_view to_string(NoiseNormalization normalization);
NoiseNormalization parse_noise_normalization(std::string_view text);

struct ClusterQuality {
  std::optional<double> silhouette;
  /// Indexed by cluster id.
  std::vector<double> noise_per_cluster;
  double threshold = 4.0;
  NoiseNormalization normalization = NoiseNormalization::Pairs;

  double worst() const;
  /// Cluster with the largest score, lowest id on ties; -1 when empty.
  int worst_cluster() const;
};

/// Mean silhouette over non-noise points. Members of singleton clusters
/// contribute 0, as does any point with a(i) = b(i) = 0.
double silhouette_score(const PointSet& points, const Clustering& clustering);

/// Sum of Euclidean distances over all unordered member pairs divided by the
/// member count. Singletons score 0.
double noise_metric(std::span<const Point> cluster);

/// Mean Euclidean distance over all unordered member pairs.
double mean_pairwise_distance(std::span<const Point> cluster);

double cluster_noise(std::span<const Point> cluster, NoiseNormalization normalization);

/// Score of every non-noise cluster, indexed by cluster id.
std::vector<double> noise_per_cluster(const PointSet& points, const Clustering& clustering,
                                      NoiseNormalization normalization);

/// Distances from each point to its v-th nearest other point, descending.
struct KDistanceCurve {
  std::vector<double> sorted_distances;
  int v = 1;
};

KDistanceCurve k_distance_curve(const PointSet& points, int v);

/// Index maximising the perpendicular distance from the curve to the chord
/// joining its first and last samples. Lowest index wins ties.
std::size_t knee_index(std::span<const double> curve);

/// Knee of the k-distance curve, floored at kMinElbowEps.
double elbow_eps(const PointSet& points, int v);

}  // namespace habitminer
