#include "habitminer/quality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "habitminer/error.hpp"

namespace habitminer {

std::string_view to_string(NoiseNormalization normalization) {
  return normalization == NoiseNormalization::Members ? "members" : "pairs";
}

NoiseNormalization parse_noise_normalization(std::string_view text) {
  if (text == "members") return NoiseNormalization::Members;
  if (text == "pairs") return NoiseNormalization::Pairs;
  throw Error(ErrorCode::InvalidArgument,
              "unknown noise normalization '" + std::string(text) + "'");
}

double ClusterQuality::worst() const {
  double w = 0.0;
  for (double v : noise_per_cluster) w = std::max(w, v);
  return w;
}

int ClusterQuality::worst_cluster() const {
  int id = -1;
  for (std::size_t c = 0; c < noise_per_cluster.size(); ++c)
    if (id < 0 || noise_per_cluster[c] > noise_per_cluster[static_cast<std::size_t>(id)])
      id = static_cast<int>(c);
  return id;
}

double silhouette_score(const PointSet& points, const Clustering& clustering) {
  const auto& pts = points.points;
  const auto& labels = clustering.labels;
  if (labels.size() != pts.size())
    throw Error(ErrorCode::InvalidArgument, "label count does not match point count");

  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (int l : labels)
    if (l != kNoise) ++counts[static_cast<std::size_t>(l)];
  const auto populated = std::count_if(counts.begin(), counts.end(),
                                       [](std::size_t c) { return c > 0; });
  if (populated < 2)
    throw Error(ErrorCode::DegenerateClustering, "silhouette needs two non-noise clusters");

  std::vector<double> sums(static_cast<std::size_t>(k));
  double total = 0.0;
  std::size_t scored = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (labels[i] == kNoise) continue;
    ++scored;
    const auto own = static_cast<std::size_t>(labels[i]);
    if (counts[own] == 1) continue;

    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i && labels[j] != kNoise)
        sums[static_cast<std::size_t>(labels[j])] += euclidean(pts[i], pts[j]);

    const double a = sums[own] / static_cast<double>(counts[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < sums.size(); ++c)
      if (c != own && counts[c] > 0) b = std::min(b, sums[c] / static_cast<double>(counts[c]));
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(scored);
}

namespace {

double pairwise_sum(std::span<const Point> cluster) {
  double sum = 0.0;
  for (std::size_t i = 0; i < cluster.size(); ++i)
    for (std::size_t j = i + 1; j < cluster.size(); ++j) sum += euclidean(cluster[i], cluster[j]);
  return sum;
}

void require_members(std::span<const Point> cluster) {
  if (cluster.empty()) throw Error(ErrorCode::EmptyCluster, "cluster has no members");
}

}  // namespace

double noise_metric(std::span<const Point> cluster) {
  require_members(cluster);
  return pairwise_sum(cluster) / static_cast<double>(cluster.size());
}

double mean_pairwise_distance(std::span<const Point> cluster) {
  require_members(cluster);
  const double n = static_cast<double>(cluster.size());
  if (cluster.size() < 2) return 0.0;
  return pairwise_sum(cluster) / (n * (n - 1.0) / 2.0);
}

double cluster_noise(std::span<const Point> cluster, NoiseNormalization normalization) {
  return normalization == NoiseNormalization::Members ? noise_metric(cluster)
                                                      : mean_pairwise_distance(cluster);
}

std::vector<double> noise_per_cluster(const PointSet& points, const Clustering& clustering,
                                      NoiseNormalization normalization) {
  std::vector<std::vector<Point>> groups(static_cast<std::size_t>(clustering.k));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int l = clustering.labels[i];
    if (l != kNoise) groups[static_cast<std::size_t>(l)].push_back(points.points[i]);
  }
  std::vector<double> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(cluster_noise(g, normalization));
  return out;
}

KDistanceCurve k_distance_curve(const PointSet& points, int v) {
  const std::size_t n = points.size();
  if (v < 1) throw Error(ErrorCode::InvalidArgument, "neighbour rank must be >= 1");
  if (n <= static_cast<std::size_t>(v))
    throw Error(ErrorCode::TooFewPoints, "k-distance needs more than " + std::to_string(v) +
                                             " points, got " + std::to_string(n));
  KDistanceCurve curve;
  curve.v = v;
  curve.sorted_distances.reserve(n);
  std::vector<double> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row.push_back(euclidean(points.points[i], points.points[j]));
    auto nth = row.begin() + (v - 1);
    std::nth_element(row.begin(), nth, row.end());
    curve.sorted_distances.push_back(*nth);
  }
  std::sort(curve.sorted_distances.begin(), curve.sorted_distances.end(), std::greater<>{});
  return curve;
}

std::size_t knee_index(std::span<const double> curve) {
  if (curve.size() < 3) return 0;
  const double last_x = static_cast<double>(curve.size() - 1);
  const double rise = curve.back() - curve.front();
  // |rise * x - run * (y - y0)| is proportional to the perpendicular distance.
  std::size_t best = 0;
  double best_d = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double d =
        std::abs(rise * static_cast<double>(i) - last_x * (curve[i] - curve.front()));
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

double elbow_eps(const PointSet& points, int v) {
  const auto curve = k_distance_curve(points, v);
  const double eps = curve.sorted_distances[knee_index(curve.sorted_distances)];
  return std::max(eps, kMinElbowEps);
}

}  // namespace habitminer
