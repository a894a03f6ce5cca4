#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "habitminer/clustering.hpp"
#include "habitminer/core.hpp"
#include "habitminer/habits.hpp"
#include "habitminer/quality.hpp"

namespace habitminer {

struct PipelineConfig {
  int k_max = 10;
  /// Largest acceptable per-cluster noise score.
  double tau = 4.0;
  int min_points_v = 4;
  double eps_decay = 0.9;
  double eps_floor = 0.05;
  int max_fallback_rounds = 20;
  std::uint64_t seed = 1;
  int kmeans_restarts = 10;
  Linkage linkage = Linkage::Ward;
  NoiseNormalization noise_normalization = NoiseNormalization::Pairs;
  bool noise_in_denominator = true;
  /// Worker threads for the (method, k) sweep. Results do not depend on it.
  unsigned threads = 1;

  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
};

enum class Stage { Sweep, Validate, Dbscan };
enum class Verdict { Scored, Accepted, Rejected, AllNoise };

std::string_view to_string(Stage stage);
std::string_view to_string(Verdict verdict);

struct TraceEntry {
  Stage stage = Stage::Sweep;
  Method method = Method::KMeans;
  /// k for partitional attempts, eps for DBSCAN rounds.
  double k_or_eps = 0.0;
  std::optional<double> silhouette;
  std::optional<double> worst_pr;
  int clusters = 0;
  Verdict verdict = Verdict::Scored;
};

struct SweepResult {
  Clustering clustering;
  double silhouette = 0.0;
  std::vector<TraceEntry> trace;
};

/// Scores k-means and agglomerative clusterings for k = 2..min(k_max, n-1)
/// and keeps the highest silhouette. Ties go to the smaller k, then k-means.
SweepResult sweep_partitional(const PointSet& points, const PipelineConfig& config);

struct NoiseVerdict {
  bool pass = true;
  int worst_cluster = -1;
  double worst_pr = 0.0;
  std::vector<double> per_cluster;
};

/// PASS iff every non-noise cluster scores <= tau.
NoiseVerdict validate_noise(const PointSet& points, const Clustering& clustering, double tau,
                            NoiseNormalization normalization = NoiseNormalization::Pairs);

struct FallbackResult {
  Clustering clustering;
  /// Set when no round met tau; `clustering` is then the best round seen.
  bool partial = false;
  std::vector<TraceEntry> trace;
};

/// DBSCAN from the elbow eps, shrinking eps geometrically until every
/// cluster meets tau. Throws NoClusterFound if no round yields a cluster.
FallbackResult dbscan_fallback(const PointSet& points, const PipelineConfig& config);

struct PipelineResult {
  Clustering clustering;
  ClusterQuality quality;
  std::vector<HabitProfile> habits;
  std::vector<TraceEntry> trace;
  bool partial = false;
};

PipelineResult profile_activity(const PointSet& points, const PipelineConfig& config);

}  // namespace habitminer
