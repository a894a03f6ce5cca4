#include "habitminer/pipeline.hpp"

#include <algorithm>
#include <thread>

#include "habitminer/error.hpp"

namespace habitminer {

void PipelineConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
  };
  require(k_max >= 2, "k_max must be >= 2");
  require(tau > 0.0, "tau must be positive");
  require(min_points_v >= 1, "min_points must be >= 1");
  require(eps_decay > 0.0 && eps_decay < 1.0, "eps_decay must lie in (0, 1)");
  require(eps_floor > 0.0, "eps_floor must be positive");
  require(max_fallback_rounds >= 1, "max_fallback_rounds must be >= 1");
  require(kmeans_restarts >= 1, "kmeans restarts must be >= 1");
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Sweep: return "sweep";
    case Stage::Validate: return "validate";
    case Stage::Dbscan: return "dbscan";
  }
  return "unknown";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Scored: return "scored";
    case Verdict::Accepted: return "accept";
    case Verdict::Rejected: return "reject";
    case Verdict::AllNoise: return "all_noise";
  }
  return "unknown";
}

namespace {

struct Candidate {
  Clustering clustering;
  double silhouette = 0.0;
  double worst_pr = 0.0;
};

template <typename Fn>
void run_indexed(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

SweepResult sweep_partitional(const PointSet& points, const PipelineConfig& config) {
  config.validate();
  const std::size_t n = points.size();
  if (n < 3)
    throw Error(ErrorCode::TooFewPoints,
                "profiling needs at least 3 occurrences, got " + std::to_string(n));

  const int k_hi = std::min<int>(config.k_max, static_cast<int>(n) - 1);
  const Dendrogram tree = build_dendrogram(points, config.linkage);

  // Grid order: k ascending, k-means before agglomerative within each k.
  const std::size_t slots = static_cast<std::size_t>(k_hi - 1) * 2;
  std::vector<Candidate> grid(slots);
  run_indexed(slots, config.threads, [&](std::size_t slot) {
    const int k = 2 + static_cast<int>(slot / 2);
    Candidate& c = grid[slot];
    if (slot % 2 == 0) {
      KMeansParams params;
      params.k = k;
      params.restarts = config.kmeans_restarts;
      params.seed = config.seed;
      c.clustering = kmeans(points, params);
    } else {
      c.clustering.method = Method::Agglomerative;
      c.clustering.params = AgglomerativeParams{k, config.linkage};
      c.clustering.labels = tree.cut(k);
      c.clustering.k = k;
    }
    c.silhouette = silhouette_score(points, c.clustering);
    const auto noise = noise_per_cluster(points, c.clustering, config.noise_normalization);
    c.worst_pr = *std::max_element(noise.begin(), noise.end());
  });

  SweepResult out;
  std::size_t best = 0;
  for (std::size_t slot = 0; slot < slots; ++slot) {
    const Candidate& c = grid[slot];
    TraceEntry e;
    e.stage = Stage::Sweep;
    e.method = c.clustering.method;
    e.k_or_eps = c.clustering.k;
    e.silhouette = c.silhouette;
    e.worst_pr = c.worst_pr;
    e.clusters = c.clustering.k;
    e.verdict = Verdict::Scored;
    out.trace.push_back(e);
    if (c.silhouette > grid[best].silhouette) best = slot;
  }
  out.clustering = std::move(grid[best].clustering);
  out.silhouette = grid[best].silhouette;
  return out;
}

NoiseVerdict validate_noise(const PointSet& points, const Clustering& clustering, double tau,
                            NoiseNormalization normalization) {
  NoiseVerdict v;
  v.per_cluster = noise_per_cluster(points, clustering, normalization);
  for (std::size_t c = 0; c < v.per_cluster.size(); ++c)
    if (v.worst_cluster < 0 || v.per_cluster[c] > v.worst_pr) {
      v.worst_cluster = static_cast<int>(c);
      v.worst_pr = v.per_cluster[c];
    }
  v.pass = v.worst_pr <= tau;
  return v;
}

FallbackResult dbscan_fallback(const PointSet& points, const PipelineConfig& config) {
  config.validate();
  const std::size_t n = points.size();
  const auto v = static_cast<std::size_t>(config.min_points_v);

  // The elbow needs n > v; smaller sets fall back to the largest usable rank.
  double eps = config.eps_floor;
  if (n >= 2) eps = elbow_eps(points, static_cast<int>(std::min(v, n - 1)));

  FallbackResult out;
  std::optional<Clustering> best;
  double best_worst = 0.0;
  for (int round = 0; round < config.max_fallback_rounds; ++round) {
    if (round > 0 && eps < config.eps_floor) break;
    Clustering c = dbscan(points, DbscanParams{eps, config.min_points_v});

    TraceEntry e;
    e.stage = Stage::Dbscan;
    e.method = Method::Dbscan;
    e.k_or_eps = eps;
    e.clusters = c.k;
    if (c.k == 0) {
      e.verdict = Verdict::AllNoise;
      out.trace.push_back(e);
      break;
    }
    const auto verdict = validate_noise(points, c, config.tau, config.noise_normalization);
    e.worst_pr = verdict.worst_pr;
    e.verdict = verdict.pass ? Verdict::Accepted : Verdict::Rejected;
    out.trace.push_back(e);
    if (verdict.pass) {
      out.clustering = std::move(c);
      return out;
    }
    if (!best || verdict.worst_pr < best_worst) {
      best = std::move(c);
      best_worst = verdict.worst_pr;
    }
    eps *= config.eps_decay;
  }

  if (!best)
    throw Error(ErrorCode::NoClusterFound, "every DBSCAN round labelled all points as noise");
  out.clustering = std::move(*best);
  out.partial = true;
  return out;
}

PipelineResult profile_activity(const PointSet& points, const PipelineConfig& config) {
  config.validate();
  PipelineResult result;
  result.quality.threshold = config.tau;
  result.quality.normalization = config.noise_normalization;

  SweepResult sweep = sweep_partitional(points, config);
  result.trace = std::move(sweep.trace);

  const auto verdict =
      validate_noise(points, sweep.clustering, config.tau, config.noise_normalization);
  TraceEntry check;
  check.stage = Stage::Validate;
  check.method = sweep.clustering.method;
  check.k_or_eps = sweep.clustering.k;
  check.silhouette = sweep.silhouette;
  check.worst_pr = verdict.worst_pr;
  check.clusters = sweep.clustering.k;
  check.verdict = verdict.pass ? Verdict::Accepted : Verdict::Rejected;
  result.trace.push_back(check);

  if (verdict.pass) {
    result.clustering = std::move(sweep.clustering);
    result.quality.silhouette = sweep.silhouette;
    result.quality.noise_per_cluster = verdict.per_cluster;
  } else {
    FallbackResult fallback = dbscan_fallback(points, config);
    result.trace.insert(result.trace.end(), fallback.trace.begin(), fallback.trace.end());
    result.clustering = std::move(fallback.clustering);
    result.partial = fallback.partial;
    result.quality.noise_per_cluster =
        noise_per_cluster(points, result.clustering, config.noise_normalization);
  }

  result.habits = extract_habits(points, result.clustering, config.noise_in_denominator);
  return result;
}

}  // namespace habitminer
