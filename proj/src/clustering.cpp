#include "habitminer/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

#include "habitminer/error.hpp"

namespace habitminer {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::KMeans: return "kmeans";
    case Method::Agglomerative: return "agglomerative";
    case Method::Dbscan: return "dbscan";
  }
  return "unknown";
}

std::string_view to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::Ward: return "ward";
    case Linkage::Complete: return "complete";
    case Linkage::Average: return "average";
    case Linkage::Single: return "single";
  }
  return "unknown";
}

Linkage parse_linkage(std::string_view text) {
  if (text == "ward") return Linkage::Ward;
  if (text == "complete") return Linkage::Complete;
  if (text == "average") return Linkage::Average;
  if (text == "single") return Linkage::Single;
  throw Error(ErrorCode::InvalidArgument, "unknown linkage '" + std::string(text) + "'");
}

std::size_t Clustering::noise_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

std::vector<std::size_t> Clustering::members(int cluster) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == cluster) out.push_back(i);
  return out;
}

double squared_distance(Point a, Point b) {
  const double ds = a.start - b.start;
  const double de = a.end - b.end;
  return ds * ds + de * de;
}

double euclidean(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }

int canonicalize_labels(std::vector<int>& labels) {
  std::vector<int> remap;
  for (int& label : labels) {
    if (label == kNoise) continue;
    if (static_cast<std::size_t>(label) >= remap.size())
      remap.resize(static_cast<std::size_t>(label) + 1, -1);
    int& target = remap[static_cast<std::size_t>(label)];
    if (target < 0) target = static_cast<int>(std::count_if(remap.begin(), remap.end(),
                                                            [](int v) { return v >= 0; }));
    label = target;
  }
  return static_cast<int>(
      std::count_if(remap.begin(), remap.end(), [](int v) { return v >= 0; }));
}

double inertia(std::span<const Point> points, std::span<const int> labels) {
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);
  std::vector<Point> sums(static_cast<std::size_t>(k));
  std::vector<std::size_t> counts(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (labels[i] == kNoise) continue;
    auto c = static_cast<std::size_t>(labels[i]);
    sums[c].start += points[i].start;
    sums[c].end += points[i].end;
    ++counts[c];
  }
  for (std::size_t c = 0; c < sums.size(); ++c) {
    if (counts[c] == 0) continue;
    sums[c].start /= static_cast<double>(counts[c]);
    sums[c].end /= static_cast<double>(counts[c]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (labels[i] != kNoise)
      total += squared_distance(points[i], sums[static_cast<std::size_t>(labels[i])]);
  return total;
}

// ---------------------------------------------------------------------------
// k-means

namespace {

class Uniform {
 public:
  Uniform(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    engine_.seed(seq);
  }
  /// Uniform double in [0, 1).
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(next() * static_cast<double>(n)));
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<Point> seed_centers(std::span<const Point> pts, int k, Uniform& rng) {
  const std::size_t n = pts.size();
  std::vector<Point> centers;
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  auto take = [&](std::size_t idx) {
    chosen[idx] = true;
    centers.push_back(pts[idx]);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(pts[i], pts[idx]));
  };

  take(rng.index(n));
  while (static_cast<int>(centers.size()) < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.next() * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        cum += d2[i];
        pick = i;
        if (cum > target) break;
      }
    } else {
      // Every remaining point coincides with a center; pick among the unchosen.
      const auto remaining = static_cast<std::size_t>(std::count(chosen.begin(), chosen.end(), false));
      std::size_t nth = rng.index(remaining);
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i]) continue;
        if (nth-- == 0) {
          pick = i;
          break;
        }
      }
    }
    take(pick);
  }
  return centers;
}

KMeansRun lloyd(std::span<const Point> pts, const KMeansParams& params, std::uint64_t restart) {
  const std::size_t n = pts.size();
  const auto k = static_cast<std::size_t>(params.k);
  Uniform rng(params.seed, restart);
  std::vector<Point> centers = seed_centers(pts, params.k, rng);

  KMeansRun run;
  run.labels.assign(n, 0);
  std::vector<int> previous;
  std::vector<std::size_t> sizes(k);

  for (int iter = 0; iter < std::max(1, params.max_iterations); ++iter) {
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = squared_distance(pts[i], centers[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = squared_distance(pts[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      run.labels[i] = static_cast<int>(best);
      ++sizes[best];
    }

    // An empty cluster takes over the point lying farthest from its own center.
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t donor = n;
      double far = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(run.labels[i]);
        if (sizes[own] < 2) continue;
        const double d = squared_distance(pts[i], centers[own]);
        if (d > far) {
          far = d;
          donor = i;
        }
      }
      --sizes[static_cast<std::size_t>(run.labels[donor])];
      run.labels[donor] = static_cast<int>(c);
      sizes[c] = 1;
      centers[c] = pts[donor];
    }

    std::vector<Point> updated(k);
    for (std::size_t i = 0; i < n; ++i) {
      auto& u = updated[static_cast<std::size_t>(run.labels[i])];
      u.start += pts[i].start;
      u.end += pts[i].end;
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      updated[c].start /= static_cast<double>(sizes[c]);
      updated[c].end /= static_cast<double>(sizes[c]);
      shift += squared_distance(updated[c], centers[c]);
    }
    centers = std::move(updated);

    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      cost += squared_distance(pts[i], centers[static_cast<std::size_t>(run.labels[i])]);
    run.history.push_back(cost);

    if (run.labels == previous || shift <= params.convergence_tol) break;
    previous = run.labels;
  }

  // Lloyd can stall where moving one point still pays once both centroids
  // follow it (Hartigan's criterion). Apply the most profitable such move
  // until none is left; each lowers the inertia and the final state is also
  // a Lloyd fixed point. Taking the best move rather than the first matters:
  // greedy index-order moves can walk into a worse local minimum.
  const long max_moves = static_cast<long>(std::max(1, params.max_iterations)) * static_cast<long>(n);
  for (long move = 0; move < max_moves; ++move) {
    std::size_t who = n, to = 0;
    double gain = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto from = static_cast<std::size_t>(run.labels[i]);
      if (sizes[from] < 2) continue;
      const double na = static_cast<double>(sizes[from]);
      const double leave = na / (na - 1.0) * squared_distance(pts[i], centers[from]);
      for (std::size_t c = 0; c < k; ++c) {
        if (c == from) continue;
        const double nb = static_cast<double>(sizes[c]);
        const double g = leave - nb / (nb + 1.0) * squared_distance(pts[i], centers[c]);
        if (g > gain && g > 1e-12 * leave) {
          gain = g;
          who = i;
          to = c;
        }
      }
    }
    if (who == n) break;

    const auto from = static_cast<std::size_t>(run.labels[who]);
    --sizes[from];
    ++sizes[to];
    run.labels[who] = static_cast<int>(to);
    for (std::size_t c : {from, to}) {
      Point sum;
      for (std::size_t i = 0; i < n; ++i)
        if (static_cast<std::size_t>(run.labels[i]) == c) {
          sum.start += pts[i].start;
          sum.end += pts[i].end;
        }
      centers[c] = {sum.start / static_cast<double>(sizes[c]), sum.end / static_cast<double>(sizes[c])};
    }
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      cost += squared_distance(pts[i], centers[static_cast<std::size_t>(run.labels[i])]);
    run.history.push_back(cost);
  }

  canonicalize_labels(run.labels);
  run.inertia = run.history.back();
  return run;
}

void check_k(const PointSet& points, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  if (static_cast<std::size_t>(k) > points.size())
    throw Error(ErrorCode::TooFewPoints, "k = " + std::to_string(k) + " exceeds " +
                                             std::to_string(points.size()) + " points");
}

}  // namespace

KMeansDetail kmeans_detailed(const PointSet& points, const KMeansParams& params) {
  check_k(points, params.k);
  KMeansDetail detail;
  const int restarts = std::max(1, params.restarts);
  std::size_t best = 0;
  for (int r = 0; r < restarts; ++r) {
    detail.runs.push_back(lloyd(points.points, params, static_cast<std::uint64_t>(r)));
    if (detail.runs.back().inertia < detail.runs[best].inertia) best = detail.runs.size() - 1;
  }
  detail.inertia = detail.runs[best].inertia;
  detail.clustering.method = Method::KMeans;
  detail.clustering.params = params;
  detail.clustering.labels = detail.runs[best].labels;
  detail.clustering.k = params.k;
  return detail;
}

Clustering kmeans(const PointSet& points, const KMeansParams& params) {
  return kmeans_detailed(points, params).clustering;
}

// ---------------------------------------------------------------------------
// Agglomerative (Lance-Williams)

std::vector<int> Dendrogram::cut(int k) const {
  if (k < 1 || static_cast<std::size_t>(k) > point_count)
    throw Error(ErrorCode::TooFewPoints, "cannot cut " + std::to_string(point_count) +
                                             " points into " + std::to_string(k) + " clusters");
  std::vector<std::size_t> parent(point_count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const std::size_t steps = point_count - static_cast<std::size_t>(k);
  for (std::size_t m = 0; m < steps; ++m) parent[find(merges[m].right)] = find(merges[m].left);

  std::vector<int> labels(point_count);
  for (std::size_t i = 0; i < point_count; ++i) labels[i] = static_cast<int>(find(i));
  canonicalize_labels(labels);
  return labels;
}

Dendrogram build_dendrogram(const PointSet& points, Linkage linkage) {
  const std::size_t n = points.size();
  Dendrogram tree;
  tree.point_count = n;
  tree.linkage = linkage;
  if (n < 2) return tree;

  // Ward runs on squared distances, the others on plain distances.
  std::vector<double> dist(n * n, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return dist[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = squared_distance(points.points[i], points.points[j]);
      at(i, j) = at(j, i) = linkage == Linkage::Ward ? d2 : std::sqrt(d2);
    }

  std::vector<bool> active(n, true);
  std::vector<std::size_t> size(n, 1);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Row cache: smallest distance from i to an active j > i, lowest j on ties.
  std::vector<std::size_t> nn(n, n);
  std::vector<double> nn_dist(n, kInf);
  auto refresh = [&](std::size_t i) {
    nn[i] = n;
    nn_dist[i] = kInf;
    for (std::size_t j = i + 1; j < n; ++j)
      if (active[j] && at(i, j) < nn_dist[i]) {
        nn_dist[i] = at(i, j);
        nn[i] = j;
      }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t a = n;
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i)
      if (active[i] && nn[i] < n && nn_dist[i] < best) {
        best = nn_dist[i];
        a = i;
      }
    const std::size_t b = nn[a];
    tree.merges.push_back({a, b, best});

    const double na = static_cast<double>(size[a]);
    const double nb = static_cast<double>(size[b]);
    const double dab = at(a, b);
    for (std::size_t c = 0; c < n; ++c) {
      if (!active[c] || c == a || c == b) continue;
      const double dac = at(a, c);
      const double dbc = at(b, c);
      double merged = 0.0;
      switch (linkage) {
        case Linkage::Single: merged = std::min(dac, dbc); break;
        case Linkage::Complete: merged = std::max(dac, dbc); break;
        case Linkage::Average: merged = (na * dac + nb * dbc) / (na + nb); break;
        case Linkage::Ward: {
          const double nc = static_cast<double>(size[c]);
          merged = ((na + nc) * dac + (nb + nc) * dbc - nc * dab) / (na + nb + nc);
          break;
        }
      }
      at(a, c) = at(c, a) = merged;
    }
    active[b] = false;
    size[a] += size[b];

    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      if (i == a || nn[i] == a || nn[i] == b) {
        refresh(i);
      } else if (i < a) {
        const double d = at(i, a);
        if (d < nn_dist[i] || (d == nn_dist[i] && a < nn[i])) {
          nn_dist[i] = d;
          nn[i] = a;
        }
      }
    }
  }
  return tree;
}

Clustering agglomerative(const PointSet& points, const AgglomerativeParams& params) {
  check_k(points, params.k);
  Clustering out;
  out.method = Method::Agglomerative;
  out.params = params;
  out.labels = build_dendrogram(points, params.linkage).cut(params.k);
  out.k = params.k;
  return out;
}

// ---------------------------------------------------------------------------
// DBSCAN

Clustering dbscan(const PointSet& points, const DbscanParams& params) {
  if (!(params.eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  if (params.min_points < 1) throw Error(ErrorCode::InvalidArgument, "min_points must be >= 1");
  const std::size_t n = points.size();
  const auto& pts = points.points;

  auto neighbours = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j)
      if (euclidean(pts[i], pts[j]) <= params.eps) out.push_back(j);
    return out;
  };
  const auto min_points = static_cast<std::size_t>(params.min_points);

  constexpr int kUnvisited = -2;
  std::vector<int> labels(n, kUnvisited);
  int next_id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != kUnvisited) continue;
    auto seeds = neighbours(i);
    if (seeds.size() < min_points) {
      labels[i] = kNoise;
      continue;
    }
    const int id = next_id++;
    labels[i] = id;
    std::deque<std::size_t> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      const std::size_t q = queue.front();
      queue.pop_front();
      if (labels[q] == kNoise) labels[q] = id;  // border point, first claim wins
      if (labels[q] != kUnvisited) continue;
      labels[q] = id;
      auto reach = neighbours(q);
      if (reach.size() >= min_points) queue.insert(queue.end(), reach.begin(), reach.end());
    }
  }

  Clustering out;
  out.method = Method::Dbscan;
  out.params = params;
  out.labels = std::move(labels);
  out.k = canonicalize_labels(out.labels);
  return out;
}

}  // namespace habitminer
