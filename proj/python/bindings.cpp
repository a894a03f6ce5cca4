#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "habitminer/clustering.hpp"
#include "habitminer/error.hpp"
#include "habitminer/habits.hpp"
#include "habitminer/ingest.hpp"
#include "habitminer/pipeline.hpp"
#include "habitminer/quality.hpp"
#include "habitminer/report.hpp"
#include "habitminer/synth.hpp"

namespace py = pybind11;
namespace hm = habitminer;

namespace {

using Pair = std::pair<double, double>;

hm::PointSet to_points(const std::vector<Pair>& pts, std::string activity = {}) {
  hm::PointSet out;
  out.activity = std::move(activity);
  out.points.reserve(pts.size());
  for (auto [s, e] : pts) out.points.push_back({s, e});
  return out;
}

std::vector<Pair> from_points(const hm::PointSet& ps) {
  std::vector<Pair> out;
  out.reserve(ps.size());
  for (const auto& p : ps.points) out.emplace_back(p.start, p.end);
  return out;
}

hm::Clustering with_labels(std::vector<int> labels) {
  hm::Clustering c;
  c.method = hm::Method::Dbscan;  // the only method allowed to carry noise
  c.k = hm::canonicalize_labels(labels);
  c.labels = std::move(labels);
  return c;
}

py::dict interval_dict(const hm::ActivityInterval& iv) {
  py::dict d;
  d["activity"] = iv.activity;
  d["date"] = hm::format_iso_date(iv.date);
  d["start_hours"] = iv.start_hours;
  d["end_hours"] = iv.end_hours;
  return d;
}

hm::ActivityInterval interval_from(const py::dict& d) {
  const auto date = hm::parse_iso_date(d["date"].cast<std::string>());
  if (!date) throw hm::Error(hm::ErrorCode::InvalidArgument, "bad date");
  hm::ActivityInterval iv{*date, d["start_hours"].cast<double>(), d["end_hours"].cast<double>(),
                          d["activity"].cast<std::string>()};
  hm::validate(iv);
  return iv;
}

hm::PipelineConfig config_from(const py::kwargs& kw) {
  hm::PipelineConfig c;
  for (auto [key, value] : kw) {
    const auto k = key.cast<std::string>();
    if (k == "k_max") c.k_max = value.cast<int>();
    else if (k == "tau") c.tau = value.cast<double>();
    else if (k == "min_points") c.min_points_v = value.cast<int>();
    else if (k == "eps_decay") c.eps_decay = value.cast<double>();
    else if (k == "eps_floor") c.eps_floor = value.cast<double>();
    else if (k == "max_rounds") c.max_fallback_rounds = value.cast<int>();
    else if (k == "seed") c.seed = value.cast<std::uint64_t>();
    else if (k == "restarts") c.kmeans_restarts = value.cast<int>();
    else if (k == "linkage") c.linkage = hm::parse_linkage(value.cast<std::string>());
    else if (k == "noise_normalization")
      c.noise_normalization = hm::parse_noise_normalization(value.cast<std::string>());
    else if (k == "noise_in_denominator") c.noise_in_denominator = value.cast<bool>();
    else if (k == "threads") c.threads = value.cast<unsigned>();
    else throw hm::Error(hm::ErrorCode::InvalidArgument, "unknown option '" + k + "'");
  }
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_habitminer, m) {
  m.doc() = "Habit extraction from (start, end) activity tuples";
  m.attr("NOISE") = hm::kNoise;

  // Message text leads with the error code name, e.g. "TooFewPoints: ...".
  py::register_exception<hm::Error>(m, "HabitminerError", PyExc_ValueError);

  m.def("euclidean", [](Pair a, Pair b) { return hm::euclidean({a.first, a.second}, {b.first, b.second}); });

  m.def(
      "kmeans",
      [](const std::vector<Pair>& pts, int k, int restarts, std::uint64_t seed) {
        hm::KMeansParams p;
        p.k = k;
        p.restarts = restarts;
        p.seed = seed;
        return hm::kmeans(to_points(pts), p).labels;
      },
      py::arg("points"), py::arg("k"), py::arg("restarts") = 10, py::arg("seed") = 0);

  m.def(
      "agglomerative",
      [](const std::vector<Pair>& pts, int k, const std::string& linkage) {
        return hm::agglomerative(to_points(pts), {k, hm::parse_linkage(linkage)}).labels;
      },
      py::arg("points"), py::arg("k"), py::arg("linkage") = "ward");

  m.def(
      "dbscan",
      [](const std::vector<Pair>& pts, double eps, int min_points) {
        return hm::dbscan(to_points(pts), {eps, min_points}).labels;
      },
      py::arg("points"), py::arg("eps"), py::arg("min_points") = 4);

  m.def("inertia", [](const std::vector<Pair>& pts, const std::vector<int>& labels) {
    return hm::inertia(to_points(pts).points, labels);
  });

  m.def("silhouette_score", [](const std::vector<Pair>& pts, const std::vector<int>& labels) {
    return hm::silhouette_score(to_points(pts), with_labels(labels));
  });

  m.def("noise_metric", [](const std::vector<Pair>& pts) { return hm::noise_metric(to_points(pts).points); });
  m.def("mean_pairwise_distance",
        [](const std::vector<Pair>& pts) { return hm::mean_pairwise_distance(to_points(pts).points); });

  m.def(
      "elbow_eps", [](const std::vector<Pair>& pts, int v) { return hm::elbow_eps(to_points(pts), v); },
      py::arg("points"), py::arg("v") = 4);

  m.def(
      "extract_habits",
      [](const std::vector<Pair>& pts, const std::vector<int>& labels, bool noise_in_denominator) {
        py::list out;
        for (const auto& h : hm::extract_habits(to_points(pts), with_labels(labels), noise_in_denominator)) {
          py::dict d;
          d["cluster_id"] = h.cluster_id;
          d["mean_start"] = h.mean_start;
          d["std_start"] = h.std_start;
          d["mean_end"] = h.mean_end;
          d["std_end"] = h.std_end;
          d["support"] = h.support;
          d["total_n"] = h.total_n;
          d["confidence"] = h.confidence;
          d["clock_render"] = hm::render_habit(h);
          out.append(d);
        }
        return out;
      },
      py::arg("points"), py::arg("labels"), py::arg("noise_in_denominator") = true);

  m.def(
      "profile",
      [](const std::vector<Pair>& pts, const std::string& activity, const py::kwargs& kw) {
        const auto config = config_from(kw);
        const auto points = to_points(pts, activity);
        const auto result = hm::profile_activity(points, config);
        return hm::format_report(hm::make_report(activity, "", {}, result, config));
      },
      py::arg("points"), py::arg("activity") = "activity",
      "Runs the full pipeline and returns the JSON report text.");

  m.def(
      "generate",
      [](const std::vector<std::tuple<double, double, double, int>>& clusters, int scatter_count,
         std::uint64_t seed) {
        hm::PlantedSpec spec;
        for (auto [s, e, sd, n] : clusters) spec.clusters.push_back({s, e, sd, n});
        spec.scatter_count = scatter_count;
        spec.seed = seed;
        const auto data = hm::generate(spec);
        return std::make_pair(from_points(data.points), data.truth);
      },
      py::arg("clusters"), py::arg("scatter_count") = 0, py::arg("seed") = 0,
      "clusters: [(center_start, center_end, std, count)]; returns (points, truth).");

  m.def("read_intervals_csv", [](const std::string& text) {
    std::istringstream in(text);
    py::list out;
    for (const auto& iv : hm::read_intervals_csv(in)) out.append(interval_dict(iv));
    return out;
  });

  m.def("write_intervals_csv", [](const py::list& rows) {
    std::vector<hm::ActivityInterval> ivs;
    for (auto row : rows) ivs.push_back(interval_from(row.cast<py::dict>()));
    std::ostringstream out;
    hm::write_intervals_csv(out, ivs);
    return out.str();
  });

  m.def(
      "parse_event_log",
      [](const std::string& text, const std::string& activity) {
        std::istringstream in(text);
        py::list out;
        for (const auto& iv : hm::parse_event_log(in, activity)) out.append(interval_dict(iv));
        return out;
      },
      py::arg("text"), py::arg("activity"));

  m.def(
      "parse_power_csv",
      [](const std::string& text, const std::string& column, double threshold_watts, long long merge_gap,
         long long min_duration) {
        hm::IngestConfig cfg;
        cfg.power_threshold_watts = threshold_watts;
        cfg.merge_gap_seconds = merge_gap;
        cfg.min_duration_seconds = min_duration;
        std::istringstream in(text);
        py::list out;
        for (const auto& iv : hm::parse_power_csv(in, column, cfg)) out.append(interval_dict(iv));
        return out;
      },
      py::arg("text"), py::arg("column"), py::arg("threshold_watts") = 5.0, py::arg("merge_gap") = 60,
      py::arg("min_duration") = 120);
}
