#include "habitminer/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <variant>

#include "habitminer/error.hpp"
#include "json.hpp"

namespace habitminer {

using nlohmann::json;

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

namespace {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::map<std::string, std::string> describe_params(const Clustering& c) {
  std::map<std::string, std::string> out;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, KMeansParams>) {
          out["k"] = std::to_string(p.k);
          out["restarts"] = std::to_string(p.restarts);
          out["seed"] = std::to_string(p.seed);
        } else if constexpr (std::is_same_v<P, AgglomerativeParams>) {
          out["k"] = std::to_string(p.k);
          out["linkage"] = std::string(to_string(p.linkage));
        } else {
          out["eps"] = format_real(p.eps);
          out["min_points"] = std::to_string(p.min_points);
        }
      },
      c.params);
  return out;
}

json real_or_null(const std::optional<double>& v) {
  return v ? json(round_significant(*v)) : json(nullptr);
}

std::optional<double> optional_real(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

Report make_report(std::string activity, std::string source_file,
                   std::map<std::string, std::string> parameters, const PipelineResult& result,
                   const PipelineConfig& config) {
  Report r;
  r.activity = std::move(activity);
  r.source_file = std::move(source_file);
  r.parameters = std::move(parameters);
  r.chosen_method = std::string(to_string(result.clustering.method));
  r.method_params = describe_params(result.clustering);
  if (result.quality.silhouette) r.silhouette = round_significant(*result.quality.silhouette);
  r.tau = round_significant(config.tau);
  r.noise_normalization = std::string(to_string(config.noise_normalization));
  r.noise_in_denominator = config.noise_in_denominator;
  r.partial = result.partial;
  for (double v : result.quality.noise_per_cluster)
    r.noise_per_cluster.push_back(round_significant(v));
  r.labels = result.clustering.labels;

  for (const auto& h : result.habits) {
    ReportHabit rh;
    rh.clock_render = render_habit(h);
    rh.profile = h;
    rh.profile.mean_start = round_significant(h.mean_start);
    rh.profile.std_start = round_significant(h.std_start);
    rh.profile.mean_end = round_significant(h.mean_end);
    rh.profile.std_end = round_significant(h.std_end);
    rh.profile.confidence = round_significant(h.confidence);
    r.habits.push_back(std::move(rh));
  }
  for (const auto& t : result.trace) {
    ReportTraceEntry e;
    e.stage = std::string(to_string(t.stage));
    e.method = std::string(to_string(t.method));
    e.k_or_eps = round_significant(t.k_or_eps);
    if (t.silhouette) e.silhouette = round_significant(*t.silhouette);
    if (t.worst_pr) e.worst_pr = round_significant(*t.worst_pr);
    e.clusters = t.clusters;
    e.verdict = std::string(to_string(t.verdict));
    r.trace.push_back(std::move(e));
  }
  return r;
}

Report make_error_report(std::string activity, std::string source_file,
                         std::map<std::string, std::string> parameters, std::string error,
                         std::size_t point_count, const PipelineConfig& config) {
  Report r;
  r.activity = std::move(activity);
  r.source_file = std::move(source_file);
  r.parameters = std::move(parameters);
  r.tau = round_significant(config.tau);
  r.noise_normalization = std::string(to_string(config.noise_normalization));
  r.noise_in_denominator = config.noise_in_denominator;
  r.partial = true;
  r.error = std::move(error);
  r.labels.assign(point_count, kNoise);
  return r;
}

void validate_report(const Report& report) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvariantViolation, "report: " + what);
  };
  require(!report.activity.empty(), "activity is empty");
  require(report.tau > 0.0, "tau must be positive");
  if (report.error) {
    require(report.partial, "failed reports must be flagged partial");
    require(report.habits.empty(), "failed reports carry no habits");
    return;
  }
  require(report.chosen_method.has_value(), "chosen_method missing");
  require(!report.trace.empty(), "trace is empty");
  const auto accepted = std::count_if(report.trace.begin(), report.trace.end(),
                                      [](const ReportTraceEntry& e) { return e.verdict == "accept"; });
  require(report.partial ? accepted == 0 : accepted == 1,
          "trace must hold exactly one accepted entry unless partial");

  int k = 0;
  for (int l : report.labels) {
    require(l >= kNoise, "label below the noise marker");
    k = std::max(k, l + 1);
  }
  require(report.noise_per_cluster.size() == static_cast<std::size_t>(k),
          "noise_per_cluster must have one entry per cluster");
  require(report.habits.size() == static_cast<std::size_t>(k), "one habit per cluster expected");
  if (report.silhouette) require(std::abs(*report.silhouette) <= 1.0, "silhouette outside [-1, 1]");

  double total_confidence = 0.0;
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (const auto& rh : report.habits) {
    const auto& h = rh.profile;
    require(h.cluster_id >= 0 && h.cluster_id < k, "habit cluster id out of range");
    require(!seen[static_cast<std::size_t>(h.cluster_id)], "duplicate habit cluster id");
    seen[static_cast<std::size_t>(h.cluster_id)] = true;
    const auto members = static_cast<std::size_t>(
        std::count(report.labels.begin(), report.labels.end(), h.cluster_id));
    require(h.support == members, "habit support disagrees with labels");
    require(h.support >= 1 && h.support <= h.total_n, "support outside [1, total_n]");
    require(h.confidence > 0.0 && h.confidence <= 1.0, "confidence outside (0, 1]");
    require(h.std_start >= 0.0 && h.std_end >= 0.0, "negative standard deviation");
    require(h.mean_start <= h.mean_end, "mean_start after mean_end");
    total_confidence += h.confidence;
  }
  require(total_confidence <= 1.0 + 1e-6, "confidences sum above 1");
  for (double v : report.noise_per_cluster) require(v >= 0.0, "negative noise score");
}

std::string format_report(const Report& report) {
  json doc;
  doc["activity"] = report.activity;
  doc["source"] = {{"file", report.source_file}, {"parameters", report.parameters}};

  json pipeline;
  pipeline["chosen_method"] =
      report.chosen_method ? json(*report.chosen_method) : json(nullptr);
  pipeline["params"] = report.method_params;
  pipeline["silhouette"] = real_or_null(report.silhouette);
  pipeline["tau"] = round_significant(report.tau);
  pipeline["noise_normalization"] = report.noise_normalization;
  pipeline["noise_in_denominator"] = report.noise_in_denominator;
  pipeline["partial"] = report.partial;
  pipeline["error"] = report.error ? json(*report.error) : json(nullptr);
  json noise = json::array();
  for (double v : report.noise_per_cluster) noise.push_back(round_significant(v));
  pipeline["noise_per_cluster"] = noise;
  pipeline["labels"] = report.labels;
  doc["pipeline"] = pipeline;

  json habits = json::array();
  for (const auto& rh : report.habits) {
    const auto& h = rh.profile;
    habits.push_back({{"cluster_id", h.cluster_id},
                      {"mean_start_hours", round_significant(h.mean_start)},
                      {"std_start_hours", round_significant(h.std_start)},
                      {"mean_end_hours", round_significant(h.mean_end)},
                      {"std_end_hours", round_significant(h.std_end)},
                      {"support", h.support},
                      {"total_n", h.total_n},
                      {"confidence", round_significant(h.confidence)},
                      {"clock_render", rh.clock_render}});
  }
  doc["habits"] = habits;

  json trace = json::array();
  for (const auto& e : report.trace) {
    json entry = {{"stage", e.stage},
                  {"method", e.method},
                  {"k_or_eps", round_significant(e.k_or_eps)},
                  {"silhouette", real_or_null(e.silhouette)},
                  {"worst_Pr", real_or_null(e.worst_pr)},
                  {"clusters", e.clusters},
                  {"verdict", e.verdict}};
    trace.push_back(entry);
  }
  doc["trace"] = trace;
  return doc.dump(2) + "\n";
}

Report parse_report(std::string_view text) {
  try {
    const auto doc = json::parse(text);
    Report r;
    r.activity = doc.at("activity").get<std::string>();
    const auto& source = doc.at("source");
    r.source_file = source.at("file").get<std::string>();
    r.parameters = source.at("parameters").get<std::map<std::string, std::string>>();

    const auto& p = doc.at("pipeline");
    r.chosen_method = optional_string(p, "chosen_method");
    r.method_params = p.at("params").get<std::map<std::string, std::string>>();
    r.silhouette = optional_real(p, "silhouette");
    r.tau = p.at("tau").get<double>();
    r.noise_normalization = p.at("noise_normalization").get<std::string>();
    r.noise_in_denominator = p.at("noise_in_denominator").get<bool>();
    r.partial = p.at("partial").get<bool>();
    r.error = optional_string(p, "error");
    r.noise_per_cluster = p.at("noise_per_cluster").get<std::vector<double>>();
    r.labels = p.at("labels").get<std::vector<int>>();

    for (const auto& h : doc.at("habits")) {
      ReportHabit rh;
      rh.profile.cluster_id = h.at("cluster_id").get<int>();
      rh.profile.mean_start = h.at("mean_start_hours").get<double>();
      rh.profile.std_start = h.at("std_start_hours").get<double>();
      rh.profile.mean_end = h.at("mean_end_hours").get<double>();
      rh.profile.std_end = h.at("std_end_hours").get<double>();
      rh.profile.support = h.at("support").get<std::size_t>();
      rh.profile.total_n = h.at("total_n").get<std::size_t>();
      rh.profile.confidence = h.at("confidence").get<double>();
      rh.clock_render = h.at("clock_render").get<std::string>();
      r.habits.push_back(std::move(rh));
    }
    for (const auto& t : doc.at("trace")) {
      ReportTraceEntry e;
      e.stage = t.at("stage").get<std::string>();
      e.method = t.at("method").get<std::string>();
      e.k_or_eps = t.at("k_or_eps").get<double>();
      e.silhouette = optional_real(t, "silhouette");
      e.worst_pr = optional_real(t, "worst_Pr");
      e.clusters = t.at("clusters").get<int>();
      e.verdict = t.at("verdict").get<std::string>();
      r.trace.push_back(std::move(e));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRow, std::string("report: ") + e.what());
  }
}

}  // namespace habitminer
