#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "habitminer/habits.hpp"
#include "habitminer/pipeline.hpp"

namespace habitminer {

struct ReportHabit {
  HabitProfile profile;
  std::string clock_render;
};

struct ReportTraceEntry {
  std::string stage;
  std::string method;
  double k_or_eps = 0.0;
  std::optional<double> silhouette;
  std::optional<double> worst_pr;
  int clusters = 0;
  std::string verdict;
};

/// In-memory form of one activity's report document. Reals are stored
/// rounded to 9 significant digits, exactly as serialized.
struct Report {
  std::string activity;
  std::string source_file;
  std::map<std::string, std::string> parameters;

  std::optional<std::string> chosen_method;
  std::map<std::string, std::string> method_params;
  std::optional<double> silhouette;
  double tau = 4.0;
  std::string noise_normalization = "pairs";
  bool noise_in_denominator = true;
  bool partial = false;
  std::optional<std::string> error;
  std::vector<double> noise_per_cluster;
  /// Final cluster id per input point, -1 for noise.
  std::vector<int> labels;

  std::vector<ReportHabit> habits;
  std::vector<ReportTraceEntry> trace;
};

double round_significant(double value, int digits = 9);

Report make_report(std::string activity, std::string source_file,
                   std::map<std::string, std::string> parameters, const PipelineResult& result,
                   const PipelineConfig& config);

/// Report for an activity whose profiling failed outright.
Report make_error_report(std::string activity, std::string source_file,
                         std::map<std::string, std::string> parameters, std::string error,
                         std::size_t point_count, const PipelineConfig& config);

/// Throws InvariantViolation if the report is internally inconsistent.
void validate_report(const Report& report);

/// Pretty-printed JSON, byte-deterministic, trailing newline.
std::string format_report(const Report& report);
Report parse_report(std::string_view text);

}  // namespace habitminer
