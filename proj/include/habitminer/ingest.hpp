#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "habitminer/core.hpp"

namespace habitminer {

struct IngestConfig {
  /// A sample is ON iff its reading is strictly above this.
  double power_threshold_watts = 5.0;
  /// ON runs separated by at most this many seconds are joined.
  long long merge_gap_seconds = 60;
  /// Intervals shorter than this are discarded.
  long long min_duration_seconds = 120;
  /// Skip malformed rows (recording them) instead of failing.
  bool skip_errors = false;
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct IngestDiagnostics {
  std::vector<RowError> skipped_rows;
  /// Runs lasting 24 h or more, which cannot be expressed as one tuple.
  std::size_t dropped_overlong = 0;
};

struct PowerSample {
  Timestamp timestamp;
  double watts = 0.0;
};

/// Turns a power trace into ON intervals labelled `activity`. Samples are
/// sorted by timestamp first (stable).
std::vector<ActivityInterval> segment_power(std::vector<PowerSample> samples,
                                            const IngestConfig& config, const std::string& activity,
                                            IngestDiagnostics* diagnostics = nullptr);

/// REFIT-style table: `Time` (or `Unix`) timestamp column plus numeric
/// appliance columns. Intervals are labelled `activity`, or the column name
/// when that is empty.
std::vector<ActivityInterval> parse_power_csv(std::istream& in, std::string_view appliance_column,
                                              const IngestConfig& config,
                                              IngestDiagnostics* diagnostics = nullptr,
                                              std::string activity = {});

/// CASAS-style log (`date time sensor t1 t2 message type activity`, or the
/// short `date time sensor message [activity]`). Each maximal run of rows
/// labelled `activity_filter` yields one interval.
std::vector<ActivityInterval> parse_event_log(std::istream& in, std::string_view activity_filter,
                                              bool skip_errors = false,
                                              IngestDiagnostics* diagnostics = nullptr);

inline constexpr std::string_view kIntervalsHeader = "activity,date,start_hours,end_hours";

std::vector<ActivityInterval> read_intervals_csv(std::istream& in);
void write_intervals_csv(std::ostream& out, std::span<const ActivityInterval> intervals);

/// Shortest round-trip fixed notation with at least four fractional digits.
std::string format_hours(double hours);

std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace habitminer
