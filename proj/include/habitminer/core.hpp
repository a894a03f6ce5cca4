#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace habitminer {

/// Wall-clock instant with no zone attached. Only the calendar date and the
/// clock reading are ever extracted from it.
using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;
using Date = std::chrono::year_month_day;

/// One occurrence of an activity: the (start, end) tuple in decimal hours.
/// end_hours may exceed 24 when the occurrence runs past midnight.
struct ActivityInterval {
  Date date{};
  double start_hours = 0.0;
  double end_hours = 0.0;
  std::string activity;

  friend bool operator==(const ActivityInterval&, const ActivityInterval&) = default;
};

/// Throws InvariantViolation if `interval` breaks the tuple bounds.
void validate(const ActivityInterval& interval);

struct Point {
  double start = 0.0;
  double end = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct PointSet {
  std::vector<Point> points;
  std::string activity;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// Point i of the result corresponds to interval i.
PointSet to_point_set(std::span<const ActivityInterval> intervals,
                      std::string activity = {});

/// Groups intervals by activity label, keeping each group in input order.
/// Groups are ordered by first appearance.
std::vector<std::pair<std::string, std::vector<ActivityInterval>>> group_by_activity(
    std::span<const ActivityInterval> intervals);

ActivityInterval normalize_interval(Timestamp start, Timestamp end,
                                    std::string activity = {});

/// Inverse of normalize_interval: the two instants the interval denotes.
std::pair<Timestamp, Timestamp> interval_bounds(const ActivityInterval& interval);

Timestamp make_timestamp(Date date, std::chrono::microseconds time_of_day);

// Civil date/time text helpers shared by the parsers.
std::optional<Date> parse_iso_date(std::string_view text);
std::string format_iso_date(Date date);
/// "HH:MM[:SS[.ffffff]]" with optional trailing AM/PM marker handled by caller.
std::optional<std::chrono::microseconds> parse_clock(std::string_view text);

}  // namespace habitminer
