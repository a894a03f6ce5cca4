#include "habitminer/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iterator>

#include "habitminer/error.hpp"

namespace habitminer {

namespace {

using std::chrono::microseconds;

constexpr double kMicrosPerHour = 3'600'000'000.0;
constexpr auto kDay = std::chrono::hours{24};

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

void validate(const ActivityInterval& interval) {
  const double s = interval.start_hours;
  const double e = interval.end_hours;
  if (!std::isfinite(s) || !std::isfinite(e))
    throw Error(ErrorCode::InvariantViolation, "non-finite interval bound");
  if (!interval.date.ok())
    throw Error(ErrorCode::InvariantViolation, "invalid calendar date");
  if (s < 0.0 || s >= 24.0)
    throw Error(ErrorCode::InvariantViolation, "start_hours outside [0, 24)");
  if (e < s) throw Error(ErrorCode::InvariantViolation, "end_hours < start_hours");
  if (e - s >= 24.0)
    throw Error(ErrorCode::InvariantViolation, "interval spans a full day or more");
}

PointSet to_point_set(std::span<const ActivityInterval> intervals, std::string activity) {
  PointSet set;
  set.activity = std::move(activity);
  if (set.activity.empty() && !intervals.empty()) set.activity = intervals.front().activity;
  set.points.reserve(intervals.size());
  for (const auto& iv : intervals) set.points.push_back({iv.start_hours, iv.end_hours});
  return set;
}

std::vector<std::pair<std::string, std::vector<ActivityInterval>>> group_by_activity(
    std::span<const ActivityInterval> intervals) {
  std::vector<std::pair<std::string, std::vector<ActivityInterval>>> groups;
  for (const auto& iv : intervals) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == iv.activity; });
    if (it == groups.end()) {
      groups.emplace_back(iv.activity, std::vector<ActivityInterval>{});
      it = std::prev(groups.end());
    }
    it->second.push_back(iv);
  }
  return groups;
}

Timestamp make_timestamp(Date date, microseconds time_of_day) {
  return Timestamp{std::chrono::sys_days{date}} + time_of_day;
}

ActivityInterval normalize_interval(Timestamp start, Timestamp end, std::string activity) {
  if (end <= start)
    throw Error(ErrorCode::NonPositiveDuration, "interval end is not after its start");
  if (end - start >= kDay)
    throw Error(ErrorCode::OverlongInterval, "interval lasts 24 hours or more");

  const auto midnight = std::chrono::floor<std::chrono::days>(start);
  const auto start_us = (start - midnight).count();
  const auto end_us = (end - midnight).count();

  ActivityInterval out;
  out.date = Date{midnight};
  out.start_hours = static_cast<double>(start_us) / kMicrosPerHour;
  out.end_hours = static_cast<double>(end_us) / kMicrosPerHour;
  out.activity = std::move(activity);
  return out;
}

std::pair<Timestamp, Timestamp> interval_bounds(const ActivityInterval& interval) {
  const Timestamp midnight{std::chrono::sys_days{interval.date}};
  const auto to_us = [](double hours) {
    return microseconds{std::llround(hours * kMicrosPerHour)};
  };
  return {midnight + to_us(interval.start_hours), midnight + to_us(interval.end_hours)};
}

std::optional<Date> parse_iso_date(std::string_view text) {
  // YYYY-MM-DD
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d))
    return std::nullopt;
  Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_iso_date(Date date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::optional<microseconds> parse_clock(std::string_view text) {
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos) return std::nullopt;
  unsigned h = 0, m = 0, s = 0;
  if (!parse_int(text.substr(0, c1), h)) return std::nullopt;
  auto rest = text.substr(c1 + 1);
  const auto c2 = rest.find(':');
  long long frac_us = 0;
  if (c2 == std::string_view::npos) {
    if (!parse_int(rest, m)) return std::nullopt;
  } else {
    if (!parse_int(rest.substr(0, c2), m)) return std::nullopt;
    auto sec = rest.substr(c2 + 1);
    const auto dot = sec.find('.');
    if (dot != std::string_view::npos) {
      auto frac = sec.substr(dot + 1);
      sec = sec.substr(0, dot);
      if (frac.empty() || frac.size() > 9) return std::nullopt;
      long long digits = 0;
      if (!parse_int(frac, digits)) return std::nullopt;
      // Scale to microseconds, truncating anything finer.
      for (auto n = frac.size(); n < 6; ++n) digits *= 10;
      for (auto n = frac.size(); n > 6; --n) digits /= 10;
      frac_us = digits;
    }
    if (!parse_int(sec, s)) return std::nullopt;
  }
  if (h > 23 || m > 59 || s > 60) return std::nullopt;
  return std::chrono::hours{h} + std::chrono::minutes{m} + std::chrono::seconds{s} +
         microseconds{frac_us};
}

}  // namespace habitminer
