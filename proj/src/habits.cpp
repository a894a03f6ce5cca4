#include "habitminer/habits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "habitminer/error.hpp"

namespace habitminer {

std::vector<HabitProfile> extract_habits(const PointSet& points, const Clustering& clustering,
                                         bool noise_in_denominator) {
  if (clustering.labels.size() != points.size())
    throw Error(ErrorCode::InvalidArgument, "label count does not match point count");
  if (clustering.k < 1)
    throw Error(ErrorCode::NoAcceptedClusters, "clustering has no non-noise cluster");

  const std::size_t total =
      noise_in_denominator ? points.size() : points.size() - clustering.noise_count();

  std::vector<HabitProfile> habits;
  for (int c = 0; c < clustering.k; ++c) {
    const auto members = clustering.members(c);
    if (members.empty())
      throw Error(ErrorCode::InvariantViolation, "cluster " + std::to_string(c) + " is empty");
    const double q = static_cast<double>(members.size());

    HabitProfile h;
    h.cluster_id = c;
    for (auto i : members) {
      h.mean_start += points.points[i].start;
      h.mean_end += points.points[i].end;
    }
    h.mean_start /= q;
    h.mean_end /= q;
    for (auto i : members) {
      const double ds = points.points[i].start - h.mean_start;
      const double de = points.points[i].end - h.mean_end;
      h.std_start += ds * ds;
      h.std_end += de * de;
    }
    h.std_start = std::sqrt(h.std_start / q);
    h.std_end = std::sqrt(h.std_end / q);
    h.support = members.size();
    h.total_n = total;
    h.confidence = q / static_cast<double>(total);
    habits.push_back(h);
  }
  std::stable_sort(habits.begin(), habits.end(), [](const HabitProfile& a, const HabitProfile& b) {
    if (a.support != b.support) return a.support > b.support;
    return a.mean_start < b.mean_start;
  });
  return habits;
}

std::string render_clock(double hours) {
  auto minutes = static_cast<long long>(std::llround(hours * 60.0));
  if (minutes < 0) minutes = 0;
  const long long day = minutes / (24 * 60);
  const long long in_day = minutes % (24 * 60);
  const long long h24 = in_day / 60;
  const long long mm = in_day % 60;
  long long h12 = h24 % 12;
  if (h12 == 0) h12 = 12;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%lld:%02lld%s", h12, mm, h24 < 12 ? "am" : "pm");
  std::string out = buf;
  if (day > 0) out += " (+" + std::to_string(day) + (day == 1 ? " day)" : " days)");
  return out;
}

std::string render_band(double mean_hours, double std_hours) {
  const auto minutes = std::llround(std_hours * 60.0);
  return render_clock(mean_hours) + " ± " + std::to_string(minutes) +
         (minutes == 1 ? " minute" : " minutes");
}

std::string render_habit(const HabitProfile& habit) {
  const auto pct = std::llround(habit.confidence * 100.0);
  return render_band(habit.mean_start, habit.std_start) + " - " +
         render_band(habit.mean_end, habit.std_end) + " (" + std::to_string(pct) +
         "% confidence)";
}

}  // namespace habitminer
