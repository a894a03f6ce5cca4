#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "habitminer/clustering.hpp"
#include "habitminer/core.hpp"

namespace habitminer {

/// Typical time band of one cluster. Times are decimal hours; stds are
/// population standard deviations.
struct HabitProfile {
  int cluster_id = 0;
  double mean_start = 0.0;
  double std_start = 0.0;
  double mean_end = 0.0;
  double std_end = 0.0;
  std::size_t support = 0;
  std::size_t total_n = 0;
  double confidence = 0.0;

  friend bool operator==(const HabitProfile&, const HabitProfile&) = default;
};

/// One profile per non-noise cluster, most confident first (earlier
/// mean_start breaks ties). confidence = support / total_n where total_n
/// counts noise points unless `noise_in_denominator` is false.
std::vector<HabitProfile> extract_habits(const PointSet& points, const Clustering& clustering,
                                         bool noise_in_denominator = true);

/// "8:30am", "12:05pm", "12:30am (+1 day)" for hours >= 24.
std::string render_clock(double hours);
/// "8:30am ± 18 minutes"
std::string render_band(double mean_hours, double std_hours);
/// "8:30am ± 18 minutes - 8:38am ± 12 minutes (18% confidence)"
std::string render_habit(const HabitProfile& habit);

}  // namespace habitminer
