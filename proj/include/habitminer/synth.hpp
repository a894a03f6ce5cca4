#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "habitminer/core.hpp"

namespace habitminer {

struct PlantedCluster {
  double center_start = 0.0;
  double center_end = 0.0;
  double std = 0.0;
  int count = 1;
};

struct PlantedSpec {
  std::vector<PlantedCluster> clusters;
  /// Uniform points over {(s, e) : 0 <= s < 24, s <= e < s + 12}.
  int scatter_count = 0;
  std::uint64_t seed = 0;
  std::string activity = "synthetic";
  Date first_date{std::chrono::year{2020}, std::chrono::January, std::chrono::day{1}};

  /// Throws InvalidSpec.
  void validate() const;
};

struct PlantedData {
  PointSet points;
  /// Planted cluster index per point; -1 for scatter.
  std::vector<int> truth;
};

/// Cluster points come first, in spec order, followed by the scatter.
PlantedData generate(const PlantedSpec& spec);

/// One interval per point, on consecutive days from spec.first_date.
std::vector<ActivityInterval> to_intervals(const PlantedData& data, const PlantedSpec& spec);

/// JSON spec: {"clusters": [{"center_start", "center_end", "std", "count"}],
/// "scatter_count", "seed", "activity"?, "first_date"?}.
PlantedSpec read_planted_spec(std::istream& in);

}  // namespace habitminer
