#include "habitminer/synth.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <random>

#include "json.hpp"

#include "habitminer/error.hpp"

namespace habitminer {

namespace {

bool valid_tuple(double s, double e) { return s >= 0.0 && s < 24.0 && e >= s && e - s < 24.0; }

constexpr int kMaxResample = 100;

}  // namespace

void PlantedSpec::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidSpec, what);
  };
  require(scatter_count >= 0, "scatter_count must be >= 0");
  require(!clusters.empty() || scatter_count > 0, "spec generates no points");
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const auto& c = clusters[i];
    const std::string where = "cluster " + std::to_string(i) + ": ";
    require(c.count >= 1, where + "count must be >= 1");
    require(std::isfinite(c.std) && c.std >= 0.0, where + "std must be >= 0");
    require(valid_tuple(c.center_start, c.center_end), where + "center is not a valid tuple");
  }
  require(first_date.ok(), "first_date is not a valid date");
}

PlantedData generate(const PlantedSpec& spec) {
  spec.validate();
  std::mt19937_64 engine(spec.seed);
  PlantedData data;
  data.points.activity = spec.activity;

  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    const auto& cl = spec.clusters[c];
    std::normal_distribution<double> ds(cl.center_start, cl.std);
    std::normal_distribution<double> de(cl.center_end, cl.std);
    for (int i = 0; i < cl.count; ++i) {
      double s = cl.center_start;
      double e = cl.center_end;
      if (cl.std > 0.0) {
        int tries = 0;
        do {
          s = ds(engine);
          e = de(engine);
        } while (!valid_tuple(s, e) && ++tries < kMaxResample);
        if (!valid_tuple(s, e)) {
          s = std::clamp(s, 0.0, std::nextafter(24.0, 0.0));
          e = std::clamp(e, s, std::nextafter(s + 24.0, s));
        }
      }
      data.points.points.push_back({s, e});
      data.truth.push_back(static_cast<int>(c));
    }
  }

  std::uniform_real_distribution<double> start(0.0, 24.0);
  std::uniform_real_distribution<double> length(0.0, 12.0);
  for (int i = 0; i < spec.scatter_count; ++i) {
    const double s = start(engine);
    data.points.points.push_back({s, s + length(engine)});
    data.truth.push_back(-1);
  }
  return data;
}

std::vector<ActivityInterval> to_intervals(const PlantedData& data, const PlantedSpec& spec) {
  std::vector<ActivityInterval> out;
  out.reserve(data.points.size());
  const std::chrono::sys_days base{spec.first_date};
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    ActivityInterval iv;
    iv.date = Date{base + std::chrono::days{static_cast<int>(i)}};
    iv.start_hours = data.points.points[i].start;
    iv.end_hours = data.points.points[i].end;
    iv.activity = spec.activity;
    out.push_back(std::move(iv));
  }
  return out;
}

PlantedSpec read_planted_spec(std::istream& in) {
  try {
    const auto doc = nlohmann::json::parse(in);
    PlantedSpec spec;
    for (const auto& c : doc.at("clusters")) {
      PlantedCluster cl;
      cl.center_start = c.at("center_start").get<double>();
      cl.center_end = c.at("center_end").get<double>();
      cl.std = c.at("std").get<double>();
      cl.count = c.at("count").get<int>();
      spec.clusters.push_back(cl);
    }
    spec.scatter_count = doc.value("scatter_count", 0);
    spec.seed = doc.value("seed", std::uint64_t{0});
    spec.activity = doc.value("activity", spec.activity);
    if (doc.contains("first_date")) {
      auto date = parse_iso_date(doc.at("first_date").get<std::string>());
      if (!date) throw Error(ErrorCode::InvalidSpec, "first_date must be YYYY-MM-DD");
      spec.first_date = *date;
    }
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, e.what());
  }
}

}  // namespace habitminer
