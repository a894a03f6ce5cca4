#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "habitminer/error.hpp"
#include "habitminer/ingest.hpp"

using namespace habitminer;
using namespace std::chrono;

namespace {

constexpr Date kDay{year{2013}, September, day{26}};

std::vector<PowerSample> trace(std::initializer_list<double> watts, seconds spacing, seconds offset = {}) {
  std::vector<PowerSample> out;
  auto t = make_timestamp(kDay, hours{9}) + offset;
  for (double w : watts) {
    out.push_back({t, w});
    t += spacing;
  }
  return out;
}

double total_hours(const std::vector<ActivityInterval>& ivs) {
  double sum = 0;
  for (const auto& iv : ivs) sum += iv.end_hours - iv.start_hours;
  return sum;
}

std::ifstream fixture(const char* name) {
  std::ifstream in(std::string(HABITMINER_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  return in;
}

}  // namespace

TEST_CASE("one burst of three ON samples becomes a 120 s interval") {
  const auto ivs = segment_power(trace({2, 11, 11, 11, 2}, seconds{60}), IngestConfig{}, "kettle");
  REQUIRE(ivs.size() == 1);
  CHECK(ivs[0].start_hours == doctest::Approx(9.0 + 1.0 / 60));
  CHECK((ivs[0].end_hours - ivs[0].start_hours) * 3600 == doctest::Approx(120.0));
  CHECK(ivs[0].activity == "kettle");
}

TEST_CASE("threshold is strict and quiet traces yield nothing") {
  CHECK(segment_power(trace({2, 5, 5, 5, 5, 1}, seconds{60}), IngestConfig{}, "x").empty());
  CHECK(segment_power(trace({0, 0, 0}, seconds{60}), IngestConfig{}, "x").empty());
}

TEST_CASE("runs closer than the merge gap are joined") {
  // ON 0..90 s and 120..210 s at 15 s spacing, one OFF sample in between
  std::vector<double> w;
  for (int t = 0; t <= 210; t += 15) w.push_back(t == 105 ? 0.0 : 50.0);
  std::vector<PowerSample> samples;
  const auto t0 = make_timestamp(kDay, hours{9});
  for (std::size_t i = 0; i < w.size(); ++i) samples.push_back({t0 + seconds{15 * i}, w[i]});

  auto ivs = segment_power(samples, IngestConfig{}, "x");
  REQUIRE(ivs.size() == 1);
  CHECK((ivs[0].end_hours - ivs[0].start_hours) * 3600 == doctest::Approx(210.0));

  IngestConfig strict;
  strict.merge_gap_seconds = 10;
  strict.min_duration_seconds = 0;
  ivs = segment_power(samples, strict, "x");
  CHECK(ivs.size() == 2);
}

TEST_CASE("short runs are dropped, unsorted input is sorted first") {
  auto samples = trace({50, 50, 0, 0, 0, 50, 50, 50, 50}, seconds{60});
  std::reverse(samples.begin(), samples.end());
  const auto ivs = segment_power(samples, IngestConfig{}, "x");
  REQUIRE(ivs.size() == 1);
  CHECK(ivs[0].start_hours == doctest::Approx(9.0 + 5.0 / 60));
}

TEST_CASE("raising the threshold never adds ON time") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> watts(0.0, 40.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PowerSample> samples;
    const auto t0 = make_timestamp(kDay, hours{6});
    for (int i = 0; i < 300; ++i) samples.push_back({t0 + seconds{30 * i}, watts(rng)});
    IngestConfig cfg;
    cfg.merge_gap_seconds = 0;
    cfg.min_duration_seconds = 0;
    double previous = 1e300;
    for (double th : {1.0, 5.0, 10.0, 20.0, 30.0, 39.0}) {
      cfg.power_threshold_watts = th;
      const auto ivs = segment_power(samples, cfg, "x");
      const double total = total_hours(ivs);
      CHECK(total <= previous + 1e-12);
      previous = total;
      for (std::size_t i = 1; i < ivs.size(); ++i) CHECK(ivs[i - 1].end_hours < ivs[i].start_hours);
    }
  }
}

TEST_CASE("REFIT fixture parses to its single appliance burst") {
  auto in = fixture("refit_house.csv");
  const auto ivs = parse_power_csv(in, "Appliance5", IngestConfig{});
  REQUIRE(ivs.size() == 1);
  CHECK(ivs[0].date == kDay);
  CHECK(ivs[0].activity == "Appliance5");
  CHECK(ivs[0].start_hours == doctest::Approx(9.0 + 57.0 / 60 + 9.0 / 3600).epsilon(1e-12));
  CHECK(ivs[0].end_hours == doctest::Approx(9.0 + 59.0 / 60 + 9.0 / 3600).epsilon(1e-12));

  auto quiet = fixture("refit_house.csv");
  CHECK(parse_power_csv(quiet, "Appliance1", IngestConfig{}).empty());
}

TEST_CASE("power CSV errors") {
  {
    std::istringstream in("Time,Appliance1\n2013-09-26 09:00:00,3\n");
    try {
      parse_power_csv(in, "Appliance7", IngestConfig{});
      FAIL("expected UnknownColumn");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownColumn);
    }
  }
  const std::string bad =
      "Time,Appliance1\n"
      "2013-09-26 09:00:00,30\n"
      "2013-09-26 09:01:00,abc\n"
      "2013-09-26 09:02:00,30\n"
      "2013-09-26 09:03:00,30,7\n"
      "2013-09-26 09:04:00,30\n";
  {
    std::istringstream in(bad);
    try {
      parse_power_csv(in, "Appliance1", IngestConfig{});
      FAIL("expected MalformedRow");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedRow);
      CHECK(e.line() == 3);
    }
  }
  {
    std::istringstream in(bad);
    IngestConfig cfg;
    cfg.skip_errors = true;
    IngestDiagnostics diag;
    const auto ivs = parse_power_csv(in, "Appliance1", cfg, &diag, "heater");
    REQUIRE(diag.skipped_rows.size() == 2);
    CHECK(diag.skipped_rows[0].line == 3);
    CHECK(diag.skipped_rows[1].line == 5);
    REQUIRE(ivs.size() == 1);
    CHECK(ivs[0].activity == "heater");
    CHECK(ivs[0].end_hours - ivs[0].start_hours == doctest::Approx(4.0 / 60));
  }
}

TEST_CASE("Unix column is used when Time is absent") {
  std::istringstream in("Unix,Appliance1\n0,0\n60,9\n120,9\n180,9\n240,0\n");
  const auto ivs = parse_power_csv(in, "Appliance1", IngestConfig{});
  REQUIRE(ivs.size() == 1);
  CHECK(ivs[0].date == Date{year{1970}, January, day{1}});
  CHECK(ivs[0].start_hours == doctest::Approx(1.0 / 60));
}

TEST_CASE("CASAS fixture: four Sleep rows make one interval") {
  auto in = fixture("casas_sleep.txt");
  const auto ivs = parse_event_log(in, "Sleep");
  REQUIRE(ivs.size() == 1);
  CHECK(ivs[0].date == Date{year{2011}, June, day{15}});
  CHECK(ivs[0].start_hours == doctest::Approx(0.109).epsilon(1e-3));
  CHECK(ivs[0].end_hours == doctest::Approx(0.417).epsilon(1e-3));
  CHECK(ivs[0].start_hours == doctest::Approx((6 * 60 + 32.834414) / 3600).epsilon(1e-12));
  CHECK(ivs[0].end_hours == doctest::Approx((25 * 60 + 1.892474) / 3600).epsilon(1e-12));
}

TEST_CASE("event log runs are split by other labels") {
  const std::string log =
      "2011-06-15 08:00:00 M1 ON Sleep\n"
      "2011-06-15 08:10:00 M1 OFF Sleep\n"
      "2011-06-15 08:20:00 M2 ON Cook\n"
      "2011-06-15 09:00:00 M1 ON Sleep\n"
      "2011-06-15 09:30:00 M1 OFF Sleep\n";
  std::istringstream in(log);
  const auto ivs = parse_event_log(in, "Sleep");
  REQUIRE(ivs.size() == 2);
  CHECK(ivs[0].start_hours == 8.0);
  CHECK(ivs[1].end_hours == 9.5);
}

TEST_CASE("single-row runs have no duration and are dropped") {
  const std::string log =
      "2011-06-15,08:00:00,M1,ON,Sleep\n"
      "2011-06-15,08:10:00,M1,OFF,Sleep\n"
      "2011-06-15,08:20:00,M2,ON,Cook\n"
      "2011-06-15,09:00:00,M1,ON,Sleep\n";
  std::istringstream in(log);
  const auto ivs = parse_event_log(in, "Sleep");
  REQUIRE(ivs.size() == 1);
  CHECK(ivs[0].end_hours == doctest::Approx(8.0 + 10.0 / 60));
}

TEST_CASE("event log runs crossing midnight wrap past 24") {
  std::istringstream in(
      "date time sensor message activity\n"
      "2011-06-15 23:50:00 M1 ON Sleep\n"
      "2011-06-16 00:20:00 M1 OFF Sleep\n");
  const auto ivs = parse_event_log(in, "Sleep");
  REQUIRE(ivs.size() == 1);
  CHECK(ivs[0].start_hours == doctest::Approx(23.0 + 50.0 / 60));
  CHECK(ivs[0].end_hours == doctest::Approx(24.0 + 20.0 / 60));
}

TEST_CASE("unknown activity is an empty result") {
  auto in = fixture("casas_sleep.txt");
  try {
    parse_event_log(in, "Teleport");
    FAIL("expected EmptyResult");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyResult);
  }
}

TEST_CASE("malformed event rows carry their line number") {
  const std::string log =
      "2011-06-15 08:00:00 M1 ON Sleep\n"
      "2011-06-15 8 o'clock\n"
      "2011-06-15 08:10:00 M1 OFF Sleep\n";
  std::istringstream in(log);
  try {
    parse_event_log(in, "Sleep");
    FAIL("expected MalformedRow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedRow);
    CHECK(e.line() == 2);
  }
  std::istringstream again(log);
  IngestDiagnostics diag;
  CHECK(parse_event_log(again, "Sleep", true, &diag).size() == 1);
  CHECK(diag.skipped_rows.size() == 1);
}

TEST_CASE("intervals CSV round-trips exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> s(0.0, 24.0), d(0.0, 23.99);
  std::vector<ActivityInterval> ivs;
  for (int i = 0; i < 200; ++i) {
    const double start = s(rng);
    ivs.push_back({Date{year{2020}, January, day{1}} + months{i % 12},
                   start, start + d(rng), i % 3 == 0 ? "Wash, dishes" : i % 3 == 1 ? "tv" : "say \"hi\""});
  }
  ivs.push_back({Date{year{2020}, May, day{5}}, 8.5, 8.75, "plain"});
  std::ostringstream out;
  write_intervals_csv(out, ivs);
  CHECK(out.str().rfind(std::string(kIntervalsHeader) + "\n", 0) == 0);
  CHECK(out.str().find("8.5000,8.7500") != std::string::npos);
  std::istringstream in(out.str());
  CHECK(read_intervals_csv(in) == ivs);
}

TEST_CASE("intervals CSV errors") {
  {
    std::istringstream in(std::string(kIntervalsHeader) + "\n");
    CHECK(read_intervals_csv(in).empty());
  }
  {
    std::istringstream in(std::string(kIntervalsHeader) + "\na,2020-01-01,1.0,2.0\na,2020-01-02,9.0,8.0\n");
    try {
      read_intervals_csv(in);
      FAIL("expected InvariantViolation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvariantViolation);
      CHECK(e.line() == 3);
    }
  }
  {
    std::istringstream in(std::string(kIntervalsHeader) + "\na,2020-01-01,one,2.0\n");
    CHECK_THROWS_AS(read_intervals_csv(in), Error);
  }
  {
    std::istringstream in("when,what\n");
    CHECK_THROWS_AS(read_intervals_csv(in), Error);
  }
}

TEST_CASE("format_hours keeps at least four decimals") {
  CHECK(format_hours(8.5) == "8.5000");
  CHECK(format_hours(0.0) == "0.0000");
  CHECK(format_hours(0.1234567) == "0.1234567");
  CHECK(std::stod(format_hours(1.0 / 3)) == 1.0 / 3);
}
