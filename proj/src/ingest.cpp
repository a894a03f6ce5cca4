#include "habitminer/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>

#include "habitminer/error.hpp"

namespace habitminer {

namespace {

using std::chrono::microseconds;
using std::chrono::seconds;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

/// "M/D/YYYY" into a civil date.
std::optional<Date> parse_us_date(std::string_view text) {
  const auto s1 = text.find('/');
  const auto s2 = text.rfind('/');
  if (s1 == std::string_view::npos || s1 == s2) return std::nullopt;
  unsigned m = 0, d = 0;
  int y = 0;
  auto num = [](std::string_view t, auto& out) {
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc{} && p == t.data() + t.size() && !t.empty();
  };
  if (!num(text.substr(0, s1), m) || !num(text.substr(s1 + 1, s2 - s1 - 1), d) ||
      !num(text.substr(s2 + 1), y))
    return std::nullopt;
  Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

/// Accepts "YYYY-MM-DD HH:MM:SS[.f]", "YYYY-MM-DDTHH:MM:SS" and the
/// "M/D/YYYY H:MM:SS AM" spreadsheet rendering.
std::optional<Timestamp> parse_datetime(std::string_view text) {
  text = trim(text);
  auto sep = text.find_first_of(" T");
  if (sep == std::string_view::npos) return std::nullopt;
  const auto date_part = text.substr(0, sep);
  auto time_part = trim(text.substr(sep + 1));

  std::optional<Date> date = parse_iso_date(date_part);
  if (!date) date = parse_us_date(date_part);
  if (!date) return std::nullopt;

  int meridiem = 0;  // 0 none, 1 am, 2 pm
  if (time_part.size() > 2) {
    auto tail = time_part.substr(time_part.size() - 2);
    const char a = static_cast<char>(std::toupper(static_cast<unsigned char>(tail[0])));
    const char b = static_cast<char>(std::toupper(static_cast<unsigned char>(tail[1])));
    if ((a == 'A' || a == 'P') && b == 'M') {
      meridiem = a == 'A' ? 1 : 2;
      time_part = trim(time_part.substr(0, time_part.size() - 2));
    }
  }
  auto clock = parse_clock(time_part);
  if (!clock) return std::nullopt;
  if (meridiem != 0) {
    const auto h = std::chrono::floor<std::chrono::hours>(*clock).count();
    if (h < 1 || h > 12) return std::nullopt;
    if (meridiem == 1 && h == 12) *clock -= std::chrono::hours{12};
    if (meridiem == 2 && h != 12) *clock += std::chrono::hours{12};
  }
  return make_timestamp(*date, *clock);
}

class RowSink {
 public:
  RowSink(bool skip, IngestDiagnostics* diag) : skip_(skip), diag_(diag) {}
  void fail(std::size_t line, const std::string& message) {
    if (!skip_) throw Error(ErrorCode::MalformedRow, message, line);
    if (diag_) diag_->skipped_rows.push_back({line, message});
  }

 private:
  bool skip_;
  IngestDiagnostics* diag_;
};

void note_overlong(IngestDiagnostics* diag) {
  if (diag) ++diag->dropped_overlong;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::vector<ActivityInterval> segment_power(std::vector<PowerSample> samples,
                                            const IngestConfig& config, const std::string& activity,
                                            IngestDiagnostics* diagnostics) {
  std::stable_sort(samples.begin(), samples.end(), [](const PowerSample& a, const PowerSample& b) {
    return a.timestamp < b.timestamp;
  });

  struct Run {
    Timestamp first;
    Timestamp last;
  };
  std::vector<Run> runs;
  bool on = false;
  for (const auto& s : samples) {
    if (s.watts > config.power_threshold_watts) {
      if (on) {
        runs.back().last = s.timestamp;
      } else {
        runs.push_back({s.timestamp, s.timestamp});
        on = true;
      }
    } else {
      on = false;
    }
  }

  std::vector<Run> merged;
  const seconds gap{config.merge_gap_seconds};
  for (const auto& r : runs) {
    if (!merged.empty() && r.first - merged.back().last <= gap)
      merged.back().last = r.last;
    else
      merged.push_back(r);
  }

  std::vector<ActivityInterval> out;
  const seconds min_duration{config.min_duration_seconds};
  for (const auto& r : merged) {
    const auto duration = r.last - r.first;
    if (duration <= microseconds::zero() || duration < min_duration) continue;
    if (duration >= std::chrono::hours{24}) {
      note_overlong(diagnostics);
      continue;
    }
    out.push_back(normalize_interval(r.first, r.last, activity));
  }
  return out;
}

std::vector<ActivityInterval> parse_power_csv(std::istream& in, std::string_view appliance_column,
                                              const IngestConfig& config,
                                              IngestDiagnostics* diagnostics,
                                              std::string activity) {
  if (!(config.power_threshold_watts > 0.0))
    throw Error(ErrorCode::InvalidArgument, "power threshold must be positive");
  if (config.merge_gap_seconds < 0 || config.min_duration_seconds < 0)
    throw Error(ErrorCode::InvalidArgument, "gap and duration settings must be non-negative");

  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::MalformedRow, "power table has no header", 1);
  auto header = split_csv_line(line);
  for (auto& h : header) h = std::string(trim(h));

  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto value_col = column(appliance_column);
  if (!value_col)
    throw Error(ErrorCode::UnknownColumn, "no column named '" + std::string(appliance_column) + "'");
  const auto time_col = column("Time");
  const auto unix_col = column("Unix");
  if (!time_col && !unix_col)
    throw Error(ErrorCode::UnknownColumn, "table has neither a 'Time' nor a 'Unix' column");

  RowSink sink(config.skip_errors, diagnostics);
  std::vector<PowerSample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      sink.fail(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
      continue;
    }
    PowerSample sample;
    if (time_col) {
      auto ts = parse_datetime(fields[*time_col]);
      if (!ts) {
        sink.fail(line_no, "unparseable timestamp '" + fields[*time_col] + "'");
        continue;
      }
      sample.timestamp = *ts;
    } else {
      auto secs = parse_double(fields[*unix_col]);
      if (!secs || !std::isfinite(*secs)) {
        sink.fail(line_no, "unparseable unix time '" + fields[*unix_col] + "'");
        continue;
      }
      sample.timestamp = Timestamp{microseconds{std::llround(*secs * 1e6)}};
    }
    auto watts = parse_double(fields[*value_col]);
    if (!watts || !std::isfinite(*watts) || *watts < 0.0) {
      sink.fail(line_no, "invalid reading '" + fields[*value_col] + "'");
      continue;
    }
    sample.watts = *watts;
    samples.push_back(sample);
  }

  if (activity.empty()) activity = std::string(appliance_column);
  return segment_power(std::move(samples), config, activity, diagnostics);
}

std::vector<ActivityInterval> parse_event_log(std::istream& in, std::string_view activity_filter,
                                              bool skip_errors, IngestDiagnostics* diagnostics) {
  RowSink sink(skip_errors, diagnostics);
  std::vector<ActivityInterval> out;
  std::optional<Timestamp> run_first;
  Timestamp run_last{};
  std::size_t matched = 0;

  auto close_run = [&] {
    if (!run_first) return;
    const auto duration = run_last - *run_first;
    if (duration >= std::chrono::hours{24}) {
      note_overlong(diagnostics);
    } else if (duration > microseconds::zero()) {
      out.push_back(normalize_interval(*run_first, run_last, std::string(activity_filter)));
    }
    run_first.reset();
  };

  std::string line;
  std::size_t line_no = 0;
  bool seen_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;

    std::vector<std::string_view> fields;
    std::vector<std::string> csv_fields;
    if (view.find(',') != std::string_view::npos) {
      csv_fields = split_csv_line(view);
      for (auto& f : csv_fields) fields.push_back(trim(f));
    } else {
      fields = split_ws(view);
    }

    const bool first_row = !seen_row;
    seen_row = true;
    if (fields.size() < 2 || !parse_iso_date(fields[0])) {
      if (first_row) continue;  // header line
      sink.fail(line_no, "unparseable date");
      continue;
    }

    std::string_view label;
    if (fields.size() >= 8)
      label = fields[7];
    else if (fields.size() == 5)
      label = fields[4];
    else if (fields.size() != 4) {
      sink.fail(line_no, "unexpected field count " + std::to_string(fields.size()));
      continue;
    }

    auto clock = parse_clock(fields[1]);
    if (!clock) {
      sink.fail(line_no, "unparseable time '" + std::string(fields[1]) + "'");
      continue;
    }
    const Timestamp ts = make_timestamp(*parse_iso_date(fields[0]), *clock);

    if (label == activity_filter) {
      ++matched;
      if (!run_first) run_first = ts;
      run_last = ts;
    } else {
      close_run();
    }
  }
  close_run();

  if (matched == 0)
    throw Error(ErrorCode::EmptyResult,
                "no rows labelled '" + std::string(activity_filter) + "'");
  return out;
}

std::string format_hours(double hours) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, hours, std::chars_format::fixed);
  std::string text(buf, ptr);
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    text += '.';
    dot = text.size() - 1;
  }
  while (text.size() - dot - 1 < 4) text += '0';
  return text;
}

namespace {

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<ActivityInterval> read_intervals_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedRow, "missing header", 1);
  if (trim(line) != kIntervalsHeader)
    throw Error(ErrorCode::MalformedRow, "header must be '" + std::string(kIntervalsHeader) + "'", 1);

  std::vector<ActivityInterval> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4)
      throw Error(ErrorCode::MalformedRow, "expected 4 fields, got " + std::to_string(f.size()),
                  line_no);
    ActivityInterval iv;
    iv.activity = f[0];
    auto date = parse_iso_date(trim(f[1]));
    auto s = parse_double(f[2]);
    auto e = parse_double(f[3]);
    if (!date || !s || !e) throw Error(ErrorCode::MalformedRow, "unparseable field", line_no);
    iv.date = *date;
    iv.start_hours = *s;
    iv.end_hours = *e;
    try {
      validate(iv);
    } catch (const Error& err) {
      throw Error(ErrorCode::InvariantViolation, err.what(), line_no);
    }
    out.push_back(std::move(iv));
  }
  return out;
}

void write_intervals_csv(std::ostream& out, std::span<const ActivityInterval> intervals) {
  out << kIntervalsHeader << '\n';
  for (const auto& iv : intervals) {
    validate(iv);
    out << quote_if_needed(iv.activity) << ',' << format_iso_date(iv.date) << ','
        << format_hours(iv.start_hours) << ',' << format_hours(iv.end_hours) << '\n';
  }
}

}  // namespace habitminer
