// habitminer command-line front end: ingest, profile, plot, synth.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "habitminer/error.hpp"
#include "habitminer/ingest.hpp"
#include "habitminer/pipeline.hpp"
#include "habitminer/plot.hpp"
#include "habitminer/report.hpp"
#include "habitminer/synth.hpp"

namespace fs = std::filesystem;
using namespace habitminer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitEmpty = 3;
constexpr int kExitPartial = 4;

void write_atomically(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << bytes;
    if (!out.flush()) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return in;
}

std::vector<ActivityInterval> load_intervals(const std::string& path) {
  auto in = open_input(path);
  return read_intervals_csv(in);
}

std::string file_stem_for(const std::string& activity) {
  std::string out;
  for (char c : activity) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '-' || c == '_' || c == '.';
    out += keep ? c : '_';
  }
  if (out.empty() || out.front() == '.') out.insert(out.begin(), '_');
  return out;
}

std::string real_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::EmptyResult ? kExitEmpty : kExitBadInput;
}

// ---------------------------------------------------------------------------

struct IngestOptions {
  std::string format;
  std::string input;
  std::string output;
  std::string appliance;
  std::string activity;
  IngestConfig config;
};

int run_ingest(const IngestOptions& opt) {
  std::vector<ActivityInterval> intervals;
  IngestDiagnostics diag;
  if (opt.format == "refit") {
    if (opt.appliance.empty()) throw Error(ErrorCode::InvalidArgument, "--appliance is required for refit");
    auto in = open_input(opt.input);
    intervals = parse_power_csv(in, opt.appliance, opt.config, &diag, opt.activity);
  } else if (opt.format == "casas") {
    if (opt.activity.empty()) throw Error(ErrorCode::InvalidArgument, "--activity is required for casas");
    auto in = open_input(opt.input);
    intervals = parse_event_log(in, opt.activity, opt.config.skip_errors, &diag);
  } else {
    intervals = load_intervals(opt.input);
    if (!opt.activity.empty())
      std::erase_if(intervals, [&](const ActivityInterval& iv) { return iv.activity != opt.activity; });
  }

  for (const auto& row : diag.skipped_rows)
    std::cerr << "skipped line " << row.line << ": " << row.message << '\n';
  if (diag.dropped_overlong > 0)
    std::cerr << "dropped " << diag.dropped_overlong << " interval(s) lasting 24 h or more\n";
  if (intervals.empty()) {
    std::cerr << "no intervals extracted\n";
    return kExitEmpty;
  }

  std::ostringstream out;
  write_intervals_csv(out, intervals);
  write_atomically(opt.output, out.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ProfileOptions {
  std::string input;
  std::string output;
  std::string activity;
  std::string linkage = "ward";
  std::string normalization = "pairs";
  std::string noise_in_denominator = "true";
  PipelineConfig config;
};

int run_profile(ProfileOptions opt) {
  std::vector<ActivityInterval> intervals;
  try {
    intervals = load_intervals(opt.input);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitBadInput;
  }
  opt.config.linkage = parse_linkage(opt.linkage);
  opt.config.noise_normalization = parse_noise_normalization(opt.normalization);
  if (opt.noise_in_denominator != "true" && opt.noise_in_denominator != "false")
    throw Error(ErrorCode::InvalidArgument, "--noise-in-denominator takes true or false");
  opt.config.noise_in_denominator = opt.noise_in_denominator == "true";
  opt.config.validate();

  std::map<std::string, std::string> params{
      {"k_max", std::to_string(opt.config.k_max)},
      {"tau", real_text(opt.config.tau)},
      {"min_points", std::to_string(opt.config.min_points_v)},
      {"eps_decay", real_text(opt.config.eps_decay)},
      {"eps_floor", real_text(opt.config.eps_floor)},
      {"max_fallback_rounds", std::to_string(opt.config.max_fallback_rounds)},
      {"seed", std::to_string(opt.config.seed)},
      {"restarts", std::to_string(opt.config.kmeans_restarts)},
      {"linkage", opt.linkage},
      {"noise_normalization", opt.normalization},
      {"noise_in_denominator", opt.noise_in_denominator},
  };

  auto groups = group_by_activity(intervals);
  if (!opt.activity.empty()) {
    std::erase_if(groups, [&](const auto& g) { return g.first != opt.activity; });
    if (groups.empty()) {
      std::cerr << "no intervals for activity '" << opt.activity << "'\n";
      return kExitEmpty;
    }
  }
  if (groups.empty()) {
    std::cerr << "input holds no intervals\n";
    return kExitBadInput;
  }

  fs::create_directories(opt.output);
  int status = kExitOk;
  for (const auto& [activity, members] : groups) {
    const PointSet points = to_point_set(members, activity);
    Report report;
    try {
      const PipelineResult result = profile_activity(points, opt.config);
      report = make_report(activity, opt.input, params, result, opt.config);
    } catch (const Error& e) {
      report = make_error_report(activity, opt.input, params, e.what(), points.size(), opt.config);
    }
    validate_report(report);
    if (report.partial) status = kExitPartial;
    if (report.error) std::cerr << activity << ": " << *report.error << '\n';
    write_atomically(fs::path(opt.output) / (file_stem_for(activity) + ".json"),
                     format_report(report));
  }
  return status;
}

// ---------------------------------------------------------------------------

int run_plot(const std::string& input, const std::string& report_path, const std::string& output) {
  const auto intervals = load_intervals(input);
  auto in = open_input(report_path);
  std::stringstream text;
  text << in.rdbuf();
  const Report report = parse_report(text.str());

  std::vector<ActivityInterval> members;
  for (const auto& iv : intervals)
    if (iv.activity == report.activity) members.push_back(iv);
  if (members.empty()) throw Error(ErrorCode::InvalidArgument, "no intervals for '" + report.activity + "'");
  const PointSet points = to_point_set(members, report.activity);
  write_atomically(output, render_svg(points, report));
  return kExitOk;
}

int run_synth(const std::string& spec_path, const std::string& output) {
  auto in = open_input(spec_path);
  const PlantedSpec spec = read_planted_spec(in);
  const PlantedData data = generate(spec);

  std::ostringstream csv;
  write_intervals_csv(csv, to_intervals(data, spec));
  std::ostringstream labels;
  labels << "index,label\n";
  for (std::size_t i = 0; i < data.truth.size(); ++i) labels << i << ',' << data.truth[i] << '\n';

  fs::path sidecar = output;
  sidecar.replace_extension(".labels.csv");
  write_atomically(output, csv.str());
  write_atomically(sidecar, labels.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extract habitual start/end time bands from appliance usage logs"};
  app.require_subcommand(1);

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert a raw dataset to the intervals CSV");
  ingest_cmd->add_option("--format", ingest.format, "Input layout")
      ->required()
      ->check(CLI::IsMember({"refit", "casas", "intervals"}));
  ingest_cmd->add_option("--input", ingest.input, "Input file")->required();
  ingest_cmd->add_option("--appliance", ingest.appliance, "Power column to segment (refit)");
  ingest_cmd->add_option("--activity", ingest.activity, "Activity label to extract or assign");
  ingest_cmd->add_option("--threshold-watts", ingest.config.power_threshold_watts,
                         "ON when strictly above this reading")
      ->capture_default_str();
  ingest_cmd->add_option("--merge-gap", ingest.config.merge_gap_seconds, "Join ON runs this close (s)")
      ->capture_default_str();
  ingest_cmd->add_option("--min-duration", ingest.config.min_duration_seconds,
                         "Drop intervals shorter than this (s)")
      ->capture_default_str();
  ingest_cmd->add_flag("--skip-errors", ingest.config.skip_errors, "Skip malformed rows");
  ingest_cmd->add_option("--output", ingest.output, "Intervals CSV to write")->required();

  ProfileOptions profile;
  auto* profile_cmd = app.add_subcommand("profile", "Cluster intervals into habits, one report per activity");
  profile_cmd->add_option("--input", profile.input, "Intervals CSV")->required();
  profile_cmd->add_option("--activity", profile.activity, "Only profile this activity");
  profile_cmd->add_option("--k-max", profile.config.k_max, "Largest k swept")->capture_default_str();
  profile_cmd->add_option("--tau", profile.config.tau, "Noise threshold")->capture_default_str();
  profile_cmd->add_option("--min-points", profile.config.min_points_v, "DBSCAN min points")
      ->capture_default_str();
  profile_cmd->add_option("--eps-decay", profile.config.eps_decay, "DBSCAN eps shrink factor")
      ->capture_default_str();
  profile_cmd->add_option("--eps-floor", profile.config.eps_floor, "Smallest eps tried (h)")
      ->capture_default_str();
  profile_cmd->add_option("--max-rounds", profile.config.max_fallback_rounds, "DBSCAN rounds")
      ->capture_default_str();
  profile_cmd->add_option("--restarts", profile.config.kmeans_restarts, "k-means restarts")
      ->capture_default_str();
  profile_cmd->add_option("--linkage", profile.linkage, "Agglomerative linkage")
      ->check(CLI::IsMember({"ward", "complete", "average", "single"}))
      ->capture_default_str();
  profile_cmd->add_option("--noise-normalization", profile.normalization,
                          "Scale pairwise sums by member count or pair count")
      ->check(CLI::IsMember({"pairs", "members"}))
      ->capture_default_str();
  profile_cmd->add_option("--seed", profile.config.seed, "Random seed")
      ->envname("HABITMINER_SEED")
      ->capture_default_str();
  profile_cmd->add_option("--noise-in-denominator", profile.noise_in_denominator,
                          "Count noise points in the confidence denominator")
      ->check(CLI::IsMember({"true", "false"}))
      ->capture_default_str();
  profile_cmd->add_option("--threads", profile.config.threads, "Sweep worker threads")
      ->capture_default_str();
  profile_cmd->add_option("--output", profile.output, "Directory for report documents")->required();

  std::string plot_input, plot_report, plot_output;
  auto* plot_cmd = app.add_subcommand("plot", "Render a report's clustering as SVG");
  plot_cmd->add_option("--input", plot_input, "Intervals CSV")->required();
  plot_cmd->add_option("--report", plot_report, "Report document")->required();
  plot_cmd->add_option("--output", plot_output, "SVG file")->required();

  std::string synth_spec, synth_output;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a planted dataset");
  synth_cmd->add_option("--spec", synth_spec, "Planted spec (JSON)")->required();
  synth_cmd->add_option("--output", synth_output, "Intervals CSV to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest_cmd) return run_ingest(ingest);
    if (*profile_cmd) return run_profile(profile);
    if (*plot_cmd) return run_plot(plot_input, plot_report, plot_output);
    if (*synth_cmd) return run_synth(synth_spec, synth_output);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitOk;
}
