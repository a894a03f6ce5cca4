#include "habitminer/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "habitminer/clustering.hpp"
#include "habitminer/error.hpp"

namespace habitminer {

namespace {

constexpr std::array<std::string_view, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#393b79"};
constexpr std::string_view kNoiseColor = "#9e9e9e";

constexpr double kWidth = 640.0;
constexpr double kHeight = 640.0;
constexpr double kMargin = 64.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string clock_label(int hours) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:00%s", hours % 24, hours >= 24 ? "+1" : "");
  return buf;
}

}  // namespace

std::string render_svg(const PointSet& points, const Report& report) {
  if (points.size() != report.labels.size())
    throw Error(ErrorCode::InvalidArgument,
                "report labels " + std::to_string(report.labels.size()) + " points, input has " +
                    std::to_string(points.size()));

  double max_end = 24.0;
  for (const auto& p : points.points) max_end = std::max(max_end, p.end);
  const int y_top = static_cast<int>(std::ceil(max_end / 4.0)) * 4;

  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  auto sx = [&](double h) { return kMargin + h / 24.0 * plot_w; };
  auto sy = [&](double h) { return kHeight - kMargin - h / y_top * plot_h; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<text class=\"title\" x=\"" + num(kWidth / 2) +
         "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape(report.activity) + "</text>\n";

  svg += "<g class=\"axes\" stroke=\"#333333\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + num(sx(0)) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" + num(sx(24)) +
         "\" y2=\"" + num(sy(0)) + "\"/>\n";
  svg += "<line x1=\"" + num(sx(0)) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" + num(sx(0)) +
         "\" y2=\"" + num(sy(y_top)) + "\"/>\n";
  svg += "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#333333\">\n";
  for (int h = 0; h <= 24; h += 4)
    svg += "<text x=\"" + num(sx(h)) + "\" y=\"" + num(sy(0) + 16) +
           "\" text-anchor=\"middle\">" + clock_label(h) + "</text>\n";
  for (int h = 0; h <= y_top; h += 4)
    svg += "<text x=\"" + num(sx(0) - 6) + "\" y=\"" + num(sy(h) + 3) +
           "\" text-anchor=\"end\">" + clock_label(h) + "</text>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 20) +
         "\" text-anchor=\"middle\">start time</text>\n";
  svg += "<text x=\"18\" y=\"" + num(kHeight / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num(kHeight / 2) + ")\">end time</text>\n";
  svg += "</g>\n";

  svg += "<g class=\"points\">\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int label = report.labels[i];
    const bool noise = label == kNoise;
    const auto colour = noise ? kNoiseColor : kPalette[static_cast<std::size_t>(label) % kPalette.size()];
    svg += "<circle class=\"" + (noise ? std::string("noise") : "c" + std::to_string(label)) +
           "\" cx=\"" + num(sx(points.points[i].start)) + "\" cy=\"" +
           num(sy(points.points[i].end)) + "\" r=\"3\" fill=\"" + std::string(colour) +
           "\" fill-opacity=\"0.8\"/>\n";
  }
  svg += "</g>\n";

  svg += "<g class=\"habits\" stroke=\"#000000\" stroke-width=\"2\">\n";
  for (const auto& rh : report.habits) {
    const double cx = sx(rh.profile.mean_start);
    const double cy = sy(rh.profile.mean_end);
    constexpr double arm = 7.0;
    svg += "<g class=\"habit-mean\" data-cluster=\"" + std::to_string(rh.profile.cluster_id) +
           "\"><line x1=\"" + num(cx - arm) + "\" y1=\"" + num(cy - arm) + "\" x2=\"" +
           num(cx + arm) + "\" y2=\"" + num(cy + arm) + "\"/><line x1=\"" + num(cx - arm) +
           "\" y1=\"" + num(cy + arm) + "\" x2=\"" + num(cx + arm) + "\" y2=\"" + num(cy - arm) +
           "\"/></g>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace habitminer
