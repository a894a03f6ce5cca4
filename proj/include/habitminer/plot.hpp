#pragma once

#include <span>
#include <string>

#include "habitminer/core.hpp"
#include "habitminer/report.hpp"

namespace habitminer {

/// Scatter of (start, end) tuples coloured by the report's labels, noise in
/// gray, with a cross at each habit mean. Output bytes depend only on the
/// inputs. Throws InvalidArgument when point and label counts differ.
std::string render_svg(const PointSet& points, const Report& report);

}  // namespace habitminer
