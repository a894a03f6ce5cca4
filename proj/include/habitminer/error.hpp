#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace habitminer {

enum class ErrorCode {
  NonPositiveDuration,
  OverlongInterval,
  MalformedRow,
  UnknownColumn,
  EmptyResult,
  InvariantViolation,
  TooFewPoints,
  DegenerateClustering,
  EmptyCluster,
  NoClusterFound,
  NoAcceptedClusters,
  InvalidSpec,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `line` is set for row-level parse
/// errors (1-based, counting the header).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace habitminer
