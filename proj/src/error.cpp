#include "habitminer/error.hpp"

namespace habitminer {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveDuration: return "NonPositiveDuration";
    case ErrorCode::OverlongInterval: return "OverlongInterval";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateClustering: return "DegenerateClustering";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::NoClusterFound: return "NoClusterFound";
    case ErrorCode::NoAcceptedClusters: return "NoAcceptedClusters";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out{to_string(code)};
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace habitminer
