#include "netboost/error.hpp"

namespace netboost {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingVerticesHeader: return "MISSING_VERTICES_HEADER";
    case ErrorCode::ArcsNotSupported: return "ARCS_NOT_SUPPORTED";
    case ErrorCode::NonIntegerWeight: return "NON_INTEGER_WEIGHT";
    case ErrorCode::NonpositiveWeight: return "NONPOSITIVE_WEIGHT";
    case ErrorCode::SelfLoop: return "SELF_LOOP";
    case ErrorCode::DuplicateEdge: return "DUPLICATE_EDGE";
    case ErrorCode::OutOfRangeNodeId: return "OUT_OF_RANGE_NODE_ID";
    case ErrorCode::MalformedLine: return "MALFORMED_LINE";
    case ErrorCode::DuplicateLabel: return "DUPLICATE_LABEL";
    case ErrorCode::InvalidLabel: return "INVALID_LABEL";
    case ErrorCode::EditTargetsSelf: return "EDIT_TARGETS_SELF";
    case ErrorCode::UnknownNode: return "UNKNOWN_NODE";
    case ErrorCode::DuplicateEdit: return "DUPLICATE_EDIT";
    case ErrorCode::EmptyNetwork: return "EMPTY_NETWORK";
    case ErrorCode::SameNode: return "SAME_NODE";
    case ErrorCode::TooLargeForOracle: return "TOO_LARGE_FOR_ORACLE";
    case ErrorCode::MismatchedOpponentSets: return "MISMATCHED_OPPONENT_SETS";
    case ErrorCode::UnknownTarget: return "UNKNOWN_TARGET";
    case ErrorCode::InvalidConfig: return "INVALID_CONFIG";
    case ErrorCode::UnknownNetwork: return "UNKNOWN_NETWORK";
    case ErrorCode::UnknownJob: return "UNKNOWN_JOB";
    case ErrorCode::BadRequest: return "BAD_REQUEST";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "INTERNAL";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace netboost
