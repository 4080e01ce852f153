#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netboost {

enum class ErrorCode {
  // NET parsing
  MissingVerticesHeader,
  ArcsNotSupported,
  NonIntegerWeight,
  NonpositiveWeight,
  SelfLoop,
  DuplicateEdge,
  OutOfRangeNodeId,
  MalformedLine,
  DuplicateLabel,
  InvalidLabel,
  // graph operations
  EditTargetsSelf,
  UnknownNode,
  DuplicateEdit,
  EmptyNetwork,
  SameNode,
  TooLargeForOracle,
  // solver
  MismatchedOpponentSets,
  UnknownTarget,
  InvalidConfig,
  // service
  UnknownNetwork,
  UnknownJob,
  BadRequest,
  Internal,
};

/// Upper-snake-case wire name, e.g. "ARCS_NOT_SUPPORTED".
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace netboost
