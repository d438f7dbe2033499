#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qwalk {

enum class ErrorKind {
  NormViolation,
  DegenerateCoin,
  VanishedState,
  NoConvergence,
  BranchDegenerate,
  NewtonDivergence,
  BranchAmbiguity,
  NumericalBlowup,
  NotADistribution,
  NoMinimum,
  ResourceLimit,
  NullSpaceEmpty,
  FullyLocalized,
  IOFailure,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures surface as qwalk::Error; kind() is stable for callers
// that need to branch (the CLI maps it onto exit codes).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qwalk
