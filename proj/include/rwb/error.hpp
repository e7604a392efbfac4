#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rwb {

enum class ErrorCode {
  InvalidInput,
  UnequalTotals,
  BadOutlierMass,
  DimMismatch,
  BaseMismatch,
  NumericalBreakdown,
  InfeasibleArcs,
  Unbalanced,
  TooFewPoints,
  LpInfeasible,
  EmptySupport,
  WeightMismatch,
  GridBudgetExceeded,
  BudgetExceeded,
  NonIntegral,
  EmptyImage,
  DimNot2D,
  Io,
  Internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Issue {
  ErrorCode code;
  std::string message;
};

// Raised by instance validation; carries every violated invariant, not just the first.
class InstanceError : public Error {
 public:
  explicit InstanceError(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::vector<Issue> issues_;
};

}  // namespace rwb
