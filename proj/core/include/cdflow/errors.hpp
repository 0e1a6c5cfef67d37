#pragma once

#include <stdexcept>
#include <string>

namespace cdflow {

// Process exit codes used by the command line driver.  Library errors carry
// the code they should map to when they escape to main().
enum class FailureCode : int {
  ok = 0,
  config = 2,
  inner = 3,
  outer = 4,
  linear = 5,
};

class SolverError : public std::runtime_error {
 public:
  SolverError(FailureCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  FailureCode code() const noexcept { return code_; }

 private:
  FailureCode code_;
};

// Input / setup problems (exit code 2).
struct ConfigError : SolverError {
  explicit ConfigError(const std::string& w) : SolverError(FailureCode::config, w) {}
};
struct NonPositive : SolverError {
  explicit NonPositive(const std::string& w) : SolverError(FailureCode::config, w) {}
};
struct SupersonicBackground : SolverError {
  explicit SupersonicBackground(const std::string& w) : SolverError(FailureCode::config, w) {}
};
struct CompatibilityViolation : SolverError {
  explicit CompatibilityViolation(const std::string& w) : SolverError(FailureCode::config, w) {}
};
struct NonPositiveFlux : SolverError {
  explicit NonPositiveFlux(const std::string& w) : SolverError(FailureCode::config, w) {}
};
struct DomainError : SolverError {
  explicit DomainError(const std::string& w) : SolverError(FailureCode::config, w) {}
};

// Inner solve failures (exit code 3).
struct RootBracketFailure : SolverError {
  explicit RootBracketFailure(const std::string& w) : SolverError(FailureCode::inner, w) {}
};
struct DegenerateFlow : SolverError {
  explicit DegenerateFlow(const std::string& w) : SolverError(FailureCode::inner, w) {}
};
struct JacobianDegenerate : SolverError {
  explicit JacobianDegenerate(const std::string& w) : SolverError(FailureCode::inner, w) {}
};
struct NonMonotoneRadius : SolverError {
  explicit NonMonotoneRadius(const std::string& w) : SolverError(FailureCode::inner, w) {}
};
struct VacuumOrCavitation : SolverError {
  explicit VacuumOrCavitation(const std::string& w) : SolverError(FailureCode::inner, w) {}
};
struct BallExit : SolverError {
  explicit BallExit(const std::string& w) : SolverError(FailureCode::inner, w) {}
};
struct NoConvergence : SolverError {
  explicit NoConvergence(const std::string& w) : SolverError(FailureCode::inner, w) {}
};

// Outer (free boundary) failure (exit code 4).
struct OuterDivergence : SolverError {
  explicit OuterDivergence(const std::string& w) : SolverError(FailureCode::outer, w) {}
};

// Linear algebra failure (exit code 5).
struct LinearSolveFailure : SolverError {
  explicit LinearSolveFailure(const std::string& w) : SolverError(FailureCode::linear, w) {}
};

}  // namespace cdflow
