#pragma once

// Inner nonlinear iteration: at a frozen contact slope, alternate source
// assembly, the linear divergence/curl solve and the algebraic closure until
// the state stops moving. The linear factorizations are owned here and
// reused for every step and every outer iteration.

#include <vector>

#include "cdflow/closure.hpp"
#include "cdflow/elliptic.hpp"
#include "cdflow/lagrangian.hpp"

namespace cdflow {

struct PicardOptions {
  double tol = 1e-10;    // absolute sup-norm increment target
  int max_iter = 200;
  double damping = 1.0;  // fraction of the update applied per step
  BallThresholds ball{};
};

struct PicardTrace {
  std::vector<double> increments;  // sup-norm state change per iteration
  int iterations = 0;
  bool converged = false;
};

class InnerSolver {
 public:
  InnerSolver(const Grid& g, const BackgroundState& bg, TildeProfiles tp);

  // One application of the fixed-point map at the given contact slope.
  LagrangianState step(const LagrangianState& st,
                       const std::vector<double>& w_slope,
                       const PicardOptions& opt) const;

  // Iterates to the fixed point. Throws NoConvergence when the increment
  // fails to reach tol within max_iter or grows three times in a row.
  LagrangianState solve(const std::vector<double>& w_slope,
                        const PicardOptions& opt, PicardTrace* trace = nullptr,
                        const LagrangianState* initial = nullptr) const;

  const Grid& grid() const { return g_; }
  const BackgroundState& background() const { return bg_; }
  const TildeProfiles& profiles() const { return tp_; }
  const InnerLinearSystem& linear() const { return lin_; }

 private:
  Grid g_;
  BackgroundState bg_;
  TildeProfiles tp_;
  InnerLinearSystem lin_;
};

// Largest absolute componentwise difference of the velocity triples.
double state_distance(const LagrangianState& a, const LagrangianState& b);

}  // namespace cdflow
