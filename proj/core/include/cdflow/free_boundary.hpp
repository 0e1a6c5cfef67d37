#pragma once

// Outer free-boundary iteration. The unknown is the contact-curve slope; the
// residual is the interface pressure mismatch. Corrections come from the
// derivative of the mismatch frozen at the background, inverted through a
// single potential problem, which is the simplified Newton scheme of the
// underlying contraction argument.

#include <limits>
#include <vector>

#include "cdflow/fixed_point.hpp"

namespace cdflow {

// Interface pressure minus the ambient pressure, per y1 node.
std::vector<double> pressure_mismatch(const Grid& g, const BackgroundState& bg,
                                      const TildeProfiles& tp,
                                      const LagrangianState& st);

// Derivative of the mismatch with respect to the slope, frozen at the
// background state. Both directions reuse one factorization each.
class BackgroundDerivative {
 public:
  BackgroundDerivative(const Grid& g, const BackgroundState& bg);

  // Mismatch response to a slope perturbation: -rho_b u_b W1(., m) where W1
  // solves the homogeneous inner system with interface data u_b w.
  std::vector<double> apply(const std::vector<double>& w) const;

  // Solves apply(w) = pstar through the gradient-potential formulation.
  // pstar[0] must be below zero_tol in magnitude: the derivative's range
  // vanishes at the inlet node, so an incompatible head value cannot be
  // matched. Pass an infinite zero_tol to skip the check.
  std::vector<double> invert(const std::vector<double>& pstar,
                             double zero_tol = 1e-10) const;

 private:
  Grid g_;
  BackgroundState bg_;
  InnerLinearSystem lin_;
  InterfacePotential pot_;
};

struct NewtonOptions {
  double outer_tol = 1e-8;  // sup of the mismatch away from the inlet node
  int max_iter = 40;
  PicardOptions inner{};
};

struct NewtonTrace {
  std::vector<double> residuals;  // sup_{i>=1} |Q| per outer iterate
  double head_mismatch = 0.0;     // |Q(0)| at the final state, not iterated on
  int iterations = 0;
  bool converged = false;
  // True when the iteration stopped because the mismatch stopped shrinking
  // rather than because it fell below outer_tol. The frozen-background
  // inverse corrects smooth mismatch components at a geometric rate but is
  // blind to grid-scale ones (its quadrature annihilates the alternating
  // mode), so the attainable sup is a discretization floor of order h^2,
  // reported in residuals.back() rather than hidden.
  bool at_floor = false;
};

struct FreeBoundarySolution {
  LagrangianState state;
  ContactCurve contact;
  PicardTrace inner;  // trace of the last inner solve
};

// Full solve: inner fixed point per slope, slope update by the inverted
// background derivative, starting from the flat contact.
FreeBoundarySolution newton_solve(const InnerSolver& inner,
                                  const NewtonOptions& opt,
                                  NewtonTrace* trace = nullptr);

}  // namespace cdflow
