#pragma once

// Algebraic closure of the stream formulation: density from the Bernoulli
// relation, invariants transported from the inlet, swirl from angular
// momentum conservation, and the source fields feeding the linear system.

#include <vector>

#include "cdflow/gas.hpp"
#include "cdflow/grid.hpp"
#include "cdflow/lagrangian.hpp"

namespace cdflow {

// rho = ((gamma-1)/(gamma a) (b - speed_sq/2))^(1/(gamma-1)).
// Throws VacuumOrCavitation when the flow speed exhausts the total enthalpy.
double density_from_bernoulli(const GasConstants& gas, double b, double a,
                              double speed_sq);

// Entropy and enthalpy per y2 row; both are constant along y1 because they
// ride unchanged on the streams.
struct TransportedInvariants {
  std::vector<double> entropy;
  std::vector<double> enthalpy;
};
TransportedInvariants transport_invariants(const TildeProfiles& tp);

// Azimuthal deviation from conservation of r u_theta along streams.
Field2D swirl_solve(const Grid& g, const TildeProfiles& tp, const Field2D& rhat);

// Recomputes rho, rhat and the interface radius of a state from its velocity
// triple. Throws DegenerateFlow (u_x <= 0), VacuumOrCavitation, or
// NonMonotoneRadius.
void update_derived(const Grid& g, const BackgroundState& bg,
                    const TildeProfiles& tp, LagrangianState& st);

// Zero deviation state with consistent derived fields.
LagrangianState background_state(const Grid& g, const BackgroundState& bg,
                                 const TildeProfiles& tp);

// Admissibility bounds for the nonlinear iteration. Leaving any of them is a
// hard failure (BallExit), not a recoverable event.
struct BallThresholds {
  double rho_lo_factor = 0.1;  // times background density
  double rho_hi_factor = 10.0;
  double mach_sq_max = 0.99;
  double jacobian_floor = 0.01;
};

void ball_check(const Grid& g, const BackgroundState& bg,
                const TildeProfiles& tp, const LagrangianState& st,
                const BallThresholds& th = {});

struct SourceTerms {
  Field2D f1;               // divergence feed, scaled by 1/c_b^2
  Field2D f2;               // curl feed
  std::vector<double> f3;   // inlet axial data (per y2 cell)
  std::vector<double> f4;   // interface radial data (per y1 node)
};

// Background linear operator at the state minus the full nonlinear equations
// at the state, one shared stencil set, so the sources vanish identically at
// the background. w_slope is the current contact-curve slope.
SourceTerms assemble_sources(const Grid& g, const BackgroundState& bg,
                             const TildeProfiles& tp, const LagrangianState& st,
                             const std::vector<double>& w_slope,
                             const BallThresholds& th = {});

// Pressure trace on the interface face: A_face * rho_face^gamma.
std::vector<double> interface_pressure(const Grid& g, const BackgroundState& bg,
                                       const TildeProfiles& tp, const Field2D& rho);

}  // namespace cdflow
