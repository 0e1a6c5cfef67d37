#pragma once

// Independent verification layer. Residuals, jump conditions, conservation
// and weak-form integrals are computed with differencing and quadrature
// implemented locally in this module, not with the solver's stencils, so
// agreement between solver and checks is evidence rather than tautology.
// The derivative check is the exception by design: it verifies the solver's
// own linearization, so it drives the solver kernels with a complex step.

#include <array>
#include <vector>

#include "cdflow/fixed_point.hpp"
#include "cdflow/lagrangian.hpp"

namespace cdflow {

struct ResidualNorm {
  double sup = 0.0;
  double l2 = 0.0;
};

// Residuals of the transformed interior system and its boundary lines.
// Interior norms are weighted by distance to the inlet and outlet: the data
// pin the fields only up to corner compatibility there, and the estimates
// behind the construction are interior-weighted the same way.
struct StripResiduals {
  ResidualNorm divergence;  // quasilinear velocity-divergence equation
  ResidualNorm curl;        // vorticity/transport equation
  ResidualNorm swirl;       // d/dy1 of r u_theta
  double inlet_flux = 0.0;       // rho u_x vs the prescribed inlet profile
  double inlet_swirl = 0.0;      // u_theta vs the prescribed inlet profile
  double outlet = 0.0;           // u_r at the outlet column
  double interface_tangency = 0.0;  // u_r - u_x w on the face
  double axis = 0.0;             // u_r extrapolated to the axis
};

StripResiduals lagrangian_residual(const Grid& g, const BackgroundState& bg,
                                   const TildeProfiles& tp,
                                   const LagrangianState& st,
                                   const ContactCurve& cc);

// Residuals of the five axisymmetric Euler equations on a regular (x,r)
// lattice, one-cell buffer from all boundaries and from the interface.
// Outer-region residuals must vanish identically (constant state). Also
// carries the azimuthal-vorticity identity as a pointwise check.
struct EulerResiduals {
  std::array<ResidualNorm, 5> inner;  // mass, axial, radial, swirl, entropy
  std::array<ResidualNorm, 5> outer;
  double vorticity_identity = 0.0;
  int inner_points = 0;
  int outer_points = 0;
};

EulerResiduals physical_euler_residual(const PhysicalSolution& ps, int nx,
                                       int nr);

struct InterfaceCheck {
  double normal_velocity = 0.0;   // sup |u . n| on the contact curve
  double pressure_jump = 0.0;     // sup |P - P_ambient| on the curve
  double tangential_jump = 0.0;   // min |[u . tau]| along the curve
};

InterfaceCheck rankine_hugoniot_check(const PhysicalSolution& ps);

struct ConservationReport {
  double mass_flux = 0.0;         // sup_x |int_0^g s rho u_x ds - m^2|
  double angular_momentum = 0.0;  // sup streamline drift of r u_theta
  double entropy = 0.0;           // sup streamline drift of P rho^-gamma
  double bernoulli = 0.0;         // sup streamline drift of B
};

ConservationReport conservation_checks(const PhysicalSolution& ps, double m_sq);

// C^2 bump supported on [x0,x1] x [r0,r1], intended to straddle the contact.
struct BumpSpec {
  double x0, x1, r0, r1;
};

// One row per bump: the five weak-form integrals of the conservation system
// against the bump, in the axisymmetric reduction (volume element r dr dx;
// radial and azimuthal forms tested against rotating unit vectors, which
// produces the extra non-weighted terms).
using WeakIntegrals = std::array<double, 5>;

std::vector<WeakIntegrals> weak_form_check(const PhysicalSolution& ps,
                                           const std::vector<BumpSpec>& bumps,
                                           int refine = 4);

// Derivative of the interface mismatch with respect to the contact slope,
// linearized around the state solved at slope w, acting on direction w1.
// Computed by iterating the solver's own kernels on a complex step, which
// differentiates the closed-form source formulas analytically.
std::vector<double> state_derivative_apply(const InnerSolver& solver,
                                           const LagrangianState& base,
                                           const std::vector<double>& w,
                                           const std::vector<double>& w1,
                                           const PicardOptions& opt);

// Compares the linearized derivative against the difference quotient
// (Q(w + tau w1) - Q(w)) / tau of full nonlinear solves; returns the sup
// discrepancy. The discrepancy is O(tau) plus iteration-tolerance noise.
double derivative_system_check(const InnerSolver& solver,
                               const std::vector<double>& w,
                               const std::vector<double>& w1, double tau,
                               const PicardOptions& opt);

}  // namespace cdflow
