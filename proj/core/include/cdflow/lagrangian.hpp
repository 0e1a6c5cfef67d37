#pragma once

#include <vector>

#include "cdflow/grid.hpp"
#include "cdflow/profile.hpp"

namespace cdflow {

// Inlet data carried to the mass coordinate y2, sampled at cell centers and at
// the interface face y2 = m.  The entropy and Bernoulli profiles are transport
// invariants: constant along y1, so one sample column describes the strip.
struct TildeProfiles {
  double height = 0;            // m
  std::vector<double> r0;       // inlet radius of each mass shell
  std::vector<double> j;        // J~0 at cell centers
  std::vector<double> nu;       // nu~0
  std::vector<double> a;        // A~0
  std::vector<double> b;        // B~0
  std::vector<double> da;       // d/dy2 A~0 (exact chain rule through r0)
  std::vector<double> db;       // d/dy2 B~0
  std::vector<double> lambda;   // r0 * nu~0, the shell angular momentum
  double r0_face = 0;           // = 1/2
  double j_face = 0, nu_face = 0, a_face = 0, b_face = 0, lambda_face = 0;
};

// m with m^2 = integral_0^{1/2} s J0(s) ds.  Throws NonPositiveFlux.
double mass_flux_parameter(const InletData& inlet);

// Inverts the inlet mass coordinate and composes the physical profiles with
// the shell radius r0(y2).  Root finding to 1e-12 in r.
TildeProfiles inlet_to_lagrangian(const InletData& inlet, const Grid& g);

// Deviation fields from the background stream plus the derived closure state.
// Scalar-generic so derivative checks can push complex perturbations through
// the same kernels.
template <class T>
struct StateFields {
  BasicField<T> w1, w2, w3;  // axial / radial / azimuthal velocity deviations
  BasicField<T> rho;         // closure density
  BasicField<T> rhat;        // reconstructed physical radius
  std::vector<T> rhat_face;  // radius of the interface shell per station
};

using LagrangianState = StateFields<double>;

// Free interface as slope samples at y1 nodes plus the integrated radius.
// g(0) = 1/2 exactly; the slope vanishes at the outlet.
struct ContactCurve {
  std::vector<double> w;
  std::vector<double> g;
};

ContactCurve flat_contact(const Grid& g);
// Integrates the slope: g(0) = 1/2, trapezoid in y1.
ContactCurve contact_from_slope(const Grid& g, std::vector<double> w);

// r(y1, y2) = (2 integral_0^{y2} 2s/(rho u_x) ds)^(1/2) columnwise, the first
// half cell handled with the axis limit r/y2 -> sqrt(2/(rho u_x)).  Returns
// cell-center values; face_out (optional) receives r at y2 = m.
// Throws NonMonotoneRadius when rho u_x is not positive.
Field2D reconstruct_radius(const Grid& g, const Field2D& rho_ux,
                           std::vector<double>* face_out = nullptr);

// Transformation Jacobian r rho u_x / (2 y2).  Throws JacobianDegenerate when
// any value falls below floor.
Field2D jacobian(const Grid& g, const Field2D& rhat, const Field2D& rho_ux,
                 double floor = 0.01);

struct PhysicalSample {
  double rho = 0, ux = 0, ur = 0, uth = 0, p = 0;
  double y2 = 0;     // mass label of the streamline through the point (inner only)
  bool inner = false;
};

// Column-interpolated physical solution: per-station anchor radii from the
// axis to the interface with primitive values, the interface curve, and the
// constant outer state.  eval() is linear in r along a station and linear in x
// between stations.
class PhysicalSolution {
 public:
  std::vector<double> x;                 // stations (y1 nodes)
  std::vector<double> g;                 // interface radius per station
  std::vector<double> gslope;            // interface slope per station
  std::vector<std::vector<double>> r;    // anchor radii per station
  std::vector<std::vector<double>> y2;   // mass labels of the anchors
  std::vector<std::vector<double>> rho, ux, ur, uth, p;
  double rho_out = 0, p_out = 0;
  GasConstants gas;
  double u_b = 0;                        // background stream speed (diagnostics)

  PhysicalSample eval(double xq, double rq) const;
  // Inner trace on the interface at station index i (from the anchor row).
  PhysicalSample interface_trace(int i) const;
  double interface_radius(double xq) const;
  double interface_slope(double xq) const;

 private:
  PhysicalSample eval_station(int i, double rq) const;
};

// Samples the Lagrangian state on physical anchors.  The state fields are
// extrapolated to the axis and interface faces at second order.
PhysicalSolution to_physical(const Grid& g, const BackgroundState& bg,
                             const TildeProfiles& tp, const LagrangianState& st,
                             const ContactCurve& cc);

}  // namespace cdflow
