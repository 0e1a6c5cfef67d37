#pragma once

// Scalar-generic kernels for the closure chain: density from the Bernoulli
// relation, radius reconstruction, swirl transport, and assembly of the
// divergence/curl source fields. Everything here is templated on the scalar
// so the derivative verification can run the identical code path on
// complex<double> (complex-step differentiation). Admissibility guards
// inspect only the real part.

#include <cmath>
#include <complex>
#include <vector>

#include "cdflow/errors.hpp"
#include "cdflow/gas.hpp"
#include "cdflow/grid.hpp"
#include "cdflow/lagrangian.hpp"

namespace cdflow::detail {

inline double real_part(double x) { return x; }
inline double real_part(const std::complex<double>& z) { return z.real(); }

inline double pow_t(double b, double e) { return std::pow(b, e); }
inline std::complex<double> pow_t(const std::complex<double>& b, double e) {
  return std::pow(b, e);
}

// rho = ((gamma-1)/(gamma A) * (B - q/2))^(1/(gamma-1)), q = |u|^2.
// Guards cavitation (argument must stay positive) on the real part.
template <class T>
T closure_density(const GasConstants& gas, T b, T a, T speed_sq) {
  const double g = gas.gamma;
  if (real_part(a) <= 0.0)
    throw NonPositive("entropy coefficient must be positive in density closure");
  T arg = (g - 1.0) / (g * a) * (b - 0.5 * speed_sq);
  if (real_part(arg) <= 0.0)
    throw VacuumOrCavitation("Bernoulli argument non-positive: flow speed exceeds "
                             "the cavitation bound for the given enthalpy");
  return pow_t(arg, 1.0 / (g - 1.0));
}

// Ghost-cell parity at the axis for cell-centered differencing in y2.
enum class Parity { even, odd };

// d/dy1 on the node direction: centered interior, one-sided second order at
// the inlet and outlet nodes.
template <class T>
BasicField<T> d1(const Grid& g, const BasicField<T>& f) {
  BasicField<T> out(f.rows, f.cols);
  const double s = 1.0 / (2.0 * g.h1);
  const int n1 = g.n1;
  for (int j = 0; j < g.n2; ++j) {
    out(0, j) = (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) * s;
    for (int i = 1; i < n1; ++i) out(i, j) = (f(i + 1, j) - f(i - 1, j)) * s;
    out(n1, j) = (3.0 * f(n1, j) - 4.0 * f(n1 - 1, j) + f(n1 - 2, j)) * s;
  }
  return out;
}

// d/dy2 on the cell-center direction: centered interior, parity ghost under
// the axis, one-sided second order at the interface row.
template <class T>
BasicField<T> d2(const Grid& g, const BasicField<T>& f, Parity p) {
  BasicField<T> out(f.rows, f.cols);
  const double s = 1.0 / (2.0 * g.h2);
  const int n2 = g.n2;
  const double sign = (p == Parity::odd) ? -1.0 : 1.0;
  for (int i = 0; i <= g.n1; ++i) {
    out(i, 0) = (f(i, 1) - sign * f(i, 0)) * s;
    for (int j = 1; j < n2 - 1; ++j) out(i, j) = (f(i, j + 1) - f(i, j - 1)) * s;
    out(i, n2 - 1) =
        (3.0 * f(i, n2 - 1) - 4.0 * f(i, n2 - 2) + f(i, n2 - 3)) * s;
  }
  return out;
}

// Second-order extrapolation from the last two cell centers to the
// interface face and to the axis.
template <class T>
T extrap_face(T last, T prev) {
  return 1.5 * last - 0.5 * prev;
}
template <class T>
T extrap_axis(T first, T second) {
  return (9.0 * first - second) / 8.0;
}

// Radius from the mass-flux field: rhat^2(y1,y2) = 2 int_0^{y2} 2s/(rho u_x) ds.
// First cell uses the axis limit (integrand ~ 2s/f(0)), then trapezoid on
// cell centers; the face value extends by a quarter-step trapezoid onto the
// extrapolated face flux.
template <class T>
void reconstruct_radius_t(const Grid& g, const BasicField<T>& flux,
                          BasicField<T>& rhat, std::vector<T>* face) {
  const int n2 = g.n2;
  const double h2 = g.h2;
  rhat = BasicField<T>(g.nodes1(), n2);
  if (face) face->assign(g.nodes1(), T{});
  for (int i = 0; i <= g.n1; ++i) {
    T rsq;
    {
      const T f0 = flux(i, 0);
      if (real_part(f0) <= 0.0)
        throw NonMonotoneRadius("mass flux vanished at the axis");
      const double y = g.y2(0);
      rsq = 2.0 * (y * y) / f0;
      rhat(i, 0) = std::sqrt(rsq);
    }
    T q_prev = 4.0 * g.y2(0) / flux(i, 0);
    for (int j = 1; j < n2; ++j) {
      const T fj = flux(i, j);
      if (real_part(fj) <= 0.0)
        throw NonMonotoneRadius("mass flux vanished inside the stream");
      const T q = 4.0 * g.y2(j) / fj;
      rsq += 0.5 * h2 * (q_prev + q);
      if (real_part(rsq) <= 0.0)
        throw NonMonotoneRadius("radius reconstruction lost monotonicity");
      rhat(i, j) = std::sqrt(rsq);
      q_prev = q;
    }
    if (face) {
      const T f_face = extrap_face(flux(i, n2 - 1), flux(i, n2 - 2));
      if (real_part(f_face) <= 0.0)
        throw NonMonotoneRadius("mass flux vanished at the interface");
      const T q_face = 4.0 * g.height / f_face;
      T rsq_face = rsq + 0.25 * h2 * (q_prev + q_face);
      (*face)[i] = std::sqrt(rsq_face);
    }
  }
}

// Fills rho, rhat, rhat_face of the state from its velocity triple and the
// transported inlet invariants (entropy a, enthalpy b constant along y1).
template <class T>
void derive_closure_t(const Grid& g, const BackgroundState& bg,
                      const TildeProfiles& tp, StateFields<T>& st) {
  const int n2 = g.n2;
  st.rho = BasicField<T>(g.nodes1(), n2);
  BasicField<T> flux(g.nodes1(), n2);
  for (int i = 0; i <= g.n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const T ux = bg.u_minus + st.w1(i, j);
      if (real_part(ux) <= 0.0)
        throw DegenerateFlow("axial velocity non-positive in closure");
      const T qs = ux * ux + st.w2(i, j) * st.w2(i, j) + st.w3(i, j) * st.w3(i, j);
      const T rho = closure_density(bg.gas, T(tp.b[j]), T(tp.a[j]), qs);
      st.rho(i, j) = rho;
      flux(i, j) = rho * ux;
    }
  }
  reconstruct_radius_t(g, flux, st.rhat, &st.rhat_face);
}

// Swirl transport: r u_theta is conserved along streams, so the updated
// azimuthal deviation is Lambda(y2)/rhat with Lambda = r0 nu0(r0).
template <class T>
BasicField<T> swirl_from_radius_t(const Grid& g, const TildeProfiles& tp,
                                  const BasicField<T>& rhat) {
  BasicField<T> w3(g.nodes1(), g.n2);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) w3(i, j) = tp.lambda[j] / rhat(i, j);
  return w3;
}

template <class T>
struct SourcesT {
  BasicField<T> f1;    // divergence feed, pre-divided by c_b^2
  BasicField<T> f2;    // curl feed
  std::vector<T> f3;   // inlet axial-velocity data
  std::vector<T> f4;   // interface radial-velocity data
};

// Source assembly. Computes the background linear operator applied to the
// hat state minus the full nonlinear equations evaluated at the hat state,
// using one shared set of difference stencils. At the background state every
// term cancels identically.
template <class T>
SourcesT<T> assemble_sources_t(const Grid& g, const BackgroundState& bg,
                               const TildeProfiles& tp, const StateFields<T>& st,
                               const std::vector<T>& w_slope) {
  const int n1 = g.n1, n2 = g.n2;
  const double gamma = bg.gas.gamma;
  const double ub = bg.u_minus;
  const double cbsq = bg.sound_sq_minus;
  const double rb = bg.rho_minus;

  const BasicField<T> d1w1 = d1(g, st.w1);
  const BasicField<T> d1w2 = d1(g, st.w2);
  const BasicField<T> d2w1 = d2(g, st.w1, Parity::even);
  const BasicField<T> d2w2 = d2(g, st.w2, Parity::odd);
  const BasicField<T> d2w3 = d2(g, st.w3, Parity::odd);

  SourcesT<T> out;
  out.f1 = BasicField<T>(g.nodes1(), n2);
  out.f2 = BasicField<T>(g.nodes1(), n2);
  out.f3.assign(n2, T{});
  out.f4.assign(g.nodes1(), T{});

  for (int i = 0; i <= n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const double y2 = g.y2(j);
      const T ux = ub + st.w1(i, j);
      const T w2 = st.w2(i, j);
      const T w3 = st.w3(i, j);
      const T rho = st.rho(i, j);
      const T rhat = st.rhat(i, j);
      const T csq = gamma * tp.a[j] * pow_t(rho, gamma - 1.0);
      const T cw = rhat * rho / (2.0 * y2);

      // Full divergence-form equation at the hat state.
      const T e1 = (csq - ux * ux) * (d1w1(i, j) - cw * w2 * d2w1(i, j)) +
                   (csq - w2 * w2) * cw * ux * d2w2(i, j) +
                   (csq / rhat) * w2 + (w3 * w3 / rhat) * w2 -
                   ux * w2 *
                       (d1w2(i, j) - cw * w2 * d2w2(i, j) + cw * ux * d2w1(i, j));
      const T lin1 = (cbsq - ub * ub) * d1w1(i, j) + cbsq * d2w2(i, j) +
                     (cbsq / y2) * w2;
      out.f1(i, j) = (lin1 - e1) / cbsq;

      // Full curl-form equation at the hat state. The entropy/enthalpy
      // gradients enter through the transported inlet profiles, whose y2
      // derivatives are analytic.
      const T e2 = d1w2(i, j) - cw * w2 * d2w2(i, j) - cw * ux * d2w1(i, j) -
                   (1.0 / ux) *
                       (cw * ux * w3 * d2w3(i, j) + w3 * w3 / rhat +
                        cw * ux * (pow_t(rho, gamma - 1.0) / (gamma - 1.0)) * tp.da[j] -
                        cw * ux * tp.db[j]);
      const T lin2 = d1w2(i, j) - d2w1(i, j);
      out.f2(i, j) = lin2 - e2;
    }
  }

  // Inlet data: solve the mass-flux condition rho u_x = J0 for the axial
  // deviation, linearized around the background on the left-hand side. At a
  // fixed point the inlet flux matches the prescribed profile exactly.
  const double jb = rb * ub;
  for (int j = 0; j < n2; ++j) {
    const T dh = st.rho(0, j) - rb;
    const T jhat = T(tp.j[j]) - jb;
    out.f3[j] = (jhat - st.w1(0, j) * dh -
                 ub * (dh + (jb / cbsq) * st.w1(0, j))) /
                (rb * (1.0 - bg.mach_sq));
  }

  // Interface data: the stream is tangent to the contact curve, so the
  // radial deviation on the face equals the full axial speed times the
  // curve slope.
  for (int i = 0; i <= n1; ++i) {
    const T w1_face = extrap_face(st.w1(i, n2 - 1), st.w1(i, n2 - 2));
    out.f4[i] = (ub + w1_face) * w_slope[i];
  }
  return out;
}

// Interface pressure trace: entropy at the face times the extrapolated face
// density to the adiabatic power.
template <class T>
std::vector<T> interface_pressure_t(const Grid& g, const BackgroundState& bg,
                                    const TildeProfiles& tp,
                                    const BasicField<T>& rho) {
  std::vector<T> p(g.nodes1());
  for (int i = 0; i <= g.n1; ++i) {
    const T rho_face = extrap_face(rho(i, g.n2 - 1), rho(i, g.n2 - 2));
    p[i] = tp.a_face * pow_t(rho_face, bg.gas.gamma);
  }
  return p;
}

}  // namespace cdflow::detail
