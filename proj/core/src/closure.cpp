#include "cdflow/closure.hpp"

#include <cmath>
#include <string>

#include "cdflow/detail/kernels.hpp"

namespace cdflow {

double density_from_bernoulli(const GasConstants& gas, double b, double a,
                              double speed_sq) {
  return detail::closure_density(gas, b, a, speed_sq);
}

TransportedInvariants transport_invariants(const TildeProfiles& tp) {
  return TransportedInvariants{tp.a, tp.b};
}

Field2D swirl_solve(const Grid& g, const TildeProfiles& tp, const Field2D& rhat) {
  return detail::swirl_from_radius_t(g, tp, rhat);
}

void update_derived(const Grid& g, const BackgroundState& bg,
                    const TildeProfiles& tp, LagrangianState& st) {
  detail::derive_closure_t(g, bg, tp, st);
}

LagrangianState background_state(const Grid& g, const BackgroundState& bg,
                                 const TildeProfiles& tp) {
  LagrangianState st;
  st.w1 = make_field(g);
  st.w2 = make_field(g);
  st.w3 = make_field(g);
  update_derived(g, bg, tp, st);
  return st;
}

void ball_check(const Grid& g, const BackgroundState& bg,
                const TildeProfiles& tp, const LagrangianState& st,
                const BallThresholds& th) {
  const double lo = th.rho_lo_factor * bg.rho_minus;
  const double hi = th.rho_hi_factor * bg.rho_minus;
  const double gamma = bg.gas.gamma;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      const double rho = st.rho(i, j);
      if (!(rho >= lo && rho <= hi))
        throw BallExit("density left [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
      const double ux = bg.u_minus + st.w1(i, j);
      const double qs = ux * ux + st.w2(i, j) * st.w2(i, j) +
                        st.w3(i, j) * st.w3(i, j);
      const double csq = gamma * tp.a[j] * std::pow(rho, gamma - 1.0);
      if (!(qs <= th.mach_sq_max * csq))
        throw BallExit("squared Mach number exceeded " +
                       std::to_string(th.mach_sq_max));
      const double jac = st.rhat(i, j) * rho * ux / (2.0 * g.y2(j));
      if (!(jac >= th.jacobian_floor))
        throw BallExit("transformation Jacobian fell below " +
                       std::to_string(th.jacobian_floor));
    }
}

SourceTerms assemble_sources(const Grid& g, const BackgroundState& bg,
                             const TildeProfiles& tp, const LagrangianState& st,
                             const std::vector<double>& w_slope,
                             const BallThresholds& th) {
  if (int(w_slope.size()) != g.nodes1())
    throw DomainError("contact slope sample count mismatch");
  ball_check(g, bg, tp, st, th);
  auto s = detail::assemble_sources_t(g, bg, tp, st, w_slope);
  return SourceTerms{std::move(s.f1), std::move(s.f2), std::move(s.f3),
                     std::move(s.f4)};
}

std::vector<double> interface_pressure(const Grid& g, const BackgroundState& bg,
                                       const TildeProfiles& tp,
                                       const Field2D& rho) {
  return detail::interface_pressure_t(g, bg, tp, rho);
}

}  // namespace cdflow
