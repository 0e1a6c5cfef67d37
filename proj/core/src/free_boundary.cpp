#include "cdflow/free_boundary.hpp"

#include <cmath>
#include <string>

namespace cdflow {

std::vector<double> pressure_mismatch(const Grid& g, const BackgroundState& bg,
                                      const TildeProfiles& tp,
                                      const LagrangianState& st) {
  std::vector<double> q = interface_pressure(g, bg, tp, st.rho);
  for (double& v : q) v -= bg.p;
  return q;
}

BackgroundDerivative::BackgroundDerivative(const Grid& g,
                                           const BackgroundState& bg)
    : g_(g), bg_(bg), lin_(g, bg), pot_(g, bg) {}

std::vector<double> BackgroundDerivative::apply(
    const std::vector<double>& w) const {
  if (int(w.size()) != g_.nodes1())
    throw DomainError("slope sample count mismatch");
  Field2D zero2 = make_field(g_);
  std::vector<double> f3(g_.n2, 0.0);
  std::vector<double> f4(g_.nodes1());
  for (int i = 0; i <= g_.n1; ++i) f4[i] = bg_.u_minus * w[i];
  Field2D phi_curl = lin_.solve_curl_free(zero2, f3, f4);

  // Face trace of the potential, quadratic through the last cell pair and the
  // flux data the solve just imposed. Differencing this trace keeps the
  // composition with the inverse second order up to the interface corner,
  // where cell-center extrapolation of W1 loses an order whenever the data
  // excite the corner resonance.
  const int t = g_.n2 - 1;
  std::vector<double> gface(g_.nodes1());
  for (int i = 0; i <= g_.n1; ++i)
    gface[i] = (3.0 * g_.h2 * f4[i] + 9.0 * phi_curl(i, t) -
                phi_curl(i, t - 1)) /
               8.0;

  std::vector<double> out(g_.nodes1());
  const double jb = bg_.rho_minus * bg_.u_minus;
  out[0] = 0.0;  // W1(0,.) is inlet data, identically zero here
  for (int i = 1; i < g_.n1; ++i)
    out[i] = -jb * (gface[i + 1] - gface[i - 1]) / (2.0 * g_.h1);
  out[g_.n1] = -jb *
               (3.0 * gface[g_.n1] - 4.0 * gface[g_.n1 - 1] +
                gface[g_.n1 - 2]) /
               (2.0 * g_.h1);
  return out;
}

std::vector<double> BackgroundDerivative::invert(
    const std::vector<double>& pstar, double zero_tol) const {
  if (int(pstar.size()) != g_.nodes1())
    throw DomainError("mismatch sample count does not match the grid");
  if (std::abs(pstar[0]) > zero_tol)
    throw DomainError("mismatch head value " + std::to_string(pstar[0]) +
                      " is outside the derivative's range");
  const double jb = bg_.rho_minus * bg_.u_minus;
  // Face potential values: integral of -pstar/jb from the outlet backwards,
  // so the axial face derivative of the potential matches -pstar/jb and the
  // outlet value is zero.
  std::vector<double> gdata(g_.nodes1());
  gdata[g_.n1] = 0.0;
  for (int i = g_.n1 - 1; i >= 0; --i)
    gdata[i] = gdata[i + 1] + 0.25 * g_.h1 * (pstar[i] + pstar[i + 1]) *
                                  (2.0 / jb);
  std::vector<double> dphi = pot_.face_derivative(gdata);
  for (double& v : dphi) v /= bg_.u_minus;
  return dphi;
}

FreeBoundarySolution newton_solve(const InnerSolver& inner,
                                  const NewtonOptions& opt,
                                  NewtonTrace* trace) {
  const Grid& g = inner.grid();
  const BackgroundState& bg = inner.background();
  const TildeProfiles& tp = inner.profiles();
  BackgroundDerivative deriv(g, bg);

  std::vector<double> w(g.nodes1(), 0.0);
  FreeBoundarySolution out;
  if (trace) {
    trace->residuals.clear();
    trace->iterations = 0;
    trace->converged = false;
    trace->head_mismatch = 0.0;
  }

  const LagrangianState* warm = nullptr;
  std::vector<double> hist;
  int stall_streak = 0;
  double prev = -1.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    out.state = inner.solve(w, opt.inner, &out.inner, warm);
    warm = &out.state;
    std::vector<double> q = pressure_mismatch(g, bg, tp, out.state);

    double res = 0.0;
    for (int i = 1; i <= g.n1; ++i) res = std::max(res, std::abs(q[i]));
    hist.push_back(res);
    if (trace) {
      trace->residuals.push_back(res);
      trace->iterations = it;
      trace->head_mismatch = std::abs(q[0]);
    }
    if (!std::isfinite(res))
      throw OuterDivergence("outer residual is not finite");
    if (res <= opt.outer_tol) {
      if (trace) trace->converged = true;
      out.contact = contact_from_slope(g, w);
      return out;
    }
    // The inverse removes what it can see at a geometric rate; once the sup
    // improves by less than 30% over three updates, what remains is the
    // grid-scale component outside its reach. Stop there and leave the
    // floor value in the trace.
    if (hist.size() >= 4 && res >= 0.7 * hist[hist.size() - 4]) {
      if (trace) {
        trace->converged = true;
        trace->at_floor = true;
      }
      out.contact = contact_from_slope(g, w);
      return out;
    }
    if (prev >= 0.0) {
      stall_streak = res >= prev ? stall_streak + 1 : 0;
      if (stall_streak >= 3)
        throw OuterDivergence(
            "outer residual failed to decrease three times in a row");
    }
    prev = res;

    // The derivative's range vanishes at the inlet node (the inlet flux
    // condition pins the face density there), so the head component of the
    // mismatch is not correctable by any slope update. Project it out
    // before inverting; it is reported as head_mismatch instead.
    q[0] = 0.0;
    std::vector<double> dw = deriv.invert(q);
    for (int i = 0; i <= g.n1; ++i) w[i] -= dw[i];
  }
  throw OuterDivergence("free boundary iteration did not reach tolerance " +
                        std::to_string(opt.outer_tol) + " within " +
                        std::to_string(opt.max_iter) + " updates");
}

}  // namespace cdflow
