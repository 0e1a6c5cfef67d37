#include "cdflow/lagrangian.hpp"

#include <algorithm>
#include <cmath>

#include "cdflow/detail/kernels.hpp"

namespace cdflow {

namespace {

constexpr int kTableSize = 4096;
constexpr double kRootTol = 1e-12;

// Two-point Gauss on [a,b], exact through cubics.
template <class F>
double gauss2(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double d = h / std::sqrt(3.0);
  return h * (f(c - d) + f(c + d));
}

// Cumulative table of M(r) = integral_0^r s J0(s) ds on [0, 1/2].
struct FluxTable {
  std::vector<double> r, m;
};

FluxTable build_flux_table(const InletData& inlet) {
  FluxTable t;
  t.r.resize(kTableSize + 1);
  t.m.resize(kTableSize + 1);
  auto f = [&](double s) { return s * inlet.j0(s); };
  t.r[0] = 0.0;
  t.m[0] = 0.0;
  for (int k = 1; k <= kTableSize; ++k) {
    t.r[k] = 0.5 * k / kTableSize;
    t.m[k] = t.m[k - 1] + gauss2(f, t.r[k - 1], t.r[k]);
  }
  return t;
}

double flux_integral(const FluxTable& t, const InletData& inlet, double r) {
  auto it = std::upper_bound(t.r.begin(), t.r.end(), r);
  int k = std::max<int>(1, int(it - t.r.begin()));
  k = std::min(k, kTableSize);
  auto f = [&](double s) { return s * inlet.j0(s); };
  return t.m[k - 1] + gauss2(f, t.r[k - 1], r);
}

// Solves M(r) = target for r in [0, 1/2]; Newton with a bisection bracket.
double invert_flux(const FluxTable& t, const InletData& inlet, double target) {
  if (target <= 0.0) return 0.0;
  if (target >= t.m.back()) return 0.5;
  auto it = std::upper_bound(t.m.begin(), t.m.end(), target);
  int k = std::max<int>(1, int(it - t.m.begin()));
  double lo = t.r[k - 1], hi = t.r[std::min(k, kTableSize)];
  double r = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    double fr = flux_integral(t, inlet, r) - target;
    if (fr > 0.0)
      hi = r;
    else
      lo = r;
    double dfr = r * inlet.j0(r);
    double step = fr / dfr;
    double next = r - step;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);  // secant/bisection guard
    if (std::abs(next - r) <= kRootTol) return next;
    r = next;
  }
  throw RootBracketFailure("mass shell inversion did not reach tolerance");
}

using detail::extrap_axis;
using detail::extrap_face;

}  // namespace

double mass_flux_parameter(const InletData& inlet) {
  FluxTable t = build_flux_table(inlet);
  double msq = t.m.back();
  if (!(msq > 0.0)) throw NonPositiveFlux("total inlet mass flux is not positive");
  return std::sqrt(msq);
}

TildeProfiles inlet_to_lagrangian(const InletData& inlet, const Grid& g) {
  FluxTable t = build_flux_table(inlet);
  const double m = std::sqrt(t.m.back());
  if (std::abs(g.height - m) > 1e-10 * std::max(1.0, m))
    throw DomainError("grid height does not match the inlet mass flux parameter");

  TildeProfiles tp;
  tp.height = g.height;
  const int n2 = g.cells2();
  tp.r0.resize(n2);
  tp.j.resize(n2);
  tp.nu.resize(n2);
  tp.a.resize(n2);
  tp.b.resize(n2);
  tp.da.resize(n2);
  tp.db.resize(n2);
  tp.lambda.resize(n2);
  for (int jj = 0; jj < n2; ++jj) {
    double y2 = g.y2(jj);
    double r0 = invert_flux(t, inlet, y2 * y2);
    tp.r0[jj] = r0;
    tp.j[jj] = inlet.j0(r0);
    tp.nu[jj] = inlet.nu0(r0);
    tp.a[jj] = inlet.a0(r0);
    tp.b[jj] = inlet.b0(r0);
    // d/dy2 of a composed profile: f'(r0) * r0'(y2), r0' = 2 y2 / (r0 J0(r0));
    // at the axis r0'(0) = sqrt(2/J0(0)) and the compatible profiles are flat.
    double dr0 = r0 > 0.0 ? 2.0 * y2 / (r0 * inlet.j0(r0)) : std::sqrt(2.0 / inlet.j0(0.0));
    tp.da[jj] = inlet.da0(r0) * dr0;
    tp.db[jj] = inlet.db0(r0) * dr0;
    tp.lambda[jj] = r0 * inlet.nu0(r0);
  }
  tp.r0_face = 0.5;
  tp.j_face = inlet.j0(0.5);
  tp.nu_face = inlet.nu0(0.5);
  tp.a_face = inlet.a0(0.5);
  tp.b_face = inlet.b0(0.5);
  tp.lambda_face = 0.5 * inlet.nu0(0.5);
  return tp;
}

ContactCurve flat_contact(const Grid& g) {
  ContactCurve cc;
  cc.w.assign(g.nodes1(), 0.0);
  cc.g.assign(g.nodes1(), 0.5);
  return cc;
}

ContactCurve contact_from_slope(const Grid& g, std::vector<double> w) {
  if (int(w.size()) != g.nodes1()) throw DomainError("slope sample count mismatch");
  ContactCurve cc;
  cc.w = std::move(w);
  cc.g.resize(cc.w.size());
  cc.g[0] = 0.5;
  for (size_t i = 1; i < cc.w.size(); ++i)
    cc.g[i] = cc.g[i - 1] + 0.5 * g.h1 * (cc.w[i - 1] + cc.w[i]);
  return cc;
}

Field2D reconstruct_radius(const Grid& g, const Field2D& rho_ux,
                           std::vector<double>* face_out) {
  if (rho_ux.rows != g.nodes1() || rho_ux.cols != g.cells2())
    throw DomainError("mass-flux field does not match the grid");
  Field2D rhat;
  detail::reconstruct_radius_t(g, rho_ux, rhat, face_out);
  return rhat;
}

Field2D jacobian(const Grid& g, const Field2D& rhat, const Field2D& rho_ux, double floor) {
  Field2D jac(rhat.rows, rhat.cols);
  for (int i = 0; i < rhat.rows; ++i)
    for (int j = 0; j < rhat.cols; ++j) {
      jac(i, j) = rhat(i, j) * rho_ux(i, j) / (2.0 * g.y2(j));
      if (!(jac(i, j) >= floor))
        throw JacobianDegenerate("transformation Jacobian fell below " +
                                 std::to_string(floor));
    }
  return jac;
}

PhysicalSample PhysicalSolution::eval_station(int i, double rq) const {
  const auto& rr = r[i];
  PhysicalSample s;
  s.inner = true;
  double q = std::clamp(rq, 0.0, rr.back());
  auto it = std::upper_bound(rr.begin(), rr.end(), q);
  int k = std::clamp<int>(int(it - rr.begin()), 1, int(rr.size()) - 1);
  double t = (q - rr[k - 1]) / (rr[k] - rr[k - 1]);
  auto lin = [&](const std::vector<double>& v) { return (1.0 - t) * v[k - 1] + t * v[k]; };
  s.rho = lin(rho[i]);
  s.ux = lin(ux[i]);
  s.ur = lin(ur[i]);
  s.uth = lin(uth[i]);
  s.p = lin(p[i]);
  s.y2 = lin(y2[i]);
  return s;
}

double PhysicalSolution::interface_radius(double xq) const {
  const double h = x[1] - x[0];
  double t = std::clamp(xq, x.front(), x.back()) / h;
  int i = std::clamp<int>(int(t), 0, int(x.size()) - 2);
  double f = t - i;
  return (1.0 - f) * g[i] + f * g[i + 1];
}

double PhysicalSolution::interface_slope(double xq) const {
  const double h = x[1] - x[0];
  double t = std::clamp(xq, x.front(), x.back()) / h;
  int i = std::clamp<int>(int(t), 0, int(x.size()) - 2);
  double f = t - i;
  return (1.0 - f) * gslope[i] + f * gslope[i + 1];
}

PhysicalSample PhysicalSolution::eval(double xq, double rq) const {
  if (rq > interface_radius(xq)) {
    PhysicalSample s;
    s.rho = rho_out;
    s.p = p_out;
    s.inner = false;
    s.y2 = 0.0;
    return s;
  }
  const double h = x[1] - x[0];
  double t = std::clamp(xq, x.front(), x.back()) / h;
  int i = std::clamp<int>(int(t), 0, int(x.size()) - 2);
  double f = t - i;
  PhysicalSample a = eval_station(i, rq), b = eval_station(i + 1, rq);
  PhysicalSample s;
  s.inner = true;
  s.rho = (1.0 - f) * a.rho + f * b.rho;
  s.ux = (1.0 - f) * a.ux + f * b.ux;
  s.ur = (1.0 - f) * a.ur + f * b.ur;
  s.uth = (1.0 - f) * a.uth + f * b.uth;
  s.p = (1.0 - f) * a.p + f * b.p;
  s.y2 = (1.0 - f) * a.y2 + f * b.y2;
  return s;
}

PhysicalSample PhysicalSolution::interface_trace(int i) const {
  PhysicalSample s;
  s.inner = true;
  s.rho = rho[i].back();
  s.ux = ux[i].back();
  s.ur = ur[i].back();
  s.uth = uth[i].back();
  s.p = p[i].back();
  s.y2 = y2[i].back();
  return s;
}

PhysicalSolution to_physical(const Grid& g, const BackgroundState& bg,
                             const TildeProfiles& tp, const LagrangianState& st,
                             const ContactCurve& cc) {
  const int n1 = g.nodes1(), n2 = g.cells2();
  const double gam = bg.gas.gamma;
  PhysicalSolution ps;
  ps.gas = bg.gas;
  ps.u_b = bg.u_minus;
  ps.rho_out = bg.rho_plus;
  ps.p_out = bg.p;
  ps.x.resize(n1);
  ps.g = cc.g;
  ps.gslope = cc.w;
  ps.r.resize(n1);
  ps.y2.resize(n1);
  ps.rho.resize(n1);
  ps.ux.resize(n1);
  ps.ur.resize(n1);
  ps.uth.resize(n1);
  ps.p.resize(n1);

  const double a_axis = extrap_axis(tp.a[0], tp.a[1]);
  for (int i = 0; i < n1; ++i) {
    ps.x[i] = g.y1(i);
    auto& rr = ps.r[i];
    auto& yy = ps.y2[i];
    auto& rh = ps.rho[i];
    auto& vx = ps.ux[i];
    auto& vr = ps.ur[i];
    auto& vt = ps.uth[i];
    auto& pp = ps.p[i];
    rr.resize(n2 + 2);
    yy.resize(n2 + 2);
    rh.resize(n2 + 2);
    vx.resize(n2 + 2);
    vr.resize(n2 + 2);
    vt.resize(n2 + 2);
    pp.resize(n2 + 2);

    rr[0] = 0.0;
    yy[0] = 0.0;
    rh[0] = extrap_axis(st.rho(i, 0), st.rho(i, 1));
    vx[0] = bg.u_minus + extrap_axis(st.w1(i, 0), st.w1(i, 1));
    vr[0] = 0.0;
    vt[0] = 0.0;
    pp[0] = a_axis * std::pow(rh[0], gam);
    for (int j = 0; j < n2; ++j) {
      rr[j + 1] = st.rhat(i, j);
      yy[j + 1] = g.y2(j);
      rh[j + 1] = st.rho(i, j);
      vx[j + 1] = bg.u_minus + st.w1(i, j);
      vr[j + 1] = st.w2(i, j);
      vt[j + 1] = st.w3(i, j);
      pp[j + 1] = tp.a[j] * std::pow(st.rho(i, j), gam);
    }
    rr[n2 + 1] = st.rhat_face.empty() ? extrap_face(rr[n2], rr[n2 - 1]) : st.rhat_face[i];
    yy[n2 + 1] = g.height;
    rh[n2 + 1] = extrap_face(st.rho(i, n2 - 1), st.rho(i, n2 - 2));
    vx[n2 + 1] = bg.u_minus + extrap_face(st.w1(i, n2 - 1), st.w1(i, n2 - 2));
    vr[n2 + 1] = extrap_face(st.w2(i, n2 - 1), st.w2(i, n2 - 2));
    vt[n2 + 1] = extrap_face(st.w3(i, n2 - 1), st.w3(i, n2 - 2));
    pp[n2 + 1] = tp.a_face * std::pow(rh[n2 + 1], gam);
  }
  return ps;
}

}  // namespace cdflow
