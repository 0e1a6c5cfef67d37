#include "cdflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>

#include "cdflow/closure.hpp"
#include "cdflow/detail/kernels.hpp"
#include "cdflow/errors.hpp"

namespace cdflow {

namespace {

struct Acc {
  double sup = 0.0;
  double sq = 0.0;
  void add(double v, double wgt) {
    sup = std::max(sup, std::abs(v));
    sq += wgt * v * v;
  }
  ResidualNorm norm() const { return {sup, std::sqrt(sq)}; }
};

// Difference stencils local to the verification layer, centered only; the
// solver instead uses parity ghosts under the axis and biased closures at
// the walls, so the two discretizations only agree up to their common
// truncation error. Callers keep the stencil inside the grid.
double vd1(const Field2D& f, const Grid& g, int i, int j) {
  return (f(i + 1, j) - f(i - 1, j)) / (2.0 * g.h1);
}

double vd2(const Field2D& f, const Grid& g, int i, int j) {
  return (f(i, j + 1) - f(i, j - 1)) / (2.0 * g.h2);
}

}  // namespace

StripResiduals lagrangian_residual(const Grid& g, const BackgroundState& bg,
                                   const TildeProfiles& tp,
                                   const LagrangianState& st,
                                   const ContactCurve& cc) {
  if (g.n1 < 2 || g.n2 < 3)
    throw DomainError("residual stencils need at least a 2 x 3 grid");
  if (st.w1.rows != g.nodes1() || st.w1.cols != g.n2 ||
      int(cc.w.size()) != g.nodes1() || int(tp.a.size()) != g.n2)
    throw DomainError("state, contact or profiles do not match the grid");

  const double gam = bg.gas.gamma;
  const double ub = bg.u_minus;
  const double wgt = g.h1 * g.h2;

  // Interior residuals carry a distance-to-inlet/outlet weight. The inlet
  // data fix the fields only up to corner compatibility, so second
  // derivatives concentrate toward y1 = 0 and y1 = L and an unweighted sup
  // there measures that layer, not the scheme; the construction's own
  // estimates are interior-weighted in exactly this way.
  const auto dist = [&](int i) {
    return std::min(g.y1(i), g.length - g.y1(i)) / g.length;
  };

  Acc div, curl, swirl;
  for (int i = 1; i < g.n1; ++i) {
    for (int j = 1; j + 1 < g.n2; ++j) {
      const double y2 = g.y2(j);
      const double ux = ub + st.w1(i, j);
      const double ur = st.w2(i, j);
      const double ut = st.w3(i, j);
      const double rho = st.rho(i, j);
      const double rh = st.rhat(i, j);
      const double csq = gam * tp.a[j] * std::pow(rho, gam - 1.0);
      const double cw = rh * rho / (2.0 * y2);

      const double d1ux = vd1(st.w1, g, i, j);
      const double d1ur = vd1(st.w2, g, i, j);
      const double d2ux = vd2(st.w1, g, i, j);
      const double d2ur = vd2(st.w2, g, i, j);
      const double d2ut = vd2(st.w3, g, i, j);

      const double r1 = (csq - ux * ux) * (d1ux - cw * ur * d2ux) +
                        (csq - ur * ur) * cw * ux * d2ur + (csq / rh) * ur +
                        (ut * ut / rh) * ur -
                        ux * ur * (d1ur - cw * ur * d2ur + cw * ux * d2ux);
      const double r2 =
          ux * (d1ur - cw * ur * d2ur) - cw * ux * ux * d2ux -
          (cw * ux * ut * d2ut + ut * ut / rh +
           cw * ux * (std::pow(rho, gam - 1.0) / (gam - 1.0)) * tp.da[j] -
           cw * ux * tp.db[j]);

      div.add(dist(i) * r1, wgt);
      curl.add(dist(i) * r2, wgt);
    }
  }

  // Angular momentum rides the streams: rhat * u_theta must not vary in y1.
  Field2D lam(g.nodes1(), g.n2);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) lam(i, j) = st.rhat(i, j) * st.w3(i, j);
  for (int i = 1; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      swirl.add(dist(i) * vd1(lam, g, i, j), wgt);

  StripResiduals out;
  out.divergence = div.norm();
  out.curl = curl.norm();
  out.swirl = swirl.norm();

  for (int j = 0; j < g.n2; ++j) {
    const double flux = st.rho(0, j) * (ub + st.w1(0, j));
    out.inlet_flux = std::max(out.inlet_flux, std::abs(flux - tp.j[j]));
    out.inlet_swirl =
        std::max(out.inlet_swirl, std::abs(st.w3(0, j) - tp.nu[j]));
  }
  for (int j = 0; j < g.n2; ++j)
    out.outlet = std::max(out.outlet, std::abs(st.w2(g.n1, j)));

  const int t = g.n2 - 1;
  for (int i = 0; i <= g.n1; ++i) {
    // Linear extrapolation to the faces, one order cruder than the solver's.
    const double w2f = 1.5 * st.w2(i, t) - 0.5 * st.w2(i, t - 1);
    const double w1f = 1.5 * st.w1(i, t) - 0.5 * st.w1(i, t - 1);
    out.interface_tangency = std::max(
        out.interface_tangency, std::abs(w2f - (ub + w1f) * cc.w[i]));
    const double w2a = 1.5 * st.w2(i, 0) - 0.5 * st.w2(i, 1);
    out.axis = std::max(out.axis, std::abs(w2a));
  }
  return out;
}

EulerResiduals physical_euler_residual(const PhysicalSolution& ps, int nx,
                                       int nr) {
  if (nx < 4 || nr < 4) throw DomainError("Euler residual lattice too small");
  const int ns = int(ps.x.size());
  if (ns < 2) throw DomainError("solution has fewer than two stations");
  const double xmax = ps.x.back();
  const double rmax = 1.0;  // unit cylinder wall
  const double dx = xmax / nx;
  const double dr = rmax / nr;
  const double gam = ps.gas.gamma;

  // Sample everything once, classify points by side, then difference only
  // where the full centered stencil stays strictly on one side of the
  // contact (a one-cell buffer on each flank).
  const int px = nx + 1, pr = nr + 1;
  auto idx = [pr](int ix, int jr) { return size_t(ix) * pr + jr; };
  std::vector<double> rho(px * pr), ux(px * pr), ur(px * pr), uth(px * pr),
      p(px * pr), ruth(px * pr), ent(px * pr), bern(px * pr);
  std::vector<int> side(px * pr);  // +1 stream, -1 still gas, 0 skirt
  for (int ix = 0; ix <= nx; ++ix) {
    const double x = std::min(ix * dx, xmax);
    const double gx = ps.interface_radius(x);
    for (int jr = 0; jr <= nr; ++jr) {
      const double r = jr * dr;
      const auto s = ps.eval(x, r);
      const size_t k = idx(ix, jr);
      rho[k] = s.rho;
      ux[k] = s.ux;
      ur[k] = s.ur;
      uth[k] = s.uth;
      p[k] = s.p;
      ruth[k] = r * s.uth;
      ent[k] = s.p / std::pow(s.rho, gam);
      const double q = s.ux * s.ux + s.ur * s.ur + s.uth * s.uth;
      bern[k] = 0.5 * q + gam * s.p / ((gam - 1.0) * s.rho);
      if (r < gx - 1.5 * dr)
        side[k] = 1;
      else if (r > gx + 1.5 * dr)
        side[k] = -1;
      else
        side[k] = 0;
    }
  }

  std::array<Acc, 5> in, outa;
  Acc vort;
  int nin = 0, nout = 0;
  const double wgt = dx * dr;
  for (int ix = 1; ix < nx; ++ix) {
    for (int jr = 1; jr < nr; ++jr) {
      const size_t k = idx(ix, jr);
      const int sgn = side[k];
      if (sgn == 0) continue;
      if (side[idx(ix - 1, jr)] != sgn || side[idx(ix + 1, jr)] != sgn ||
          side[idx(ix, jr - 1)] != sgn || side[idx(ix, jr + 1)] != sgn)
        continue;
      const double r = jr * dr;
      auto ddx = [&](const std::vector<double>& f) {
        return (f[idx(ix + 1, jr)] - f[idx(ix - 1, jr)]) / (2.0 * dx);
      };
      auto ddr = [&](const std::vector<double>& f) {
        return (f[idx(ix, jr + 1)] - f[idx(ix, jr - 1)]) / (2.0 * dr);
      };

      const double mass =
          ddx(rho) * ux[k] + rho[k] * ddx(ux) + ddr(rho) * ur[k] +
          rho[k] * ddr(ur) + rho[k] * ur[k] / r;
      const double axial =
          rho[k] * (ux[k] * ddx(ux) + ur[k] * ddr(ux)) + ddx(p);
      const double radial = rho[k] * (ux[k] * ddx(ur) + ur[k] * ddr(ur)) -
                            rho[k] * uth[k] * uth[k] / r + ddr(p);
      const double swirl =
          rho[k] * (ux[k] * ddx(ruth) + ur[k] * ddr(ruth));
      const double entropy =
          rho[k] * (ux[k] * ddx(ent) + ur[k] * ddr(ent));

      auto& bucket = (sgn > 0) ? in : outa;
      bucket[0].add(mass, wgt);
      bucket[1].add(axial, wgt);
      bucket[2].add(radial, wgt);
      bucket[3].add(swirl, wgt);
      bucket[4].add(entropy, wgt);
      if (sgn > 0) {
        ++nin;
        // Azimuthal vorticity against its algebraic expression in the
        // transported quantities.
        const double lhs = ddx(ur) - ddr(ux);
        const double coef =
            (bern[k] - 0.5 * (ux[k] * ux[k] + ur[k] * ur[k] +
                              uth[k] * uth[k])) /
            (ent[k] * gam);
        const double rhs = (uth[k] * ddr(uth) + uth[k] * uth[k] / r +
                            coef * ddr(ent) - ddr(bern)) /
                           ux[k];
        vort.add(lhs - rhs, wgt);
      } else {
        ++nout;
      }
    }
  }

  EulerResiduals out;
  for (int e = 0; e < 5; ++e) {
    out.inner[e] = in[e].norm();
    out.outer[e] = outa[e].norm();
  }
  out.vorticity_identity = vort.sup;
  out.inner_points = nin;
  out.outer_points = nout;
  return out;
}

InterfaceCheck rankine_hugoniot_check(const PhysicalSolution& ps) {
  const int ns = int(ps.x.size());
  if (ns < 2) throw DomainError("solution has fewer than two stations");
  InterfaceCheck out;
  out.tangential_jump = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ns; ++i) {
    const auto tr = ps.interface_trace(i);
    const double gp = ps.gslope[i];
    const double len = std::sqrt(1.0 + gp * gp);
    // Unit normal (-g', 1)/len points out of the stream; the still side has
    // u = 0, so its normal trace is exactly zero and the jump is the inner
    // trace itself.
    const double un = (-gp * tr.ux + tr.ur) / len;
    const double tang = (tr.ux + gp * tr.ur) / len;
    out.normal_velocity = std::max(out.normal_velocity, std::abs(un));
    out.pressure_jump = std::max(out.pressure_jump, std::abs(tr.p - ps.p_out));
    out.tangential_jump = std::min(out.tangential_jump, std::abs(tang));
  }
  return out;
}

ConservationReport conservation_checks(const PhysicalSolution& ps,
                                       double m_sq) {
  const int ns = int(ps.x.size());
  if (ns < 1) throw DomainError("empty solution");
  const size_t na = ps.r[0].size();
  ConservationReport out;
  for (int i = 0; i < ns; ++i) {
    if (ps.r[i].size() != na)
      throw DomainError("station anchor counts differ");
    // Mass flux through the station: trapezoid of s rho u_x on the anchor
    // radii, which runs from the axis to the interface.
    double flux = 0.0;
    for (size_t k = 1; k < na; ++k) {
      const double fa = ps.r[i][k - 1] * ps.rho[i][k - 1] * ps.ux[i][k - 1];
      const double fb = ps.r[i][k] * ps.rho[i][k] * ps.ux[i][k];
      flux += 0.5 * (ps.r[i][k] - ps.r[i][k - 1]) * (fa + fb);
    }
    out.mass_flux = std::max(out.mass_flux, std::abs(flux - m_sq));

    // The anchors carry the same mass labels at every station, so drift
    // against station zero measures transport of the stream invariants.
    const double gam = ps.gas.gamma;
    for (size_t k = 0; k < na; ++k) {
      const double am = ps.r[i][k] * ps.uth[i][k] - ps.r[0][k] * ps.uth[0][k];
      const double s0 = ps.p[0][k] / std::pow(ps.rho[0][k], gam);
      const double si = ps.p[i][k] / std::pow(ps.rho[i][k], gam);
      auto bern = [gam](const PhysicalSolution& q, int st, size_t a) {
        const double qq = q.ux[st][a] * q.ux[st][a] +
                          q.ur[st][a] * q.ur[st][a] +
                          q.uth[st][a] * q.uth[st][a];
        return 0.5 * qq + gam * q.p[st][a] / ((gam - 1.0) * q.rho[st][a]);
      };
      out.angular_momentum = std::max(out.angular_momentum, std::abs(am));
      out.entropy = std::max(out.entropy, std::abs(si - s0));
      out.bernoulli =
          std::max(out.bernoulli, std::abs(bern(ps, i, k) - bern(ps, 0, k)));
    }
  }
  return out;
}

namespace {

double bump(double t, double a, double b) {
  if (t <= a || t >= b) return 0.0;
  const double u = (t - a) * (b - t);
  return u * u * u;
}

double dbump(double t, double a, double b) {
  if (t <= a || t >= b) return 0.0;
  const double u = (t - a) * (b - t);
  return 3.0 * u * u * (a + b - 2.0 * t);
}

// Composite Simpson nodes/weights over [a,b] with an even panel count.
void simpson(double a, double b, int panels, std::vector<double>& t,
             std::vector<double>& w) {
  if (panels < 2) panels = 2;
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  t.resize(panels + 1);
  w.resize(panels + 1);
  for (int k = 0; k <= panels; ++k) {
    t[k] = a + h * k;
    double c = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    w[k] = c * h / 3.0;
  }
}

}  // namespace

std::vector<WeakIntegrals> weak_form_check(const PhysicalSolution& ps,
                                           const std::vector<BumpSpec>& bumps,
                                           int refine) {
  const int ns = int(ps.x.size());
  if (ns < 2) throw DomainError("solution has fewer than two stations");
  if (refine < 1) refine = 1;
  const double gam = ps.gas.gamma;
  const double hx = ps.x[1] - ps.x[0];
  double hr = std::numeric_limits<double>::infinity();
  for (size_t k = 1; k < ps.r[0].size(); ++k)
    hr = std::min(hr, ps.r[0][k] - ps.r[0][k - 1]);

  std::vector<WeakIntegrals> out;
  out.reserve(bumps.size());
  for (const auto& bs : bumps) {
    if (!(bs.x0 < bs.x1) || !(bs.r0 < bs.r1))
      throw DomainError("bump support is empty");
    WeakIntegrals acc{};
    std::vector<double> xs, wx;
    simpson(bs.x0, bs.x1, int(std::ceil((bs.x1 - bs.x0) / hx)) * refine, xs,
            wx);
    std::vector<double> rs, wr;
    for (size_t ik = 0; ik < xs.size(); ++ik) {
      const double x = xs[ik];
      const double bx = bump(x, bs.x0, bs.x1);
      const double dbx = dbump(x, bs.x0, bs.x1);
      const double gx = ps.interface_radius(x);

      // Split the radial panel at the contact so the quadrature never
      // straddles the discontinuity.
      std::vector<std::pair<double, double>> segs;
      if (gx > bs.r0 && gx < bs.r1) {
        segs.push_back({bs.r0, gx});
        segs.push_back({gx, bs.r1});
      } else {
        segs.push_back({bs.r0, bs.r1});
      }
      for (const auto& [ra, rb] : segs) {
        simpson(ra, rb, int(std::ceil((rb - ra) / hr)) * refine, rs, wr);
        for (size_t jk = 0; jk < rs.size(); ++jk) {
          const double r = rs[jk];
          const double br = bump(r, bs.r0, bs.r1);
          const double dbr = dbump(r, bs.r0, bs.r1);
          const double w = wx[ik] * wr[jk];
          const auto s = ps.eval(x, r);
          const double etx = dbx * br, etr = bx * dbr, et = bx * br;
          const double H =
              0.5 * (s.ux * s.ux + s.ur * s.ur + s.uth * s.uth) +
              gam * s.p / ((gam - 1.0) * s.rho);
          acc[0] += w * (s.rho * s.ux * etx + s.rho * s.ur * etr) * r;
          acc[1] += w * ((s.rho * s.ux * s.ux + s.p) * etx +
                         s.rho * s.ux * s.ur * etr) *
                    r;
          acc[2] += w * ((s.rho * s.ux * s.ur * etx +
                          (s.rho * s.ur * s.ur + s.p) * etr) *
                             r +
                         (s.rho * s.uth * s.uth + s.p) * et);
          acc[3] += w * ((s.rho * s.ux * s.uth * etx +
                          s.rho * s.ur * s.uth * etr) *
                             r -
                         s.rho * s.ur * s.uth * et);
          acc[4] += w * (s.rho * s.ux * H * etx + s.rho * s.ur * H * etr) * r;
        }
      }
    }
    out.push_back(acc);
  }
  return out;
}

std::vector<double> state_derivative_apply(const InnerSolver& solver,
                                           const LagrangianState& base,
                                           const std::vector<double>& w,
                                           const std::vector<double>& w1,
                                           const PicardOptions& opt) {
  using C = std::complex<double>;
  const Grid& g = solver.grid();
  const BackgroundState& bg = solver.background();
  const TildeProfiles& tp = solver.profiles();
  if (w.size() != w1.size() || int(w.size()) != g.nodes1())
    throw DomainError("slope vectors do not match the grid");
  constexpr double h = 1e-100;  // complex step: no subtractive cancellation

  std::vector<C> wc(w.size());
  for (size_t k = 0; k < w.size(); ++k) wc[k] = C(w[k], h * w1[k]);

  Field2D dw1 = make_field(g), dw2 = make_field(g), dw3 = make_field(g);
  StateFields<C> cs;
  cs.w1 = BasicField<C>(g.nodes1(), g.n2);
  cs.w2 = BasicField<C>(g.nodes1(), g.n2);
  cs.w3 = BasicField<C>(g.nodes1(), g.n2);

  auto load = [&]() {
    for (int i = 0; i <= g.n1; ++i)
      for (int j = 0; j < g.n2; ++j) {
        cs.w1(i, j) = C(base.w1(i, j), h * dw1(i, j));
        cs.w2(i, j) = C(base.w2(i, j), h * dw2(i, j));
        cs.w3(i, j) = C(base.w3(i, j), h * dw3(i, j));
      }
    detail::derive_closure_t(g, bg, tp, cs);
  };

  // The linearization of the fixed-point map is itself a contraction, so
  // iterating it on the perturbation converges at the same rate as the
  // nonlinear iteration. Each pass differentiates the source assembly by a
  // complex step and reuses the real factorized linear system on Im/h.
  bool converged = false;
  for (int it = 0; it < opt.max_iter; ++it) {
    load();
    const auto src = detail::assemble_sources_t(g, bg, tp, cs, wc);
    SourceTerms ds;
    ds.f1 = make_field(g);
    ds.f2 = make_field(g);
    ds.f3.resize(g.n2);
    ds.f4.resize(g.nodes1());
    for (size_t k = 0; k < src.f1.data.size(); ++k) {
      ds.f1.data[k] = src.f1.data[k].imag() / h;
      ds.f2.data[k] = src.f2.data[k].imag() / h;
    }
    for (int j = 0; j < g.n2; ++j) ds.f3[j] = src.f3[j].imag() / h;
    for (int i = 0; i <= g.n1; ++i) ds.f4[i] = src.f4[i].imag() / h;

    const LinearSolution dsol = solver.linear().solve(ds);
    const auto w3c = detail::swirl_from_radius_t(g, tp, cs.rhat);

    double diff = 0.0;
    for (size_t k = 0; k < dw1.data.size(); ++k) {
      const double n3 = w3c.data[k].imag() / h;
      diff = std::max(diff, std::abs(dsol.w1.data[k] - dw1.data[k]));
      diff = std::max(diff, std::abs(dsol.w2.data[k] - dw2.data[k]));
      diff = std::max(diff, std::abs(n3 - dw3.data[k]));
      dw3.data[k] = n3;
    }
    dw1 = dsol.w1;
    dw2 = dsol.w2;
    if (diff <= opt.tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NoConvergence("derivative iteration did not reach tolerance");

  load();
  const auto pc = detail::interface_pressure_t(g, bg, tp, cs.rho);
  std::vector<double> out(g.nodes1());
  for (int i = 0; i <= g.n1; ++i) out[i] = pc[i].imag() / h;
  return out;
}

double derivative_system_check(const InnerSolver& solver,
                               const std::vector<double>& w,
                               const std::vector<double>& w1, double tau,
                               const PicardOptions& opt) {
  if (tau <= 0.0) throw DomainError("difference-quotient step must be positive");
  const Grid& g = solver.grid();
  const BackgroundState& bg = solver.background();
  const TildeProfiles& tp = solver.profiles();

  const LagrangianState st = solver.solve(w, opt);
  const auto dlin = state_derivative_apply(solver, st, w, w1, opt);

  std::vector<double> wp(w.size());
  for (size_t k = 0; k < w.size(); ++k) wp[k] = w[k] + tau * w1[k];
  const LagrangianState stp = solver.solve(wp, opt, nullptr, &st);

  const auto q0 = interface_pressure(g, bg, tp, st.rho);
  const auto q1 = interface_pressure(g, bg, tp, stp.rho);
  double sup = 0.0;
  for (int i = 0; i <= g.n1; ++i)
    sup = std::max(sup, std::abs((q1[i] - q0[i]) / tau - dlin[i]));
  return sup;
}

}  // namespace cdflow
