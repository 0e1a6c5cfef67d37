#include "cdflow/run.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>
#include <vector>

#include "cdflow/closure.hpp"
#include "cdflow/elliptic.hpp"
#include "cdflow/errors.hpp"
#include "cdflow/io.hpp"
#include "cdflow/verify.hpp"

namespace cdflow {

Problem make_problem(const SolveConfig& c, int n) {
  Problem pb;
  pb.bg = make_background(c.gas, c.rho_minus, c.p, c.rho_plus);
  pb.inlet = make_inlet(pb.bg, c.family, c.amplitude, c.holder_alpha);
  const double m = mass_flux_parameter(pb.inlet);
  pb.m_sq = m * m;
  pb.grid = make_grid(n > 0 ? n : c.n1, n > 0 ? n : c.n2, c.length, m);
  pb.tp = inlet_to_lagrangian(pb.inlet, pb.grid);
  return pb;
}

Problem make_problem(const SolveConfig& c) { return make_problem(c, 0); }

NewtonOptions newton_options(const SolveConfig& c) {
  NewtonOptions opt;
  opt.outer_tol = c.outer_tol;
  opt.max_iter = c.outer_max_iter;
  opt.inner.tol = c.inner_tol;
  opt.inner.max_iter = c.inner_max_iter;
  opt.inner.damping = c.damping;
  opt.inner.ball = c.ball;
  return opt;
}

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void record_failure(const std::string& dir, const SolverError& e) {
  ReportWriter rep(join(dir, "failure.txt"), 0);
  rep.put("error", std::string(e.what()));
  rep.put("exit_code", double(int(e.code())));
}

void write_fields(const std::string& path, std::uint64_t hash,
                  const Problem& pb, const LagrangianState& st) {
  const Grid& g = pb.grid;
  const double gam = pb.bg.gas.gamma;
  std::vector<std::vector<double>> rows;
  rows.reserve(size_t(g.nodes1()) * g.n2);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      const double rho = st.rho(i, j);
      rows.push_back({g.y1(i), g.y2(j), g.y1(i), st.rhat(i, j), st.w1(i, j),
                      st.w2(i, j), st.w3(i, j), rho,
                      pb.tp.a[j] * std::pow(rho, gam)});
    }
  write_table(path, hash, {"y1", "y2", "x", "r", "W1", "W2", "W3", "rho", "P"},
              rows);
}

void write_contact(const std::string& path, std::uint64_t hash, const Grid& g,
                   const ContactCurve& cc) {
  std::vector<std::vector<double>> rows;
  rows.reserve(g.nodes1());
  for (int i = 0; i <= g.n1; ++i)
    rows.push_back({g.y1(i), cc.w[i], cc.g[i]});
  write_table(path, hash, {"y1", "w", "g"}, rows);
}

std::vector<BumpSpec> standard_bumps(double length) {
  // one bump straddling the contact, one inside each phase
  return {{0.15 * length, 0.85 * length, 0.30, 0.70},
          {0.15 * length, 0.85 * length, 0.05, 0.40},
          {0.15 * length, 0.85 * length, 0.60, 0.95}};
}

void put_residual(ReportWriter& rep, const std::string& key,
                  const ResidualNorm& n) {
  rep.put(key + "_sup", n.sup);
  rep.put(key + "_l2", n.l2);
}

// Shared diagnostics block: iteration histories plus the full verification
// suite on the converged state.
void write_diagnostics(const std::string& path, std::uint64_t hash,
                       const Problem& pb, const FreeBoundarySolution& sol,
                       const NewtonTrace& tr) {
  ReportWriter rep(path, hash);
  rep.put("sigma", pb.inlet.sigma());
  rep.put("amplitude", pb.inlet.amplitude());
  rep.put("converged", double(tr.converged));
  rep.put("outer_at_floor", double(tr.at_floor));
  rep.put("outer_iterations", double(tr.iterations));
  for (size_t k = 0; k < tr.residuals.size(); ++k)
    rep.put("outer_residual_" + std::to_string(k), tr.residuals[k]);
  rep.put("head_mismatch", tr.head_mismatch);

  const auto& inc = sol.inner.increments;
  rep.put("inner_iterations", double(sol.inner.iterations));
  for (size_t k = 0; k < inc.size(); ++k)
    rep.put("inner_increment_" + std::to_string(k), inc[k]);
  double ratio_max = 0.0;
  for (size_t k = 1; k + 1 < inc.size(); ++k)
    if (inc[k] > 0.0) ratio_max = std::max(ratio_max, inc[k + 1] / inc[k]);
  rep.put("picard_ratio_max", ratio_max);

  const auto strip = lagrangian_residual(pb.grid, pb.bg, pb.tp, sol.state,
                                         sol.contact);
  put_residual(rep, "strip_divergence", strip.divergence);
  put_residual(rep, "strip_curl", strip.curl);
  put_residual(rep, "strip_swirl", strip.swirl);
  rep.put("strip_inlet_flux", strip.inlet_flux);
  rep.put("strip_inlet_swirl", strip.inlet_swirl);
  rep.put("strip_outlet", strip.outlet);
  rep.put("strip_interface_tangency", strip.interface_tangency);
  rep.put("strip_axis", strip.axis);

  const auto ps = to_physical(pb.grid, pb.bg, pb.tp, sol.state, sol.contact);
  const auto euler =
      physical_euler_residual(ps, 2 * pb.grid.n1, 2 * pb.grid.n2);
  static const char* eq[5] = {"mass", "axial", "radial", "swirl", "entropy"};
  for (int e = 0; e < 5; ++e) {
    put_residual(rep, std::string("euler_inner_") + eq[e], euler.inner[e]);
    put_residual(rep, std::string("euler_outer_") + eq[e], euler.outer[e]);
  }
  rep.put("euler_vorticity_identity", euler.vorticity_identity);

  const auto jump = rankine_hugoniot_check(ps);
  rep.put("contact_normal_velocity", jump.normal_velocity);
  rep.put("contact_pressure_jump", jump.pressure_jump);
  rep.put("contact_tangential_jump", jump.tangential_jump);

  const auto cons = conservation_checks(ps, pb.m_sq);
  rep.put("conservation_mass_flux", cons.mass_flux);
  rep.put("conservation_angular_momentum", cons.angular_momentum);
  rep.put("conservation_entropy", cons.entropy);
  rep.put("conservation_bernoulli", cons.bernoulli);

  const auto weak = weak_form_check(ps, standard_bumps(pb.grid.length));
  for (size_t b = 0; b < weak.size(); ++b)
    for (int e = 0; e < 5; ++e)
      rep.put("weak_bump" + std::to_string(b) + "_" + eq[e], weak[b][e]);
}

struct SolveResult {
  Problem pb;
  FreeBoundarySolution sol;
  NewtonTrace trace;
};

SolveResult solve_once(const SolveConfig& c, int n = 0) {
  SolveResult r;
  r.pb = n > 0 ? make_problem(c, n) : make_problem(c);
  InnerSolver solver(r.pb.grid, r.pb.bg, r.pb.tp);
  r.sol = newton_solve(solver, newton_options(c), &r.trace);
  return r;
}

void write_solution(const std::string& dir, std::uint64_t hash,
                    const SolveResult& r) {
  fs::create_directories(dir);
  write_fields(join(dir, "fields.tsv"), hash, r.pb, r.sol.state);
  write_contact(join(dir, "contact.tsv"), hash, r.pb.grid, r.sol.contact);
  write_diagnostics(join(dir, "diagnostics.txt"), hash, r.pb, r.sol, r.trace);
}

double sup_abs(const Field2D& f) {
  double m = 0.0;
  for (double v : f.data) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

int run_solve(const SolveConfig& c, const std::string& dir, bool quiet) {
  fs::create_directories(dir);
  const std::uint64_t hash = config_hash(c);
  try {
    const SolveResult r = solve_once(c);
    write_solution(dir, hash, r);
    if (!quiet)
      std::printf("solve: converged in %d outer iterations, residual %.3e\n",
                  r.trace.iterations,
                  r.trace.residuals.empty() ? 0.0 : r.trace.residuals.back());
    return 0;
  } catch (const SolverError& e) {
    record_failure(dir, e);
    if (!quiet) std::fprintf(stderr, "solve failed: %s\n", e.what());
    return int(e.code());
  }
}

int run_sweep(const SolveConfig& c, const std::string& dir, int threads,
              bool quiet) {
  fs::create_directories(dir);
  const std::uint64_t hash = config_hash(c);
  if (c.sweep_sigmas.size() < 2) {
    const ConfigError e("sweep needs at least two sigma values");
    record_failure(dir, e);
    if (!quiet) std::fprintf(stderr, "sweep failed: %s\n", e.what());
    return int(e.code());
  }

  struct Row {
    double sigma = 0, u_sup = 0, g_sup = 0, ratio_u = 0, ratio_g = 0;
    int iterations = 0;
    int status = 0;
  };
  const size_t nrows = c.sweep_sigmas.size();
  std::vector<Row> rows(nrows);

  // Each row runs an independent solver instance and owns its artifact
  // directory, so rows parallelize without shared state.
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t k = next.fetch_add(1);
      if (k >= nrows) return;
      Row& row = rows[k];
      row.sigma = c.sweep_sigmas[k];
      SolveConfig rc = c;
      rc.amplitude = row.sigma;
      const std::string rdir = join(dir, "row_" + std::to_string(k));
      try {
        const SolveResult r = solve_once(rc);
        write_solution(rdir, hash, r);
        row.u_sup = std::max({sup_abs(r.sol.state.w1), sup_abs(r.sol.state.w2),
                              sup_abs(r.sol.state.w3)});
        for (double gv : r.sol.contact.g)
          row.g_sup = std::max(row.g_sup, std::abs(gv - 0.5));
        row.ratio_u = row.sigma != 0.0 ? row.u_sup / row.sigma : 0.0;
        row.ratio_g = row.sigma != 0.0 ? row.g_sup / row.sigma : 0.0;
        row.iterations = r.trace.iterations;
      } catch (const SolverError& e) {
        fs::create_directories(rdir);
        record_failure(rdir, e);
        row.status = int(e.code());
        row.u_sup = row.g_sup = row.ratio_u = row.ratio_g =
            std::numeric_limits<double>::quiet_NaN();
      }
    }
  };

  const int nthreads =
      std::max(1, std::min<int>(threads, int(nrows)));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<std::vector<double>> table;
  for (const auto& row : rows)
    table.push_back({row.sigma, row.u_sup, row.g_sup, row.ratio_u, row.ratio_g,
                     double(row.iterations), double(row.status)});
  write_table(join(dir, "sweep.tsv"), hash,
              {"sigma", "u_sup", "g_sup", "ratio_u", "ratio_g",
               "outer_iterations", "status"},
              table);
  if (!quiet)
    for (const auto& row : rows)
      std::printf("sweep: sigma %.3e  u_sup %.6e  g_sup %.6e  status %d\n",
                  row.sigma, row.u_sup, row.g_sup, row.status);
  return 0;
}

namespace {

// Manufactured stream-type potential on the scaled strip:
//   Phi = z2 (z2 - m) sin(k z1), k = pi / (2 Ls),
// which meets the zero inlet/axis/interface values and the reflected outlet.
double manufactured_stream_error(const Grid& g, const InnerLinearSystem& lin) {
  const double s = lin.scale();
  const double ls = g.length / s;
  const double k = M_PI / (2.0 * ls);
  const double m = g.height;
  Field2D f2 = make_field(g);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      const double z1 = g.h1 * i / s;
      const double z2 = g.y2(j);
      f2(i, j) =
          (3.0 - k * k * z2 * (z2 - m)) * std::sin(k * z1) / s;
    }
  const Field2D phi = lin.solve_div_free(f2);
  double err = 0.0;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      const double z1 = g.h1 * i / s;
      const double z2 = g.y2(j);
      const double exact = z2 * (z2 - m) * std::sin(k * z1);
      err = std::max(err, std::abs(phi(i, j) - exact));
    }
  return err;
}

// Manufactured scalar potential with inlet Neumann and interface flux data:
//   phi = cos(q z2) (Ls - z1)^2, q = pi / (2 m).
double manufactured_potential_error(const Grid& g,
                                    const InnerLinearSystem& lin) {
  const double s = lin.scale();
  const double ls = g.length / s;
  const double q = M_PI / (2.0 * g.height);
  Field2D f1 = make_field(g);
  std::vector<double> f3(g.n2), f4(g.nodes1());
  for (int j = 0; j < g.n2; ++j)
    f3[j] = -2.0 * ls * std::cos(q * g.y2(j)) / s;
  for (int i = 0; i <= g.n1; ++i) {
    const double z1 = g.h1 * i / s;
    f4[i] = -q * (ls - z1) * (ls - z1);  // dphi/dz2 at z2 = m
  }
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      const double z1 = g.h1 * i / s;
      const double z2 = g.y2(j);
      f1(i, j) = 2.0 * std::cos(q * z2) +
                 (ls - z1) * (ls - z1) *
                     (-q * q * std::cos(q * z2) -
                      q * std::sin(q * z2) / z2);
    }
  const Field2D phi = lin.solve_curl_free(f1, f3, f4);
  double err = 0.0;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      const double z1 = g.h1 * i / s;
      const double exact = std::cos(q * g.y2(j)) * (ls - z1) * (ls - z1);
      err = std::max(err, std::abs(phi(i, j) - exact));
    }
  return err;
}

std::string order_cell(double e_coarse, double e_fine) {
  if (e_coarse < 1e-12 || e_fine < 1e-12) return "n/a";
  return format_double(std::log2(e_coarse / e_fine));
}

}  // namespace

int run_convergence(const SolveConfig& c, const std::string& dir, bool quiet) {
  fs::create_directories(dir);
  const std::uint64_t hash = config_hash(c);
  try {
    const auto& grids = c.convergence_grids;
    if (grids.size() < 3)
      throw ConfigError("convergence study needs at least three grids");
    for (size_t k = 1; k < grids.size(); ++k)
      if (grids[k] != 2 * grids[k - 1])
        throw ConfigError("convergence grids must double: " +
                          std::to_string(grids[k - 1]) + " -> " +
                          std::to_string(grids[k]));

    std::vector<double> e_stream, e_pot, e_solve;
    for (int n : grids) {
      const Problem pb = make_problem(c, n);
      InnerLinearSystem lin(pb.grid, pb.bg);
      e_stream.push_back(manufactured_stream_error(pb.grid, lin));
      e_pot.push_back(manufactured_potential_error(pb.grid, lin));

      InnerSolver solver(pb.grid, pb.bg, pb.tp);
      NewtonTrace tr;
      const FreeBoundarySolution sol =
          newton_solve(solver, newton_options(c), &tr);
      const auto strip =
          lagrangian_residual(pb.grid, pb.bg, pb.tp, sol.state, sol.contact);
      e_solve.push_back(std::max(strip.divergence.sup, strip.curl.sup));
    }

    std::ofstream out(join(dir, "convergence.txt"), std::ios::binary);
    if (!out) throw ConfigError("cannot write convergence table");
    char hbuf[32];
    std::snprintf(hbuf, sizeof(hbuf), "%016llx",
                  static_cast<unsigned long long>(hash));
    out << "# config " << hbuf << "\n";
    out << "n\terr_stream\tord_stream\terr_potential\tord_potential"
           "\tresidual_solve\tord_solve\n";
    for (size_t k = 0; k < grids.size(); ++k) {
      out << grids[k] << "\t" << format_double(e_stream[k]) << "\t"
          << (k ? order_cell(e_stream[k - 1], e_stream[k]) : "n/a") << "\t"
          << format_double(e_pot[k]) << "\t"
          << (k ? order_cell(e_pot[k - 1], e_pot[k]) : "n/a") << "\t"
          << format_double(e_solve[k]) << "\t"
          << (k ? order_cell(e_solve[k - 1], e_solve[k]) : "n/a") << "\n";
      if (!quiet)
        std::printf("convergence: n %d  stream %.3e  potential %.3e  "
                    "solve %.3e\n",
                    grids[k], e_stream[k], e_pot[k], e_solve[k]);
    }
    return 0;
  } catch (const SolverError& e) {
    record_failure(dir, e);
    if (!quiet) std::fprintf(stderr, "convergence failed: %s\n", e.what());
    return int(e.code());
  }
}

int run_verify(const SolveConfig& c, const std::string& dir, bool quiet) {
  fs::create_directories(dir);
  const std::uint64_t hash = config_hash(c);
  try {
    const SolveResult r = solve_once(c);
    write_solution(dir, hash, r);

    ReportWriter rep(join(dir, "verify.txt"), hash);
    const Grid& g = r.pb.grid;

    // Derivative consistency along a fixed smooth direction.
    InnerSolver solver(g, r.pb.bg, r.pb.tp);
    std::vector<double> w1(g.nodes1());
    for (int i = 0; i <= g.n1; ++i)
      w1[i] = std::cos(0.5 * M_PI * g.y1(i) / g.length);
    PicardOptions popt = newton_options(c).inner;
    const double disc4 =
        derivative_system_check(solver, r.sol.contact.w, w1, 1e-4, popt);
    const double disc5 =
        derivative_system_check(solver, r.sol.contact.w, w1, 1e-5, popt);
    rep.put("derivative_discrepancy_tau_1e-4", disc4);
    rep.put("derivative_discrepancy_tau_1e-5", disc5);
    rep.put("derivative_discrepancy_ratio", disc5 > 0.0 ? disc4 / disc5 : 0.0);

    // Derivative inverse round trip on a fixed profile vanishing at the
    // inlet node.
    BackgroundDerivative deriv(g, r.pb.bg);
    std::vector<double> pstar(g.nodes1());
    for (int i = 0; i <= g.n1; ++i)
      pstar[i] = std::sin(M_PI * g.y1(i) / g.length);
    const auto back = deriv.apply(deriv.invert(pstar));
    double rt = 0.0;
    for (int i = 0; i <= g.n1; ++i)
      rt = std::max(rt, std::abs(back[i] - pstar[i]));
    rep.put("derivative_roundtrip_error", rt);

    if (!quiet)
      std::printf("verify: derivative discrepancy %.3e, roundtrip %.3e "
                  "(full norms in %s)\n",
                  disc4, rt, join(dir, "diagnostics.txt").c_str());
    return 0;
  } catch (const SolverError& e) {
    record_failure(dir, e);
    if (!quiet) std::fprintf(stderr, "verify failed: %s\n", e.what());
    return int(e.code());
  }
}

}  // namespace cdflow
