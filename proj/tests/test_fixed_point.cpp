#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "cdflow/fixed_point.hpp"
#include "cdflow/run.hpp"

using namespace cdflow;

namespace {

SolveConfig perturbed_config(double amp) {
  SolveConfig c;
  c.family.j = {{Basis::cosine, 2, 1.0}};
  c.amplitude = amp;
  return c;
}

}  // namespace

TEST_CASE("background is an exact fixed point") {
  const Problem pb = make_problem(SolveConfig{}, 32);
  const InnerSolver solver(pb.grid, pb.bg, pb.tp);
  std::vector<double> w(pb.grid.nodes1(), 0.0);
  PicardTrace tr;
  const LagrangianState st = solver.solve(w, {}, &tr);
  CHECK(tr.converged);
  CHECK(tr.iterations <= 2);
  const LagrangianState ref = background_state(pb.grid, pb.bg, pb.tp);
  CHECK(state_distance(st, ref) < 1e-13);
}

TEST_CASE("inner iteration contracts") {
  const Problem pb = make_problem(perturbed_config(1e-2), 32);
  const InnerSolver solver(pb.grid, pb.bg, pb.tp);
  std::vector<double> w(pb.grid.nodes1(), 0.0);
  PicardTrace tr;
  const LagrangianState st = solver.solve(w, {}, &tr);
  CHECK(tr.converged);
  REQUIRE(tr.increments.size() >= 3);
  // successive updates shrink by at least a factor two after the first
  for (size_t k = 1; k + 1 < tr.increments.size(); ++k)
    CHECK(tr.increments[k + 1] <= 0.5 * tr.increments[k]);
  // the perturbation actually moved the state
  const LagrangianState ref = background_state(pb.grid, pb.bg, pb.tp);
  CHECK(state_distance(st, ref) > 1e-4);
}

TEST_CASE("solves are deterministic") {
  const Problem pb = make_problem(perturbed_config(1e-3), 32);
  const InnerSolver solver(pb.grid, pb.bg, pb.tp);
  std::vector<double> w(pb.grid.nodes1(), 0.0);
  const LagrangianState a = solver.solve(w, {});
  const LagrangianState b = solver.solve(w, {});
  CHECK(a.w1.data == b.w1.data);
  CHECK(a.w2.data == b.w2.data);
  CHECK(a.w3.data == b.w3.data);
  CHECK(a.rho.data == b.rho.data);
}

TEST_CASE("iteration budget is enforced") {
  const Problem pb = make_problem(perturbed_config(1e-2), 32);
  const InnerSolver solver(pb.grid, pb.bg, pb.tp);
  std::vector<double> w(pb.grid.nodes1(), 0.0);
  PicardOptions opt;
  opt.max_iter = 2;
  opt.tol = 1e-14;
  CHECK_THROWS_AS(solver.solve(w, opt), NoConvergence);
}

TEST_CASE("damping reaches the same fixed point") {
  const Problem pb = make_problem(perturbed_config(1e-3), 32);
  const InnerSolver solver(pb.grid, pb.bg, pb.tp);
  std::vector<double> w(pb.grid.nodes1(), 0.0);
  PicardOptions full, half;
  half.damping = 0.5;
  PicardTrace tf, th;
  const LagrangianState a = solver.solve(w, full, &tf);
  const LagrangianState b = solver.solve(w, half, &th);
  CHECK(th.iterations > tf.iterations);
  CHECK(state_distance(a, b) < 1e-8);
}

TEST_CASE("single step moves toward the fixed point") {
  const Problem pb = make_problem(perturbed_config(1e-3), 32);
  const InnerSolver solver(pb.grid, pb.bg, pb.tp);
  std::vector<double> w(pb.grid.nodes1(), 0.0);
  const LagrangianState st0 = background_state(pb.grid, pb.bg, pb.tp);
  const LagrangianState st1 = solver.step(st0, w, {});
  const LagrangianState fix = solver.solve(w, {});
  CHECK(state_distance(st1, st0) > 0.0);
  CHECK(state_distance(st1, fix) < state_distance(st0, fix));
}

TEST_CASE("state distance is the velocity sup") {
  const Grid g = make_grid(8, 8, 1.0, 0.5);
  LagrangianState a, b;
  a.w1 = make_field(g);
  a.w2 = make_field(g);
  a.w3 = make_field(g);
  b = a;
  b.w3(3, 4) = 0.5;
  b.w1(1, 1) = -0.25;
  CHECK(state_distance(a, b) == doctest::Approx(0.5));
}
