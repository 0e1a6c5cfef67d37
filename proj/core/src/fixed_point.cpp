#include "cdflow/fixed_point.hpp"

#include <cmath>
#include <string>

namespace cdflow {

InnerSolver::InnerSolver(const Grid& g, const BackgroundState& bg,
                         TildeProfiles tp)
    : g_(g), bg_(bg), tp_(std::move(tp)), lin_(g, bg) {}

double state_distance(const LagrangianState& a, const LagrangianState& b) {
  double d = 0.0;
  for (size_t k = 0; k < a.w1.data.size(); ++k) {
    d = std::max(d, std::abs(a.w1.data[k] - b.w1.data[k]));
    d = std::max(d, std::abs(a.w2.data[k] - b.w2.data[k]));
    d = std::max(d, std::abs(a.w3.data[k] - b.w3.data[k]));
  }
  return d;
}

LagrangianState InnerSolver::step(const LagrangianState& st,
                                  const std::vector<double>& w_slope,
                                  const PicardOptions& opt) const {
  SourceTerms src = assemble_sources(g_, bg_, tp_, st, w_slope, opt.ball);
  LinearSolution sol = lin_.solve(src);
  Field2D w3 = swirl_solve(g_, tp_, st.rhat);

  LagrangianState next;
  const double th = opt.damping;
  if (th == 1.0) {
    next.w1 = std::move(sol.w1);
    next.w2 = std::move(sol.w2);
    next.w3 = std::move(w3);
  } else {
    next.w1 = make_field(g_);
    next.w2 = make_field(g_);
    next.w3 = make_field(g_);
    for (size_t k = 0; k < next.w1.data.size(); ++k) {
      next.w1.data[k] = (1.0 - th) * st.w1.data[k] + th * sol.w1.data[k];
      next.w2.data[k] = (1.0 - th) * st.w2.data[k] + th * sol.w2.data[k];
      next.w3.data[k] = (1.0 - th) * st.w3.data[k] + th * w3.data[k];
    }
  }
  update_derived(g_, bg_, tp_, next);
  return next;
}

LagrangianState InnerSolver::solve(const std::vector<double>& w_slope,
                                   const PicardOptions& opt, PicardTrace* trace,
                                   const LagrangianState* initial) const {
  LagrangianState cur =
      initial ? *initial : background_state(g_, bg_, tp_);
  if (trace) {
    trace->increments.clear();
    trace->iterations = 0;
    trace->converged = false;
  }
  int growth_streak = 0;
  double prev = -1.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    LagrangianState next = step(cur, w_slope, opt);
    const double d = state_distance(next, cur);
    if (trace) {
      trace->increments.push_back(d);
      trace->iterations = it;
    }
    if (!std::isfinite(d))
      throw NoConvergence("inner iteration produced a non-finite state");
    cur = std::move(next);
    if (d <= opt.tol) {
      if (trace) trace->converged = true;
      return cur;
    }
    if (prev >= 0.0) {
      growth_streak = d > prev ? growth_streak + 1 : 0;
      if (growth_streak >= 3)
        throw NoConvergence(
            "inner iteration increments grew three times in a row");
    }
    prev = d;
  }
  throw NoConvergence("inner iteration did not contract to tolerance " +
                      std::to_string(opt.tol) + " within " +
                      std::to_string(opt.max_iter) + " steps");
}

}  // namespace cdflow
