#pragma once

#include <string>

#include "cdflow/config.hpp"
#include "cdflow/fixed_point.hpp"
#include "cdflow/free_boundary.hpp"
#include "cdflow/lagrangian.hpp"
#include "cdflow/profile.hpp"

namespace cdflow {

// Objects of one configured problem: background, inlet data, the strip grid
// sized by the data's mass parameter, and the transported profiles.
struct Problem {
  BackgroundState bg;
  InletData inlet;
  double m_sq = 0.0;
  Grid grid;
  TildeProfiles tp;
};

Problem make_problem(const SolveConfig& c);
Problem make_problem(const SolveConfig& c, int n);  // square grid override

NewtonOptions newton_options(const SolveConfig& c);

// Command entry points. Each writes its artifacts under dir (created if
// missing) and returns the process exit code; solver failures are caught,
// recorded in dir/failure.txt as key = value text, and mapped to their code.
int run_solve(const SolveConfig& c, const std::string& dir, bool quiet);
int run_sweep(const SolveConfig& c, const std::string& dir, int threads,
              bool quiet);
int run_convergence(const SolveConfig& c, const std::string& dir, bool quiet);
int run_verify(const SolveConfig& c, const std::string& dir, bool quiet);

}  // namespace cdflow
