#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdflow/closure.hpp"
#include "cdflow/gas.hpp"
#include "cdflow/profile.hpp"

namespace cdflow {

// Everything a run needs, parsed from one sectioned key = value file.
// Parsing is strict: unknown sections or keys are errors, values must
// consume their full text. Semantic validation (positivity, subsonic
// background, compatibility) happens when the objects are constructed.
struct SolveConfig {
  GasConstants gas;

  double rho_minus = 1.0;
  double p = 5.0;
  double rho_plus = 1.0;

  double length = 1.0;
  int n1 = 64;
  int n2 = 64;

  PerturbationFamily family;
  double amplitude = 0.0;
  double holder_alpha = 0.75;

  double inner_tol = 1e-10;
  double outer_tol = 1e-8;
  int inner_max_iter = 200;
  int outer_max_iter = 40;
  double damping = 1.0;
  BallThresholds ball;

  std::string mode = "solve";
  std::string output = "out";

  std::vector<double> sweep_sigmas;
  std::vector<int> convergence_grids;

  std::string source_text;  // verbatim file contents, hashed into artifacts
};

// Sections: [gas] [background] [domain] [grid] [perturbation] [tolerances]
// [run] [sweep] [convergence]. Perturbation channels j / nu / a / b take a
// comma list of basis:mode:coeff terms, e.g. "cosine:2:1.0, poly_even:1:-0.5".
SolveConfig parse_config_text(const std::string& text,
                              const std::string& origin = "<memory>");
SolveConfig parse_config(const std::string& path);

// FNV-1a of the verbatim config text; stamped into every artifact so output
// files identify the run that produced them.
std::uint64_t config_hash(const SolveConfig& c);

}  // namespace cdflow
