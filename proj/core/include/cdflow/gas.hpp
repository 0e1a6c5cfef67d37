#pragma once

#include "cdflow/errors.hpp"

namespace cdflow {

struct GasConstants {
  double gamma = 1.4;          // adiabatic exponent, in (1,3)
  double entropy_scale = 1.0;  // scale of the entropy function in P = A(S) rho^gamma
};

// Two-layer straight flow in the cylinder sharing one pressure: still gas of
// density rho_plus outside the interface r = 1/2, a uniform axial stream of
// density rho_minus inside.  The inner stream is normalized to mass flux
// rho_minus * u_minus = 2, which puts the interface at mass coordinate 1/2.
struct BackgroundState {
  GasConstants gas;
  double rho_minus = 0;
  double u_minus = 0;
  double p = 0;
  double rho_plus = 0;

  double a_minus = 0;        // P / rho^gamma inside
  double b_minus = 0;        // u^2/2 + gamma P / ((gamma-1) rho) inside
  double a_plus = 0;
  double b_plus = 0;
  double sound_sq_minus = 0; // gamma P / rho inside
  double mach_sq = 0;        // u_minus^2 / sound_sq_minus, must be < 1
};

// Throws NonPositive for bad inputs and SupersonicBackground when the
// normalized inner stream would not be subsonic.
BackgroundState make_background(const GasConstants& gas, double rho_minus, double p,
                                double rho_plus);

}  // namespace cdflow
