#include "cdflow/gas.hpp"

#include <cmath>

namespace cdflow {

BackgroundState make_background(const GasConstants& gas, double rho_minus, double p,
                                double rho_plus) {
  if (!(gas.gamma > 1.0) || !(gas.gamma < 3.0))
    throw NonPositive("gamma must lie in (1,3), got " + std::to_string(gas.gamma));
  if (!(gas.entropy_scale > 0.0)) throw NonPositive("entropy scale must be positive");
  if (!(rho_minus > 0.0)) throw NonPositive("rho_minus must be positive");
  if (!(rho_plus > 0.0)) throw NonPositive("rho_plus must be positive");
  if (!(p > 0.0)) throw NonPositive("background pressure must be positive");

  BackgroundState b;
  b.gas = gas;
  b.rho_minus = rho_minus;
  b.p = p;
  b.rho_plus = rho_plus;
  b.u_minus = 2.0 / rho_minus;  // mass flux normalization rho u = 2

  const double g = gas.gamma;
  b.a_minus = p / std::pow(rho_minus, g);
  b.b_minus = 0.5 * b.u_minus * b.u_minus + g * p / ((g - 1.0) * rho_minus);
  b.a_plus = p / std::pow(rho_plus, g);
  b.b_plus = g * p / ((g - 1.0) * rho_plus);
  b.sound_sq_minus = g * p / rho_minus;
  b.mach_sq = b.u_minus * b.u_minus / b.sound_sq_minus;

  if (!(b.mach_sq < 1.0))
    throw SupersonicBackground("inner stream is not subsonic: M^2 = " +
                               std::to_string(b.mach_sq));
  return b;
}

}  // namespace cdflow
