#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdflow/gas.hpp"

namespace cdflow {

// Perturbation basis on the inlet disk radius r in [0, 1/2].
//   cosine     cos(2 pi k r) - 1      flat at r = 0, vanishes there
//   poly_even  r^(2k)                 flat at r = 0
//   poly       r^k                    general monomial; k = 1 violates the
//                                     axis compatibility and must be rejected
//                                     for the swirl/entropy/Bernoulli channels
enum class Basis { cosine, poly_even, poly };

struct PerturbationTerm {
  Basis basis = Basis::cosine;
  int mode = 1;
  double coeff = 1.0;
};

// One term list per perturbed inlet channel: mass flux j, swirl nu, entropy a,
// Bernoulli b.  Deviations are amplitude * sum coeff * basis(mode, r).
struct PerturbationFamily {
  std::vector<PerturbationTerm> j, nu, a, b;
};

// Tabulated alternative: samples on [0, 1/2], interpolated linearly.
struct TabulatedChannel {
  std::vector<double> r;
  std::vector<double> v;  // deviation from the background value
};

struct TabulatedFamily {
  TabulatedChannel j, nu, a, b;
};

class InletData {
 public:
  InletData() = default;

  const BackgroundState& background() const { return bg_; }
  double amplitude() const { return amplitude_; }
  // Measured size of the inlet deviation: sum over the four channels of the
  // discrete C^{1,alpha}[0,1/2] norm.
  double sigma() const { return sigma_; }
  double holder_alpha() const { return alpha_; }

  double j0(double r) const;
  double nu0(double r) const;
  double a0(double r) const;
  double b0(double r) const;
  double dj0(double r) const;
  double dnu0(double r) const;
  double da0(double r) const;
  double db0(double r) const;

  bool perturbed() const { return amplitude_ != 0.0; }

 private:
  friend InletData make_inlet(const BackgroundState&, const PerturbationFamily&, double,
                              double);
  friend InletData make_inlet_tabulated(const BackgroundState&, const TabulatedFamily&,
                                        double);

  BackgroundState bg_;
  double amplitude_ = 0;
  double sigma_ = 0;
  double alpha_ = 0.75;
  bool tabulated_ = false;
  PerturbationFamily family_;
  TabulatedFamily table_;
};

// Builds inlet data J0 = J_b + amplitude * j(r) etc. and validates the axis
// compatibility nu0(0) = 0, (nu0', A0', B0')(0) = 0 analytically.  Throws
// CompatibilityViolation, NonPositiveFlux (J0 <= 0 somewhere), NonPositive.
InletData make_inlet(const BackgroundState& bg, const PerturbationFamily& family,
                     double amplitude, double holder_alpha = 0.75);

// Tabulated channels; compatibility checked by one-sided differences at r = 0
// within 1e-12.  Amplitude 1 is implied (tables carry their own scale).
InletData make_inlet_tabulated(const BackgroundState& bg, const TabulatedFamily& table,
                               double holder_alpha = 0.75);

}  // namespace cdflow
