#include "cdflow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cdflow/norms.hpp"

namespace cdflow {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double basis_value(const PerturbationTerm& t, double r) {
  switch (t.basis) {
    case Basis::cosine: return std::cos(two_pi * t.mode * r) - 1.0;
    case Basis::poly_even: return std::pow(r, 2 * t.mode);
    case Basis::poly: return std::pow(r, t.mode);
  }
  return 0.0;
}

double basis_deriv(const PerturbationTerm& t, double r) {
  switch (t.basis) {
    case Basis::cosine: return -two_pi * t.mode * std::sin(two_pi * t.mode * r);
    case Basis::poly_even: return 2.0 * t.mode * std::pow(r, 2 * t.mode - 1);
    case Basis::poly: return t.mode == 0 ? 0.0 : t.mode * std::pow(r, t.mode - 1);
  }
  return 0.0;
}

double family_value(const std::vector<PerturbationTerm>& terms, double r) {
  double s = 0.0;
  for (const auto& t : terms) s += t.coeff * basis_value(t, r);
  return s;
}

double family_deriv(const std::vector<PerturbationTerm>& terms, double r) {
  double s = 0.0;
  for (const auto& t : terms) s += t.coeff * basis_deriv(t, r);
  return s;
}

// Analytic value/slope at r = 0 of a term list.
double family_value0(const std::vector<PerturbationTerm>& terms) {
  double s = 0.0;
  for (const auto& t : terms)
    if (t.basis == Basis::poly && t.mode == 0) s += t.coeff;
  return s;
}

double family_slope0(const std::vector<PerturbationTerm>& terms) {
  double s = 0.0;
  for (const auto& t : terms)
    if (t.basis == Basis::poly && t.mode == 1) s += t.coeff;
  return s;
}

double table_value(const TabulatedChannel& c, double r) {
  if (c.r.empty()) return 0.0;
  if (r <= c.r.front()) return c.v.front();
  if (r >= c.r.back()) return c.v.back();
  auto it = std::upper_bound(c.r.begin(), c.r.end(), r);
  size_t k = size_t(it - c.r.begin());
  double t = (r - c.r[k - 1]) / (c.r[k] - c.r[k - 1]);
  return (1.0 - t) * c.v[k - 1] + t * c.v[k];
}

double table_deriv(const TabulatedChannel& c, double r) {
  if (c.r.size() < 2) return 0.0;
  size_t k = 1;
  while (k + 1 < c.r.size() && c.r[k] < r) ++k;
  return (c.v[k] - c.v[k - 1]) / (c.r[k] - c.r[k - 1]);
}

// One-sided second order slope at the first sample.
double table_slope0(const TabulatedChannel& c) {
  if (c.r.size() < 3) return c.r.size() == 2 ? (c.v[1] - c.v[0]) / (c.r[1] - c.r[0]) : 0.0;
  double h = c.r[1] - c.r[0];
  return (-3.0 * c.v[0] + 4.0 * c.v[1] - c.v[2]) / (2.0 * h);
}

double channel_norm(const InletData& in, double (InletData::*f)(double) const,
                    double alpha) {
  const int n = 1025;
  std::vector<double> xs(n), vs(n);
  for (int k = 0; k < n; ++k) {
    xs[k] = 0.5 * k / (n - 1);
    vs[k] = (in.*f)(xs[k]);
  }
  return discrete_profile_norm(xs, vs, NormKind::holder, alpha);
}

}  // namespace

double InletData::j0(double r) const {
  double dev = tabulated_ ? table_value(table_.j, r) : amplitude_ * family_value(family_.j, r);
  return bg_.rho_minus * bg_.u_minus + dev;  // rho u = 2 by normalization
}
double InletData::nu0(double r) const {
  return tabulated_ ? table_value(table_.nu, r) : amplitude_ * family_value(family_.nu, r);
}
double InletData::a0(double r) const {
  double dev = tabulated_ ? table_value(table_.a, r) : amplitude_ * family_value(family_.a, r);
  return bg_.a_minus + dev;
}
double InletData::b0(double r) const {
  double dev = tabulated_ ? table_value(table_.b, r) : amplitude_ * family_value(family_.b, r);
  return bg_.b_minus + dev;
}
double InletData::dj0(double r) const {
  return tabulated_ ? table_deriv(table_.j, r) : amplitude_ * family_deriv(family_.j, r);
}
double InletData::dnu0(double r) const {
  return tabulated_ ? table_deriv(table_.nu, r) : amplitude_ * family_deriv(family_.nu, r);
}
double InletData::da0(double r) const {
  return tabulated_ ? table_deriv(table_.a, r) : amplitude_ * family_deriv(family_.a, r);
}
double InletData::db0(double r) const {
  return tabulated_ ? table_deriv(table_.b, r) : amplitude_ * family_deriv(family_.b, r);
}

InletData make_inlet(const BackgroundState& bg, const PerturbationFamily& family,
                     double amplitude, double holder_alpha) {
  if (!(holder_alpha > 0.5) || !(holder_alpha < 1.0))
    throw NonPositive("holder exponent must lie in (1/2,1)");
  InletData in;
  in.bg_ = bg;
  in.amplitude_ = amplitude;
  in.alpha_ = holder_alpha;
  in.family_ = family;

  if (amplitude != 0.0) {
    // Axis compatibility: the swirl vanishes with zero slope, entropy and
    // Bernoulli profiles are flat at the axis.
    if (family_value0(family.nu) != 0.0)
      throw CompatibilityViolation("swirl profile must vanish at the axis");
    if (family_slope0(family.nu) != 0.0)
      throw CompatibilityViolation("swirl profile must be flat at the axis");
    if (family_slope0(family.a) != 0.0)
      throw CompatibilityViolation("entropy profile must be flat at the axis");
    if (family_slope0(family.b) != 0.0)
      throw CompatibilityViolation("Bernoulli profile must be flat at the axis");
  }

  for (int k = 0; k <= 2048; ++k) {
    double r = 0.5 * k / 2048;
    if (!(in.j0(r) > 0.0))
      throw NonPositiveFlux("inlet mass flux not positive at r = " + std::to_string(r));
  }

  double s = 0.0;
  if (amplitude != 0.0) {
    const int n = 1025;
    std::vector<double> xs(n), vs(n);
    for (int k = 0; k < n; ++k) xs[k] = 0.5 * k / (n - 1);
    auto add = [&](auto value) {
      for (int k = 0; k < n; ++k) vs[k] = value(xs[k]);
      s += discrete_profile_norm(xs, vs, NormKind::holder, holder_alpha);
    };
    add([&](double r) { return in.j0(r) - bg.rho_minus * bg.u_minus; });
    add([&](double r) { return in.nu0(r); });
    add([&](double r) { return in.a0(r) - bg.a_minus; });
    add([&](double r) { return in.b0(r) - bg.b_minus; });
  }
  in.sigma_ = s;
  return in;
}

InletData make_inlet_tabulated(const BackgroundState& bg, const TabulatedFamily& table,
                               double holder_alpha) {
  if (!(holder_alpha > 0.5) || !(holder_alpha < 1.0))
    throw NonPositive("holder exponent must lie in (1/2,1)");
  auto check = [](const TabulatedChannel& c, const char* name) {
    if (c.r.size() != c.v.size())
      throw ConfigError(std::string("tabulated channel ") + name + ": size mismatch");
    for (size_t k = 1; k < c.r.size(); ++k)
      if (!(c.r[k] > c.r[k - 1]))
        throw ConfigError(std::string("tabulated channel ") + name +
                          ": radii must increase");
  };
  check(table.j, "j");
  check(table.nu, "nu");
  check(table.a, "a");
  check(table.b, "b");

  const double tol = 1e-12;
  if (!table.nu.r.empty() && std::abs(table.nu.v.front()) > tol)
    throw CompatibilityViolation("tabulated swirl must vanish at the axis");
  if (!table.nu.r.empty() && std::abs(table_slope0(table.nu)) > tol)
    throw CompatibilityViolation("tabulated swirl must be flat at the axis");
  if (!table.a.r.empty() && std::abs(table_slope0(table.a)) > tol)
    throw CompatibilityViolation("tabulated entropy must be flat at the axis");
  if (!table.b.r.empty() && std::abs(table_slope0(table.b)) > tol)
    throw CompatibilityViolation("tabulated Bernoulli must be flat at the axis");

  InletData in;
  in.bg_ = bg;
  in.amplitude_ = 1.0;
  in.alpha_ = holder_alpha;
  in.tabulated_ = true;
  in.table_ = table;

  for (int k = 0; k <= 2048; ++k) {
    double r = 0.5 * k / 2048;
    if (!(in.j0(r) > 0.0))
      throw NonPositiveFlux("inlet mass flux not positive at r = " + std::to_string(r));
  }

  double s = 0.0;
  s += channel_norm(in, &InletData::nu0, holder_alpha);
  {
    const int n = 1025;
    std::vector<double> xs(n), vs(n);
    for (int k = 0; k < n; ++k) xs[k] = 0.5 * k / (n - 1);
    auto add = [&](auto value) {
      for (int k = 0; k < n; ++k) vs[k] = value(xs[k]);
      s += discrete_profile_norm(xs, vs, NormKind::holder, holder_alpha);
    };
    add([&](double r) { return in.j0(r) - bg.rho_minus * bg.u_minus; });
    add([&](double r) { return in.a0(r) - bg.a_minus; });
    add([&](double r) { return in.b0(r) - bg.b_minus; });
  }
  in.sigma_ = s;
  return in;
}

}  // namespace cdflow
