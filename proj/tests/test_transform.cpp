#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cdflow/closure.hpp"
#include "cdflow/lagrangian.hpp"

using namespace cdflow;

namespace {

BackgroundState bg() { return make_background(GasConstants{1.4, 1.0}, 1.0, 5.0, 1.0); }

InletData background_inlet() { return make_inlet(bg(), PerturbationFamily{}, 0.0); }

}  // namespace

TEST_CASE("mass parameter of simple inlet profiles") {
  // J0 = 2: m^2 = int_0^1/2 2 s ds = 1/4
  CHECK(mass_flux_parameter(background_inlet()) ==
        doctest::Approx(0.5).epsilon(1e-13));

  // J0 = 4 via a constant tabulated bump: m^2 = 1/2
  TabulatedFamily tab;
  tab.j.r = {0.0, 0.25, 0.5};
  tab.j.v = {2.0, 2.0, 2.0};
  CHECK(mass_flux_parameter(make_inlet_tabulated(bg(), tab)) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));

  // J0 = 2 + r^2: m^2 = 1/4 + (1/2)^4 / 4 = 1/4 + 1/64
  PerturbationFamily fam;
  fam.j = {{Basis::poly_even, 1, 1.0}};
  CHECK(mass_flux_parameter(make_inlet(bg(), fam, 1.0)) ==
        doctest::Approx(std::sqrt(0.25 + 1.0 / 64.0)).epsilon(1e-12));
}

TEST_CASE("background transport to mass coordinates") {
  const InletData in = background_inlet();
  const double m = mass_flux_parameter(in);
  const Grid g = make_grid(32, 32, 1.0, m);
  const TildeProfiles tp = inlet_to_lagrangian(in, g);

  REQUIRE(int(tp.r0.size()) == g.n2);
  for (int j = 0; j < g.n2; ++j) {
    // with J0 = 2 the mass coordinate equals the radius
    CHECK(tp.r0[j] == doctest::Approx(g.y2(j)).epsilon(1e-12));
    CHECK(tp.j[j] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(tp.nu[j] == 0.0);
    CHECK(tp.a[j] == doctest::Approx(5.0).epsilon(1e-13));
    CHECK(tp.b[j] == doctest::Approx(19.5).epsilon(1e-13));
    CHECK(std::abs(tp.da[j]) < 1e-12);
    CHECK(std::abs(tp.db[j]) < 1e-12);
    CHECK(tp.lambda[j] == 0.0);
  }
  CHECK(tp.r0_face == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(tp.j_face == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(tp.height == doctest::Approx(m).epsilon(1e-15));
}

TEST_CASE("transported derivatives use the exact chain rule") {
  PerturbationFamily fam;
  fam.a = {{Basis::cosine, 2, 1.0}};
  const double amp = 1e-3;
  const InletData in = make_inlet(bg(), fam, amp);
  const double m = mass_flux_parameter(in);
  const Grid g = make_grid(32, 32, 1.0, m);
  const TildeProfiles tp = inlet_to_lagrangian(in, g);
  for (int j = 0; j < g.n2; ++j) {
    const double y2 = g.y2(j);
    // unperturbed flux keeps r0 = y2 and dr0/dy2 = 1
    CHECK(tp.a[j] ==
          doctest::Approx(5.0 + amp * (std::cos(4.0 * M_PI * y2) - 1.0))
              .epsilon(1e-11));
    CHECK(tp.da[j] ==
          doctest::Approx(-amp * 4.0 * M_PI * std::sin(4.0 * M_PI * y2))
              .epsilon(1e-9));
  }
}

TEST_CASE("radius reconstruction and Jacobian on uniform data") {
  const Grid g = make_grid(16, 16, 1.0, 0.5);
  Field2D rho_ux = make_field(g, 8.0);
  std::vector<double> face;
  const Field2D rhat = reconstruct_radius(g, rho_ux, &face);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      CHECK(rhat(i, j) == doctest::Approx(g.y2(j) / 2.0).epsilon(1e-13));
  for (double f : face) CHECK(f == doctest::Approx(0.25).epsilon(1e-13));

  const Field2D jac = jacobian(g, rhat, rho_ux);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      CHECK(jac(i, j) == doctest::Approx(2.0).epsilon(1e-13));

  CHECK_THROWS_AS(jacobian(g, rhat, rho_ux, 3.0), JacobianDegenerate);

  rho_ux(3, 5) = -1.0;
  CHECK_THROWS_AS(reconstruct_radius(g, rho_ux), NonMonotoneRadius);
}

TEST_CASE("contact curve integration") {
  const Grid g = make_grid(32, 8, 1.0, 0.5);
  const ContactCurve flat = flat_contact(g);
  for (double v : flat.g) CHECK(v == 0.5);

  std::vector<double> w(g.nodes1(), 0.25);
  const ContactCurve cc = contact_from_slope(g, w);
  CHECK(cc.g[0] == 0.5);  // anchored exactly
  for (int i = 0; i <= g.n1; ++i)
    CHECK(cc.g[i] == doctest::Approx(0.5 + 0.25 * g.y1(i)).epsilon(1e-14));
}

TEST_CASE("physical sampling of the background") {
  const InletData in = background_inlet();
  const double m = mass_flux_parameter(in);
  const Grid g = make_grid(32, 32, 1.0, m);
  const TildeProfiles tp = inlet_to_lagrangian(in, g);
  const BackgroundState b = bg();
  const LagrangianState st = background_state(g, b, tp);
  const ContactCurve cc = flat_contact(g);
  const PhysicalSolution ps = to_physical(g, b, tp, st, cc);

  CHECK(ps.interface_radius(0.37) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(ps.interface_slope(0.61) == doctest::Approx(0.0));

  const PhysicalSample si = ps.eval(0.5, 0.3);
  CHECK(si.inner);
  CHECK(si.ux == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(si.rho == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(si.p == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(si.ur == doctest::Approx(0.0));
  // with rho u = 2 the mass label of a streamline equals its radius
  CHECK(si.y2 == doctest::Approx(0.3).epsilon(1e-10));

  const PhysicalSample so = ps.eval(0.5, 0.8);
  CHECK(!so.inner);
  CHECK(so.ux == 0.0);
  CHECK(so.rho == doctest::Approx(1.0));
  CHECK(so.p == doctest::Approx(5.0));

  const PhysicalSample tr = ps.interface_trace(16);
  CHECK(tr.ux == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(tr.p == doctest::Approx(5.0).epsilon(1e-10));
}
