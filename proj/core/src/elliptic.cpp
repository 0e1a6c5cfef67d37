#include "cdflow/elliptic.hpp"

#include <cmath>
#include <string>

#include <lapacke.h>

#include "cdflow/detail/kernels.hpp"
#include "cdflow/errors.hpp"

namespace cdflow {

static_assert(sizeof(lapack_int) == sizeof(int), "LP64 LAPACK expected");

BandLU::BandLU(BandMatrix m) : m_(std::move(m)), ipiv_(m_.n) {
  const lapack_int info =
      LAPACKE_dgbtrf(LAPACK_COL_MAJOR, m_.n, m_.n, m_.kl, m_.ku, m_.ab.data(),
                     m_.ldab, ipiv_.data());
  if (info != 0)
    throw LinearSolveFailure("band LU factorization failed, info = " +
                             std::to_string(info));
}

void BandLU::solve(std::vector<double>& rhs) const {
  if (int(rhs.size()) != m_.n)
    throw LinearSolveFailure("right-hand side length mismatch");
  const lapack_int info =
      LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', m_.n, m_.kl, m_.ku, 1, m_.ab.data(),
                     m_.ldab, ipiv_.data(), rhs.data(), m_.n);
  if (info != 0)
    throw LinearSolveFailure("band back substitution failed, info = " +
                             std::to_string(info));
}

namespace {

inline int idx(int i, int j, int n2) { return i * n2 + j; }

// Stream-type potential of the curl-carrying part on the scaled strip:
//   dzz1 P + dzz2 P + (1/z2) dz2 P - P/z2^2 = rhs,
// P = 0 at inlet, axis and interface, dP/dz1 = 0 at outlet. The axis ghost
// is an odd reflection (solutions are odd in z2); the interface ghost is a
// quadratic fit through the zero face value.
BandMatrix build_div_operator(const Grid& g, double hz1) {
  const int n1 = g.n1, n2 = g.n2;
  BandMatrix a(g.nodes1() * n2, n2, n2);
  const double cx = 1.0 / (hz1 * hz1);
  const double cy = 1.0 / (g.h2 * g.h2);
  for (int j = 0; j < n2; ++j) a.at(idx(0, j, n2), idx(0, j, n2)) = 1.0;
  for (int i = 1; i <= n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const int row = idx(i, j, n2);
      const double z2 = g.y2(j);
      const double dy = 1.0 / (2.0 * g.h2 * z2);
      double diag = -2.0 * cx - 2.0 * cy - 1.0 / (z2 * z2);

      if (i < n1) {
        a.at(row, idx(i - 1, j, n2)) = cx;
        a.at(row, idx(i + 1, j, n2)) = cx;
      } else {
        a.at(row, idx(i - 1, j, n2)) = 2.0 * cx;  // reflected outlet ghost
      }

      if (j == 0) {
        // odd ghost under the axis: P(i,-1) = -P(i,0)
        a.at(row, idx(i, 1, n2)) += cy + dy;
        diag += -(cy - dy);
      } else if (j == n2 - 1) {
        // quadratic zero-value ghost above the interface:
        // P(i,n2) = (-6 P(i,n2-1) + P(i,n2-2)) / 3
        a.at(row, idx(i, j - 1, n2)) += (cy - dy) + (cy + dy) / 3.0;
        diag += (cy + dy) * (-2.0);
      } else {
        a.at(row, idx(i, j - 1, n2)) += cy - dy;
        a.at(row, idx(i, j + 1, n2)) += cy + dy;
      }
      a.at(row, row) = diag;
    }
  }
  return a;
}

// Scalar potential of the divergence-carrying part, finite-volume form of
//   dzz1 p + (1/z2) dz2 (z2 dz2 p) = rhs,
// dp/dz1 given at the inlet, p = 0 at the outlet, natural at the axis,
// prescribed face flux at the interface.
BandMatrix build_curl_operator(const Grid& g, double hz1) {
  const int n1 = g.n1, n2 = g.n2;
  BandMatrix a(g.nodes1() * n2, n2, n2);
  const double cx = 1.0 / (hz1 * hz1);
  const double ch = 1.0 / (g.h2 * g.h2);
  for (int j = 0; j < n2; ++j) a.at(idx(n1, j, n2), idx(n1, j, n2)) = 1.0;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const int row = idx(i, j, n2);
      const double z2 = g.y2(j);
      // face radii j and j+1 in units of h2
      const double wm = ch * (g.h2 * j) / z2;
      const double wp = ch * (g.h2 * (j + 1)) / z2;
      double diag = 0.0;

      if (i == 0) {
        a.at(row, idx(1, j, n2)) = 2.0 * cx;  // Neumann data enters the rhs
        diag += -2.0 * cx;
      } else {
        a.at(row, idx(i - 1, j, n2)) = cx;
        a.at(row, idx(i + 1, j, n2)) = cx;
        diag += -2.0 * cx;
      }

      if (j > 0) a.at(row, idx(i, j - 1, n2)) += wm;
      diag += -wm;
      if (j < n2 - 1) {
        a.at(row, idx(i, j + 1, n2)) += wp;
        diag += -wp;
      }
      // at j = n2-1 the top flux is data; nothing enters the matrix
      a.at(row, row) = diag;
    }
  }
  return a;
}

}  // namespace

InnerLinearSystem::InnerLinearSystem(const Grid& g, const BackgroundState& bg)
    : g_(g), s_(std::sqrt(1.0 - bg.mach_sq)), hz1_(g.h1 / s_) {
  div_lu_ = std::make_unique<BandLU>(build_div_operator(g_, hz1_));
  curl_lu_ = std::make_unique<BandLU>(build_curl_operator(g_, hz1_));
}

Field2D InnerLinearSystem::solve_div_free(const Field2D& f2) const {
  const int n1 = g_.n1, n2 = g_.n2;
  std::vector<double> rhs(size_t(g_.nodes1()) * n2, 0.0);
  for (int i = 1; i <= n1; ++i)
    for (int j = 0; j < n2; ++j) rhs[idx(i, j, n2)] = s_ * f2(i, j);
  div_lu_->solve(rhs);
  Field2D phi(g_.nodes1(), n2);
  phi.data = std::move(rhs);
  return phi;
}

Field2D InnerLinearSystem::solve_curl_free(const Field2D& f1,
                                           const std::vector<double>& f3,
                                           const std::vector<double>& f4) const {
  const int n1 = g_.n1, n2 = g_.n2;
  std::vector<double> rhs(size_t(g_.nodes1()) * n2, 0.0);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) rhs[idx(i, j, n2)] = f1(i, j);
  const double m = g_.height;
  for (int j = 0; j < n2; ++j) rhs[idx(0, j, n2)] += 2.0 * (s_ * f3[j]) / hz1_;
  for (int i = 0; i < n1; ++i)
    rhs[idx(i, n2 - 1, n2)] -= m * f4[i] / (g_.y2(n2 - 1) * g_.h2);
  curl_lu_->solve(rhs);
  Field2D phi(g_.nodes1(), n2);
  phi.data = std::move(rhs);
  return phi;
}

LinearSolution InnerLinearSystem::reconstruct(const Field2D& phi_div,
                                              const Field2D& phi_curl,
                                              const std::vector<double>& f3,
                                              const std::vector<double>& f4) const {
  const int n1 = g_.n1, n2 = g_.n2;
  LinearSolution out;
  out.w1 = make_field(g_);
  out.w2 = make_field(g_);
  out.w2_face = f4;

  for (int i = 0; i <= n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const double z2 = g_.y2(j);

      // H1 = -(dz2 P + P/z2); boundary rows use the known zero face values.
      double dP;
      if (j == 0)
        dP = (3.0 * phi_div(i, 0) + phi_div(i, 1)) / (3.0 * g_.h2);
      else if (j == n2 - 1)
        dP = -(3.0 * phi_div(i, j) + phi_div(i, j - 1)) / (3.0 * g_.h2);
      else
        dP = (phi_div(i, j + 1) - phi_div(i, j - 1)) / (2.0 * g_.h2);
      const double h1v = -(dP + phi_div(i, j) / z2);

      // H2 = dz1 P; the outlet ghost reflection makes the trace vanish.
      double h2v;
      if (i == 0)
        h2v = (4.0 * phi_div(1, j) - phi_div(2, j) - 3.0 * phi_div(0, j)) /
              (2.0 * hz1_);
      else if (i == n1)
        h2v = 0.0;
      else
        h2v = (phi_div(i + 1, j) - phi_div(i - 1, j)) / (2.0 * hz1_);

      // K1 = dz1 p; inlet value is the Neumann data itself.
      double k1v;
      if (i == 0)
        k1v = s_ * f3[j];
      else if (i == n1)
        k1v = (3.0 * phi_curl(n1, j) - 4.0 * phi_curl(n1 - 1, j) +
               phi_curl(n1 - 2, j)) /
              (2.0 * hz1_);
      else
        k1v = (phi_curl(i + 1, j) - phi_curl(i - 1, j)) / (2.0 * hz1_);

      // K2 = dz2 p; even under the axis, one-sided at the interface.
      double k2v;
      if (j == 0)
        k2v = (phi_curl(i, 1) - phi_curl(i, 0)) / (2.0 * g_.h2);
      else if (j == n2 - 1)
        k2v = (3.0 * phi_curl(i, j) - 4.0 * phi_curl(i, j - 1) +
               phi_curl(i, j - 2)) /
              (2.0 * g_.h2);
      else
        k2v = (phi_curl(i, j + 1) - phi_curl(i, j - 1)) / (2.0 * g_.h2);

      out.w1(i, j) = (h1v + k1v) / s_;
      out.w2(i, j) = h2v + k2v;
    }
  }
  // exact traces: the inlet column carries its own data
  for (int j = 0; j < n2; ++j) out.w1(0, j) = f3[j];
  return out;
}

LinearSolution InnerLinearSystem::solve(const SourceTerms& src) const {
  if (src.f1.rows != g_.nodes1() || src.f1.cols != g_.n2 ||
      int(src.f3.size()) != g_.n2 || int(src.f4.size()) != g_.nodes1())
    throw DomainError("source dimensions do not match the grid");
  Field2D phi_div = solve_div_free(src.f2);
  Field2D phi_curl = solve_curl_free(src.f1, src.f3, src.f4);
  return reconstruct(phi_div, phi_curl, src.f3, src.f4);
}

InterfacePotential::InterfacePotential(const Grid& g, const BackgroundState& bg)
    : g_(g) {
  const int n1 = g.n1, n2 = g.n2;
  const double beta = 1.0 - bg.mach_sq;
  BandMatrix a(g.nodes1() * n2, n2, n2);
  const double cx = beta / (g.h1 * g.h1);
  const double ch = 1.0 / (g.h2 * g.h2);
  for (int j = 0; j < n2; ++j) a.at(idx(n1, j, n2), idx(n1, j, n2)) = 1.0;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const int row = idx(i, j, n2);
      const double y2 = g.y2(j);
      const double wm = ch * (g.h2 * j);        // face radius below
      const double wp = ch * (g.h2 * (j + 1));  // face radius above
      double diag = 0.0;

      if (i == 0) {
        a.at(row, idx(1, j, n2)) = 2.0 * cx * y2;
        diag += -2.0 * cx * y2;
      } else {
        a.at(row, idx(i - 1, j, n2)) = cx * y2;
        a.at(row, idx(i + 1, j, n2)) = cx * y2;
        diag += -2.0 * cx * y2;
      }

      if (j > 0) a.at(row, idx(i, j - 1, n2)) += wm;
      diag += -wm;
      if (j < n2 - 1) {
        a.at(row, idx(i, j + 1, n2)) += wp;
        diag += -wp;
      } else {
        // quadratic Dirichlet ghost through the face data:
        // phi(i,n2) = (8 g_i - 6 phi(i,n2-1) + phi(i,n2-2)) / 3
        diag += -3.0 * wp;
        a.at(row, idx(i, j - 1, n2)) += wp / 3.0;
      }
      a.at(row, row) = diag;
    }
  }
  lu_ = std::make_unique<BandLU>(std::move(a));
}

std::vector<double> InterfacePotential::face_derivative(
    const std::vector<double>& gdata) const {
  const int n1 = g_.n1, n2 = g_.n2;
  if (int(gdata.size()) != g_.nodes1())
    throw DomainError("face data length does not match the grid");
  std::vector<double> rhs(size_t(g_.nodes1()) * n2, 0.0);
  const double wp = (g_.h2 * n2) / (g_.h2 * g_.h2);
  for (int i = 0; i < n1; ++i)
    rhs[idx(i, n2 - 1, n2)] = -(8.0 / 3.0) * wp * gdata[i];
  lu_->solve(rhs);
  std::vector<double> dphi(g_.nodes1());
  for (int i = 0; i <= n1; ++i) {
    const double p1 = rhs[idx(i, n2 - 1, n2)];
    const double p2 = rhs[idx(i, n2 - 2, n2)];
    dphi[i] = (8.0 * gdata[i] - 9.0 * p1 + p2) / (3.0 * g_.h2);
  }
  return dphi;
}

}  // namespace cdflow

