#pragma once

// Discrete linear system of the iteration: the divergence/curl pair on the
// subsonically scaled strip, split into two scalar potential problems, both
// solved by banded LU. Factorizations depend only on the grid and the
// background Mach number, so they are built once and reused for every
// right-hand side.

#include <memory>
#include <vector>

#include "cdflow/closure.hpp"
#include "cdflow/gas.hpp"
#include "cdflow/grid.hpp"

namespace cdflow {

// General band matrix in LAPACK storage (column-major, kl extra rows for
// pivot fill). Row/column indices are 0-based.
struct BandMatrix {
  int n = 0, kl = 0, ku = 0, ldab = 0;
  std::vector<double> ab;

  BandMatrix() = default;
  BandMatrix(int n_, int kl_, int ku_)
      : n(n_), kl(kl_), ku(ku_), ldab(2 * kl_ + ku_ + 1),
        ab(size_t(ldab) * n_, 0.0) {}

  double& at(int i, int j) { return ab[size_t(j) * ldab + (kl + ku + i - j)]; }
};

// LU factorization with partial pivoting of a band matrix (dgbtrf/dgbtrs).
class BandLU {
 public:
  explicit BandLU(BandMatrix m);
  void solve(std::vector<double>& rhs) const;
  int order() const { return m_.n; }

 private:
  BandMatrix m_;
  std::vector<int> ipiv_;
};

// Solution of one linear inner step, collocated with the state fields.
// w2_face is the discrete interface trace of the radial deviation; it equals
// the interface source data by construction of the flux discretization.
struct LinearSolution {
  Field2D w1, w2;
  std::vector<double> w2_face;
};

class InnerLinearSystem {
 public:
  InnerLinearSystem(const Grid& g, const BackgroundState& bg);

  // Solves the divergence/curl system for the given sources.
  LinearSolution solve(const SourceTerms& src) const;

  // Potential of the divergence-carrying part alone (curl and inlet data
  // zero); exposed for the derivative of the interface pressure, which only
  // needs this half of the system.
  Field2D solve_curl_free(const Field2D& f1, const std::vector<double>& f3,
                          const std::vector<double>& f4) const;

  // Stream-type potential of the curl part (right-hand side is the scaled
  // curl source); exposed for manufactured-solution refinement studies.
  Field2D solve_div_free(const Field2D& f2) const;

  // Reconstructs the velocity pair from the two potentials and the data.
  LinearSolution reconstruct(const Field2D& phi_div, const Field2D& phi_curl,
                             const std::vector<double>& f3,
                             const std::vector<double>& f4) const;

  double scale() const { return s_; }

 private:
  Grid g_;
  double s_;    // sqrt(1 - M^2), the subsonic scaling
  double hz1_;  // h1 / s, node spacing of the scaled axial coordinate

  std::unique_ptr<BandLU> div_lu_;   // stream-type potential of the curl part
  std::unique_ptr<BandLU> curl_lu_;  // scalar potential of the divergence part
};

// Homogeneous potential problem used to invert the interface-pressure
// derivative: div((1-M^2) y2 dphi/dy1, y2 dphi/dy2) = 0 with prescribed
// values on the interface face, zero normal derivative at the inlet, zero
// value at the outlet and a natural axis. Only the face derivative of the
// solution is ever consumed.
class InterfacePotential {
 public:
  InterfacePotential(const Grid& g, const BackgroundState& bg);

  // gdata holds the face values per y1 node; gdata.back() must vanish to be
  // compatible with the outlet condition. Returns dphi/dy2 on the face.
  std::vector<double> face_derivative(const std::vector<double>& gdata) const;

 private:
  Grid g_;
  std::unique_ptr<BandLU> lu_;
};

}  // namespace cdflow
