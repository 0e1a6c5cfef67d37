#pragma once

#include <vector>

#include "cdflow/errors.hpp"

namespace cdflow {

// Rectangular grid on the mass-coordinate strip (0,L) x (0,m).  Nodes in y1
// (i = 0..n1, inlet and outlet included), cell centers in y2 (j = 0..n2-1,
// first center at h2/2 so the axis y2 = 0 and the interface y2 = m are faces).
struct Grid {
  int n1 = 0;
  int n2 = 0;
  double length = 0;  // L
  double height = 0;  // m, 1/2 for the background normalization
  double h1 = 0;
  double h2 = 0;

  double y1(int i) const { return h1 * i; }
  double y2(int j) const { return h2 * (j + 0.5); }
  int nodes1() const { return n1 + 1; }
  int cells2() const { return n2; }
};

Grid make_grid(int n1, int n2, double length, double height);

template <class T>
struct BasicField {
  int rows = 0;  // y1 nodes
  int cols = 0;  // y2 cells
  std::vector<T> data;

  BasicField() = default;
  BasicField(int r, int c, T fill = T{}) : rows(r), cols(c), data(size_t(r) * c, fill) {}

  T& operator()(int i, int j) { return data[size_t(i) * cols + j]; }
  const T& operator()(int i, int j) const { return data[size_t(i) * cols + j]; }
  size_t size() const { return data.size(); }
};

using Field2D = BasicField<double>;

inline Field2D make_field(const Grid& g, double fill = 0.0) {
  return Field2D(g.nodes1(), g.cells2(), fill);
}

}  // namespace cdflow
