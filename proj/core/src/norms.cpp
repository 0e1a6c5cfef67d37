#include "cdflow/norms.hpp"

#include <algorithm>
#include <cmath>

namespace cdflow {

namespace {

// d/dy along one row/column of samples with uniform spacing h: centered in the
// interior, second-order one-sided at the ends.
double deriv1d(const double* v, int n, int k, double h) {
  if (n < 3) return n == 2 ? (v[1] - v[0]) / h : 0.0;
  if (k == 0) return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  if (k == n - 1) return (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return (v[k + 1] - v[k - 1]) / (2.0 * h);
}

struct GradField {
  Field2D d1, d2;
};

GradField gradient(const Grid& g, const Field2D& f) {
  GradField out{Field2D(f.rows, f.cols), Field2D(f.rows, f.cols)};
  std::vector<double> line(std::max(f.rows, f.cols));
  for (int j = 0; j < f.cols; ++j) {
    for (int i = 0; i < f.rows; ++i) line[i] = f(i, j);
    for (int i = 0; i < f.rows; ++i) out.d1(i, j) = deriv1d(line.data(), f.rows, i, g.h1);
  }
  for (int i = 0; i < f.rows; ++i) {
    for (int j = 0; j < f.cols; ++j) line[j] = f(i, j);
    for (int j = 0; j < f.cols; ++j) out.d2(i, j) = deriv1d(line.data(), f.cols, j, g.h2);
  }
  return out;
}

}  // namespace

double discrete_norm(const Grid& g, const Field2D& f, NormKind kind, double alpha) {
  double sup = 0.0;
  for (double v : f.data) sup = std::max(sup, std::abs(v));
  if (kind == NormKind::sup) return sup;

  const GradField grad = gradient(g, f);
  auto gmag = [&](int i, int j) {
    return std::hypot(grad.d1(i, j), grad.d2(i, j));
  };

  const bool weighted = kind == NormKind::weighted_holder;
  auto dist = [&](int j) { return g.height - g.y2(j); };  // distance to the interface face

  double grad_part = 0.0;
  for (int i = 0; i < f.rows; ++i)
    for (int j = 0; j < f.cols; ++j) {
      double w = weighted ? std::pow(dist(j), 1.0 - alpha) : 1.0;
      grad_part = std::max(grad_part, w * gmag(i, j));
    }
  if (kind == NormKind::grad_sup) return sup + grad_part;

  // Holder quotient of the gradient over dyadic axis-aligned pairs.
  double quot = 0.0;
  for (int i = 0; i < f.rows; ++i)
    for (int j = 0; j < f.cols; ++j) {
      for (int s = 1; i + s < f.rows; s *= 2) {
        double d = std::hypot(grad.d1(i + s, j) - grad.d1(i, j),
                              grad.d2(i + s, j) - grad.d2(i, j));
        double w = weighted ? dist(j) : 1.0;
        quot = std::max(quot, w * d / std::pow(s * g.h1, alpha));
      }
      for (int s = 1; j + s < f.cols; s *= 2) {
        double d = std::hypot(grad.d1(i, j + s) - grad.d1(i, j),
                              grad.d2(i, j + s) - grad.d2(i, j));
        double w = weighted ? std::min(dist(j), dist(j + s)) : 1.0;
        quot = std::max(quot, w * d / std::pow(s * g.h2, alpha));
      }
    }
  return sup + grad_part + quot;
}

double discrete_profile_norm(const std::vector<double>& xs, const std::vector<double>& vals,
                             NormKind kind, double alpha) {
  const int n = int(xs.size());
  double sup = 0.0;
  for (double v : vals) sup = std::max(sup, std::abs(v));
  if (kind == NormKind::sup || n < 3) return sup;

  const double h = xs[1] - xs[0];
  std::vector<double> dv(n);
  for (int k = 0; k < n; ++k) dv[k] = deriv1d(vals.data(), n, k, h);

  const bool weighted = kind == NormKind::weighted_holder;
  const double xmax = xs.back();
  auto dist = [&](int k) { return xmax - xs[k]; };

  double grad_part = 0.0;
  for (int k = 0; k < n; ++k) {
    double w = weighted ? std::pow(dist(k), 1.0 - alpha) : 1.0;
    grad_part = std::max(grad_part, w * std::abs(dv[k]));
  }
  if (kind == NormKind::grad_sup) return sup + grad_part;

  double quot = 0.0;
  for (int k = 0; k < n; ++k)
    for (int s = 1; k + s < n; s *= 2) {
      double w = weighted ? std::min(dist(k), dist(k + s)) : 1.0;
      quot = std::max(quot, w * std::abs(dv[k + s] - dv[k]) / std::pow(s * h, alpha));
    }
  return sup + grad_part + quot;
}

}  // namespace cdflow
