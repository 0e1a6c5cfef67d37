#pragma once

#include <vector>

#include "cdflow/grid.hpp"

namespace cdflow {

// Diagnostic norms on grid fields and inlet profiles.
//
//   sup             max |f|
//   grad_sup        max |f| + max |grad f|            (second order differences)
//   holder          C^{1,alpha}: grad_sup + the alpha-Holder seminorm of grad f
//   weighted_holder the interface-weighted variant: max |f|
//                   + max d^(1-alpha) |grad f| + max d_min |grad f(p)-grad f(q)| / |p-q|^alpha
//                   with d the distance to the interface face y2 = m
//
// Holder quotients are maximized over axis-aligned dyadic pair offsets, which
// keeps the surrogate O(N^2 log N).  These norms are diagnostics; no solver
// path depends on them.
enum class NormKind { sup, grad_sup, holder, weighted_holder };

double discrete_norm(const Grid& g, const Field2D& f, NormKind kind, double alpha = 0.75);

// Profile version on [0, xmax] with uniform samples; the weighting distance is
// measured to the right endpoint (the interface end).
double discrete_profile_norm(const std::vector<double>& xs, const std::vector<double>& vals,
                             NormKind kind, double alpha = 0.75);

}  // namespace cdflow
