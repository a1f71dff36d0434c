#pragma once

#include "tvcut/graph.hpp"

namespace tvcut {

// Element of the zero-mean l1 subdifferential at a zero-median function:
// entries in [-1, 1], summing to 0, equal to sign(f_i) wherever f_i != 0.
struct Subgradient {
  std::vector<double> values;
};

// Graph total variation over ordered pairs: 2 * sum_{edges} w |f_u - f_v|.
double tv_norm(const Graph& g, const VertexFunction& f);

// n/2-th smallest entry for even n (1-indexed), middle order statistic for
// odd n.
double median(const VertexFunction& f);

bool is_constant(const VertexFunction& f);

double l1_norm(const VertexFunction& f);
double l2_norm(const VertexFunction& f);
double dot(const VertexFunction& a, const VertexFunction& b);

// Ratio tv_norm(f) / ||f - med(f) 1||_1. Throws a degenerate-input error on
// constant f.
double balance_energy(const Graph& g, const VertexFunction& f);

// Requires median(f) = 0. Zeros are exact: f_i == 0.0, no tolerance (the
// outer loop produces exact zeros via explicit median subtraction).
Subgradient zero_mean_subgradient(const VertexFunction& f);

// E(f_k) - [E(h) + theta E(f_k) ||h - f_k||_2^2 / ||h - med(h) 1||_1].
// Positive iff the adaptive median stopping condition holds.
double energy_inequality_gap(const Graph& g, const VertexFunction& f_k,
                             const VertexFunction& h, double theta);

// ||f_k||_TV - [||h||_TV + theta E(f_k) ||h - f_k||_2^2
//               - E(f_k) <v, h - f_k>]; positive iff the median-free
// stopping condition holds. No median of h is needed.
double median_free_gap(const Graph& g, const VertexFunction& f_k,
                       const Subgradient& v, const VertexFunction& h,
                       double theta);

}  // namespace tvcut
