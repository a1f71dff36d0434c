#pragma once

#include "tvcut/rof.hpp"

namespace tvcut {
namespace oracle {

// Exhaustive enumeration of all proper bipartitions (vertex 0's side fixed);
// n <= 20. Ties broken lexicographically on the sorted subset containing
// vertex 0.
struct BruteForceResult {
  Partition partition;
  double value;
};
BruteForceResult brute_force_balanced_cut(const Graph& g);

// Exact minimizer of 2w|u1 - u2| + (lambda/2)||u - g||^2: the mean is
// preserved and the half-difference soft-thresholded by 2w/lambda.
std::pair<double, double> rof_two_node_closed_form(double w, double lambda,
                                                   double g1, double g2);

// Forward-backward dual iteration until the first-order certificate residual
// drops below 1e-11 (or 10^6 iterations). Reference H^k for tests; n <= 500.
struct HighAccuracyResult {
  VertexFunction h;
  double residual;
  bool converged;
};
HighAccuracyResult high_accuracy_rof(const RofProblem& problem);

// Checks E(1_S) = 2 C(S) for every proper subset and that the best indicator
// energy equals twice the brute-force optimum.
struct EquivalenceReport {
  double max_deviation;           // max |E(1_S) - 2 C(S)|
  double min_indicator_energy;    // min over proper subsets of E(1_S)
  double brute_force_value;       // combinatorial optimum
  bool exact_match;               // min_indicator_energy == 2 * optimum
};
EquivalenceReport check_relaxation_equivalence(const Graph& g);

}  // namespace oracle
}  // namespace tvcut
