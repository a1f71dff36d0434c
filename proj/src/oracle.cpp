#include "tvcut/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace tvcut {
namespace oracle {

BruteForceResult brute_force_balanced_cut(const Graph& g) {
  int n = g.n();
  if (n < 2 || n > 20) throw_config("brute force limited to 2 <= n <= 20");

  auto subset_from_mask = [&](uint32_t mask) {
    std::vector<int> s{0};
    for (int i = 1; i < n; ++i)
      if (mask & (1u << (i - 1))) s.push_back(i);
    return s;
  };

  uint32_t full = (n == 1) ? 0 : ((1u << (n - 1)) - 1);
  double best_value = 0.0;
  std::vector<int> best_subset;
  bool have = false;

  for (uint32_t mask = 0; mask < full; ++mask) {  // mask == full would be S = V
    double cut = 0.0;
    int size_s = 1 + __builtin_popcount(mask);
    for (const auto& e : g.edges()) {
      bool in_u = (e.u == 0) || (mask & (1u << (e.u - 1)));
      bool in_v = (e.v == 0) || (mask & (1u << (e.v - 1)));
      if (in_u != in_v) cut += e.w;
    }
    double value = cut / std::min(size_s, n - size_s);
    if (!have || value < best_value) {
      best_value = value;
      best_subset = subset_from_mask(mask);
      have = true;
    } else if (value == best_value) {
      auto s = subset_from_mask(mask);
      if (s < best_subset) best_subset = std::move(s);
    }
  }
  return {Partition{std::move(best_subset)}, best_value};
}

std::pair<double, double> rof_two_node_closed_form(double w, double lambda,
                                                   double g1, double g2) {
  if (!(w > 0.0) || !(lambda > 0.0))
    throw_config("w and lambda must be positive");
  double mean = (g1 + g2) / 2.0;
  double half_diff = (g1 - g2) / 2.0;
  double threshold = 2.0 * w / lambda;
  double shrunk;
  if (half_diff > threshold)
    shrunk = half_diff - threshold;
  else if (half_diff < -threshold)
    shrunk = half_diff + threshold;
  else
    shrunk = 0.0;
  return {mean + shrunk, mean - shrunk};
}

HighAccuracyResult high_accuracy_rof(const RofProblem& problem) {
  const Graph& g = *problem.graph;
  if (g.n() > 500) throw_config("high_accuracy_rof limited to n <= 500");
  require_connected(g, "high_accuracy_rof");

  double step = fb_step_size(problem);
  EdgeFunction dual(g.edge_count(), 0.0);
  VertexFunction h = primal_from_dual(problem, dual);

  const long long cap = 1000000;
  long long it = 0;
  long long check_every = 500;
  double residual = rof_optimality_residual(problem, h);
  while (residual > 1e-11 && it < cap) {
    long long burst = std::min(check_every, cap - it);
    for (long long t = 0; t < burst; ++t)
      dual = forward_backward_dual_step(problem, dual, step);
    it += burst;
    h = primal_from_dual(problem, dual);
    residual = rof_optimality_residual(problem, h);
    check_every = std::min<long long>(check_every * 2, 32000);
  }
  return {std::move(h), residual, residual <= 1e-11};
}

EquivalenceReport check_relaxation_equivalence(const Graph& g) {
  int n = g.n();
  if (n < 2 || n > 12) throw_config("equivalence check limited to 2 <= n <= 12");
  require_connected(g, "check_relaxation_equivalence");

  EquivalenceReport report{};
  report.max_deviation = 0.0;
  bool have = false;

  // All proper nonempty subsets (complement symmetry makes the full sweep
  // redundant, but n <= 12 keeps it cheap and the symmetry gets tested).
  for (uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    Partition p;
    VertexFunction indicator(n, 0.0);
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        p.subset.push_back(i);
        indicator[i] = 1.0;
      }
    double e = balance_energy(g, indicator);
    double c = balanced_cut_value(g, p);
    report.max_deviation =
        std::max(report.max_deviation, std::abs(e - 2.0 * c));
    if (!have || e < report.min_indicator_energy) {
      report.min_indicator_energy = e;
      have = true;
    }
  }
  report.brute_force_value = brute_force_balanced_cut(g).value;
  report.exact_match =
      report.min_indicator_energy == 2.0 * report.brute_force_value;
  return report;
}

}  // namespace oracle
}  // namespace tvcut
