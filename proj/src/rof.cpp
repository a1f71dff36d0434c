#include "tvcut/rof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tvcut {

StoppingPolicy StoppingPolicy::fixed(double eps, int m_max) {
  StoppingPolicy p;
  p.kind = Kind::FixedTolerance;
  p.eps = eps;
  p.m_max = m_max;
  return p;
}

StoppingPolicy StoppingPolicy::adaptive_median(const Graph& g,
                                               const VertexFunction& f_k,
                                               double theta, int m_max) {
  StoppingPolicy p;
  p.kind = Kind::AdaptiveMedian;
  p.theta = theta;
  p.f_k = f_k;
  p.energy_fk = balance_energy(g, f_k);
  p.m_max = m_max;
  return p;
}

StoppingPolicy StoppingPolicy::adaptive_median_free(const Graph& g,
                                                    const VertexFunction& f_k,
                                                    const Subgradient& v_k,
                                                    double theta, int m_max) {
  StoppingPolicy p;
  p.kind = Kind::AdaptiveMedianFree;
  p.theta = theta;
  p.f_k = f_k;
  p.v_k = v_k;
  p.energy_fk = balance_energy(g, f_k);
  p.tv_fk = tv_norm(g, f_k);
  p.m_max = m_max;
  return p;
}

void StoppingPolicy::validate() const {
  if (m_max < 2) throw_config("m_max must be at least 2");
  if (stride < 1) throw_config("stride must be positive");
  if (kind == Kind::FixedTolerance) {
    if (!(eps > 0.0)) throw_config("eps must be positive");
  } else {
    if (!(theta > 0.0 && theta < 1.0))
      throw_config("theta must lie strictly in (0, 1)");
  }
}

double operator_norm_bound(const Graph& g) {
  // ||B||^2 = lambda_max of the unweighted Laplacian <= 2 max degree.
  return 2.0 * std::max(1, g.max_degree());
}

double fb_step_size(const RofProblem& problem) {
  return problem.lambda / operator_norm_bound(*problem.graph);
}

VertexFunction primal_from_dual(const RofProblem& problem,
                                const EdgeFunction& dual) {
  VertexFunction u = divergence(*problem.graph, dual);
  for (int i = 0; i < problem.graph->n(); ++i)
    u[i] = problem.g[i] + u[i] / problem.lambda;
  return u;
}

double dual_objective(const RofProblem& problem, const EdgeFunction& dual) {
  VertexFunction dv = divergence(*problem.graph, dual);
  double quad = 0.0, lin = 0.0;
  for (int i = 0; i < problem.graph->n(); ++i) {
    quad += dv[i] * dv[i];
    lin += problem.g[i] * dv[i];
  }
  return quad / (2.0 * problem.lambda) + lin;
}

EdgeFunction forward_backward_dual_step(const RofProblem& problem,
                                        const EdgeFunction& dual, double step) {
  const Graph& g = *problem.graph;
  VertexFunction u = primal_from_dual(problem, dual);
  EdgeFunction out(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edges()[e];
    double box = 2.0 * ed.w;
    double p = dual[e] + step * (u[ed.v] - u[ed.u]);
    out[e] = std::clamp(p, -box, box);
  }
  return out;
}

void primal_dual_step(const RofProblem& problem, VertexFunction& primal,
                      EdgeFunction& dual, VertexFunction& extrapolated,
                      double tau, double sigma, double relax) {
  const Graph& g = *problem.graph;
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edges()[e];
    double box = 2.0 * ed.w;
    double p = dual[e] + sigma * (extrapolated[ed.v] - extrapolated[ed.u]);
    dual[e] = std::clamp(p, -box, box);
  }
  VertexFunction dv = divergence(g, dual);
  double tl = tau * problem.lambda;
  for (int i = 0; i < g.n(); ++i) {
    double next = (primal[i] + tau * dv[i] + tl * problem.g[i]) / (1.0 + tl);
    extrapolated[i] = next + relax * (next - primal[i]);
    primal[i] = next;
  }
}

namespace {

bool all_finite(const VertexFunction& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// True once the policy's condition holds at iterate h (previous iterate
// h_prev for the fixed-tolerance test).
bool policy_fires(const Graph& g, const StoppingPolicy& policy,
                  const VertexFunction& h, double movement) {
  switch (policy.kind) {
    case StoppingPolicy::Kind::FixedTolerance:
      return movement <= policy.eps;
    case StoppingPolicy::Kind::AdaptiveMedian: {
      if (is_constant(h)) return false;
      return energy_inequality_gap(g, policy.f_k, h, policy.theta) > 0.0;
    }
    case StoppingPolicy::Kind::AdaptiveMedianFree: {
      double diff2 = 0.0, vdot = 0.0;
      for (size_t i = 0; i < h.size(); ++i) {
        double d = h[i] - policy.f_k[i];
        diff2 += d * d;
        vdot += policy.v_k.values[i] * d;
      }
      double gap = policy.tv_fk - (tv_norm(g, h) +
                                   policy.theta * policy.energy_fk * diff2 -
                                   policy.energy_fk * vdot);
      return gap > 0.0;
    }
  }
  return false;
}

}  // namespace

RofSolution solve_rof(const RofProblem& problem, RofSolverKind solver,
                      const StoppingPolicy& policy, EdgeFunction* dual_state) {
  const Graph& g = *problem.graph;
  policy.validate();
  if (problem.lambda <= 0.0) throw_config("rof lambda must be positive");
  if (static_cast<int>(problem.g.size()) != g.n() ||
      static_cast<int>(problem.warm_start.size()) != g.n())
    throw_config("rof problem dimension mismatch");
  require_connected(g, "solve_rof");

  EdgeFunction local_dual;
  EdgeFunction& dual = dual_state ? *dual_state : local_dual;
  if (static_cast<int>(dual.size()) != g.edge_count())
    dual.assign(g.edge_count(), 0.0);

  double movement = 0.0;

  double L = operator_norm_bound(g);
  double fb_step = problem.lambda / L;
  double pd_tau = 1.0 / std::sqrt(L);
  double pd_sigma = pd_tau;

  // `h` holds the current iterate for both solvers; the extra buffers avoid
  // per-iteration allocation in the hot loop.
  VertexFunction h = problem.warm_start;  // Phi^1
  VertexFunction extrapolated = problem.warm_start;
  VertexFunction div_buf(g.n());
  const double tl = pd_tau * problem.lambda;
  const int n = g.n();
  const int edges = g.edge_count();

  for (int m = 2; m <= policy.m_max; ++m) {
    double mv = 0.0;
    if (solver == RofSolverKind::ForwardBackwardDual) {
      VertexFunction prev = h;
      dual = forward_backward_dual_step(problem, dual, fb_step);
      h = primal_from_dual(problem, dual);
      for (int i = 0; i < n; ++i) {
        double d = h[i] - prev[i];
        mv += d * d;
      }
    } else {
      for (int e = 0; e < edges; ++e) {
        const Edge& ed = g.edges()[e];
        double box = 2.0 * ed.w;
        double p = dual[e] + pd_sigma * (extrapolated[ed.v] - extrapolated[ed.u]);
        dual[e] = std::clamp(p, -box, box);
      }
      std::fill(div_buf.begin(), div_buf.end(), 0.0);
      for (int e = 0; e < edges; ++e) {
        div_buf[g.edges()[e].u] += dual[e];
        div_buf[g.edges()[e].v] -= dual[e];
      }
      for (int i = 0; i < n; ++i) {
        double next = (h[i] + pd_tau * div_buf[i] + tl * problem.g[i]) / (1.0 + tl);
        extrapolated[i] = 2.0 * next - h[i];
        double d = next - h[i];
        mv += d * d;
        h[i] = next;
      }
    }
    movement = std::sqrt(mv);
    if (!std::isfinite(movement) || !all_finite(h))
      throw_numerical("rof solver produced non-finite iterate at m = " +
                      std::to_string(m));

    if ((m - 2) % policy.stride == 0 || m == policy.m_max) {
      if (policy_fires(g, policy, h, movement)) {
        RofTermination why = policy.kind == StoppingPolicy::Kind::FixedTolerance
                                 ? RofTermination::FixedToleranceMet
                                 : RofTermination::AdaptiveConditionMet;
        return {std::move(h), m, why, movement};
      }
    }
  }
  return {std::move(h), policy.m_max, RofTermination::CapReached, movement};
}

double rof_optimality_residual(const RofProblem& problem,
                               const VertexFunction& h) {
  const Graph& g = *problem.graph;
  if (static_cast<int>(h.size()) != g.n())
    throw_config("rof_optimality_residual: dimension mismatch");

  // Target of the first-order condition: div q = lambda (h - g) with q in
  // the box, sign-pinned on edges where grad h is nonzero.
  VertexFunction target(g.n());
  for (int i = 0; i < g.n(); ++i)
    target[i] = problem.lambda * (h[i] - problem.g[i]);

  double scale = 0.0;
  for (double x : h) scale = std::max(scale, std::abs(x));
  double active_tol = 1e-9 * std::max(1.0, scale);

  int m = g.edge_count();
  std::vector<char> pinned(m, 0);
  EdgeFunction q(m, 0.0);
  for (int e = 0; e < m; ++e) {
    const Edge& ed = g.edges()[e];
    double grad_e = h[ed.v] - h[ed.u];
    if (std::abs(grad_e) > active_tol) {
      pinned[e] = 1;
      q[e] = 2.0 * ed.w * (grad_e > 0 ? 1.0 : -1.0);
    }
  }

  // Projected gradient on the free coordinates of (1/2)||div q - target||^2.
  double step = 1.0 / operator_norm_bound(g);
  double prev_obj = std::numeric_limits<double>::infinity();
  double obj = 0.0;
  for (int it = 0; it < 50000; ++it) {
    VertexFunction r = divergence(g, q);
    obj = 0.0;
    for (int i = 0; i < g.n(); ++i) {
      r[i] -= target[i];
      obj += r[i] * r[i];
    }
    if (it > 0 && prev_obj - obj <= 1e-30 * std::max(1.0, obj)) break;
    prev_obj = obj;
    for (int e = 0; e < m; ++e) {
      if (pinned[e]) continue;
      const Edge& ed = g.edges()[e];
      double grad_q = r[ed.u] - r[ed.v];  // d/dq_e of the objective
      double box = 2.0 * ed.w;
      q[e] = std::clamp(q[e] - step * grad_q, -box, box);
    }
  }
  return std::sqrt(obj);
}

}  // namespace tvcut
