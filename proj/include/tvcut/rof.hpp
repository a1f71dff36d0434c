#pragma once

#include "tvcut/energy.hpp"
#include "tvcut/graph.hpp"

namespace tvcut {

// Inner proximal problem: min_u 2 sum_e w_e |u_v - u_u| + (lambda/2)||u - g||^2.
// The outer loop sets lambda = E(f^k), g = f^k + v^k and warm_start = f^k.
struct RofProblem {
  const Graph* graph;
  double lambda;
  VertexFunction g;
  VertexFunction warm_start;
};

enum class RofSolverKind { PrimalDual, ForwardBackwardDual };

enum class RofTermination { AdaptiveConditionMet, FixedToleranceMet, CapReached };

struct StoppingPolicy {
  enum class Kind { FixedTolerance, AdaptiveMedian, AdaptiveMedianFree };
  Kind kind = Kind::FixedTolerance;
  double eps = 1e-6;          // FixedTolerance: ||h_{i+1} - h_i||_2 <= eps
  double theta = 0.99;        // adaptive variants, strictly below 1
  VertexFunction f_k;         // adaptive variants
  double energy_fk = 0.0;     // E(f^k)
  Subgradient v_k;            // AdaptiveMedianFree
  double tv_fk = 0.0;         // ||f^k||_TV, AdaptiveMedianFree
  int m_max = 1500;
  int stride = 1;             // evaluate the condition every `stride` iterations

  static StoppingPolicy fixed(double eps, int m_max = 1500);
  static StoppingPolicy adaptive_median(const Graph& g, const VertexFunction& f_k,
                                        double theta, int m_max = 1500);
  static StoppingPolicy adaptive_median_free(const Graph& g,
                                             const VertexFunction& f_k,
                                             const Subgradient& v_k, double theta,
                                             int m_max = 1500);
  void validate() const;
};

struct RofSolution {
  VertexFunction h;
  int iterations_used;  // M_k; counts from m = 1 at the warm start
  RofTermination terminated_by;
  double final_residual;  // ||h_m - h_{m-1}||_2 at termination
};

// Iterates until the policy fires (checked from m = 2; the warm start is
// m = 1) or m_max is reached. `dual_state` may carry the dual variable
// across solves (warm start); it is updated in place when non-null.
RofSolution solve_rof(const RofProblem& problem, RofSolverKind solver,
                      const StoppingPolicy& policy,
                      EdgeFunction* dual_state = nullptr);

// One projected-gradient step on the dual; the primal is recovered as
// u = g + div(p)/lambda, so the iteration map is a pure function of the
// current dual state (semigroup compliance).
EdgeFunction forward_backward_dual_step(const RofProblem& problem,
                                        const EdgeFunction& dual, double step);

// One Chambolle-Pock iteration: dual ascent projected onto |p_e| <= 2 w_e,
// proximal step for the quadratic, primal over-relaxation by `relax`.
void primal_dual_step(const RofProblem& problem, VertexFunction& primal,
                      EdgeFunction& dual, VertexFunction& extrapolated,
                      double tau, double sigma, double relax = 1.0);

VertexFunction primal_from_dual(const RofProblem& problem,
                                const EdgeFunction& dual);

// Dual objective ||div p||^2/(2 lambda) + <g, div p>, minimized by the
// projected-gradient iteration; non-increasing at admissible step sizes.
double dual_objective(const RofProblem& problem, const EdgeFunction& dual);

// Upper bound on the squared norm of the edge-incidence operator (weights
// live in the dual box, not the operator).
double operator_norm_bound(const Graph& g);

// Admissible forward-backward dual step, lambda / operator_norm_bound.
double fb_step_size(const RofProblem& problem);

// Minimal-norm first-order certificate residual: min over |q_e| <= 2 w_e
// (sign-fixed on edges with nonzero gradient of h) of
// ||div q - lambda (h - g)||_2; zero exactly at the minimizer.
double rof_optimality_residual(const RofProblem& problem,
                               const VertexFunction& h);

}  // namespace tvcut
