#pragma once

#include <optional>
#include <vector>

#include "vie/problem.hpp"
#include "vie/quadrature.hpp"

namespace vie {

enum class StepKind { constant, linear };

/// Approximate solution on a mesh: x0 at t = 0 and coefficients x_1..x_N,
/// interpreted as a step function (constant kind) or the continuous chord
/// interpolant (linear kind) on each segment (t_{i-1}, t_i].
struct StepSolution {
  StepKind kind = StepKind::constant;
  Mesh mesh;
  double x0 = 0.0;
  std::vector<double> coeffs;  // x_1..x_N

  double evaluate(double t) const;
  /// Nodal value: x0 at i = 0, else x_i (both kinds).
  double node_value(int i) const { return i == 0 ? x0 : coeffs[static_cast<std::size_t>(i) - 1]; }
  int segments() const { return static_cast<int>(coeffs.size()); }
};

/// x(0) from the differentiated equation at t = 0:
/// f'(0) / sum_i K_i(0,0) [alpha_i'(0) - alpha_{i-1}'(0)].
double compute_x0(const LinearProblem& problem);

/// x_1 from the midpoint rule applied on [0, t_1], split at the curves.
double compute_x1(const LinearProblem& problem, const Mesh& mesh);

StepSolution solve_piecewise_constant(const LinearProblem& problem, const Mesh& mesh);
StepSolution solve_piecewise_linear(const LinearProblem& problem, const Mesh& mesh);

/// Sup-norm of the equation residual of `solution`, evaluated at the mesh
/// nodes refined `refinement` times, with midpoint panels no longer than
/// h / refinement (split at curves and at the solution's own nodes).
double residual_sup_norm(const LinearProblem& problem, const StepSolution& solution,
                         int refinement = 1);

struct IterativeConfig {
  std::vector<double> gamma_grid{0.1, 0.2, 0.5, 1.0, 1.5, 2.0};
  int max_iter = 200;
  /// Stop a sweep loop when the sup update falls below this; defaults to
  /// 1e-10 * (1 + max_k |f(t_k)|).
  std::optional<double> stagnation_tol;
};

struct IterativeResult {
  StepSolution solution;
  double gamma_star = 0.0;
  /// residual_history[g][m] = nodal equation residual after sweep m (entry 0
  /// is the residual of the initial iterate), for gamma_grid[g].
  std::vector<std::vector<double>> residual_history;
  int iterations_used = 0;
  /// Set when the kernels fail the sampled symmetry check K_i(t,s) = K_i(s,t);
  /// advisory only, the solver runs regardless.
  bool symmetry_warning = false;
};

/// Regularized successive approximation: seed x^(0) = g at the nodes, relax
/// node values with steps gamma * residual_k / a_kk (successively in k within
/// a sweep), and pick the gamma minimizing the equation residual.
IterativeResult solve_iterative(const LinearProblem& problem, const Mesh& mesh,
                                const IterativeConfig& config = {});

}  // namespace vie
