#pragma once

#include <functional>
#include <vector>

#include "vie/linear.hpp"
#include "vie/problem.hpp"

namespace vie {

/// Bracket policy for scalar root finding: the initial interval around a
/// center, grown by `expansion` up to `max_expansions` times.
struct BracketSpec {
  double lo = -1.0;
  double hi = 1.0;
  double expansion = 2.0;
  int max_expansions = 40;
};

/// Van Wijngaarden-Dekker-Brent root finding. The bracket [lo, hi] is grown
/// geometrically until the endpoints straddle a sign change; throws
/// RootBracketFailure if none appears. Never evaluates phi outside the
/// current bracket.
double brent_root(const std::function<double(double)>& phi, BracketSpec bracket,
                  double tol = 1e-12);

/// Brent iteration on a valid bracket (phi(a) * phi(b) <= 0).
double brent_on_bracket(const std::function<double(double)>& phi, double a, double b,
                        double tol = 1e-12);

/// Nonlinear operator value (Fx)(t) = sum_i int K_i G_i(s, x(s)) ds - f(t),
/// by adaptive quadrature to absolute tolerance tol.
double apply_operator(const NonlinearProblem& problem, const RealFn& x, double t, double tol);

/// Kernels of the Frechet derivative at x0: K_i(t,s) * dG_i/dx(s, x0(s)).
/// Missing analytic derivatives fall back to a centered difference in x with
/// step 1e-6 * (1 + |x0(s)|).
std::vector<Kernel2> frechet_linearize(const NonlinearProblem& problem, const RealFn& x0);

struct NKConfig {
  int max_outer = 30;
  double tol = 1e-8;
  StepKind inner = StepKind::constant;
  RealFn initial;  // defaults to the constant seed x(0) when empty
};

struct NKResult {
  StepSolution solution;
  std::vector<double> iterate_gaps;  // sup node difference per outer iteration
  bool converged = false;
};

/// Modified Newton-Kantorovich iteration: the derivative is frozen at the
/// initial iterate, so every outer step solves one linear first-kind equation
/// with the configured direct method.
NKResult newton_kantorovich_solve(const NonlinearProblem& problem, const Mesh& mesh,
                                  const NKConfig& config = {});

/// Generalized direct method: piecewise-constant coefficients from per-node
/// scalar equations assembled via the v-index table. The scalar equations are
/// solved by Brent on a sign-change cell nearest the predicted continuation;
/// nodes whose equation has no root (possible near points where dG_n/dx
/// vanishes on the solution) take the defect-minimizing value instead.
/// `guide`, when present, supplies a-priori branch selection (the equation
/// may have several solution branches when the Lipschitz smallness condition
/// fails); it never alters root values, only the choice among them.
StepSolution solve_nonlinear_direct(const NonlinearProblem& problem, const Mesh& mesh,
                                    const BracketSpec& bracket = {},
                                    const RealFn& guide = {});

struct Theorem1Report {
  double lhs = 0.0;  // measured left-hand side of the smallness condition
  bool smallness_ok = false;
  ValidationReport structural;
  bool overall = false;
};

/// Evaluates the existence/uniqueness smallness condition
/// q_n + sum_{i=1}^{n-1} alpha_i'(0) |K_n(0,0)^{-1} (K_i(0,0) - K_{i+1}(0,0))| (1 + q_i) < 1
/// for user-supplied Lipschitz constants q_i, plus the structural hypotheses.
Theorem1Report check_theorem1(const NonlinearProblem& problem, const std::vector<double>& q);

}  // namespace vie
