#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vie/types.hpp"

namespace vie {

/// First-kind equation: sum_i int_{alpha_{i-1}(t)}^{alpha_i(t)} K_i(t,s) x(s) ds = f(t).
struct LinearProblem {
  CurveSet curves;
  std::vector<Kernel2> kernels;  // one per piece
  RealFn f;
  RealFn f_prime;  // optional; finite differences are used when empty
  double horizon = 0.0;
};

/// Nonlinear variant with integrand K_i(t,s) * G_i(s, x(s)).
struct NonlinearProblem {
  CurveSet curves;
  std::vector<Kernel2> kernels;
  std::vector<PointwiseMap> G;
  std::vector<PointwiseMap> G_x;  // entries may be empty; finite differences then
  RealFn f;
  RealFn f_prime;
  double horizon = 0.0;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool overall = false;

  const ValidationCheck* find(const std::string& name) const;
};

/// Structural checks: f(0) ~ 0, curve ordering on a sample grid, alpha_i(0) ~ 0,
/// derivative ordering at 0, and a nonzero seed denominator. Failures are
/// reported, never thrown.
ValidationReport validate_linear(const LinearProblem& problem, int samples = 1000);

/// Same structural checks plus K_n(t,t) != 0 sampled on (0, T].
ValidationReport validate_nonlinear(const NonlinearProblem& problem, int samples = 1000);

/// Builds f(t) = sum_i int K_i(t,s) g_i(s, exact(s)) ds by adaptive quadrature
/// so that discretization error can be measured against `exact`. When `G` is
/// empty the integrand is linear, g_i(s, x) = x. f(0) == 0 by construction.
RealFn manufacture_rhs(const CurveSet& curves, const std::vector<Kernel2>& kernels,
                       const RealFn& exact, const std::vector<PointwiseMap>& G, double horizon,
                       double tol = 1e-12);

/// Centered difference with step max(1e-6, 1e-8 * horizon); second-order
/// one-sided at t = 0 (and at t = horizon).
double numeric_derivative(const RealFn& f, double t, double horizon);

/// f'(0), preferring the analytic derivative when available.
double fprime_at_origin(const RealFn& f, const RealFn& f_prime, double horizon);

}  // namespace vie
