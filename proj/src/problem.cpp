#include "vie/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vie/quadrature.hpp"

namespace vie {

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double numeric_derivative(const RealFn& f, double t, double horizon) {
  const double h = std::max(1e-6, 1e-8 * horizon);
  if (t < h) return (4.0 * f(t + h) - f(t + 2.0 * h) - 3.0 * f(t)) / (2.0 * h);
  if (t > horizon - h) return (3.0 * f(t) - 4.0 * f(t - h) + f(t - 2.0 * h)) / (2.0 * h);
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

double fprime_at_origin(const RealFn& f, const RealFn& f_prime, double horizon) {
  if (f_prime) return f_prime(0.0);
  return numeric_derivative(f, 0.0, horizon);
}

namespace {

ValidationReport validate_structure(const CurveSet& curves, const std::vector<Kernel2>& kernels,
                                    const RealFn& f, double T, int samples) {
  ValidationReport report;
  const int n = curves.piece_count();
  samples = std::max(samples, 2);

  // |f(0)| against the sampled magnitude of f.
  double fmax = 0.0;
  for (int i = 1; i <= samples; ++i) fmax = std::max(fmax, std::abs(f(T * i / samples)));
  const double f0 = std::abs(f(0.0));
  const double f0_tol = 1e-8 * (1.0 + fmax);
  report.checks.push_back({"f(0)=0", f0 <= f0_tol, f0, f0_tol});

  // alpha_i(0) = 0.
  double a0 = 0.0;
  for (int i = 1; i < n; ++i) a0 = std::max(a0, std::abs(curves.alpha(i, 0.0)));
  const double a0_tol = 1e-10 * std::max(1.0, T);
  report.checks.push_back({"alpha_i(0)=0", a0 <= a0_tol, a0, a0_tol});

  // 0 < alpha_1(t) < ... < alpha_{n-1}(t) < t on a sample grid.
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= samples; ++i) {
    const double t = T * i / samples;
    double prev = 0.0;
    for (int c = 1; c < n; ++c) {
      const double a = curves.alpha(c, t);
      min_gap = std::min(min_gap, a - prev);
      prev = a;
    }
    min_gap = std::min(min_gap, t - prev);
  }
  report.checks.push_back({"curve ordering", min_gap > 0.0, min_gap, 0.0});

  // alpha_1'(0) <= ... <= alpha_{n-1}'(0) < 1.
  double worst_nondec = 0.0;
  for (int c = 2; c < n; ++c)
    worst_nondec = std::max(worst_nondec,
                            curves.alpha_prime(c - 1, 0.0) - curves.alpha_prime(c, 0.0));
  const double last = n > 1 ? curves.alpha_prime(n - 1, 0.0) : 0.0;
  const bool deriv_ok = worst_nondec <= 1e-12 && last < 1.0;
  report.checks.push_back(
      {"derivative ordering at 0", deriv_ok, std::max(worst_nondec, last - 1.0), 1e-12});

  // Seed denominator of the differentiated equation at t = 0.
  double denom = 0.0, kmax = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double k0 = kernels[static_cast<std::size_t>(i) - 1](0.0, 0.0);
    denom += k0 * (curves.alpha_prime(i, 0.0) - curves.alpha_prime(i - 1, 0.0));
    kmax = std::max(kmax, std::abs(k0));
  }
  const double seed_tol = 1e-12 * kmax;
  report.checks.push_back(
      {"seed denominator nonzero", std::abs(denom) > seed_tol && denom != 0.0, std::abs(denom),
       seed_tol});

  report.overall = std::all_of(report.checks.begin(), report.checks.end(),
                               [](const ValidationCheck& c) { return c.passed; });
  return report;
}

}  // namespace

ValidationReport validate_linear(const LinearProblem& problem, int samples) {
  return validate_structure(problem.curves, problem.kernels, problem.f, problem.horizon,
                            samples);
}

ValidationReport validate_nonlinear(const NonlinearProblem& problem, int samples) {
  ValidationReport report = validate_structure(problem.curves, problem.kernels, problem.f,
                                               problem.horizon, samples);
  samples = std::max(samples, 2);
  const auto& kn = problem.kernels.back();
  double min_diag = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= samples; ++i) {
    const double t = problem.horizon * i / samples;
    min_diag = std::min(min_diag, std::abs(kn(t, t)));
  }
  report.checks.push_back({"K_n(t,t) nonzero", min_diag > 0.0, min_diag, 0.0});
  report.overall = report.overall && report.checks.back().passed;
  return report;
}

RealFn manufacture_rhs(const CurveSet& curves, const std::vector<Kernel2>& kernels,
                       const RealFn& exact, const std::vector<PointwiseMap>& G, double horizon,
                       double tol) {
  if (!(tol > 0.0)) throw StructuralError("manufacture_rhs: tol must be positive");
  // Captured by value so the returned closure is self-contained.
  return [curves, kernels, exact, G, horizon, tol](double t) -> double {
    if (t <= 0.0) return 0.0;
    return adaptive_piecewise_integral(
        t, 0.0, t, curves,
        [&](int piece, double s) {
          const double k = kernels[static_cast<std::size_t>(piece) - 1](t, s);
          const double x = exact(s);
          const double g =
              G.empty() ? x : G[static_cast<std::size_t>(piece) - 1](s, x);
          return k * g;
        },
        tol);
  };
}

}  // namespace vie
