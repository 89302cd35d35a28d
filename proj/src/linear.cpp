#include "vie/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vie {

double StepSolution::evaluate(double t) const {
  if (t <= mesh.nodes.front()) return x0;
  const int i = mesh.segment_of(std::min(t, mesh.nodes.back()));
  const double xi = coeffs[static_cast<std::size_t>(i) - 1];
  if (kind == StepKind::constant) return xi;
  const double lo = mesh.node(i - 1);
  const double hi = mesh.node(i);
  const double xl = node_value(i - 1);
  return xl + (xi - xl) * (t - lo) / (hi - lo);
}

double compute_x0(const LinearProblem& problem) {
  const int n = problem.curves.piece_count();
  double denom = 0.0, kmax = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double k0 = problem.kernels[static_cast<std::size_t>(i) - 1](0.0, 0.0);
    denom += k0 * (problem.curves.alpha_prime(i, 0.0) - problem.curves.alpha_prime(i - 1, 0.0));
    kmax = std::max(kmax, std::abs(k0));
  }
  if (denom == 0.0 || std::abs(denom) < 1e-12 * kmax) {
    std::ostringstream msg;
    msg << "compute_x0: seed denominator " << denom << " is degenerate";
    throw DegenerateSeed(msg.str());
  }
  return fprime_at_origin(problem.f, problem.f_prime, problem.horizon) / denom;
}

double compute_x1(const LinearProblem& problem, const Mesh& mesh) {
  const double t1 = mesh.node(1);
  double denom = 0.0, kmax = 0.0;
  for_each_subsegment(t1, 0.0, t1, problem.curves, [&](double lo, double hi, int piece) {
    const double kv = problem.kernels[static_cast<std::size_t>(piece) - 1](t1, 0.5 * (lo + hi));
    denom += (hi - lo) * kv;
    kmax = std::max(kmax, std::abs(kv));
  });
  if (denom == 0.0 || std::abs(denom) < 1e-12 * t1 * kmax) {
    std::ostringstream msg;
    msg << "compute_x1: denominator " << denom << " at t_1 = " << t1 << " is degenerate";
    throw DegenerateSeed(msg.str());
  }
  return problem.f(t1) / denom;
}

namespace {

// Row integrals over one mesh segment at evaluation time t: A = int K ds and
// B = int (s - left) K ds, midpoint per curve-split sub-segment.
struct RowTerm {
  double A;
  double B;
  double kmax;
};

RowTerm row_term(const LinearProblem& problem, double t, double lo_seg, double hi_seg) {
  RowTerm r{0.0, 0.0, 0.0};
  for_each_subsegment(t, lo_seg, hi_seg, problem.curves, [&](double lo, double hi, int piece) {
    const double m = 0.5 * (lo + hi);
    const double kv = problem.kernels[static_cast<std::size_t>(piece) - 1](t, m);
    const double len = hi - lo;
    r.A += len * kv;
    r.B += len * kv * (m - lo_seg);
    r.kmax = std::max(r.kmax, std::abs(kv));
  });
  return r;
}

void check_diagonal(double diag, double h, double kmax, int k) {
  if (diag == 0.0 || std::abs(diag) < 1e-12 * h * kmax) {
    std::ostringstream msg;
    msg << "degenerate diagonal integral " << diag << " at node " << k;
    throw DegenerateDiagonal(k, msg.str());
  }
}

}  // namespace

StepSolution solve_piecewise_constant(const LinearProblem& problem, const Mesh& mesh) {
  const int N = mesh.segments();
  StepSolution sol;
  sol.kind = StepKind::constant;
  sol.mesh = mesh;
  sol.x0 = compute_x0(problem);
  sol.coeffs.resize(static_cast<std::size_t>(N));
  for (int k = 1; k <= N; ++k) {
    const double t = mesh.node(k);
    double acc = 0.0;
    for (int j = 1; j < k; ++j) {
      const RowTerm r = row_term(problem, t, mesh.node(j - 1), mesh.node(j));
      acc += sol.coeffs[static_cast<std::size_t>(j) - 1] * r.A;
    }
    const RowTerm diag = row_term(problem, t, mesh.node(k - 1), t);
    check_diagonal(diag.A, mesh.h, diag.kmax, k);
    sol.coeffs[static_cast<std::size_t>(k) - 1] = (problem.f(t) - acc) / diag.A;
  }
  return sol;
}

StepSolution solve_piecewise_linear(const LinearProblem& problem, const Mesh& mesh) {
  const int N = mesh.segments();
  StepSolution sol;
  sol.kind = StepKind::linear;
  sol.mesh = mesh;
  sol.x0 = compute_x0(problem);
  sol.coeffs.resize(static_cast<std::size_t>(N));
  for (int k = 1; k <= N; ++k) {
    const double t = mesh.node(k);
    const double hk = t - mesh.node(k - 1);
    double acc = 0.0;
    for (int j = 1; j < k; ++j) {
      const double lo = mesh.node(j - 1);
      const double hj = mesh.node(j) - lo;
      const RowTerm r = row_term(problem, t, lo, mesh.node(j));
      const double xl = sol.node_value(j - 1);
      const double xr = sol.coeffs[static_cast<std::size_t>(j) - 1];
      acc += xl * r.A + (xr - xl) / hj * r.B;
    }
    const RowTerm diag = row_term(problem, t, mesh.node(k - 1), t);
    const double denom = diag.B / hk;
    check_diagonal(denom, mesh.h, diag.kmax, k);
    const double xl = sol.node_value(k - 1);
    sol.coeffs[static_cast<std::size_t>(k) - 1] =
        xl + (problem.f(t) - xl * diag.A - acc) / denom;
  }
  return sol;
}

double residual_sup_norm(const LinearProblem& problem, const StepSolution& solution,
                         int refinement) {
  refinement = std::max(refinement, 1);
  const Mesh& mesh = solution.mesh;
  const int N = mesh.segments();
  const double cap = mesh.h / refinement;
  double worst = std::abs(problem.f(0.0));
  for (int i = 1; i <= N; ++i) {
    for (int r = 1; r <= refinement; ++r) {
      const double t =
          mesh.node(i - 1) + (mesh.node(i) - mesh.node(i - 1)) * r / refinement;
      // Split at the solution's own nodes so the step/chord weight is smooth
      // within each panel run.
      double integral = 0.0;
      for (int j = 1; j <= N && mesh.node(j - 1) < t; ++j) {
        const double hi = std::min(mesh.node(j), t);
        integral += integrate_kernel_w(
            t, mesh.node(j - 1), hi, problem.curves, problem.kernels,
            [&](double s) { return solution.evaluate(s); }, cap);
      }
      worst = std::max(worst, std::abs(integral - problem.f(t)));
    }
  }
  return worst;
}

IterativeResult solve_iterative(const LinearProblem& problem, const Mesh& mesh,
                                const IterativeConfig& config) {
  if (config.gamma_grid.empty()) throw StructuralError("solve_iterative: empty gamma grid");
  const int N = mesh.segments();
  IterativeResult result;

  // Advisory symmetry probe: K_i(t,s) = K_i(s,t) sampled inside each piece.
  {
    bool symmetric = true;
    const double T = problem.horizon;
    for (std::size_t i = 0; i < problem.kernels.size() && symmetric; ++i) {
      for (int q = 1; q <= 7 && symmetric; ++q) {
        const double t = T * q / 8.0;
        const double s = t * 0.5;
        const double a = problem.kernels[i](t, s);
        const double b = problem.kernels[i](s, t);
        if (std::abs(a - b) > 1e-9 * (1.0 + std::abs(a))) symmetric = false;
      }
    }
    result.symmetry_warning = !symmetric;
  }

  // Lower-triangular row integrals a_kj = int_{t_{j-1}}^{t_j} K(t_k, s) ds,
  // packed row-major; reused by every gamma and by the nodal residual.
  std::vector<double> a(static_cast<std::size_t>(N) * (static_cast<std::size_t>(N) + 1) / 2);
  auto entry = [&](int k, int j) -> double& {
    return a[static_cast<std::size_t>(k) * (static_cast<std::size_t>(k) - 1) / 2 +
             static_cast<std::size_t>(j) - 1];
  };
  for (int k = 1; k <= N; ++k) {
    const double t = mesh.node(k);
    for (int j = 1; j < k; ++j)
      entry(k, j) = row_term(problem, t, mesh.node(j - 1), mesh.node(j)).A;
    const RowTerm diag = row_term(problem, t, mesh.node(k - 1), t);
    entry(k, k) = diag.A;
    check_diagonal(diag.A, mesh.h, diag.kmax, k);
  }

  std::vector<double> fv(static_cast<std::size_t>(N) + 1, 0.0);
  double fmax = 0.0;
  for (int k = 1; k <= N; ++k) {
    fv[static_cast<std::size_t>(k)] = problem.f(mesh.node(k));
    fmax = std::max(fmax, std::abs(fv[static_cast<std::size_t>(k)]));
  }
  const double stagnation = config.stagnation_tol.value_or(1e-10 * (1.0 + fmax));

  const double x0 = compute_x0(problem);
  const double x1 = compute_x1(problem, mesh);

  // g(t_k) = f(t_k) - x_1 * int_0^{t_1} K(t_k, s) ds.
  std::vector<double> g(static_cast<std::size_t>(N) + 1, 0.0);
  for (int k = 2; k <= N; ++k)
    g[static_cast<std::size_t>(k)] = fv[static_cast<std::size_t>(k)] - entry(k, 1) * x1;

  auto nodal_residual = [&](const std::vector<double>& x) {
    double worst = 0.0;
    for (int k = 1; k <= N; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += entry(k, j) * x[static_cast<std::size_t>(j)];
      worst = std::max(worst, std::abs(s - fv[static_cast<std::size_t>(k)]));
    }
    return worst;
  };

  std::vector<double> best_x;
  double best_residual = std::numeric_limits<double>::infinity();
  std::size_t best_g = 0;
  int best_iters = 0;
  std::vector<double> finals;
  double initial_residual = 0.0;

  for (std::size_t gi = 0; gi < config.gamma_grid.size(); ++gi) {
    const double gamma = config.gamma_grid[gi];
    if (!(gamma > 0.0)) throw StructuralError("solve_iterative: gamma grid entries must be > 0");
    std::vector<double> x(static_cast<std::size_t>(N) + 1, 0.0);
    x[0] = x0;
    if (N >= 1) x[1] = x1;
    for (int k = 2; k <= N; ++k) x[static_cast<std::size_t>(k)] = g[static_cast<std::size_t>(k)];

    std::vector<double> history;
    history.push_back(nodal_residual(x));
    if (gi == 0) initial_residual = history.front();
    int used = 0;
    bool blew_up = false;
    for (int m = 0; m < config.max_iter; ++m) {
      double sup_update = 0.0;
      for (int k = 2; k <= N; ++k) {
        double s = 0.0;
        for (int j = 2; j < k; ++j) s += entry(k, j) * x[static_cast<std::size_t>(j)];
        const double res = g[static_cast<std::size_t>(k)] - s -
                           entry(k, k) * x[static_cast<std::size_t>(k)];
        const double dx = gamma * res / entry(k, k);
        x[static_cast<std::size_t>(k)] += dx;
        sup_update = std::max(sup_update, std::abs(dx));
      }
      history.push_back(nodal_residual(x));
      used = m + 1;
      if (!std::isfinite(history.back()) || !std::isfinite(sup_update)) {
        blew_up = true;
        break;
      }
      if (sup_update < stagnation) break;
    }
    const double final_res = blew_up ? std::numeric_limits<double>::infinity() : history.back();
    finals.push_back(final_res);
    result.residual_history.push_back(std::move(history));
    if (final_res < best_residual) {
      best_residual = final_res;
      best_x = x;
      best_g = gi;
      best_iters = used;
    }
  }

  const bool all_diverged = std::all_of(finals.begin(), finals.end(), [&](double r) {
    return !(r <= 1e6 * (initial_residual + 1e-300));
  });
  if (all_diverged) {
    std::ostringstream msg;
    msg << "solve_iterative: every gamma diverged; final residuals:";
    for (std::size_t i = 0; i < finals.size(); ++i)
      msg << " gamma=" << config.gamma_grid[i] << " -> " << finals[i];
    throw NoConvergentGamma(finals, msg.str());
  }

  result.gamma_star = config.gamma_grid[best_g];
  result.iterations_used = best_iters;
  result.solution.kind = StepKind::constant;
  result.solution.mesh = mesh;
  result.solution.x0 = x0;
  result.solution.coeffs.assign(best_x.begin() + 1, best_x.end());
  return result;
}

}  // namespace vie
