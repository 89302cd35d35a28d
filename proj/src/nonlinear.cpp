#include "vie/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vie {

double brent_on_bracket(const std::function<double(double)>& phi, double a, double b,
                        double tol) {
  constexpr int kMaxIter = 200;
  constexpr double kEps = 2.3e-16;
  double fa = phi(a), fb = phi(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw RootBracketFailure(-1, "brent_on_bracket: no sign change");
  double c = a, fc = fa, d = b - a, e = b - a;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    if (fb * fc > 0.0) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::abs(d) > tol1)
      b += d;
    else
      b += (xm > 0.0 ? tol1 : -tol1);
    fb = phi(b);
  }
  return b;
}

double brent_root(const std::function<double(double)>& phi, BracketSpec bracket, double tol) {
  double lo = bracket.lo, hi = bracket.hi;
  if (!(lo < hi)) throw StructuralError("brent_root: bracket lo must be < hi");
  double flo = phi(lo), fhi = phi(hi);
  for (int e = 0; e <= bracket.max_expansions; ++e) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi < 0.0) return brent_on_bracket(phi, lo, hi, tol);
    if (e == bracket.max_expansions) break;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo) * bracket.expansion;
    lo = mid - half;
    hi = mid + half;
    flo = phi(lo);
    fhi = phi(hi);
  }
  std::ostringstream msg;
  msg << "brent_root: no sign change in [" << lo << ", " << hi << "] after "
      << bracket.max_expansions << " expansions";
  throw RootBracketFailure(-1, msg.str());
}

double apply_operator(const NonlinearProblem& problem, const RealFn& x, double t, double tol) {
  if (t <= 0.0) return -problem.f(0.0);
  const double integral = adaptive_piecewise_integral(
      t, 0.0, t, problem.curves,
      [&](int piece, double s) {
        return problem.kernels[static_cast<std::size_t>(piece) - 1](t, s) *
               problem.G[static_cast<std::size_t>(piece) - 1](s, x(s));
      },
      tol);
  return integral - problem.f(t);
}

namespace {

PointwiseMap g_derivative(const NonlinearProblem& problem, int piece) {
  if (!problem.G_x.empty() && problem.G_x[static_cast<std::size_t>(piece) - 1])
    return problem.G_x[static_cast<std::size_t>(piece) - 1];
  const PointwiseMap g = problem.G[static_cast<std::size_t>(piece) - 1];
  return [g](double s, double x) {
    const double step = 1e-6 * (1.0 + std::abs(x));
    return (g(s, x + step) - g(s, x - step)) / (2.0 * step);
  };
}

}  // namespace

std::vector<Kernel2> frechet_linearize(const NonlinearProblem& problem, const RealFn& x0) {
  std::vector<Kernel2> kernels;
  kernels.reserve(problem.kernels.size());
  for (int piece = 1; piece <= static_cast<int>(problem.kernels.size()); ++piece) {
    const Kernel2 k = problem.kernels[static_cast<std::size_t>(piece) - 1];
    const PointwiseMap gx = g_derivative(problem, piece);
    kernels.push_back([k, gx, x0](double t, double s) { return k(t, s) * gx(s, x0(s)); });
  }
  return kernels;
}

namespace {

// Psi_m(t) = f(t) + sum_i int K_i [G_ix(s, x0(s)) x_m(s) - G_i(s, x_m(s))] ds,
// adaptively, splitting at the iterate's mesh nodes when it is a StepSolution.
double evaluate_psi(const NonlinearProblem& problem,
                    const std::vector<PointwiseMap>& gx, const RealFn& x0,
                    const RealFn& xm, const Mesh* xm_mesh, double t, double tol) {
  if (t <= 0.0) return problem.f(0.0);
  auto integrand = [&](int piece, double s) {
    const double v = xm(s);
    const double gxv = gx[static_cast<std::size_t>(piece) - 1](s, x0(s));
    const double gv = problem.G[static_cast<std::size_t>(piece) - 1](s, v);
    return problem.kernels[static_cast<std::size_t>(piece) - 1](t, s) * (gxv * v - gv);
  };
  double total = 0.0;
  if (xm_mesh == nullptr) {
    total = adaptive_piecewise_integral(t, 0.0, t, problem.curves, integrand, tol);
  } else {
    const int N = xm_mesh->segments();
    double lo = 0.0;
    for (int j = 1; j <= N && lo < t; ++j) {
      const double hi = std::min(xm_mesh->node(j), t);
      if (hi > lo)
        total += adaptive_piecewise_integral(t, lo, hi, problem.curves, integrand, tol);
      lo = hi;
    }
  }
  return problem.f(t) + total;
}

}  // namespace

NKResult newton_kantorovich_solve(const NonlinearProblem& problem, const Mesh& mesh,
                                  const NKConfig& config) {
  if (config.max_outer < 1)
    throw StructuralError("newton_kantorovich_solve: max_outer must be >= 1");
  const int N = mesh.segments();
  const double quad_tol = 1e-12;

  RealFn x0_fn = config.initial;
  if (!x0_fn) {
    // Constant seed from the differentiated equation at t = 0 when solvable.
    double seed = 0.0;
    try {
      const double fp0 = fprime_at_origin(problem.f, problem.f_prime, problem.horizon);
      const int n = problem.curves.piece_count();
      auto psi0 = [&](double xi) {
        double acc = 0.0;
        for (int i = 1; i <= n; ++i)
          acc += (problem.curves.alpha_prime(i, 0.0) - problem.curves.alpha_prime(i - 1, 0.0)) *
                 problem.kernels[static_cast<std::size_t>(i) - 1](0.0, 0.0) *
                 problem.G[static_cast<std::size_t>(i) - 1](0.0, xi);
        return acc - fp0;
      };
      seed = brent_root(psi0, BracketSpec{}, 1e-12);
    } catch (const SolverError&) {
      seed = 0.0;
    }
    x0_fn = [seed](double) { return seed; };
  }

  std::vector<PointwiseMap> gx;
  for (int piece = 1; piece <= static_cast<int>(problem.kernels.size()); ++piece)
    gx.push_back(g_derivative(problem, piece));

  LinearProblem inner;
  inner.curves = problem.curves;
  inner.kernels = frechet_linearize(problem, x0_fn);
  inner.horizon = problem.horizon;

  NKResult result;
  RealFn xm = x0_fn;
  const Mesh* xm_mesh = nullptr;
  StepSolution current;

  for (int m = 0; m < config.max_outer; ++m) {
    // Right-hand side at the nodes, linearly interpolated in between; the
    // derivative at 0 comes from dedicated adaptive evaluations so it follows
    // the same finite-difference path a direct solve would take.
    std::vector<double> psi(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k)
      psi[static_cast<std::size_t>(k)] =
          evaluate_psi(problem, gx, x0_fn, xm, xm_mesh, mesh.node(k), quad_tol);
    Mesh mesh_copy = mesh;
    inner.f = [mesh_copy, psi](double t) -> double {
      if (t <= 0.0) return psi.front();
      const int i = mesh_copy.segment_of(std::min(t, mesh_copy.nodes.back()));
      const double lo = mesh_copy.node(i - 1), hi = mesh_copy.node(i);
      const double w = (t - lo) / (hi - lo);
      return psi[static_cast<std::size_t>(i) - 1] * (1.0 - w) +
             psi[static_cast<std::size_t>(i)] * w;
    };
    {
      auto psi_pointwise = [&, this_mesh = xm_mesh](double t) {
        return evaluate_psi(problem, gx, x0_fn, xm, this_mesh, t, quad_tol);
      };
      const double dpsi0 = numeric_derivative(psi_pointwise, 0.0, problem.horizon);
      inner.f_prime = [dpsi0](double) { return dpsi0; };
    }

    StepSolution next = config.inner == StepKind::constant
                            ? solve_piecewise_constant(inner, mesh)
                            : solve_piecewise_linear(inner, mesh);
    for (double v : next.coeffs)
      if (!std::isfinite(v))
        throw SolverError("newton_kantorovich_solve: iterate is not finite");

    double gap = std::abs(next.node_value(0) - xm(0.0));
    for (int k = 1; k <= N; ++k)
      gap = std::max(gap, std::abs(next.node_value(k) - xm(mesh.node(k))));
    result.iterate_gaps.push_back(gap);

    current = next;
    StepSolution captured = current;
    xm = [captured](double t) { return captured.evaluate(t); };
    xm_mesh = &mesh;
    if (gap < config.tol) {
      result.converged = true;
      break;
    }
  }
  result.solution = current;
  return result;
}

namespace {

struct TrailingPanel {
  double coeff;  // len * K(t_k, m)
  int piece;
  double mid;
};

// Scalar solver for the per-node equations: scan the bracket for sign
// changes, Brent the cell nearest `pred`; with no sign change anywhere accept
// the defect-minimizing point if the defect is within `accept_abs`.
class NodeEquationSolver {
 public:
  NodeEquationSolver(BracketSpec spec, int scans = 128) : spec_(spec), scans_(scans) {}

  template <class Phi>
  double solve(Phi&& phi, double center, double pred, double accept_abs, int node) const {
    double lo = center + spec_.lo, hi = center + spec_.hi;
    for (int e = 0; e <= spec_.max_expansions; ++e) {
      double best_root_lo = 0.0, best_root_hi = 0.0, best_dist = -1.0;
      double prev_x = lo, prev_v = phi(lo);
      double min_abs = std::abs(prev_v), min_x = lo;
      if (prev_v == 0.0) return lo;
      for (int i = 1; i <= scans_; ++i) {
        const double x = lo + (hi - lo) * i / scans_;
        const double v = phi(x);
        if (v == 0.0) return x;
        if (std::abs(v) < min_abs) {
          min_abs = std::abs(v);
          min_x = x;
        }
        if (prev_v * v < 0.0) {
          const double dist = std::abs(0.5 * (prev_x + x) - pred);
          if (best_dist < 0.0 || dist < best_dist) {
            best_dist = dist;
            best_root_lo = prev_x;
            best_root_hi = x;
          }
        }
        prev_x = x;
        prev_v = v;
      }
      if (best_dist >= 0.0)
        return brent_on_bracket([&](double x) { return phi(x); }, best_root_lo, best_root_hi,
                                1e-13);
      // No sign change: prefer a small-defect value near the prediction.
      if (e == 0) {
        const double w = std::max(std::abs(hi - lo) / scans_, 1e-3 * (1.0 + std::abs(pred)));
        const double near = golden_min_abs(phi, pred - w, pred + w);
        if (std::abs(phi(near)) <= accept_abs) return near;
        const double step = (hi - lo) / scans_;
        const double wide = golden_min_abs(phi, std::max(lo, min_x - step),
                                           std::min(hi, min_x + step));
        if (std::abs(phi(wide)) <= accept_abs) return wide;
      }
      const double mid = 0.5 * (lo + hi);
      const double half = 0.5 * (hi - lo) * spec_.expansion;
      lo = mid - half;
      hi = mid + half;
    }
    std::ostringstream msg;
    msg << "node " << node << ": no bracketable root and no acceptable near-root";
    throw RootBracketFailure(node, msg.str());
  }

 private:
  template <class Phi>
  static double golden_min_abs(Phi&& phi, double lo, double hi) {
    constexpr double kInv = 0.6180339887498949;
    double c = hi - kInv * (hi - lo);
    double d = lo + kInv * (hi - lo);
    double fc = std::abs(phi(c)), fd = std::abs(phi(d));
    for (int i = 0; i < 140; ++i) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - kInv * (hi - lo);
        fc = std::abs(phi(c));
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + kInv * (hi - lo);
        fd = std::abs(phi(d));
      }
    }
    return 0.5 * (lo + hi);
  }

  BracketSpec spec_;
  int scans_;
};

}  // namespace

StepSolution solve_nonlinear_direct(const NonlinearProblem& problem, const Mesh& mesh,
                                    const BracketSpec& bracket, const RealFn& guide) {
  const int N = mesh.segments();
  const int n = problem.curves.piece_count();
  const VIndexTable v = build_v_table(mesh, problem.curves);
  const NodeEquationSolver scalar(bracket);

  StepSolution sol;
  sol.kind = StepKind::constant;
  sol.mesh = mesh;
  sol.coeffs.assign(static_cast<std::size_t>(N), 0.0);

  // x(0) from the differentiated equation: f'(0) = sum_i [alpha_i'(0) -
  // alpha_{i-1}'(0)] K_i(0,0) G_i(0, x0).
  const double fp0 = fprime_at_origin(problem.f, problem.f_prime, problem.horizon);
  {
    auto psi0 = [&](double xi) {
      double acc = 0.0;
      for (int i = 1; i <= n; ++i)
        acc += (problem.curves.alpha_prime(i, 0.0) - problem.curves.alpha_prime(i - 1, 0.0)) *
               problem.kernels[static_cast<std::size_t>(i) - 1](0.0, 0.0) *
               problem.G[static_cast<std::size_t>(i) - 1](0.0, xi);
      return acc - fp0;
    };
    const double center = guide ? guide(0.0) : 0.0;
    sol.x0 = scalar.solve(psi0, center, center, 1e-8 * (1.0 + std::abs(fp0)), 0);
  }

  auto known_value = [&](double s) {
    // Piecewise-constant lookup over already-computed coefficients.
    return sol.coeffs[static_cast<std::size_t>(mesh.segment_of(s)) - 1];
  };

  std::vector<TrailingPanel> trailing;
  for (int k = 1; k <= N; ++k) {
    const double t_k = mesh.node(k);
    const double t_prev = mesh.node(k - 1);
    double known = 0.0;
    trailing.clear();

    auto add_panel = [&](double lo, double hi, int piece) {
      if (!(hi - lo > 1e-14 * std::max(1.0, t_k))) return;
      const double m = 0.5 * (lo + hi);
      const double coeff =
          (hi - lo) * problem.kernels[static_cast<std::size_t>(piece) - 1](t_k, m);
      if (m <= t_prev)
        known += coeff * problem.G[static_cast<std::size_t>(piece) - 1](m, known_value(m));
      else
        trailing.push_back({coeff, piece, m});
    };

    // I_1: whole segments below the first curve, then the partial segment up
    // to alpha_1(t_k). For a single-piece kernel the loop runs to the diagonal.
    const int v1 = n > 1 ? v(1, k) : k;
    const double a1 = problem.curves.alpha(1, t_k);
    for (int j = 1; j < v1; ++j) add_panel(mesh.node(j - 1), mesh.node(j), 1);
    add_panel(mesh.node(v1 - 1), n > 1 ? a1 : t_k, 1);

    // Interior pieces: single integral when both curves share a segment,
    // otherwise partial + whole segments + partial.
    for (int p = 2; p <= n - 1; ++p) {
      const double ap_prev = problem.curves.alpha(p - 1, t_k);
      const double ap = problem.curves.alpha(p, t_k);
      const int vp_prev = v(p - 1, k);
      const int vp = v(p, k);
      if (vp_prev == vp) {
        add_panel(ap_prev, ap, p);
      } else {
        add_panel(ap_prev, mesh.node(vp_prev), p);
        for (int j = vp_prev + 1; j < vp; ++j) add_panel(mesh.node(j - 1), mesh.node(j), p);
        add_panel(mesh.node(vp - 1), ap, p);
      }
    }

    // I_n: partial from alpha_{n-1}(t_k) to the end of its segment, then
    // whole segments through (t_{k-1}, t_k].
    if (n > 1) {
      const double an = problem.curves.alpha(n - 1, t_k);
      const int vn = v(n - 1, k);
      add_panel(an, mesh.node(vn), n);
      for (int j = vn + 1; j <= k; ++j) add_panel(mesh.node(j - 1), mesh.node(j), n);
    }

    const double f_k = problem.f(t_k);
    double trailing_mass = 0.0;
    for (const auto& p : trailing) trailing_mass += std::abs(p.coeff);
    auto phi = [&](double xi) {
      double acc = known - f_k;
      for (const auto& p : trailing)
        acc += p.coeff * problem.G[static_cast<std::size_t>(p.piece) - 1](p.mid, xi);
      return acc;
    };

    const double x_prev = k >= 2 ? sol.coeffs[static_cast<std::size_t>(k) - 2] : sol.x0;
    double pred;
    if (guide)
      pred = guide(t_k);
    else if (k >= 3)
      pred = 2.0 * sol.coeffs[static_cast<std::size_t>(k) - 2] -
             sol.coeffs[static_cast<std::size_t>(k) - 3];
    else if (k == 2)
      pred = 2.0 * sol.coeffs.front() - sol.x0;
    else
      pred = sol.x0;
    const double accept = std::max(1e-8 * (1.0 + std::abs(f_k)), trailing_mass);
    sol.coeffs[static_cast<std::size_t>(k) - 1] = scalar.solve(phi, x_prev, pred, accept, k);
  }
  return sol;
}

Theorem1Report check_theorem1(const NonlinearProblem& problem, const std::vector<double>& q) {
  const int n = problem.curves.piece_count();
  if (static_cast<int>(q.size()) != n)
    throw StructuralError("check_theorem1: need one Lipschitz constant per piece");
  Theorem1Report report;
  report.structural = validate_nonlinear(problem);

  const double kn = problem.kernels.back()(0.0, 0.0);
  if (kn == 0.0) {
    report.lhs = std::numeric_limits<double>::infinity();
    report.smallness_ok = false;
    report.overall = false;
    return report;
  }
  double lhs = q.back();
  for (int i = 1; i <= n - 1; ++i) {
    const double ki = problem.kernels[static_cast<std::size_t>(i) - 1](0.0, 0.0);
    const double kip1 = problem.kernels[static_cast<std::size_t>(i)](0.0, 0.0);
    lhs += problem.curves.alpha_prime(i, 0.0) * std::abs((ki - kip1) / kn) *
           (1.0 + q[static_cast<std::size_t>(i) - 1]);
  }
  report.lhs = lhs;
  report.smallness_ok = lhs < 1.0;
  report.overall = report.smallness_ok && report.structural.overall;
  return report;
}

}  // namespace vie
