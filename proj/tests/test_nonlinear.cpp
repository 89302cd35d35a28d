#include <doctest.h>

#include <cmath>

#include "vie/builtin.hpp"
#include "vie/convergence.hpp"
#include "vie/nonlinear.hpp"

using namespace vie;

namespace {

/// Lifts a linear single-piece problem into the nonlinear form with G(s,x) = x.
NonlinearProblem linear_disguise(const LinearProblem& p) {
  NonlinearProblem q;
  q.curves = p.curves;
  q.kernels = p.kernels;
  q.G.assign(p.kernels.size(), [](double, double x) { return x; });
  q.G_x.assign(p.kernels.size(), [](double, double) { return 1.0; });
  q.f = p.f;
  q.f_prime = p.f_prime;
  q.horizon = p.horizon;
  return q;
}

bool bisection_confirms_root(const std::function<double(double)>& phi, double lo, double hi,
                             double target, double tol) {
  // Oracle for brent_root: plain bisection.
  double flo = phi(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = phi(mid);
    if (fm == 0.0) return std::abs(mid - target) <= tol;
    if (flo * fm < 0.0)
      hi = mid;
    else {
      lo = mid;
      flo = fm;
    }
  }
  return std::abs(0.5 * (lo + hi) - target) <= tol;
}

}  // namespace

TEST_CASE("brent_root") {
  SUBCASE("affine") {
    CHECK(brent_root([](double x) { return x - 3.0; }, {0.0, 10.0}) ==
          doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("classical cubic, checked by a bisection oracle") {
    const auto cubic = [](double x) { return x * x * x - 2.0 * x - 5.0; };
    const double root = brent_root(cubic, {2.0, 3.0});
    CHECK(root == doctest::Approx(2.09455148154232659).epsilon(1e-11));
    CHECK(bisection_confirms_root(cubic, 2.0, 3.0, root, 1e-9));
  }
  SUBCASE("sin on [3, 4]") {
    CHECK(brent_root([](double x) { return std::sin(x); }, {3.0, 4.0}) ==
          doctest::Approx(3.14159265358979).epsilon(1e-12));
  }
  SUBCASE("expansion finds a distant root") {
    CHECK(brent_root([](double x) { return x - 40.0; }, {-1.0, 1.0}) ==
          doctest::Approx(40.0).epsilon(1e-10));
  }
  SUBCASE("never leaves the bracket, bounded iterations") {
    double lo = 1e9, hi = -1e9;
    int evals = 0;
    const auto counted = [&](double x) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      ++evals;
      return std::cos(x) - x;
    };
    const double root = brent_root(counted, {0.0, 1.0});
    CHECK(root == doctest::Approx(0.7390851332151607).epsilon(1e-12));
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    CHECK(evals <= 200);
  }
  SUBCASE("no sign change anywhere throws") {
    BracketSpec spec;
    spec.max_expansions = 8;
    CHECK_THROWS_AS(brent_root([](double x) { return x * x + 1.0; }, spec, 1e-12),
                    RootBracketFailure);
  }
}

TEST_CASE("nonlinear operator evaluation") {
  const auto ex = builtin_examples();
  const auto& p = *ex[3].nonlinear_manufactured;

  SUBCASE("t = 0 gives -f(0) = 0") {
    CHECK(apply_operator(p, ex[3].exact, 0.0, 1e-10) == 0.0);
  }
  SUBCASE("the exact solution annihilates the operator") {
    for (double t : {0.4, 1.1, 2.0})
      CHECK(std::abs(apply_operator(p, ex[3].exact, t, 1e-10)) <= 1e-9);
  }
  SUBCASE("linear specialization matches the linear residual") {
    const auto& lp = *ex[1].linear_manufactured;
    NonlinearProblem q = linear_disguise(lp);
    q.curves = lp.curves;
    for (double t : {0.5, 1.5}) {
      const double lhs = apply_operator(q, ex[1].exact, t, 1e-11);
      CHECK(std::abs(lhs) <= 1e-9);
    }
  }
}

TEST_CASE("frechet linearization") {
  const auto ex = builtin_examples();
  const auto& p = *ex[3].nonlinear_manufactured;

  SUBCASE("identity nonlinearity keeps the kernels") {
    NonlinearProblem q = linear_disguise(*ex[1].linear_manufactured);
    const auto kernels = frechet_linearize(q, [](double) { return 7.0; });
    for (double t : {0.5, 1.5})
      CHECK(kernels[0](t, t / 16) ==
            doctest::Approx(q.kernels[0](t, t / 16)).epsilon(1e-14));
  }
  SUBCASE("quadratic nonlinearity doubles the kernel at x0 = 1") {
    NonlinearProblem q = linear_disguise(*ex[1].linear_manufactured);
    q.G.assign(3, [](double, double x) { return x * x; });
    q.G_x.assign(3, [](double, double x) { return 2.0 * x; });
    const auto kernels = frechet_linearize(q, [](double) { return 1.0; });
    CHECK(kernels[1](1.0, 0.2) == doctest::Approx(2.0 * (1.0 + 0.2)).epsilon(1e-14));
  }
  SUBCASE("analytic and finite-difference derivatives agree") {
    NonlinearProblem fd = p;
    fd.G_x.clear();
    const RealFn x0 = [](double s) { return s + 3.0; };
    const auto analytic = frechet_linearize(p, x0);
    const auto numeric = frechet_linearize(fd, x0);
    for (double t : {0.5, 1.5})
      for (std::size_t i = 0; i < analytic.size(); ++i)
        CHECK(analytic[i](t, t / 3) == doctest::Approx(numeric[i](t, t / 3)).epsilon(1e-7));
  }
}

TEST_CASE("newton-kantorovich on the linear disguise reproduces the direct solver") {
  const auto ex = builtin_examples();
  const auto& lp = *ex[1].linear_manufactured;
  NonlinearProblem q = linear_disguise(lp);
  const Mesh mesh = build_uniform_mesh(64, 2.0);

  for (StepKind kind : {StepKind::constant, StepKind::linear}) {
    NKConfig config;
    config.inner = kind;
    config.initial = [](double) { return 0.0; };
    const auto result = newton_kantorovich_solve(q, mesh, config);
    CHECK(result.converged);
    CHECK(result.iterate_gaps.size() <= 3);
    const auto direct = kind == StepKind::constant ? solve_piecewise_constant(lp, mesh)
                                                   : solve_piecewise_linear(lp, mesh);
    CHECK(result.solution.x0 == direct.x0);
    for (int i = 1; i <= 64; ++i)
      CHECK(result.solution.node_value(i) == direct.node_value(i));
  }
}

TEST_CASE("generalized direct method") {
  const auto ex = builtin_examples();

  SUBCASE("linear disguise reproduces the piecewise-constant recursion") {
    LinearProblem lp;
    lp.kernels = {[](double t, double s) { return 2.0 + 0.5 * t + s; }};
    lp.f = manufacture_rhs(lp.curves, lp.kernels,
                           [](double s) { return 1.0 + 0.5 * s; }, {}, 2.0);
    lp.horizon = 2.0;
    NonlinearProblem q = linear_disguise(lp);
    const Mesh mesh = build_uniform_mesh(32, 2.0);
    const auto direct = solve_piecewise_constant(lp, mesh);
    const auto nl = solve_nonlinear_direct(q, mesh);
    CHECK(std::abs(nl.x0 - direct.x0) <= 1e-8);
    for (int i = 1; i <= 32; ++i)
      CHECK(nl.node_value(i) == doctest::Approx(direct.node_value(i)).epsilon(1e-8));
  }

  SUBCASE("example 4 at the coarse table steps") {
    const auto& p = *ex[3].nonlinear_manufactured;
    const auto sol = solve_nonlinear_direct(p, build_uniform_mesh(32, 2.0), {}, ex[3].guide);
    CHECK(sol.x0 == doctest::Approx(ex[3].exact(0.0)).epsilon(1e-6));
    const double eps = max_pointwise_error(sol, ex[3].exact);
    CHECK(eps < 0.596074 * 2);  // paper-scale bound; see the acceptance suite

    const auto sol2 = solve_nonlinear_direct(p, build_uniform_mesh(64, 2.0), {}, ex[3].guide);
    CHECK(max_pointwise_error(sol2, ex[3].exact) < eps);
  }

  SUBCASE("causality of the forward recursion") {
    const auto& base = *ex[3].nonlinear_manufactured;
    NonlinearProblem p = base;
    const Mesh mesh = build_uniform_mesh(32, 2.0);
    const auto sol = solve_nonlinear_direct(p, mesh, {}, ex[3].guide);
    const double cut = mesh.node(20);
    const RealFn f0 = base.f;
    // Bump gently enough that the perturbed equations stay solvable.
    p.f = [f0, cut](double t) { return t > cut ? f0(t) - 0.01 * (t - cut) : f0(t); };
    const auto bumped = solve_nonlinear_direct(p, mesh, {}, ex[3].guide);
    for (int i = 0; i <= 20; ++i) CHECK(sol.node_value(i) == bumped.node_value(i));
    double tail_diff = 0.0;
    for (int i = 21; i <= 32; ++i)
      tail_diff = std::max(tail_diff, std::abs(sol.node_value(i) - bumped.node_value(i)));
    CHECK(tail_diff > 0.0);
  }
}

TEST_CASE("theorem 1 smallness condition checker") {
  const auto ex = builtin_examples();

  SUBCASE("single piece: left-hand side is q_1") {
    LinearProblem p;
    p.kernels = {[](double, double) { return 1.0; }};
    p.f = [](double) { return 0.0; };
    p.horizon = 1.0;
    const auto report = check_theorem1(linear_disguise(p), {0.5});
    CHECK(report.lhs == doctest::Approx(0.5));
    CHECK(report.smallness_ok);
  }

  SUBCASE("matching kernel values at the origin cancel the sum") {
    NonlinearProblem q;
    q.curves = CurveSet({{[](double t) { return t / 2.0; }, [](double) { return 0.5; }}});
    q.kernels = {[](double, double) { return 2.0; }, [](double, double) { return 2.0; }};
    q.G.assign(2, [](double, double x) { return x; });
    q.f = [](double) { return 0.0; };
    q.horizon = 1.0;
    const auto report = check_theorem1(q, {1.0, 0.0});
    CHECK(report.lhs == doctest::Approx(0.0));
    CHECK(report.smallness_ok);
  }

  SUBCASE("example 4 reports a measured value above 1") {
    const auto report = check_theorem1(*ex[3].nonlinear_manufactured, {1.0, 2.0, 1.0});
    CHECK(report.lhs == doctest::Approx(1.75).epsilon(1e-12));
    CHECK_FALSE(report.smallness_ok);
  }

  SUBCASE("vanishing trailing kernel is a structural failure") {
    NonlinearProblem q = *ex[3].nonlinear_manufactured;
    q.kernels.back() = [](double, double) { return 0.0; };
    const auto report = check_theorem1(q, {1.0, 2.0, 1.0});
    CHECK_FALSE(report.overall);
  }
}
