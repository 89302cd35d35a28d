#include <doctest.h>

#include <cmath>

#include "vie/builtin.hpp"
#include "vie/problem.hpp"
#include "vie/quadrature.hpp"

using namespace vie;

TEST_CASE("validate_linear on the builtin problems") {
  const auto ex = builtin_examples();

  SUBCASE("manufactured example 2 passes everything") {
    const auto report = validate_linear(*ex[1].linear_manufactured);
    CHECK(report.overall);
    for (const auto& c : report.checks) CHECK_MESSAGE(c.passed, c.name);
  }

  SUBCASE("printed example 1 fails only the f(0) check") {
    const auto report = validate_linear(*ex[0].linear_printed);
    CHECK_FALSE(report.overall);
    const auto* f0 = report.find("f(0)=0");
    REQUIRE(f0 != nullptr);
    CHECK_FALSE(f0->passed);
    CHECK(f0->measured == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    const auto* ordering = report.find("curve ordering");
    REQUIRE(ordering != nullptr);
    CHECK(ordering->passed);
  }

  SUBCASE("single piece, zero right-hand side") {
    LinearProblem p;
    p.kernels = {[](double, double) { return 1.0; }};
    p.f = [](double) { return 0.0; };
    p.horizon = 1.0;
    CHECK(validate_linear(p).overall);
  }

  SUBCASE("validation is deterministic") {
    const auto a = validate_linear(*ex[0].linear_manufactured, 100);
    const auto b = validate_linear(*ex[0].linear_manufactured, 100);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
      CHECK(a.checks[i].passed == b.checks[i].passed);
      CHECK(a.checks[i].measured == b.checks[i].measured);
    }
  }
}

TEST_CASE("validate_nonlinear checks the trailing kernel diagonal") {
  const auto ex = builtin_examples();
  CHECK(validate_nonlinear(*ex[3].nonlinear_manufactured).overall);

  NonlinearProblem bad = *ex[3].nonlinear_manufactured;
  bad.kernels.back() = [](double t, double s) { return t - s; };  // vanishes on the diagonal
  const auto report = validate_nonlinear(bad);
  const auto* diag = report.find("K_n(t,t) nonzero");
  REQUIRE(diag != nullptr);
  CHECK_FALSE(diag->passed);
}

TEST_CASE("manufactured right-hand sides") {
  const auto ex = builtin_examples();

  SUBCASE("example 2 matches the printed closed form") {
    // At t = 1 the closed form is -1/16384 + 67/3072 - 121/384 = -14419/49152.
    const double want = -14419.0 / 49152.0;
    CHECK(ex[1].linear_manufactured->f(1.0) == doctest::Approx(want).epsilon(1e-11));
    CHECK(ex[1].linear_printed->f(1.0) == doctest::Approx(want).epsilon(1e-15));
  }

  SUBCASE("frozen high-precision values") {
    // Independently computed with 30-digit arithmetic.
    CHECK(ex[0].linear_manufactured->f(0.5) ==
          doctest::Approx(-0.0750173561997506238).epsilon(1e-10));
    CHECK(ex[0].linear_manufactured->f(1.0) ==
          doctest::Approx(-0.235948948564756802).epsilon(1e-10));
    CHECK(ex[0].linear_manufactured->f(2.0) ==
          doctest::Approx(-0.559086427992179265).epsilon(1e-10));
    CHECK(ex[2].linear_manufactured->f(1.0) ==
          doctest::Approx(-0.445936386866733434).epsilon(1e-10));
    CHECK(ex[2].linear_manufactured->f(2.0) ==
          doctest::Approx(-5.7451495535424884).epsilon(1e-10));
    CHECK(ex[3].nonlinear_manufactured->f(1.3) ==
          doctest::Approx(-1.91018084905032515).epsilon(1e-10));
  }

  SUBCASE("printed forms of examples 3 and 4 agree with the manufactured ones") {
    for (double t : {0.3, 0.9, 1.7}) {
      CHECK(ex[2].linear_printed->f(t) ==
            doctest::Approx(ex[2].linear_manufactured->f(t)).epsilon(1e-10));
      CHECK(ex[3].nonlinear_printed->f(t) ==
            doctest::Approx(ex[3].nonlinear_manufactured->f(t)).epsilon(1e-10));
    }
  }

  SUBCASE("zero exact solution gives the zero function") {
    const auto& p = *ex[1].linear_manufactured;
    const RealFn f = manufacture_rhs(p.curves, p.kernels, [](double) { return 0.0; }, {}, 2.0);
    CHECK(f(0.7) == 0.0);
    CHECK(f(2.0) == 0.0);
  }

  SUBCASE("f(0) is exactly zero") {
    for (const auto& e : ex) {
      const RealFn& f =
          e.is_nonlinear ? e.nonlinear_manufactured->f : e.linear_manufactured->f;
      CHECK(f(0.0) == 0.0);
    }
  }

  SUBCASE("single piece, unit kernel reduces to the antiderivative") {
    CurveSet none;
    std::vector<Kernel2> unit{[](double, double) { return 1.0; }};
    const RealFn f =
        manufacture_rhs(none, unit, [](double s) { return s * s; }, {}, 2.0, 1e-12);
    CHECK(f(1.5) == doctest::Approx(std::pow(1.5, 3) / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("manufactured consistency: operator residual of the exact solution") {
  const auto ex = builtin_examples();
  const double tol = 1e-10;
  for (const auto& e : {ex[0], ex[1], ex[2]}) {
    const auto& p = *e.linear_manufactured;
    for (int i = 1; i <= 20; ++i) {
      const double t = 2.0 * i / 20;
      const double integral = adaptive_reference_integral(
          t, 0.0, t, p.curves, p.kernels, e.exact, tol);
      CHECK(std::abs(integral - p.f(t)) <= 10.0 * tol);
    }
  }
}

TEST_CASE("finite difference derivative helper") {
  const RealFn f = [](double t) { return std::sin(2.0 * t); };
  CHECK(numeric_derivative(f, 0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(numeric_derivative(f, 1.0, 2.0) ==
        doctest::Approx(2.0 * std::cos(2.0)).epsilon(1e-8));
  CHECK(numeric_derivative(f, 2.0, 2.0) ==
        doctest::Approx(2.0 * std::cos(4.0)).epsilon(1e-7));
}
