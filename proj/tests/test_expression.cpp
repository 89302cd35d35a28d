#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "vie/expression.hpp"
#include "vie/problem_file.hpp"

using namespace vie;

TEST_CASE("expression parsing and evaluation") {
  CHECK(Expr::parse("1 + 2*3").eval(0, 0, 0) == 7.0);
  CHECK(Expr::parse("2^3^2").eval(0, 0, 0) == 512.0);  // right associative
  CHECK(Expr::parse("-t^2").eval(3, 0, 0) == -9.0);
  CHECK(Expr::parse("2^-2").eval(0, 0, 0) == 0.25);
  CHECK(Expr::parse("4*-2").eval(0, 0, 0) == -8.0);
  CHECK(Expr::parse("(1 - t*s)").eval(2.0, 0.25, 0) == 0.5);
  CHECK(Expr::parse("sin(x)^2 + 1").eval(0, 0, 1.3) ==
        doctest::Approx(std::sin(1.3) * std::sin(1.3) + 1.0));
  CHECK(Expr::parse("pi").eval(0, 0, 0) == doctest::Approx(std::numbers::pi));
  CHECK(Expr::parse("e").eval(0, 0, 0) == doctest::Approx(std::numbers::e));
  CHECK(Expr::parse("exp(log(t))").eval(5.0, 0, 0) == doctest::Approx(5.0));
  CHECK(Expr::parse("sqrt(2*t+1) - 1").eval(4.0, 0, 0) == doctest::Approx(2.0));
  CHECK(Expr::parse("67*t^4/3072").eval(1.0, 0, 0) == doctest::Approx(67.0 / 3072.0));

  CHECK(Expr::parse("t + s").uses('t'));
  CHECK(Expr::parse("t + s").uses('s'));
  CHECK_FALSE(Expr::parse("t + s").uses('x'));
}

TEST_CASE("expression parse errors carry positions") {
  CHECK_THROWS_AS(Expr::parse("sin("), ParseError);
  CHECK_THROWS_AS(Expr::parse("1 +"), ParseError);
  CHECK_THROWS_AS(Expr::parse("foo(2)"), ParseError);
  CHECK_THROWS_AS(Expr::parse("1 2"), ParseError);
  CHECK_THROWS_AS(Expr::parse(""), ParseError);
  try {
    Expr::parse("1 + bogus", 7);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 7);
    CHECK(e.column == 5);
  }
}

namespace {

constexpr const char* kLinearFile = R"(# comment line
n = 2
T = 2

[curves]
alpha1 = t/3
alpha1' = 1/3

[kernels]
K1 = 1 + t + s
K2 = -1

[rhs]
f = manufactured
exact = sqrt(2*t+1) - 1
)";

}  // namespace

TEST_CASE("problem file parsing") {
  SUBCASE("well-formed linear definition") {
    const auto def = parse_problem_text(kLinearFile, "test.vie");
    CHECK(def.n == 2);
    CHECK(def.horizon == 2.0);
    CHECK(def.manufactured);
    CHECK_FALSE(def.is_nonlinear());
    const auto problem = def.to_linear();
    CHECK(problem.kernels[0](1.0, 0.5) == doctest::Approx(2.5));
    CHECK(problem.kernels[1](1.0, 0.5) == -1.0);
    CHECK(problem.curves.alpha(1, 1.5) == doctest::Approx(0.5));
    // manufactured right-hand side, frozen reference value
    CHECK(problem.f(1.0) == doctest::Approx(-0.235948948564756802).epsilon(1e-9));
  }

  SUBCASE("curve derivative falls back to finite differences") {
    std::string text = kLinearFile;
    text.erase(text.find("alpha1' = 1/3"), 13);
    const auto def = parse_problem_text(text, "test.vie");
    const auto problem = def.to_linear();
    CHECK(problem.curves.alpha_prime(1, 0.0) == doctest::Approx(1.0 / 3).epsilon(1e-6));
  }

  SUBCASE("nonlinear definition round-trips through the solvers") {
    const char* text = R"(
n = 1
T = 1
seed = 0
[kernels]
K1 = 1
[G]
G1 = x
G1x = 1
[rhs]
f = manufactured
exact = t
)";
    const auto def = parse_problem_text(text, "test.vie");
    CHECK(def.is_nonlinear());
    const auto bench = def.to_bench("inline");
    REQUIRE(bench.nonlinear.has_value());
    CHECK(bench.exact(0.7) == doctest::Approx(0.7));
  }

  SUBCASE("errors carry file positions") {
    CHECK_THROWS_AS(parse_problem_text("n = 2\nT = 2\n[kernels]\nK1 = sin(\n", "bad.vie"),
                    ParseError);
    CHECK_THROWS_AS(parse_problem_text("T = 2\n[curves]\nalpha1 = t\n", "bad.vie"), ParseError);
    CHECK_THROWS_AS(parse_problem_text("n = 2\nT = 2\n[what]\n", "bad.vie"), ParseError);
    CHECK_THROWS_AS(parse_problem_text(kLinearFile + std::string("K7 = 1\n"), "bad.vie"),
                    ParseError);
    try {
      parse_problem_text("n = 2\nT = 2\n\n[kernels]\nK1 = sin(\n", "bad.vie");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 5);
      CHECK(std::string(e.what()).find("bad.vie:5:") != std::string::npos);
    }
  }

  SUBCASE("missing pieces are rejected") {
    CHECK_THROWS_AS(parse_problem_text("n = 2\nT = 2\n[kernels]\nK1 = 1\nK2 = 1\n[rhs]\nf = t\n",
                                       "bad.vie"),
                    ParseError);  // missing alpha1
    CHECK_THROWS_AS(
        parse_problem_text("n = 1\nT = 2\n[kernels]\nK1 = 1\n[rhs]\nf = manufactured\n",
                           "bad.vie"),
        ParseError);  // manufactured without exact
  }
}
