#include <doctest.h>

#include <cmath>

#include "vie/builtin.hpp"
#include "vie/convergence.hpp"

using namespace vie;

TEST_CASE("error metrics") {
  SUBCASE("exact nodal values give zero error") {
    StepSolution s;
    s.kind = StepKind::constant;
    s.mesh = build_uniform_mesh(8, 2.0);
    s.x0 = 0.0;
    for (int i = 1; i <= 8; ++i) s.coeffs.push_back(s.mesh.node(i));
    CHECK(max_pointwise_error(s, [](double t) { return t; }) == 0.0);
  }

  SUBCASE("two-mesh difference of identical samples is zero") {
    auto sample = [](int n) {
      StepSolution s;
      s.kind = StepKind::constant;
      s.mesh = build_uniform_mesh(n, 2.0);
      s.x0 = 1.0;
      for (int i = 1; i <= n; ++i) s.coeffs.push_back(std::cos(s.mesh.node(i)));
      return s;
    };
    CHECK(two_mesh_difference(sample(16), sample(32)) <= 1e-12);
  }

  SUBCASE("mesh nesting is enforced") {
    StepSolution a, b;
    a.mesh = build_uniform_mesh(16, 2.0);
    a.coeffs.assign(16, 0.0);
    b.mesh = build_uniform_mesh(24, 2.0);
    b.coeffs.assign(24, 0.0);
    CHECK_THROWS_AS(two_mesh_difference(a, b), MeshNotNested);
  }

  SUBCASE("observed order") {
    CHECK(convergence_order(0.08, 0.04) == doctest::Approx(1.0));
    CHECK(convergence_order(0.078452, 0.027076) == doctest::Approx(1.534798).epsilon(1e-5));
    CHECK(convergence_order(9.3805e-4, 3.3986e-4) == doctest::Approx(1.464704).epsilon(1e-5));
    CHECK_THROWS_AS(convergence_order(0.1, 0.0), StructuralError);
  }
}

TEST_CASE("run_benchmark") {
  const auto ex = builtin_examples();

  SUBCASE("example 2, constant kind, short chain") {
    const auto report =
        run_benchmark(ex[1].bench(RhsVariant::manufactured), MethodId::pc,
                      default_h_chain(1.0 / 32, 1.0 / 256));
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].h == doctest::Approx(1.0 / 32));
    CHECK(report.rows[3].h == doctest::Approx(1.0 / 256));
    // eps on every row; dn on all but the last; pn on all but the last two.
    for (const auto& row : report.rows) CHECK(row.eps.has_value());
    CHECK(report.rows[2].dn.has_value());
    CHECK_FALSE(report.rows[3].dn.has_value());
    CHECK(report.rows[1].pn.has_value());
    CHECK_FALSE(report.rows[2].pn.has_value());
    // D_N triangle bound: D_N <= eps_N + eps_2N.
    for (std::size_t i = 0; i + 1 < report.rows.size(); ++i)
      CHECK(*report.rows[i].dn <=
            *report.rows[i].eps + *report.rows[i + 1].eps + 1e-13);
    // internal consistency of the order column
    CHECK(*report.rows[0].pn ==
          doctest::Approx(std::log2(*report.rows[0].dn / *report.rows[1].dn)));
  }

  SUBCASE("trivial single-piece problem has vanishing error") {
    BenchProblem trivial;
    trivial.name = "unit";
    LinearProblem p;
    p.kernels = {[](double, double) { return 1.0; }};
    p.f = [](double t) { return t; };
    p.horizon = 2.0;
    trivial.linear = p;
    trivial.exact = [](double) { return 1.0; };
    const auto report =
        run_benchmark(trivial, MethodId::pc, default_h_chain(1.0 / 4, 1.0 / 16));
    for (const auto& row : report.rows) CHECK(*row.eps <= 1e-10);
  }

  SUBCASE("reports are reproducible") {
    const auto a = run_benchmark(ex[0].bench(RhsVariant::manufactured), MethodId::pl,
                                 default_h_chain(1.0 / 32, 1.0 / 64));
    const auto b = run_benchmark(ex[0].bench(RhsVariant::manufactured), MethodId::pl,
                                 default_h_chain(1.0 / 32, 1.0 / 64));
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(*a.rows[i].eps == *b.rows[i].eps);
      if (a.rows[i].dn) CHECK(*a.rows[i].dn == *b.rows[i].dn);
    }
  }

  SUBCASE("method/problem mismatch throws") {
    CHECK_THROWS_AS(run_benchmark(ex[3].bench(RhsVariant::manufactured), MethodId::pc,
                                  default_h_chain(1.0 / 32, 1.0 / 64)),
                    StructuralError);
    CHECK_THROWS_AS(run_benchmark(ex[0].bench(RhsVariant::manufactured), MethodId::nld,
                                  default_h_chain(1.0 / 32, 1.0 / 64)),
                    StructuralError);
  }

  SUBCASE("non-halving chain throws") {
    CHECK_THROWS_AS(run_benchmark(ex[0].bench(RhsVariant::manufactured), MethodId::pc,
                                  {1.0 / 32, 1.0 / 48}),
                    StructuralError);
  }
}

TEST_CASE("default step chain") {
  const auto chain = default_h_chain();
  REQUIRE(chain.size() == 8);
  CHECK(chain.front() == doctest::Approx(1.0 / 32));
  CHECK(chain.back() == doctest::Approx(1.0 / 4096));
}
