#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vie/convergence.hpp"
#include "vie/expression.hpp"
#include "vie/problem.hpp"

namespace vie {

/// A problem definition parsed from the plain-text format (see README:
/// top-level `n`, `T`, optional `seed`, sections [curves], [kernels],
/// optional [G], and [rhs]).
struct ProblemDefinition {
  int n = 0;
  double horizon = 0.0;
  std::optional<double> seed;          // a-priori x(0) guess for nonlinear solvers
  std::vector<Expr> alphas;            // n-1 interior curves
  std::vector<Expr> alpha_primes;      // parallel; entries may be empty (finite differences)
  std::vector<Expr> kernels;           // n pieces
  std::vector<Expr> g;                 // empty or n entries
  std::vector<Expr> g_x;               // parallel to g; entries may be empty
  bool manufactured = false;           // f = manufactured requires `exact`
  Expr f;                              // empty when manufactured
  Expr f_prime;                        // optional
  Expr exact;                          // optional unless manufactured
  double manufacture_tol = 1e-12;

  bool is_nonlinear() const { return !g.empty(); }

  LinearProblem to_linear() const;
  NonlinearProblem to_nonlinear() const;
  /// Bench wrapper with exact/guide wired up when available.
  BenchProblem to_bench(const std::string& name) const;
};

ProblemDefinition parse_problem_file(std::istream& input, const std::string& filename);
ProblemDefinition parse_problem_text(const std::string& text, const std::string& filename);

}  // namespace vie
