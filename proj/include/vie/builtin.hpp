#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vie/convergence.hpp"
#include "vie/problem.hpp"

namespace vie {

enum class RhsVariant { manufactured, printed };

/// One of the four benchmark equations on [0, 2] with a known solution. The
/// printed right-hand side is kept verbatim; the manufactured one is rebuilt
/// from the exact solution by adaptive quadrature and is the default for
/// benchmarks (the first equation's printed right-hand side is inconsistent
/// with its stated solution, f(0) = 2/3).
struct BuiltinExample {
  std::string name;
  double horizon = 2.0;
  bool is_nonlinear = false;
  RealFn exact;
  RealFn guide;  // a-priori branch selector for the nonlinear solvers

  std::optional<LinearProblem> linear_manufactured;
  std::optional<LinearProblem> linear_printed;
  std::optional<NonlinearProblem> nonlinear_manufactured;
  std::optional<NonlinearProblem> nonlinear_printed;

  const LinearProblem& linear(RhsVariant v) const;
  const NonlinearProblem& nonlinear(RhsVariant v) const;
  BenchProblem bench(RhsVariant v) const;
};

std::vector<BuiltinExample> builtin_examples(double manufacture_tol = 1e-12);

/// nullptr when the name is unknown. Accepted names: example1..example4.
const BuiltinExample* find_builtin(const std::vector<BuiltinExample>& examples,
                                   const std::string& name);

}  // namespace vie
