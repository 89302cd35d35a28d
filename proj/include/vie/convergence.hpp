#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vie/linear.hpp"
#include "vie/nonlinear.hpp"

namespace vie {

struct ConvergenceRow {
  double h = 0.0;                // table step label, 1 / segment count
  std::optional<double> eps;     // max pointwise error vs exact, when known
  std::optional<double> dn;      // two-mesh difference against the next row
  std::optional<double> pn;      // log2(dn / next dn)
};

struct ConvergenceReport {
  std::string problem;
  std::string method;
  std::vector<ConvergenceRow> rows;  // ordered by decreasing h
};

/// max over mesh nodes t_i, i = 0..N, of |exact(t_i) - solution(t_i)|.
double max_pointwise_error(const StepSolution& solution, const RealFn& exact);

/// max over the coarse nodes of |coarse - fine| at the shared abscissae;
/// throws MeshNotNested unless the fine mesh halves the coarse one.
double two_mesh_difference(const StepSolution& sol_n, const StepSolution& sol_2n);

/// p = log2(d_n / d_2n); throws on a vanishing denominator.
double convergence_order(double d_n, double d_2n);

enum class MethodId { pc, pl, iter, nk, nld };

std::string method_name(MethodId id);

/// A benchmarkable problem: exactly one of `linear`/`nonlinear` is set.
struct BenchProblem {
  std::string name;
  std::optional<LinearProblem> linear;
  std::optional<NonlinearProblem> nonlinear;
  RealFn exact;  // optional
  RealFn guide;  // optional a-priori branch selector for the nonlinear methods
};

struct BenchOptions {
  IterativeConfig iterative;
  NKConfig nk;
  BracketSpec bracket;
};

/// One solve per table step; rows carry eps (when exact is known), the
/// two-mesh difference between consecutive solves and the observed order.
/// A table label h corresponds to round(1/h) mesh segments on [0, T].
ConvergenceReport run_benchmark(const BenchProblem& problem, MethodId method,
                                const std::vector<double>& h_chain,
                                const BenchOptions& options = {});

/// The paper's column labels 1/32 ... 1/4096 (each halving the previous).
std::vector<double> default_h_chain(double h_max = 1.0 / 32, double h_min = 1.0 / 4096);

}  // namespace vie
