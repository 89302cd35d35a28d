#include "vie/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vie {

double max_pointwise_error(const StepSolution& solution, const RealFn& exact) {
  double worst = 0.0;
  for (int i = 0; i <= solution.segments(); ++i)
    worst = std::max(worst, std::abs(exact(solution.mesh.node(i)) - solution.node_value(i)));
  return worst;
}

double two_mesh_difference(const StepSolution& sol_n, const StepSolution& sol_2n) {
  const int N = sol_n.segments();
  if (sol_2n.segments() != 2 * N)
    throw MeshNotNested("two_mesh_difference: fine mesh must have twice the segments");
  const double tol = 1e-12 * std::max(1.0, sol_n.mesh.horizon());
  double worst = 0.0;
  for (int i = 0; i <= N; ++i) {
    if (std::abs(sol_n.mesh.node(i) - sol_2n.mesh.node(2 * i)) > tol)
      throw MeshNotNested("two_mesh_difference: meshes do not share the coarse nodes");
    worst = std::max(worst, std::abs(sol_n.node_value(i) - sol_2n.node_value(2 * i)));
  }
  return worst;
}

double convergence_order(double d_n, double d_2n) {
  if (d_2n == 0.0)
    throw StructuralError("convergence_order: vanishing next-level difference");
  return std::log2(d_n / d_2n);
}

std::string method_name(MethodId id) {
  switch (id) {
    case MethodId::pc: return "pc";
    case MethodId::pl: return "pl";
    case MethodId::iter: return "iter";
    case MethodId::nk: return "nk";
    case MethodId::nld: return "nld";
  }
  return "?";
}

std::vector<double> default_h_chain(double h_max, double h_min) {
  std::vector<double> chain;
  for (double h = h_max; h > h_min * (1.0 - 1e-9); h *= 0.5) chain.push_back(h);
  return chain;
}

namespace {

StepSolution solve_one(const BenchProblem& problem, MethodId method, const Mesh& mesh,
                       const BenchOptions& options) {
  switch (method) {
    case MethodId::pc:
      return solve_piecewise_constant(*problem.linear, mesh);
    case MethodId::pl:
      return solve_piecewise_linear(*problem.linear, mesh);
    case MethodId::iter:
      return solve_iterative(*problem.linear, mesh, options.iterative).solution;
    case MethodId::nk: {
      NKConfig config = options.nk;
      if (!config.initial && problem.guide) config.initial = problem.guide;
      return newton_kantorovich_solve(*problem.nonlinear, mesh, config).solution;
    }
    case MethodId::nld:
      return solve_nonlinear_direct(*problem.nonlinear, mesh, options.bracket, problem.guide);
  }
  throw StructuralError("run_benchmark: unknown method");
}

}  // namespace

ConvergenceReport run_benchmark(const BenchProblem& problem, MethodId method,
                                const std::vector<double>& h_chain,
                                const BenchOptions& options) {
  if (h_chain.empty()) throw StructuralError("run_benchmark: empty step chain");
  const bool needs_linear = method == MethodId::pc || method == MethodId::pl ||
                            method == MethodId::iter;
  if (needs_linear && !problem.linear)
    throw StructuralError("run_benchmark: method requires a linear problem");
  if (!needs_linear && !problem.nonlinear)
    throw StructuralError("run_benchmark: method requires a nonlinear problem");
  for (std::size_t i = 1; i < h_chain.size(); ++i)
    if (std::abs(h_chain[i] - 0.5 * h_chain[i - 1]) > 1e-9 * h_chain[i - 1])
      throw StructuralError("run_benchmark: step chain must halve at every entry");

  const double T = problem.linear ? problem.linear->horizon : problem.nonlinear->horizon;

  ConvergenceReport report;
  report.problem = problem.name;
  report.method = method_name(method);

  std::vector<StepSolution> solutions;
  solutions.reserve(h_chain.size());
  for (double h : h_chain) {
    const int segments = static_cast<int>(std::lround(1.0 / h));
    Mesh mesh = build_uniform_mesh(segments, T);
    try {
      solutions.push_back(solve_one(problem, method, mesh, options));
    } catch (const SolverError& err) {
      std::ostringstream msg;
      msg << "benchmark " << problem.name << "/" << report.method << " at h=1/" << segments
          << ": " << err.what();
      throw SolverError(msg.str());
    }
    ConvergenceRow row;
    row.h = h;
    if (problem.exact) row.eps = max_pointwise_error(solutions.back(), problem.exact);
    report.rows.push_back(row);
  }

  for (std::size_t i = 0; i + 1 < solutions.size(); ++i)
    report.rows[i].dn = two_mesh_difference(solutions[i], solutions[i + 1]);
  for (std::size_t i = 0; i + 2 < solutions.size(); ++i)
    if (*report.rows[i + 1].dn > 0.0)
      report.rows[i].pn = convergence_order(*report.rows[i].dn, *report.rows[i + 1].dn);
  return report;
}

}  // namespace vie
