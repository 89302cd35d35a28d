#include "vie/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "vie/builtin.hpp"
#include "vie/problem_file.hpp"
#include "vie/table_io.hpp"

namespace vie {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitValidation = 3;
constexpr int kExitParse = 4;

double parse_step(const std::string& text) {
  const std::string::size_type slash = text.find('/');
  if (slash != std::string::npos) {
    const double num = std::stod(text.substr(0, slash));
    const double den = std::stod(text.substr(slash + 1));
    if (den == 0.0) throw CLI::ValidationError("--h", "zero denominator");
    return num / den;
  }
  return std::stod(text);
}

MethodId parse_method(const std::string& name) {
  if (name == "pc") return MethodId::pc;
  if (name == "pl") return MethodId::pl;
  if (name == "iter") return MethodId::iter;
  if (name == "nk") return MethodId::nk;
  if (name == "nld") return MethodId::nld;
  throw CLI::ValidationError("--method", "expected one of pc|pl|iter|nk|nld");
}

struct LoadedProblem {
  BenchProblem bench;
  ValidationReport validation;
};

LoadedProblem load_problem(const std::string& selector, RhsVariant variant,
                           bool rhs_flag_given, std::ostream& err) {
  LoadedProblem loaded;
  const auto examples = builtin_examples();
  if (const BuiltinExample* ex = find_builtin(examples, selector)) {
    loaded.bench = ex->bench(variant);
  } else {
    if (rhs_flag_given)
      throw CLI::ValidationError("--rhs", "variants apply to built-in problems only");
    std::ifstream file(selector);
    if (!file) throw CLI::ValidationError("--problem", "not a built-in name or readable file");
    const ProblemDefinition def = parse_problem_file(file, selector);
    loaded.bench = def.to_bench(selector);
  }
  loaded.validation = loaded.bench.nonlinear ? validate_nonlinear(*loaded.bench.nonlinear)
                                             : validate_linear(*loaded.bench.linear);
  for (const auto& check : loaded.validation.checks)
    if (!check.passed)
      err << "warning: validation check failed: " << check.name << " (measured "
          << format_double(check.measured) << ")\n";
  return loaded;
}

/// Structural failures make the forward recursion meaningless; consistency
/// failures (a nonzero f(0), say) only warn.
bool structurally_broken(const ValidationReport& report) {
  for (const char* name : {"alpha_i(0)=0", "curve ordering", "derivative ordering at 0"}) {
    const auto* check = report.find(name);
    if (check != nullptr && !check->passed) return true;
  }
  return false;
}

void check_method_compatibility(MethodId method, const BenchProblem& problem) {
  const bool needs_linear =
      method == MethodId::pc || method == MethodId::pl || method == MethodId::iter;
  if (needs_linear && !problem.linear)
    throw CLI::ValidationError("--method",
                               method_name(method) + " requires a linear problem");
  if (!needs_linear && !problem.nonlinear)
    throw CLI::ValidationError("--method",
                               method_name(method) + " requires a nonlinear problem");
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
  file << text;
}

BenchOptions make_options(const std::string& gamma_csv, int max_iter, double tol) {
  BenchOptions options;
  if (!gamma_csv.empty()) {
    options.iterative.gamma_grid.clear();
    std::istringstream stream(gamma_csv);
    std::string item;
    while (std::getline(stream, item, ','))
      options.iterative.gamma_grid.push_back(std::stod(item));
    if (options.iterative.gamma_grid.empty())
      throw CLI::ValidationError("--gamma-grid", "empty grid");
  }
  if (max_iter > 0) {
    options.iterative.max_iter = max_iter;
    options.nk.max_outer = max_iter;
  }
  if (tol > 0.0) {
    options.iterative.stagnation_tol = tol;
    options.nk.tol = tol;
  }
  return options;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solvers and benchmarks for first-kind Volterra equations with piecewise kernels"};
  app.name("vie");
  app.set_help_flag("--help", "Print usage");
  app.require_subcommand(1);

  std::string problem_name, method_str = "pc", rhs_str = "manufactured";
  std::string format_str = "csv", out_path, gamma_csv;
  std::string h_max_str = "1/32", h_min_str = "1/4096", h_str = "1/128";
  int max_iter = 0, samples = 100;
  double tol = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--problem", problem_name, "Built-in name (example1..example4) or file path")
        ->required();
    cmd->add_option("--method", method_str, "pc|pl|iter|nk|nld");
    cmd->add_option("--gamma-grid", gamma_csv, "Comma-separated regularization grid (iter)");
    cmd->add_option("--max-iter", max_iter, "Sweep / outer iteration cap (iter, nk)");
    cmd->add_option("--tol", tol, "Stagnation / outer tolerance (iter, nk)");
  };

  CLI::App* bench = app.add_subcommand("bench", "Convergence table over a halving step chain");
  add_common(bench);
  CLI::Option* rhs_opt_bench =
      bench->add_option("--rhs", rhs_str, "manufactured|printed right-hand side (built-ins)");
  bench->add_option("--h-max", h_max_str, "Coarsest table step (default 1/32)");
  bench->add_option("--h-min", h_min_str, "Finest table step (default 1/4096)");
  bench->add_option("--format", format_str, "csv|md");
  bench->add_option("--out", out_path, "Output path (default stdout)");

  CLI::App* solve = app.add_subcommand("solve", "Solve once and emit (t, x) samples as CSV");
  add_common(solve);
  CLI::Option* rhs_opt_solve =
      solve->add_option("--rhs", rhs_str, "manufactured|printed right-hand side (built-ins)");
  solve->add_option("--h", h_str, "Table step (default 1/128)");
  solve->add_option("--samples", samples, "Sample count (default 100)");
  solve->add_option("--out", out_path, "Output path (default stdout)");

  CLI::App* validate = app.add_subcommand("validate", "Check a problem file and print the report");
  std::string validate_path;
  validate->add_option("path", validate_path, "Problem definition file")->required();

  try {
    std::vector<const char*> argv;
    argv.push_back("vie");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (validate->parsed()) {
      std::ifstream file(validate_path);
      if (!file) {
        err << "error: cannot read " << validate_path << "\n";
        return kExitUsage;
      }
      const ProblemDefinition def = parse_problem_file(file, validate_path);
      const ValidationReport report = def.is_nonlinear()
                                          ? validate_nonlinear(def.to_nonlinear())
                                          : validate_linear(def.to_linear());
      for (const auto& check : report.checks)
        out << (check.passed ? "pass" : "FAIL") << "  " << check.name << "  measured "
            << format_double(check.measured) << "  tolerance "
            << format_double(check.tolerance) << "\n";
      out << (report.overall ? "overall: pass" : "overall: FAIL") << "\n";
      return report.overall ? kExitOk : kExitValidation;
    }

    const MethodId method = parse_method(method_str);
    RhsVariant variant;
    if (rhs_str == "manufactured")
      variant = RhsVariant::manufactured;
    else if (rhs_str == "printed")
      variant = RhsVariant::printed;
    else
      throw CLI::ValidationError("--rhs", "expected manufactured|printed");

    const bool rhs_given = rhs_opt_bench->count() > 0 || rhs_opt_solve->count() > 0;
    const LoadedProblem loaded = load_problem(problem_name, variant, rhs_given, err);
    if (structurally_broken(loaded.validation)) {
      err << "error: structural validation failed\n";
      return kExitValidation;
    }
    check_method_compatibility(method, loaded.bench);
    const BenchOptions options = make_options(gamma_csv, max_iter, tol);

    if (bench->parsed()) {
      const double h_max = parse_step(h_max_str);
      const double h_min = parse_step(h_min_str);
      if (!(h_max > 0.0) || !(h_min > 0.0) || h_min > h_max)
        throw CLI::ValidationError("--h-max", "need 0 < h-min <= h-max");
      const auto report =
          run_benchmark(loaded.bench, method, default_h_chain(h_max, h_min), options);
      if (format_str == "csv")
        write_output(to_csv(report), out_path, out);
      else if (format_str == "md")
        write_output(to_markdown(report), out_path, out);
      else
        throw CLI::ValidationError("--format", "expected csv|md");
      return kExitOk;
    }

    // solve
    const double h = parse_step(h_str);
    if (!(h > 0.0)) throw CLI::ValidationError("--h", "step must be positive");
    if (samples < 1) throw CLI::ValidationError("--samples", "need at least one sample");
    const double T = loaded.bench.linear ? loaded.bench.linear->horizon
                                         : loaded.bench.nonlinear->horizon;
    const int segments = static_cast<int>(std::lround(1.0 / h));
    const Mesh mesh = build_uniform_mesh(segments, T);
    StepSolution solution;
    switch (method) {
      case MethodId::pc:
        solution = solve_piecewise_constant(*loaded.bench.linear, mesh);
        break;
      case MethodId::pl:
        solution = solve_piecewise_linear(*loaded.bench.linear, mesh);
        break;
      case MethodId::iter:
        solution = solve_iterative(*loaded.bench.linear, mesh, options.iterative).solution;
        break;
      case MethodId::nk: {
        NKConfig config = options.nk;
        if (!config.initial && loaded.bench.guide) config.initial = loaded.bench.guide;
        solution = newton_kantorovich_solve(*loaded.bench.nonlinear, mesh, config).solution;
        break;
      }
      case MethodId::nld:
        solution = solve_nonlinear_direct(*loaded.bench.nonlinear, mesh, options.bracket,
                                          loaded.bench.guide);
        break;
    }
    std::vector<std::pair<double, double>> rows;
    rows.reserve(static_cast<std::size_t>(samples) + 1);
    for (int i = 0; i <= samples; ++i) {
      const double t = T * i / samples;
      rows.emplace_back(t, solution.evaluate(t));
    }
    write_output(samples_csv(rows), out_path, out);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace vie
