#include "vie/problem_file.hpp"

#include <cctype>
#include <cmath>
#include <istream>
#include <sstream>

namespace vie {

namespace {

struct Line {
  int number;
  std::string key;
  std::string value;
  int value_column;
};

std::string trim(const std::string& s, int* leading = nullptr) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) {
    if (leading) *leading = static_cast<int>(s.size());
    return "";
  }
  if (leading) *leading = static_cast<int>(b);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& file, int line, int col, const std::string& what) {
  std::ostringstream msg;
  msg << file << ":" << line << ":" << col << ": " << what;
  throw ParseError(line, col, msg.str());
}

int index_suffix(const std::string& key, const std::string& prefix, const std::string& suffix) {
  // key == prefix + digits + suffix -> the digits, else -1.
  if (key.size() <= prefix.size() + suffix.size()) return -1;
  if (key.compare(0, prefix.size(), prefix) != 0) return -1;
  if (key.compare(key.size() - suffix.size(), suffix.size(), suffix) != 0) return -1;
  const std::string digits =
      key.substr(prefix.size(), key.size() - prefix.size() - suffix.size());
  if (digits.empty()) return -1;
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c))) return -1;
  return std::stoi(digits);
}

}  // namespace

ProblemDefinition parse_problem_text(const std::string& text, const std::string& filename) {
  std::istringstream stream(text);
  return parse_problem_file(stream, filename);
}

ProblemDefinition parse_problem_file(std::istream& input, const std::string& filename) {
  ProblemDefinition def;
  std::string section;
  std::string raw;
  int line_no = 0;
  bool have_n = false, have_T = false, have_f = false;

  auto parse_expr = [&](const Line& line) -> Expr {
    try {
      return Expr::parse(line.value, line.number);
    } catch (const ParseError& err) {
      fail(filename, line.number, line.value_column + err.column - 1, err.what());
      throw;  // unreachable
    }
  };
  auto expr_number = [&](const Line& line) -> double {
    const Expr e = parse_expr(line);
    if (e.uses('t') || e.uses('s') || e.uses('x'))
      fail(filename, line.number, line.value_column, "expected a constant");
    return e.eval(0.0, 0.0, 0.0);
  };
  auto require_index = [&](const Line& line, int idx, int max, const char* what) {
    if (idx < 1 || idx > max)
      fail(filename, line.number, 1,
           std::string(what) + " index out of range (have n = " + std::to_string(max + 1) +
               " pieces)");
  };

  while (std::getline(input, raw)) {
    ++line_no;
    const std::string::size_type hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    int leading = 0;
    const std::string text = trim(raw, &leading);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']') fail(filename, line_no, leading + 1, "unterminated section header");
      section = text.substr(1, text.size() - 2);
      if (section != "curves" && section != "kernels" && section != "G" && section != "rhs")
        fail(filename, line_no, leading + 2, "unknown section [" + section + "]");
      continue;
    }

    const std::string::size_type eq = text.find('=');
    if (eq == std::string::npos) fail(filename, line_no, leading + 1, "expected key = value");
    Line line;
    line.number = line_no;
    line.key = trim(text.substr(0, eq));
    line.value = trim(text.substr(eq + 1));
    line.value_column = leading + static_cast<int>(eq) + 2;
    if (line.key.empty()) fail(filename, line_no, leading + 1, "missing key");
    if (line.value.empty()) fail(filename, line_no, line.value_column, "missing value");

    if (section.empty()) {
      if (line.key == "n") {
        const double v = expr_number(line);
        if (v < 1 || v != std::floor(v))
          fail(filename, line_no, line.value_column, "n must be a positive integer");
        def.n = static_cast<int>(v);
        def.alphas.resize(static_cast<std::size_t>(def.n) - 1);
        def.alpha_primes.resize(static_cast<std::size_t>(def.n) - 1);
        def.kernels.resize(static_cast<std::size_t>(def.n));
        have_n = true;
      } else if (line.key == "T") {
        def.horizon = expr_number(line);
        if (!(def.horizon > 0.0))
          fail(filename, line_no, line.value_column, "T must be positive");
        have_T = true;
      } else if (line.key == "seed") {
        def.seed = expr_number(line);
      } else if (line.key == "tol") {
        def.manufacture_tol = expr_number(line);
        if (!(def.manufacture_tol > 0.0))
          fail(filename, line_no, line.value_column, "tol must be positive");
      } else {
        fail(filename, line_no, leading + 1, "unknown top-level key '" + line.key + "'");
      }
      continue;
    }
    if (!have_n) fail(filename, line_no, leading + 1, "n must be set before any section");

    if (section == "curves") {
      int idx = index_suffix(line.key, "alpha", "'");
      if (idx >= 0) {
        require_index(line, idx, def.n - 1, "curve derivative");
        def.alpha_primes[static_cast<std::size_t>(idx) - 1] = parse_expr(line);
        continue;
      }
      idx = index_suffix(line.key, "alpha", "");
      if (idx >= 0) {
        require_index(line, idx, def.n - 1, "curve");
        def.alphas[static_cast<std::size_t>(idx) - 1] = parse_expr(line);
        continue;
      }
      fail(filename, line_no, leading + 1, "expected alphaI or alphaI' in [curves]");
    } else if (section == "kernels") {
      const int idx = index_suffix(line.key, "K", "");
      if (idx < 0) fail(filename, line_no, leading + 1, "expected KI in [kernels]");
      require_index(line, idx, def.n, "kernel");
      def.kernels[static_cast<std::size_t>(idx) - 1] = parse_expr(line);
    } else if (section == "G") {
      if (def.g.empty()) {
        def.g.resize(static_cast<std::size_t>(def.n));
        def.g_x.resize(static_cast<std::size_t>(def.n));
      }
      int idx = index_suffix(line.key, "G", "x");
      if (idx >= 0) {
        require_index(line, idx, def.n, "nonlinearity derivative");
        def.g_x[static_cast<std::size_t>(idx) - 1] = parse_expr(line);
        continue;
      }
      idx = index_suffix(line.key, "G", "");
      if (idx >= 0) {
        require_index(line, idx, def.n, "nonlinearity");
        def.g[static_cast<std::size_t>(idx) - 1] = parse_expr(line);
        continue;
      }
      fail(filename, line_no, leading + 1, "expected GI or GIx in [G]");
    } else if (section == "rhs") {
      if (line.key == "f") {
        if (line.value == "manufactured")
          def.manufactured = true;
        else
          def.f = parse_expr(line);
        have_f = true;
      } else if (line.key == "f'") {
        def.f_prime = parse_expr(line);
      } else if (line.key == "exact") {
        def.exact = parse_expr(line);
      } else {
        fail(filename, line_no, leading + 1, "expected f, f' or exact in [rhs]");
      }
    }
  }

  if (!have_n) fail(filename, line_no, 1, "missing n");
  if (!have_T) fail(filename, line_no, 1, "missing T");
  if (!have_f) fail(filename, line_no, 1, "missing f in [rhs]");
  if (def.manufactured && def.exact.empty())
    fail(filename, line_no, 1, "f = manufactured requires exact");
  for (int i = 1; i < def.n; ++i)
    if (def.alphas[static_cast<std::size_t>(i) - 1].empty())
      fail(filename, line_no, 1, "missing alpha" + std::to_string(i));
  for (int i = 1; i <= def.n; ++i)
    if (def.kernels[static_cast<std::size_t>(i) - 1].empty())
      fail(filename, line_no, 1, "missing K" + std::to_string(i));
  for (int i = 1; i <= def.n && def.is_nonlinear(); ++i)
    if (def.g[static_cast<std::size_t>(i) - 1].empty())
      fail(filename, line_no, 1, "missing G" + std::to_string(i));
  return def;
}

namespace {

CurveSet build_curves(const ProblemDefinition& def) {
  std::vector<Curve> interior;
  for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(def.n); ++i) {
    const Expr value = def.alphas[i];
    RealFn value_fn = [value](double t) { return value.eval(t, 0.0, 0.0); };
    RealFn deriv_fn;
    if (!def.alpha_primes[i].empty()) {
      const Expr d = def.alpha_primes[i];
      deriv_fn = [d](double t) { return d.eval(t, 0.0, 0.0); };
    } else {
      const double T = def.horizon;
      deriv_fn = [value_fn, T](double t) { return numeric_derivative(value_fn, t, T); };
    }
    interior.push_back({std::move(value_fn), std::move(deriv_fn)});
  }
  return CurveSet(std::move(interior));
}

std::vector<Kernel2> build_kernels(const ProblemDefinition& def) {
  std::vector<Kernel2> kernels;
  for (const Expr& k : def.kernels)
    kernels.push_back([k](double t, double s) { return k.eval(t, s, 0.0); });
  return kernels;
}

RealFn build_rhs(const ProblemDefinition& def, const CurveSet& curves,
                 const std::vector<Kernel2>& kernels) {
  if (def.manufactured) {
    const Expr exact = def.exact;
    const RealFn exact_fn = [exact](double s) { return exact.eval(s, s, 0.0); };
    std::vector<PointwiseMap> g;
    for (const Expr& e : def.g)
      g.push_back([e](double s, double x) { return e.eval(s, s, x); });
    return manufacture_rhs(curves, kernels, exact_fn, g, def.horizon, def.manufacture_tol);
  }
  const Expr f = def.f;
  return [f](double t) { return f.eval(t, 0.0, 0.0); };
}

}  // namespace

LinearProblem ProblemDefinition::to_linear() const {
  if (is_nonlinear()) throw StructuralError("problem defines [G]; use to_nonlinear");
  LinearProblem p;
  p.curves = build_curves(*this);
  p.kernels = build_kernels(*this);
  p.f = build_rhs(*this, p.curves, p.kernels);
  if (!f_prime.empty()) {
    const Expr fp = f_prime;
    p.f_prime = [fp](double t) { return fp.eval(t, 0.0, 0.0); };
  }
  p.horizon = horizon;
  return p;
}

NonlinearProblem ProblemDefinition::to_nonlinear() const {
  if (!is_nonlinear()) throw StructuralError("problem has no [G] section; use to_linear");
  NonlinearProblem p;
  p.curves = build_curves(*this);
  p.kernels = build_kernels(*this);
  for (const Expr& e : g)
    p.G.push_back([e](double s, double x) { return e.eval(s, s, x); });
  for (const Expr& e : g_x) {
    if (e.empty())
      p.G_x.push_back({});
    else
      p.G_x.push_back([e](double s, double x) { return e.eval(s, s, x); });
  }
  p.f = build_rhs(*this, p.curves, p.kernels);
  if (!f_prime.empty()) {
    const Expr fp = f_prime;
    p.f_prime = [fp](double t) { return fp.eval(t, 0.0, 0.0); };
  }
  p.horizon = horizon;
  return p;
}

BenchProblem ProblemDefinition::to_bench(const std::string& name) const {
  BenchProblem b;
  b.name = name;
  if (is_nonlinear())
    b.nonlinear = to_nonlinear();
  else
    b.linear = to_linear();
  if (!exact.empty()) {
    const Expr e = exact;
    b.exact = [e](double t) { return e.eval(t, t, 0.0); };
  }
  if (b.exact && is_nonlinear()) {
    b.guide = b.exact;
  } else if (seed) {
    const double s0 = *seed;
    b.guide = [s0](double) { return s0; };
  }
  return b;
}

}  // namespace vie
