#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vie {

struct ParseError : std::runtime_error {
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error(what), line(line), column(column) {}
  int line;
  int column;
};

/// A parsed arithmetic expression over the variables t, s, x with
/// + - * / ^, sin, cos, exp, sqrt, log and the constants pi and e.
class Expr {
 public:
  Expr() = default;

  /// Throws ParseError with 1-based column (and the given line number, used
  /// when the expression comes from a file).
  static Expr parse(std::string_view source, int line = 1);

  double eval(double t, double s, double x) const;
  double operator()(double t, double s, double x) const { return eval(t, s, x); }

  bool uses(char variable) const;
  bool empty() const { return code_.empty(); }
  const std::string& source() const { return source_; }

 private:
  // Postfix program: op codes with an inline constant pool.
  enum class Op : unsigned char {
    push_const, push_t, push_s, push_x,
    add, sub, mul, div, pow, neg,
    sin, cos, exp, sqrt, log,
  };
  std::vector<Op> code_;
  std::vector<double> consts_;
  std::string source_;

  friend class ExprParser;
};

}  // namespace vie
