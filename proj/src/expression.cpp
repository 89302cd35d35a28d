#include "vie/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace vie {

class ExprParser {
 public:
  ExprParser(std::string_view src, int line) : src_(src), line_(line) {}

  Expr run() {
    Expr e;
    e.source_ = std::string(src_);
    out_ = &e;
    skip_ws();
    if (eof()) fail("empty expression");
    expression();
    skip_ws();
    if (!eof()) fail("unexpected trailing input");
    // The evaluator uses a fixed stack; bound the depth here.
    int depth = 0, max_depth = 0;
    for (const Expr::Op op : e.code_) {
      switch (op) {
        case Expr::Op::push_const:
        case Expr::Op::push_t:
        case Expr::Op::push_s:
        case Expr::Op::push_x:
          max_depth = std::max(max_depth, ++depth);
          break;
        case Expr::Op::add:
        case Expr::Op::sub:
        case Expr::Op::mul:
        case Expr::Op::div:
        case Expr::Op::pow:
          --depth;
          break;
        default:
          break;
      }
    }
    if (max_depth > 60) fail("expression is too deeply nested");
    return e;
  }

 private:
  void expression() {
    term();
    for (;;) {
      skip_ws();
      if (consume('+')) {
        term();
        emit(Expr::Op::add);
      } else if (consume('-')) {
        term();
        emit(Expr::Op::sub);
      } else {
        return;
      }
    }
  }

  void term() {
    factor();
    for (;;) {
      skip_ws();
      if (consume('*')) {
        factor();
        emit(Expr::Op::mul);
      } else if (consume('/')) {
        factor();
        emit(Expr::Op::div);
      } else {
        return;
      }
    }
  }

  // Unary minus binds looser than '^', so -t^2 is -(t^2); the exponent may
  // itself carry a sign (2^-3).
  void factor() {
    skip_ws();
    if (consume('-')) {
      factor();
      emit(Expr::Op::neg);
      return;
    }
    consume('+');
    power();
  }

  void power() {
    primary();
    skip_ws();
    if (consume('^')) {
      factor();  // right associative
      emit(Expr::Op::pow);
    }
  }

  void primary() {
    skip_ws();
    if (eof()) fail("expected a value");
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      number();
      return;
    }
    if (c == '(') {
      ++pos_;
      expression();
      expect(')');
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      identifier();
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void number() {
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    out_->consts_.push_back(value);
    emit(Expr::Op::push_const);
  }

  void identifier() {
    const std::size_t start = pos_;
    while (!eof() && std::isalpha(static_cast<unsigned char>(peek()))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "t") return emit(Expr::Op::push_t);
    if (name == "s") return emit(Expr::Op::push_s);
    if (name == "x") return emit(Expr::Op::push_x);
    if (name == "pi") {
      out_->consts_.push_back(std::numbers::pi);
      return emit(Expr::Op::push_const);
    }
    if (name == "e") {
      out_->consts_.push_back(std::numbers::e);
      return emit(Expr::Op::push_const);
    }
    Expr::Op fn;
    if (name == "sin")
      fn = Expr::Op::sin;
    else if (name == "cos")
      fn = Expr::Op::cos;
    else if (name == "exp")
      fn = Expr::Op::exp;
    else if (name == "sqrt")
      fn = Expr::Op::sqrt;
    else if (name == "log")
      fn = Expr::Op::log;
    else
      fail_at(start, "unknown identifier '" + std::string(name) + "'");
    skip_ws();
    expect('(');
    expression();
    expect(')');
    emit(fn);
  }

  void emit(Expr::Op op) { out_->code_.push_back(op); }

  bool eof() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }
  bool consume(char c) {
    if (!eof() && peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }
  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
    throw ParseError(line_, static_cast<int>(at) + 1, what);
  }

  std::string_view src_;
  int line_;
  std::size_t pos_ = 0;
  Expr* out_ = nullptr;
};

Expr Expr::parse(std::string_view source, int line) { return ExprParser(source, line).run(); }

double Expr::eval(double t, double s, double x) const {
  double stack[64];
  int top = -1;
  std::size_t ci = 0;
  for (const Op op : code_) {
    switch (op) {
      case Op::push_const: stack[++top] = consts_[ci++]; break;
      case Op::push_t: stack[++top] = t; break;
      case Op::push_s: stack[++top] = s; break;
      case Op::push_x: stack[++top] = x; break;
      case Op::add: --top; stack[top] += stack[top + 1]; break;
      case Op::sub: --top; stack[top] -= stack[top + 1]; break;
      case Op::mul: --top; stack[top] *= stack[top + 1]; break;
      case Op::div: --top; stack[top] /= stack[top + 1]; break;
      case Op::pow: --top; stack[top] = std::pow(stack[top], stack[top + 1]); break;
      case Op::neg: stack[top] = -stack[top]; break;
      case Op::sin: stack[top] = std::sin(stack[top]); break;
      case Op::cos: stack[top] = std::cos(stack[top]); break;
      case Op::exp: stack[top] = std::exp(stack[top]); break;
      case Op::sqrt: stack[top] = std::sqrt(stack[top]); break;
      case Op::log: stack[top] = std::log(stack[top]); break;
    }
  }
  return top >= 0 ? stack[top] : 0.0;
}

bool Expr::uses(char variable) const {
  const Op want = variable == 't'   ? Op::push_t
                  : variable == 's' ? Op::push_s
                                    : Op::push_x;
  for (const Op op : code_)
    if (op == want) return true;
  return false;
}

}  // namespace vie
