#include "vie/builtin.hpp"

#include <cmath>
#include <numbers>

namespace vie {

const LinearProblem& BuiltinExample::linear(RhsVariant v) const {
  const auto& p = v == RhsVariant::manufactured ? linear_manufactured : linear_printed;
  if (!p) throw StructuralError(name + " has no linear problem in that variant");
  return *p;
}

const NonlinearProblem& BuiltinExample::nonlinear(RhsVariant v) const {
  const auto& p = v == RhsVariant::manufactured ? nonlinear_manufactured : nonlinear_printed;
  if (!p) throw StructuralError(name + " has no nonlinear problem in that variant");
  return *p;
}

BenchProblem BuiltinExample::bench(RhsVariant v) const {
  BenchProblem b;
  b.name = name;
  b.exact = exact;
  b.guide = guide;
  if (is_nonlinear)
    b.nonlinear = nonlinear(v);
  else
    b.linear = linear(v);
  return b;
}

namespace {

constexpr double kPi = std::numbers::pi;

BuiltinExample make_example1(double tol) {
  BuiltinExample ex;
  ex.name = "example1";
  ex.exact = [](double t) { return std::sqrt(2.0 * t + 1.0) - 1.0; };

  CurveSet curves({{[](double t) { return t / 3.0; }, [](double) { return 1.0 / 3.0; }}});
  std::vector<Kernel2> kernels{[](double t, double s) { return 1.0 + t + s; },
                               [](double, double) { return -1.0; }};

  LinearProblem base;
  base.curves = curves;
  base.kernels = kernels;
  base.horizon = 2.0;

  ex.linear_manufactured = base;
  ex.linear_manufactured->f = manufacture_rhs(curves, kernels, ex.exact, {}, 2.0, tol);

  ex.linear_printed = base;
  ex.linear_printed->f = [](double t) {
    return std::pow(2.0 * t + 1.0, 1.5) / 3.0 +
           std::sqrt(3.0) * std::pow(2.0 * t + 3.0, 2.5) / 45.0 - 7.0 * t * t / 18.0 -
           4.0 / 15.0;
  };
  return ex;
}

BuiltinExample make_example2(double tol) {
  BuiltinExample ex;
  ex.name = "example2";
  ex.exact = [](double t) { return t * t; };

  CurveSet curves({{[](double t) { return t / 8.0; }, [](double) { return 1.0 / 8.0; }},
                   {[](double t) { return 3.0 * t / 8.0; }, [](double) { return 3.0 / 8.0; }}});
  std::vector<Kernel2> kernels{[](double t, double s) { return 1.0 - t * s; },
                               [](double t, double s) { return t + s; },
                               [](double, double) { return -1.0; }};

  LinearProblem base;
  base.curves = curves;
  base.kernels = kernels;
  base.horizon = 2.0;

  ex.linear_manufactured = base;
  ex.linear_manufactured->f = manufacture_rhs(curves, kernels, ex.exact, {}, 2.0, tol);

  ex.linear_printed = base;
  ex.linear_printed->f = [](double t) {
    const double t3 = t * t * t;
    return -t3 * t * t / 16384.0 + 67.0 * t3 * t / 3072.0 - 121.0 * t3 / 384.0;
  };
  ex.linear_printed->f_prime = [](double t) {
    const double t2 = t * t;
    return -5.0 * t2 * t2 / 16384.0 + 268.0 * t2 * t / 3072.0 - 363.0 * t2 / 384.0;
  };
  return ex;
}

BuiltinExample make_example3(double tol) {
  BuiltinExample ex;
  ex.name = "example3";
  ex.exact = [](double t) { return (std::exp(2.0 * t) - 1.0) / 8.0; };

  CurveSet curves({{[](double t) { return t / 8.0; }, [](double) { return 1.0 / 8.0; }},
                   {[](double t) { return t / 2.0; }, [](double) { return 0.5; }},
                   {[](double t) { return 3.0 * t / 4.0; }, [](double) { return 0.75; }}});
  std::vector<Kernel2> kernels{[](double t, double s) { return 1.0 + t + s; },
                               [](double t, double s) { return 2.0 + t * s; },
                               [](double t, double s) { return t + s - 1.0; },
                               [](double, double) { return -4.0; }};

  LinearProblem base;
  base.curves = curves;
  base.kernels = kernels;
  base.horizon = 2.0;

  ex.linear_manufactured = base;
  ex.linear_manufactured->f = manufacture_rhs(curves, kernels, ex.exact, {}, 2.0, tol);

  ex.linear_printed = base;
  ex.linear_printed->f = [](double t) {
    const double t2 = t * t;
    return (1.0 / 128.0) *
           (-4.0 - (16.0 * t + 69.0 * t2 + 15.0 * t2 * t) / 8.0 -
            std::exp(t / 4.0) * (t2 - 13.0 * t + 12.0) +
            std::exp(t) * (4.0 * t2 - 16.0 * t + 28.0) +
            std::exp(1.5 * t) * (14.0 * t + 20.0) - 32.0 * std::exp(2.0 * t));
  };
  return ex;
}

BuiltinExample make_example4(double tol) {
  BuiltinExample ex;
  ex.name = "example4";
  ex.is_nonlinear = true;
  ex.exact = [](double t) { return t + kPi; };
  // The solution is stated as known; the equation itself does not fix the
  // branch (the scalar seed equation is -(3/4) sin^2(x) = 0).
  ex.guide = ex.exact;

  CurveSet curves({{[](double t) { return t / 8.0; }, [](double) { return 1.0 / 8.0; }},
                   {[](double t) { return t / 4.0; }, [](double) { return 0.25; }}});
  std::vector<Kernel2> kernels{[](double t, double s) { return t - s; },
                               [](double t, double) { return t; },
                               [](double, double) { return -1.0; }};
  std::vector<PointwiseMap> G{[](double, double x) { return std::sin(x); },
                              [](double, double x) { return 2.0 * std::cos(x); },
                              [](double, double x) { return std::sin(x) * std::sin(x) + 1.0; }};
  std::vector<PointwiseMap> Gx{[](double, double x) { return std::cos(x); },
                               [](double, double x) { return -2.0 * std::sin(x); },
                               [](double, double x) { return std::sin(2.0 * x); }};

  NonlinearProblem base;
  base.curves = curves;
  base.kernels = kernels;
  base.G = G;
  base.G_x = Gx;
  base.horizon = 2.0;

  ex.nonlinear_manufactured = base;
  ex.nonlinear_manufactured->f = manufacture_rhs(curves, kernels, ex.exact, G, 2.0, tol);

  ex.nonlinear_printed = base;
  ex.nonlinear_printed->f = [](double t) {
    return -17.0 * t / 8.0 + (7.0 * t / 8.0) * std::cos(t / 8.0) +
           (1.0 + 2.0 * t) * std::sin(t / 8.0) - 2.0 * t * std::sin(t / 4.0) -
           std::sin(t / 2.0) / 4.0 + std::sin(2.0 * t) / 4.0;
  };
  return ex;
}

}  // namespace

std::vector<BuiltinExample> builtin_examples(double manufacture_tol) {
  std::vector<BuiltinExample> out;
  out.push_back(make_example1(manufacture_tol));
  out.push_back(make_example2(manufacture_tol));
  out.push_back(make_example3(manufacture_tol));
  out.push_back(make_example4(manufacture_tol));
  return out;
}

const BuiltinExample* find_builtin(const std::vector<BuiltinExample>& examples,
                                   const std::string& name) {
  for (const auto& ex : examples)
    if (ex.name == name) return &ex;
  return nullptr;
}

}  // namespace vie
