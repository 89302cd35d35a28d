#include "vie/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vie {

int Mesh::segment_of(double s) const {
  if (s <= nodes.front()) return 1;
  auto it = std::lower_bound(nodes.begin(), nodes.end(), s);
  auto idx = static_cast<int>(it - nodes.begin());
  return std::min(std::max(idx, 1), segments());
}

Mesh build_uniform_mesh(int segment_count, double horizon) {
  if (segment_count < 1) throw StructuralError("build_uniform_mesh: segment count must be >= 1");
  if (!(horizon > 0.0)) throw StructuralError("build_uniform_mesh: horizon must be positive");
  Mesh mesh;
  mesh.nodes.resize(static_cast<std::size_t>(segment_count) + 1);
  for (int i = 0; i <= segment_count; ++i)
    mesh.nodes[static_cast<std::size_t>(i)] = static_cast<double>(i) * horizon / segment_count;
  mesh.nodes.back() = horizon;
  mesh.h = 0.0;
  for (int i = 1; i <= segment_count; ++i)
    mesh.h = std::max(mesh.h, mesh.nodes[static_cast<std::size_t>(i)] -
                                  mesh.nodes[static_cast<std::size_t>(i) - 1]);
  return mesh;
}

VIndexTable build_v_table(const Mesh& mesh, const CurveSet& curves) {
  const int N = mesh.segments();
  VIndexTable table(curves.interior_count(), N);
  for (int i = 1; i <= curves.interior_count(); ++i) {
    for (int j = 1; j <= N; ++j) {
      const double tj = mesh.node(j);
      const double a = curves.alpha(i, tj);
      if (a < -1e-14 * std::max(1.0, tj) || a > tj * (1.0 + 1e-14) + 1e-300) {
        std::ostringstream msg;
        msg << "build_v_table: alpha_" << i << "(t_" << j << ") = " << a
            << " lies outside [0, " << tj << "]";
        throw StructuralError(msg.str());
      }
      int v;
      if (a <= 0.0) {
        v = 1;
      } else {
        auto it = std::lower_bound(mesh.nodes.begin(), mesh.nodes.end(), a);
        v = static_cast<int>(it - mesh.nodes.begin());
        v = std::min(std::max(v, 1), j);
      }
      table.at(i, j) = v;
    }
  }
  return table;
}

int piece_index(double t_eval, double s, const CurveSet& curves) {
  int piece = 1;
  for (int i = 1; i <= curves.interior_count(); ++i)
    if (curves.alpha(i, t_eval) < s) ++piece;
  return piece;
}

std::vector<SubSegment> split_at_curves(double t_eval, double a, double b,
                                        const CurveSet& curves) {
  std::vector<SubSegment> out;
  for_each_subsegment(t_eval, a, b, curves,
                      [&](double lo, double hi, int piece) { out.push_back({lo, hi, piece}); });
  return out;
}

double integrate_weighted_kernel(double t_eval, double a, double b, const CurveSet& curves,
                                 const std::vector<Kernel2>& kernels, const RealFn& weight,
                                 double max_panel) {
  if (weight)
    return integrate_kernel_w(t_eval, a, b, curves, kernels,
                              [&](double s) { return weight(s); }, max_panel);
  return integrate_kernel_w(t_eval, a, b, curves, kernels, [](double) { return 1.0; },
                            max_panel);
}

namespace {

// Gauss-Kronrod 7-15 abscissae/weights on [-1, 1]; the embedded Gauss rule
// uses the even-indexed Kronrod nodes.
constexpr double kKronrodX[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kKronrodW[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kGaussW[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                               0.417959183673469, 0.381830050505119, 0.279705391489277,
                               0.129484966168870};

struct GK15 {
  double value;
  double error;
};

template <class F>
GK15 gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(c + r * kKronrodX[i]);
    kron += kKronrodW[i] * v;
    if (i % 2 == 1) gauss += kGaussW[i / 2] * v;
  }
  return {r * kron, std::abs(r * (kron - gauss))};
}

template <class F>
double adaptive_gk(F&& f, double a, double b, double tol, long& budget, double t_for_error) {
  if (--budget < 0) {
    std::ostringstream msg;
    msg << "adaptive quadrature: panel budget exhausted at t = " << t_for_error;
    throw QuadratureBudgetExceeded(t_for_error, msg.str());
  }
  const GK15 est = gk15(f, a, b);
  if (est.error <= tol || (b - a) < 1e-15 * std::max(1.0, std::abs(b))) return est.value;
  const double c = 0.5 * (a + b);
  return adaptive_gk(f, a, c, 0.5 * tol, budget, t_for_error) +
         adaptive_gk(f, c, b, 0.5 * tol, budget, t_for_error);
}

}  // namespace

double adaptive_piecewise_integral(double t_eval, double a, double b, const CurveSet& curves,
                                   const std::function<double(int, double)>& integrand,
                                   double tol, long panel_budget) {
  if (!(b > a)) return 0.0;
  double total = 0.0;
  long budget = panel_budget;
  const double span = b - a;
  for_each_subsegment(t_eval, a, b, curves, [&](double lo, double hi, int piece) {
    const double local_tol = tol * (hi - lo) / span;
    total += adaptive_gk([&](double s) { return integrand(piece, s); }, lo, hi, local_tol,
                         budget, t_eval);
  });
  return total;
}

double adaptive_reference_integral(double t_eval, double a, double b, const CurveSet& curves,
                                   const std::vector<Kernel2>& kernels, const RealFn& weight,
                                   double tol, long panel_budget) {
  return adaptive_piecewise_integral(
      t_eval, a, b, curves,
      [&](int piece, double s) {
        const double k = kernels[static_cast<std::size_t>(piece) - 1](t_eval, s);
        return weight ? k * weight(s) : k;
      },
      tol, panel_budget);
}

}  // namespace vie
