#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "vie/types.hpp"

namespace vie {

/// Mesh 0 = t_0 < t_1 < ... < t_N = T. h is the largest step.
struct Mesh {
  std::vector<double> nodes;
  double h = 0.0;

  int segments() const { return static_cast<int>(nodes.size()) - 1; }
  double horizon() const { return nodes.back(); }
  double node(int i) const { return nodes[static_cast<std::size_t>(i)]; }

  /// Index j of the segment (t_{j-1}, t_j] containing s; s <= 0 maps to 1.
  int segment_of(double s) const;
};

Mesh build_uniform_mesh(int segment_count, double horizon);

/// v(i, j) = index of the mesh segment containing alpha_i(t_j), i.e.
/// alpha_i(t_j) in (t_{v-1}, t_v]; a zero curve value maps to segment 1.
class VIndexTable {
 public:
  VIndexTable(int interior_curves, int segment_count)
      : curves_(interior_curves), segments_(segment_count),
        v_(static_cast<std::size_t>(interior_curves) * static_cast<std::size_t>(segment_count), 1) {}

  int operator()(int i, int j) const {
    return v_[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(segments_) +
              static_cast<std::size_t>(j - 1)];
  }
  int& at(int i, int j) {
    return v_[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(segments_) +
              static_cast<std::size_t>(j - 1)];
  }
  int interior_curves() const { return curves_; }
  int segment_count() const { return segments_; }

 private:
  int curves_ = 0;
  int segments_ = 0;
  std::vector<int> v_;
};

VIndexTable build_v_table(const Mesh& mesh, const CurveSet& curves);

/// A maximal sub-interval of an integration range whose interior avoids every
/// discontinuity curve at the evaluation time; `piece` is the 1-based kernel
/// index valid on its interior.
struct SubSegment {
  double a;
  double b;
  int piece;
};

std::vector<SubSegment> split_at_curves(double t_eval, double a, double b,
                                        const CurveSet& curves);

/// 1-based kernel piece containing the point s at evaluation time t_eval.
int piece_index(double t_eval, double s, const CurveSet& curves);

/// Calls fn(lo, hi, piece) for each sub-segment of [a, b]; allocation-free.
/// Curve values within ~1e-14 of an endpoint are snapped, so slivers are
/// never emitted.
template <class F>
void for_each_subsegment(double t_eval, double a, double b, const CurveSet& curves, F&& fn) {
  if (!(b > a)) return;
  const double eps = 1e-14 * (t_eval > 1.0 ? t_eval : 1.0);
  const int nc = curves.interior_count();
  double lo = a;
  for (int i = 1; i <= nc; ++i) {
    const double c = curves.alpha(i, t_eval);
    if (c <= lo + eps || c >= b - eps) continue;
    fn(lo, c, piece_index(t_eval, 0.5 * (lo + c), curves));
    lo = c;
  }
  fn(lo, b, piece_index(t_eval, 0.5 * (lo + b), curves));
}

inline constexpr double kNoPanelCap = std::numeric_limits<double>::infinity();

/// Midpoint quadrature of K(t_eval, s) * weight(s) over [a, b], split at the
/// discontinuity curves. Sub-segments longer than max_panel are divided into
/// ceil(len / max_panel) equal midpoint panels.
double integrate_weighted_kernel(double t_eval, double a, double b, const CurveSet& curves,
                                 const std::vector<Kernel2>& kernels, const RealFn& weight,
                                 double max_panel = kNoPanelCap);

/// Same integrand, but templated on the weight for the solver hot paths.
template <class W>
double integrate_kernel_w(double t_eval, double a, double b, const CurveSet& curves,
                          const std::vector<Kernel2>& kernels, W&& weight,
                          double max_panel = kNoPanelCap) {
  double total = 0.0;
  for_each_subsegment(t_eval, a, b, curves, [&](double lo, double hi, int piece) {
    const Kernel2& k = kernels[static_cast<std::size_t>(piece) - 1];
    const double len = hi - lo;
    if (len <= max_panel) {
      const double m = 0.5 * (lo + hi);
      total += len * k(t_eval, m) * weight(m);
      return;
    }
    const int panels = static_cast<int>(std::ceil(len / max_panel));
    const double step = len / panels;
    for (int p = 0; p < panels; ++p) {
      const double m = lo + (p + 0.5) * step;
      total += step * k(t_eval, m) * weight(m);
    }
  });
  return total;
}

/// Reference oracle: adaptive Gauss-Kronrod 7-15 bisection of the same
/// integrand, absolute tolerance tol, at most panel_budget panels.
double adaptive_reference_integral(double t_eval, double a, double b, const CurveSet& curves,
                                   const std::vector<Kernel2>& kernels, const RealFn& weight,
                                   double tol, long panel_budget = 1000000);

/// Oracle variant with an arbitrary piecewise integrand g(piece, s); used for
/// manufactured right-hand sides and nonlinear operator evaluation.
double adaptive_piecewise_integral(double t_eval, double a, double b, const CurveSet& curves,
                                   const std::function<double(int, double)>& integrand,
                                   double tol, long panel_budget = 1000000);

}  // namespace vie
