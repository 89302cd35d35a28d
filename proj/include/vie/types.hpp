#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vie {

/// Scalar function of time, f(t).
using RealFn = std::function<double(double)>;
/// Kernel piece K(t, s), defined for 0 <= s <= t.
using Kernel2 = std::function<double(double, double)>;
/// Pointwise nonlinearity G(s, x).
using PointwiseMap = std::function<double(double, double)>;

/// One interior discontinuity curve together with its derivative.
struct Curve {
  RealFn value;
  RealFn derivative;
};

/// The interior discontinuity curves alpha_1 < ... < alpha_{n-1} of a
/// piecewise kernel. alpha_0(t) == 0 and alpha_n(t) == t are implicit, so a
/// default-constructed set describes a single-piece kernel.
class CurveSet {
 public:
  CurveSet() = default;
  explicit CurveSet(std::vector<Curve> interior) : interior_(std::move(interior)) {}

  int piece_count() const { return static_cast<int>(interior_.size()) + 1; }
  int interior_count() const { return static_cast<int>(interior_.size()); }

  /// alpha_i(t) for i in 0..piece_count(); the boundary curves are implicit.
  double alpha(int i, double t) const {
    if (i <= 0) return 0.0;
    if (i >= piece_count()) return t;
    return interior_[static_cast<std::size_t>(i) - 1].value(t);
  }

  /// alpha_i'(t); alpha_0' == 0 and alpha_n' == 1.
  double alpha_prime(int i, double t) const {
    if (i <= 0) return 0.0;
    if (i >= piece_count()) return 1.0;
    return interior_[static_cast<std::size_t>(i) - 1].derivative(t);
  }

  const Curve& interior(int i) const { return interior_.at(static_cast<std::size_t>(i) - 1); }

 private:
  std::vector<Curve> interior_;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The seed denominator of the differentiated equation at t = 0 vanished.
struct DegenerateSeed : SolverError {
  using SolverError::SolverError;
};

/// A diagonal (current-segment) integral vanished during the forward recursion.
struct DegenerateDiagonal : SolverError {
  DegenerateDiagonal(int k, const std::string& what) : SolverError(what), node(k) {}
  int node;
};

/// Every regularization parameter in the grid diverged.
struct NoConvergentGamma : SolverError {
  NoConvergentGamma(std::vector<double> residuals, const std::string& what)
      : SolverError(what), final_residuals(std::move(residuals)) {}
  std::vector<double> final_residuals;
};

/// A scalar root could not be bracketed (and no acceptable near-root exists).
struct RootBracketFailure : SolverError {
  RootBracketFailure(int k, const std::string& what) : SolverError(what), node(k) {}
  int node;
};

/// Adaptive quadrature ran out of panels before reaching the tolerance.
struct QuadratureBudgetExceeded : SolverError {
  QuadratureBudgetExceeded(double t, const std::string& what) : SolverError(what), at_t(t) {}
  double at_t;
};

/// Two-mesh comparison requested on meshes that are not an exact refinement.
struct MeshNotNested : SolverError {
  using SolverError::SolverError;
};

/// A structural hypothesis (curve ordering, index range) is violated.
struct StructuralError : SolverError {
  using SolverError::SolverError;
};

}  // namespace vie
