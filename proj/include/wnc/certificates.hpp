#pragma once

#include <optional>

#include "wnc/spaces.hpp"

namespace wnc {

/// Convex-combination coefficients; nonnegative, summing to one within tol.
struct SimplexWeights {
  Vector weights;

  double sum() const { return weights.sum(); }
  bool feasible(double tol = 1e-9) const {
    return weights.minCoeff() > -tol && std::abs(weights.sum() - 1.0) <= tol;
  }
};

/// An element of the dual ball, carried together with its (re-evaluated)
/// dual norm so callers can audit ball feasibility.
struct DualFunctional {
  Vector coefficients;
  double certified_dual_norm = 0.0;

  double action(const Vector& x) const { return coefficients.dot(x); }
};

/// Solver output contract: the true optimum lies in [value - gap, value + gap].
/// Minimization solvers report value = objective attained by `weights`
/// (an upper bound); maximization solvers report value = bound attained by
/// `functional` (a lower bound). Either way the interval holds.
struct SolveCertificate {
  double value = 0.0;
  double gap = 0.0;
  std::optional<SimplexWeights> weights;    // primal witness
  std::optional<SimplexWeights> weights_q;  // second hull (hull_distance)
  std::optional<DualFunctional> functional; // dual witness

  double lower_bound() const { return value - gap; }
  double upper_bound() const { return value + gap; }
};

}  // namespace wnc
