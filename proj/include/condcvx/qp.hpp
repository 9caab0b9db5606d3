#pragma once

// Active-set solver for the convex least-squares programs that appear per
// atom (projections, nearest pairs, minimal-norm subgradients):
//
//   minimize  1/2 || a w - b ||^2
//   s.t.      eq w = eq_rhs,   w_i >= 0 for nonneg[i]
//
// The residual a w - b at the optimum is unique even when a is rank
// deficient; w itself is whatever the active-set path reaches.

#include <optional>
#include <vector>

#include "condcvx/core.hpp"

namespace condcvx {

template <typename Scalar>
struct LeastSquaresQp {
  Matrix<Scalar> a;
  Vector<Scalar> b;
  Matrix<Scalar> eq;
  Vector<Scalar> eq_rhs;
  std::vector<bool> nonneg;  // empty means all nonnegative

  Index variables() const { return a.cols(); }
};

template <typename Scalar>
struct QpSolution {
  Vector<Scalar> w;
  Vector<Scalar> residual;  // a w - b
  bool converged = false;
  Index iterations = 0;
};

/// `start` must be feasible if given; otherwise a feasible point is found
/// with the simplex. Throws Error if the constraints are infeasible.
template <typename Scalar>
QpSolution<Scalar> solve_least_squares(const LeastSquaresQp<Scalar>& qp,
                                       const std::optional<Vector<Scalar>>& start = std::nullopt);

extern template QpSolution<double> solve_least_squares(const LeastSquaresQp<double>&,
                                                       const std::optional<Vector<double>>&);

}  // namespace condcvx
