#pragma once

// Dense two-phase simplex for the small per-atom linear programs.
//
//   minimize  cost' x
//   s.t.      eq x  = eq_rhs
//             ub x <= ub_rhs
//             x_i >= 0 unless free[i]
//
// Bland's rule throughout, so the pivot sequence (and the returned vertex) is
// a deterministic function of the input.

#include <vector>

#include "condcvx/core.hpp"

namespace condcvx {

enum class LpStatus { optimal, infeasible, unbounded };

template <typename Scalar>
struct LinearProgram {
  Vector<Scalar> cost;
  Matrix<Scalar> eq;
  Vector<Scalar> eq_rhs;
  Matrix<Scalar> ub;
  Vector<Scalar> ub_rhs;
  std::vector<bool> free;  // empty means every variable is nonnegative

  explicit LinearProgram(Index variables = 0)
      : cost(Vector<Scalar>::Zero(variables)),
        eq(0, variables),
        eq_rhs(0),
        ub(0, variables),
        ub_rhs(0),
        free(static_cast<std::size_t>(variables), false) {}

  Index variables() const { return cost.size(); }
  void add_eq(const RowVector<Scalar>& row, Scalar rhs);
  void add_ub(const RowVector<Scalar>& row, Scalar rhs);
};

template <typename Scalar>
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vector<Scalar> x;        // optimal (or last feasible) point
  Scalar objective = 0;
  Vector<Scalar> ray;      // unbounded: feasible direction with cost' ray < 0
};

template <typename Scalar>
LpSolution<Scalar> solve_lp(const LinearProgram<Scalar>& lp, Scalar tol = Scalar(1e-9));

extern template struct LinearProgram<double>;
extern template LpSolution<double> solve_lp(const LinearProgram<double>&, double);

}  // namespace condcvx
