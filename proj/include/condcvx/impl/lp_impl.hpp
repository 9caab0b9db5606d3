#pragma once

#include <cmath>
#include <limits>

#include "condcvx/lp.hpp"

namespace condcvx {

template <typename Scalar>
void LinearProgram<Scalar>::add_eq(const RowVector<Scalar>& row, Scalar rhs) {
  if (row.size() != variables()) throw Error("LP row length mismatch");
  eq.conservativeResize(eq.rows() + 1, variables());
  eq.row(eq.rows() - 1) = row;
  eq_rhs.conservativeResize(eq_rhs.size() + 1);
  eq_rhs(eq_rhs.size() - 1) = rhs;
}

template <typename Scalar>
void LinearProgram<Scalar>::add_ub(const RowVector<Scalar>& row, Scalar rhs) {
  if (row.size() != variables()) throw Error("LP row length mismatch");
  ub.conservativeResize(ub.rows() + 1, variables());
  ub.row(ub.rows() - 1) = row;
  ub_rhs.conservativeResize(ub_rhs.size() + 1);
  ub_rhs(ub_rhs.size() - 1) = rhs;
}

namespace detail {

template <typename Scalar>
class SimplexTableau {
 public:
  SimplexTableau(const LinearProgram<Scalar>& lp, Scalar tol) : lp_(lp), tol_(tol) {
    const Index n = lp.variables();
    const Index m_eq = lp.eq.rows();
    const Index m_ub = lp.ub.rows();
    if (lp.eq.cols() != n || lp.ub.cols() != n || lp.eq_rhs.size() != m_eq || lp.ub_rhs.size() != m_ub)
      throw Error("LP shape mismatch");
    if (!lp.free.empty() && static_cast<Index>(lp.free.size()) != n) throw Error("LP free-variable mask mismatch");

    // Column layout: x+ (every variable), x- (free ones), slacks, artificials.
    neg_col_.assign(static_cast<std::size_t>(n), -1);
    Index cols = n;
    for (Index j = 0; j < n; ++j)
      if (is_free(j)) neg_col_[static_cast<std::size_t>(j)] = cols++;
    slack_begin_ = cols;
    cols += m_ub;
    art_begin_ = cols;
    m_ = m_eq + m_ub;
    cols += m_;
    cols_ = cols;

    t_ = Matrix<Scalar>::Zero(m_ + 1, cols_ + 1);
    for (Index i = 0; i < m_; ++i) {
      const bool is_eq = i < m_eq;
      const auto row = is_eq ? lp.eq.row(i) : lp.ub.row(i - m_eq);
      Scalar rhs = is_eq ? lp.eq_rhs(i) : lp.ub_rhs(i - m_eq);
      for (Index j = 0; j < n; ++j) {
        t_(i, j) = row(j);
        if (is_free(j)) t_(i, neg_col_[static_cast<std::size_t>(j)]) = -row(j);
      }
      if (!is_eq) t_(i, slack_begin_ + (i - m_eq)) = Scalar(1);
      t_(i, cols_) = rhs;
      if (rhs < 0) t_.row(i) *= Scalar(-1);
      t_(i, art_begin_ + i) = Scalar(1);
    }
    basis_.resize(static_cast<std::size_t>(m_));
    for (Index i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = art_begin_ + i;
    rhs_scale_ = Scalar(1);
    for (Index i = 0; i < m_; ++i) rhs_scale_ = std::max(rhs_scale_, std::abs(t_(i, cols_)));
  }

  LpSolution<Scalar> solve() {
    LpSolution<Scalar> out;
    // Phase 1: minimize the sum of artificials.
    t_.row(m_).setZero();
    for (Index i = 0; i < m_; ++i) t_.row(m_) -= t_.row(i);
    for (Index i = 0; i < m_; ++i) t_(m_, art_begin_ + i) = 0;
    run(/*allow_artificial=*/true, nullptr);
    if (-t_(m_, cols_) > tol_ * rhs_scale_) {
      out.status = LpStatus::infeasible;
      out.x = Vector<Scalar>::Zero(lp_.variables());
      return out;
    }
    drive_out_artificials();

    // Phase 2 with the true cost.
    Vector<Scalar> c = Vector<Scalar>::Zero(cols_);
    for (Index j = 0; j < lp_.variables(); ++j) {
      c(j) = lp_.cost(j);
      if (is_free(j)) c(neg_col_[static_cast<std::size_t>(j)]) = -lp_.cost(j);
    }
    t_.row(m_).setZero();
    t_.row(m_).head(cols_) = c.transpose();
    for (Index i = 0; i < m_; ++i) {
      const Scalar cb = c(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0) t_.row(m_) -= cb * t_.row(i);
    }
    Index unbounded_col = -1;
    const bool bounded = run(/*allow_artificial=*/false, &unbounded_col);
    out.x = primal();
    out.objective = lp_.cost.dot(out.x);
    if (!bounded) {
      out.status = LpStatus::unbounded;
      Vector<Scalar> dir = Vector<Scalar>::Zero(cols_);
      dir(unbounded_col) = 1;
      for (Index i = 0; i < m_; ++i) dir(basis_[static_cast<std::size_t>(i)]) = -t_(i, unbounded_col);
      out.ray = to_original(dir);
      return out;
    }
    out.status = LpStatus::optimal;
    return out;
  }

 private:
  bool is_free(Index j) const { return !lp_.free.empty() && lp_.free[static_cast<std::size_t>(j)]; }

  // Returns false when the objective is unbounded below along column *col.
  bool run(bool allow_artificial, Index* col) {
    const Index limit = 200 * (cols_ + m_ + 10);
    for (Index iter = 0; iter < limit; ++iter) {
      Index enter = -1;
      const Index last = allow_artificial ? cols_ : art_begin_;
      for (Index j = 0; j < last; ++j) {
        if (t_(m_, j) < -tol_ && !is_basic(j)) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (Index i = 0; i < m_; ++i)
        if (t_(i, enter) > pivot_tol_) best = std::min(best, t_(i, cols_) / t_(i, enter));
      Index leave = -1;
      const Scalar tie = Scalar(1e-13) * std::max(Scalar(1), std::abs(best));
      for (Index i = 0; i < m_ && std::isfinite(best); ++i) {
        if (t_(i, enter) <= pivot_tol_ || t_(i, cols_) / t_(i, enter) > best + tie) continue;
        if (leave < 0 || basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]) leave = i;
      }
      if (leave < 0) {
        if (col) *col = enter;
        return false;
      }
      pivot(leave, enter);
    }
    throw Error("simplex iteration limit reached");
  }

  bool is_basic(Index j) const {
    for (Index b : basis_)
      if (b == j) return true;
    return false;
  }

  void pivot(Index r, Index c) {
    t_.row(r) /= t_(r, c);
    for (Index i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const Scalar f = t_(i, c);
      if (f != 0) t_.row(i) -= f * t_.row(r);
    }
    // Rounding can push a basic value slightly below zero.
    for (Index i = 0; i < m_; ++i)
      if (t_(i, cols_) < 0 && t_(i, cols_) > -tol_) t_(i, cols_) = 0;
    basis_[static_cast<std::size_t>(r)] = c;
  }

  void drive_out_artificials() {
    for (Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < art_begin_) continue;
      Index c = -1;
      Scalar best = Scalar(1e-9);
      for (Index j = 0; j < art_begin_; ++j) {
        if (!is_basic(j) && std::abs(t_(i, j)) > best) {
          best = std::abs(t_(i, j));
          c = j;
        }
      }
      if (c >= 0) {
        pivot(i, c);
      } else {
        remove_row(i);
        --i;
      }
    }
  }

  void remove_row(Index r) {
    Matrix<Scalar> t(t_.rows() - 1, t_.cols());
    t.topRows(r) = t_.topRows(r);
    t.bottomRows(t_.rows() - 1 - r) = t_.bottomRows(t_.rows() - 1 - r);
    t_ = std::move(t);
    basis_.erase(basis_.begin() + r);
    --m_;
  }

  Vector<Scalar> primal() const {
    Vector<Scalar> col = Vector<Scalar>::Zero(cols_);
    for (Index i = 0; i < m_; ++i) col(basis_[static_cast<std::size_t>(i)]) = t_(i, cols_);
    return to_original(col);
  }

  Vector<Scalar> to_original(const Vector<Scalar>& col) const {
    Vector<Scalar> x(lp_.variables());
    for (Index j = 0; j < lp_.variables(); ++j) {
      x(j) = col(j);
      if (is_free(j)) x(j) -= col(neg_col_[static_cast<std::size_t>(j)]);
    }
    return x;
  }

  const LinearProgram<Scalar>& lp_;
  Scalar tol_;
  Scalar pivot_tol_ = Scalar(1e-11);
  Scalar rhs_scale_ = Scalar(1);
  std::vector<Index> neg_col_;
  Index slack_begin_ = 0;
  Index art_begin_ = 0;
  Index cols_ = 0;
  Index m_ = 0;
  Matrix<Scalar> t_;
  std::vector<Index> basis_;
};

}  // namespace detail

template <typename Scalar>
LpSolution<Scalar> solve_lp(const LinearProgram<Scalar>& lp, Scalar tol) {
  detail::SimplexTableau<Scalar> tableau(lp, tol);
  return tableau.solve();
}

}  // namespace condcvx
