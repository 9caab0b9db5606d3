#pragma once

#include <cmath>

#include "condcvx/lp.hpp"
#include "condcvx/qp.hpp"

namespace condcvx {

namespace detail {

template <typename Scalar>
Matrix<Scalar> null_space(const Matrix<Scalar>& e) {
  const Index n = e.cols();
  if (e.rows() == 0) return Matrix<Scalar>::Identity(n, n);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(e, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Scalar cut = Scalar(1e-12) * std::max(Scalar(1), s.size() ? s(0) : Scalar(0));
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

template <typename Scalar>
Vector<Scalar> lstsq(const Matrix<Scalar>& m, const Vector<Scalar>& rhs) {
  if (m.cols() == 0) return Vector<Scalar>(0);
  Eigen::CompleteOrthogonalDecomposition<Matrix<Scalar>> cod(m);
  cod.setThreshold(Scalar(1e-13));
  return cod.solve(rhs);
}

}  // namespace detail

template <typename Scalar>
QpSolution<Scalar> solve_least_squares(const LeastSquaresQp<Scalar>& qp, const std::optional<Vector<Scalar>>& start) {
  const Index n = qp.variables();
  const Index p = qp.eq.rows();
  if (qp.b.size() != qp.a.rows() || (p > 0 && qp.eq.cols() != n) || qp.eq_rhs.size() != p)
    throw Error("least-squares QP shape mismatch");
  auto nonneg = [&](Index i) { return qp.nonneg.empty() || qp.nonneg[static_cast<std::size_t>(i)]; };

  Vector<Scalar> w;
  if (start) {
    w = *start;
  } else {
    LinearProgram<Scalar> lp(n);
    for (Index i = 0; i < n; ++i) lp.free[static_cast<std::size_t>(i)] = !nonneg(i);
    for (Index r = 0; r < p; ++r) lp.add_eq(qp.eq.row(r), qp.eq_rhs(r));
    const auto sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) throw Error("least-squares QP constraints are infeasible");
    w = sol.x;
  }
  for (Index i = 0; i < n; ++i)
    if (nonneg(i) && w(i) < 0) w(i) = 0;

  std::vector<bool> fixed(static_cast<std::size_t>(n), false);
  for (Index i = 0; i < n; ++i) fixed[static_cast<std::size_t>(i)] = nonneg(i) && w(i) == 0;

  const Scalar scale = Scalar(1) + qp.a.cwiseAbs().maxCoeff() * (Scalar(1) + qp.b.cwiseAbs().maxCoeff());
  QpSolution<Scalar> out;
  const Index limit = 50 * (n + 10);
  for (out.iterations = 0; out.iterations < limit; ++out.iterations) {
    std::vector<Index> free_idx;
    for (Index i = 0; i < n; ++i)
      if (!fixed[static_cast<std::size_t>(i)]) free_idx.push_back(i);
    const Index f = static_cast<Index>(free_idx.size());
    Matrix<Scalar> af(qp.a.rows(), f), ef(p, f);
    Vector<Scalar> wf(f);
    for (Index k = 0; k < f; ++k) {
      af.col(k) = qp.a.col(free_idx[static_cast<std::size_t>(k)]);
      if (p) ef.col(k) = qp.eq.col(free_idx[static_cast<std::size_t>(k)]);
      wf(k) = w(free_idx[static_cast<std::size_t>(k)]);
    }

    // Equality-constrained step on the free variables.
    const Vector<Scalar> r0 = qp.a * w - qp.b;
    bool moved = false;
    if (f > 0) {
      const Matrix<Scalar> nsp = detail::null_space<Scalar>(ef);
      if (nsp.cols() > 0) {
        const Vector<Scalar> z = detail::lstsq<Scalar>(af * nsp, -r0);
        const Vector<Scalar> dir = nsp * z;
        const Vector<Scalar> r1 = r0 + af * dir;
        if (r1.squaredNorm() < r0.squaredNorm() - Scalar(1e-24) * scale * scale) {
          Scalar alpha = 1;
          Index block = -1;
          for (Index k = 0; k < f; ++k) {
            const Index i = free_idx[static_cast<std::size_t>(k)];
            if (!nonneg(i) || dir(k) >= 0) continue;
            const Scalar a = -wf(k) / dir(k);
            if (a < alpha) {
              alpha = a;
              block = i;
            }
          }
          for (Index k = 0; k < f; ++k) w(free_idx[static_cast<std::size_t>(k)]) += alpha * dir(k);
          if (block >= 0) {
            w(block) = 0;
            fixed[static_cast<std::size_t>(block)] = true;
            // Entries driven to zero by rounding join the active set too.
            for (Index k = 0; k < f; ++k) {
              const Index i = free_idx[static_cast<std::size_t>(k)];
              if (nonneg(i) && w(i) <= 0) {
                w(i) = 0;
                fixed[static_cast<std::size_t>(i)] = true;
              }
            }
            moved = true;
          }
        }
      }
    }
    if (moved) continue;

    // Stationary on the free set: check the bound multipliers.
    const Vector<Scalar> g = qp.a.transpose() * (qp.a * w - qp.b);
    Vector<Scalar> sigma = g;
    if (p > 0) {
      Vector<Scalar> gf(f);
      for (Index k = 0; k < f; ++k) gf(k) = g(free_idx[static_cast<std::size_t>(k)]);
      const Vector<Scalar> nu = detail::lstsq<Scalar>(ef.transpose(), -gf);
      sigma += qp.eq.transpose() * nu;
    }
    Index release = -1;
    Scalar worst = -Scalar(1e-12) * scale;
    for (Index i = 0; i < n; ++i) {
      if (!fixed[static_cast<std::size_t>(i)]) continue;
      if (sigma(i) < worst) {
        worst = sigma(i);
        release = i;
      }
    }
    if (release < 0) {
      out.converged = true;
      break;
    }
    fixed[static_cast<std::size_t>(release)] = false;
  }
  out.w = w;
  out.residual = qp.a * w - qp.b;
  return out;
}

}  // namespace condcvx
