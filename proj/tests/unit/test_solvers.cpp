#include "doctest.h"

#include "condcvx/lp.hpp"
#include "condcvx/qp.hpp"
#include "instances.hpp"

using namespace condcvx;

TEST_CASE("simplex: small LP, infeasibility and unboundedness") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6  ->  (1.6, 1.2), value 2.8.
  LinearProgram<double> lp(2);
  lp.cost << -1, -1;
  lp.add_ub(RowVector<double>((RowVector<double>(2) << 1, 2).finished()), 4);
  lp.add_ub(RowVector<double>((RowVector<double>(2) << 3, 1).finished()), 6);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.x(0) == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(sol.x(1) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(-2.8).epsilon(1e-12));

  LinearProgram<double> bad(1);
  bad.add_eq(RowVector<double>::Constant(1, 1), -1);
  CHECK(solve_lp(bad).status == LpStatus::infeasible);

  LinearProgram<double> open(1);
  open.free[0] = true;
  open.cost(0) = 1;
  const auto u = solve_lp(open);
  REQUIRE(u.status == LpStatus::unbounded);
  CHECK(u.ray(0) < 0);
}

TEST_CASE("least squares: simplex projection and duplicate columns") {
  LeastSquaresQp<double> qp;
  qp.a = Matrix<double>::Identity(2, 2);
  qp.b = Eigen::Vector2d(1, 1);
  qp.eq = Matrix<double>::Ones(1, 2);
  qp.eq_rhs = Vector<double>::Ones(1);
  const auto sol = solve_least_squares(qp);
  CHECK(sol.converged);
  CHECK(sol.w(0) == doctest::Approx(0.5));
  CHECK(sol.w(1) == doctest::Approx(0.5));

  LeastSquaresQp<double> nn;
  nn.a = Matrix<double>(2, 3);
  nn.a << 1, 1, 0, 0, 0, 1;
  nn.b = Eigen::Vector2d(2, -1);
  nn.eq = Matrix<double>(0, 3);
  nn.eq_rhs = Vector<double>(0);
  const auto s2 = solve_least_squares(nn);
  CHECK(s2.residual(0) == doctest::Approx(0).epsilon(1e-12));
  CHECK(s2.residual(1) == doctest::Approx(1));
  CHECK((s2.w.array() >= 0).all());
}
