#pragma once

#include <cmath>

#include "condcvx/convex_sets.hpp"
#include "condcvx/lp.hpp"
#include "condcvx/parallel.hpp"
#include "condcvx/qp.hpp"
#include "condcvx/stratified.hpp"

namespace condcvx {

namespace detail {

template <typename Scalar>
Scalar generator_scale(const Polyhedron<Scalar>& c) {
  Scalar s = 1;
  for (const auto* m : {&c.points, &c.rays, &c.lines})
    if (m->size()) s = std::max(s, m->rowwise().norm().maxCoeff());
  return s;
}

// Rows of m passing the residual test greedily, orthonormalized.
template <typename Scalar>
Matrix<Scalar> independent_rows(const Matrix<Scalar>& m, Scalar eps_rank) {
  const Index d = m.cols();
  Matrix<Scalar> q(d, d);
  Index used = 0;
  for (Index i = 0; i < m.rows() && used < d; ++i) {
    Vector<Scalar> z = m.row(i).transpose();
    for (int pass = 0; pass < 2; ++pass)
      for (Index j = 0; j < used; ++j) z -= q.row(j).dot(z) * q.row(j).transpose();
    if (z.norm() > eps_rank * std::max(Scalar(1), m.row(i).norm())) q.row(used++) = (z / z.norm()).transpose();
  }
  return q.topRows(used);
}

template <typename Scalar>
Matrix<Scalar> stack_rows(std::initializer_list<const Matrix<Scalar>*> parts, Index d) {
  Index n = 0;
  for (const auto* p : parts) n += p->rows();
  Matrix<Scalar> m(n, d);
  Index at = 0;
  for (const auto* p : parts) {
    m.middleRows(at, p->rows()) = *p;
    at += p->rows();
  }
  return m;
}

template <typename Scalar>
Projection<Scalar> project_atom(const Polyhedron<Scalar>& c, const Vector<Scalar>& x) {
  const Index d = c.dim();
  const Index np = c.points.rows(), nr = c.rays.rows(), nl = c.lines.rows();
  LeastSquaresQp<Scalar> qp;
  qp.a = stack_rows<Scalar>({&c.points, &c.rays, &c.lines}, d).transpose();
  qp.b = x;
  qp.eq = Matrix<Scalar>::Zero(1, np + nr + nl);
  qp.eq.leftCols(np).setOnes();
  qp.eq_rhs = Vector<Scalar>::Ones(1);
  qp.nonneg.assign(static_cast<std::size_t>(np + nr + nl), true);
  for (Index j = 0; j < nl; ++j) qp.nonneg[static_cast<std::size_t>(np + nr + j)] = false;
  Vector<Scalar> start = Vector<Scalar>::Zero(np + nr + nl);
  start(0) = 1;
  const auto sol = solve_least_squares(qp, std::optional<Vector<Scalar>>(start));
  return {qp.a * sol.w, sol.residual.norm()};
}

template <typename Scalar>
std::pair<Vector<Scalar>, Vector<Scalar>> nearest_pair_atom(const Polyhedron<Scalar>& c, const Polyhedron<Scalar>& d) {
  const Index dim = c.dim();
  const Matrix<Scalar> gc = stack_rows<Scalar>({&c.points, &c.rays, &c.lines}, dim);
  const Matrix<Scalar> gd = stack_rows<Scalar>({&d.points, &d.rays, &d.lines}, dim);
  const Index nc = gc.rows(), nd = gd.rows();
  LeastSquaresQp<Scalar> qp;
  qp.a.resize(dim, nc + nd);
  qp.a << gc.transpose(), -gd.transpose();
  qp.b = Vector<Scalar>::Zero(dim);
  qp.eq = Matrix<Scalar>::Zero(2, nc + nd);
  qp.eq.row(0).head(c.points.rows()).setOnes();
  qp.eq.row(1).segment(nc, d.points.rows()).setOnes();
  qp.eq_rhs = Vector<Scalar>::Ones(2);
  qp.nonneg.assign(static_cast<std::size_t>(nc + nd), true);
  for (Index j = 0; j < c.lines.rows(); ++j) qp.nonneg[static_cast<std::size_t>(nc - c.lines.rows() + j)] = false;
  for (Index j = 0; j < d.lines.rows(); ++j) qp.nonneg[static_cast<std::size_t>(nc + nd - d.lines.rows() + j)] = false;
  Vector<Scalar> start = Vector<Scalar>::Zero(nc + nd);
  start(0) = 1;
  start(nc) = 1;
  const auto sol = solve_least_squares(qp, std::optional<Vector<Scalar>>(start));
  return {gc.transpose() * sol.w.head(nc), gd.transpose() * sol.w.tail(nd)};
}

template <typename Scalar>
bool in_relative_interior(const Polyhedron<Scalar>& c, const Vector<Scalar>& x, Scalar margin) {
  const Index d = c.dim();
  const Index np = c.points.rows(), nr = c.rays.rows(), nl = c.lines.rows();
  const Index t = np + nr + nl;  // index of the margin variable
  LinearProgram<Scalar> lp(t + 1);
  lp.cost(t) = -1;
  for (Index j = 0; j < nl; ++j) lp.free[static_cast<std::size_t>(np + nr + j)] = true;
  lp.free[static_cast<std::size_t>(t)] = true;
  const Matrix<Scalar> g = stack_rows<Scalar>({&c.points, &c.rays, &c.lines}, d);
  for (Index k = 0; k < d; ++k) {
    RowVector<Scalar> row = RowVector<Scalar>::Zero(t + 1);
    row.head(t) = g.col(k).transpose();
    lp.add_eq(row, x(k));
  }
  RowVector<Scalar> sum = RowVector<Scalar>::Zero(t + 1);
  sum.head(np).setOnes();
  lp.add_eq(sum, 1);
  for (Index j = 0; j < np + nr; ++j) {
    RowVector<Scalar> row = RowVector<Scalar>::Zero(t + 1);
    row(t) = 1;
    row(j) = -1;
    lp.add_ub(row, 0);
  }
  RowVector<Scalar> cap = RowVector<Scalar>::Zero(t + 1);
  cap(t) = 1;
  lp.add_ub(cap, 1);
  const auto sol = solve_lp(lp);
  return sol.status == LpStatus::optimal && sol.x(t) > margin;
}

template <typename Scalar>
Index affine_dim(const Polyhedron<Scalar>& c, Scalar eps_rank) {
  Matrix<Scalar> diffs = c.points.bottomRows(c.points.rows() - 1);
  diffs.rowwise() -= c.points.row(0);
  return independent_rows<Scalar>(stack_rows<Scalar>({&diffs, &c.rays, &c.lines}, c.dim()), eps_rank).rows();
}

template <typename Scalar>
Scalar support_atom(const Polyhedron<Scalar>& c, const Vector<Scalar>& z, Extremum kind, Scalar tol) {
  const Scalar sign = kind == Extremum::sup ? Scalar(1) : Scalar(-1);
  const Scalar zn = z.norm();
  // sup of sign * <x, z>, then flipped back.
  Scalar best = -infinity<Scalar>();
  for (Index i = 0; i < c.points.rows(); ++i) best = std::max(best, sign * c.points.row(i).dot(z));
  for (Index i = 0; i < c.rays.rows(); ++i)
    if (sign * c.rays.row(i).dot(z) > tol * c.rays.row(i).norm() * std::max(Scalar(1), zn)) best = infinity<Scalar>();
  for (Index i = 0; i < c.lines.rows(); ++i)
    if (std::abs(c.lines.row(i).dot(z)) > tol * c.lines.row(i).norm() * std::max(Scalar(1), zn)) best = infinity<Scalar>();
  return sign * best;
}

// Cone lemma per atom: a nonzero Z with <g, Z> >= 0 for every generator of
// K = cone(g), provided K is not the whole of span(target). `full` is the
// dimension of the space K should be compared against (d for the weak
// theorem, dim span(g) inside an affine hull for the proper one).
template <typename Scalar>
std::optional<Vector<Scalar>> cone_normal(const Matrix<Scalar>& g, Index d, bool within_span) {
  const Matrix<Scalar> basis = independent_rows<Scalar>(g, Scalar(1e-9));
  if (!within_span && basis.rows() < d) {
    // Deficient span: any unit vector of the orthogonal complement works.
    const Matrix<Scalar> frame = gram_schmidt_complete<Scalar>(basis, d);
    return Vector<Scalar>(frame.row(basis.rows()).transpose());
  }
  if (g.rows() == 0) return std::nullopt;
  // Y = sum of generators lies in the (relative) interior of K, so -Y is
  // outside K and the projection step separates it strictly.
  const Vector<Scalar> y = g.colwise().sum().transpose();
  LeastSquaresQp<Scalar> qp;
  qp.a = g.transpose();
  qp.b = -y;
  qp.eq.resize(0, g.rows());
  qp.eq_rhs.resize(0);
  const auto sol = solve_least_squares(qp, std::optional<Vector<Scalar>>(Vector<Scalar>::Zero(g.rows())));
  const Vector<Scalar> w = sol.residual;  // proj_K(-Y) + Y
  const Scalar scale = std::max(Scalar(1), g.rowwise().norm().maxCoeff());
  if (w.norm() <= Scalar(1e-9) * scale) return std::nullopt;
  return Vector<Scalar>(w / w.norm());
}

// Generators of the conic hull of C - D (0 assumed in its closure or aff).
template <typename Scalar>
Matrix<Scalar> cone_generators(const Polyhedron<Scalar>& e) {
  const Matrix<Scalar> neg = -e.lines;
  return stack_rows<Scalar>({&e.points, &e.rays, &e.lines, &neg}, e.dim());
}

}  // namespace detail

template <typename Scalar>
ConvexSetRep<Scalar> hull(std::vector<CondVector<Scalar>> gens, HullKind kind) {
  if (gens.empty()) throw Error("hull needs at least one generator");
  const auto zero = CondVector<Scalar>::zero(gens.front().space(), gens.front().dim());
  switch (kind) {
    case HullKind::stable:
    case HullKind::sigma:
      return ConvexSetRep<Scalar>(std::move(gens), {}, {}, true);
    case HullKind::convex:
      return ConvexSetRep<Scalar>(std::move(gens));
    case HullKind::cone:
      return ConvexSetRep<Scalar>({zero}, std::move(gens));
    case HullKind::affine: {
      std::vector<CondVector<Scalar>> lines;
      for (std::size_t i = 1; i < gens.size(); ++i) lines.push_back(gens[i] - gens[0]);
      return ConvexSetRep<Scalar>({gens[0]}, {}, std::move(lines));
    }
    case HullKind::linear:
      return ConvexSetRep<Scalar>({zero}, {}, std::move(gens));
  }
  throw Error("unknown hull kind");
}

template <typename Scalar>
MeasurableSet membership(const CondVector<Scalar>& x, const ConvexSetRep<Scalar>& c, const MeasurableSet& a,
                         Scalar tol) {
  CondVector<Scalar>::check(x, c.points.front(), "membership");
  require_same_space(x.space(), a.space(), "membership");
  Mask in = Mask::Constant(x.atoms(), false);
  for_each_atom(x.atoms(), [&](Index atom) {
    if (!a.contains(atom)) return;
    const Vector<Scalar> xr = x.row(atom).transpose();
    const Scalar limit = tol * (Scalar(1) + xr.norm());
    const auto poly = c.at(atom);
    if (c.discrete) {
      in(atom) = ((poly.points.rowwise() - xr.transpose()).rowwise().norm().array() <= limit).any();
    } else {
      in(atom) = detail::project_atom(poly, xr).dist <= limit;
    }
  });
  return {a.space(), std::move(in)};
}

template <typename Scalar>
NearestPair<Scalar> project(const CondVector<Scalar>& x, const ConvexSetRep<Scalar>& c) {
  c.require_convex("project");
  CondVector<Scalar>::check(x, c.points.front(), "project");
  Matrix<Scalar> p(x.atoms(), x.dim());
  Vector<Scalar> dist(x.atoms());
  for_each_atom(x.atoms(), [&](Index atom) {
    const auto pr = detail::project_atom(c.at(atom), Vector<Scalar>(x.row(atom).transpose()));
    p.row(atom) = pr.point.transpose();
    dist(atom) = pr.dist;
  });
  return {CondVector<Scalar>(x.space(), std::move(p)), x, CondScalar<Scalar>(std::move(dist))};
}

template <typename Scalar>
NearestPair<Scalar> nearest_pair(const ConvexSetRep<Scalar>& c, const ConvexSetRep<Scalar>& d) {
  c.require_convex("nearest_pair");
  d.require_convex("nearest_pair");
  CondVector<Scalar>::check(c.points.front(), d.points.front(), "nearest_pair");
  const Index k = c.atoms();
  Mask unbounded = Mask::Constant(k, false);
  for (Index atom = 0; atom < k; ++atom) unbounded(atom) = !d.at(atom).bounded();
  if (unbounded.any()) throw PreconditionError("nearest_pair: D is not bounded", unbounded);
  Matrix<Scalar> x(k, c.dim()), y(k, c.dim());
  for_each_atom(k, [&](Index atom) {
    const auto [xa, ya] = detail::nearest_pair_atom(c.at(atom), d.at(atom));
    x.row(atom) = xa.transpose();
    y.row(atom) = ya.transpose();
  });
  Vector<Scalar> dist = (x - y).rowwise().norm();
  return {CondVector<Scalar>(c.space(), std::move(x)), CondVector<Scalar>(c.space(), std::move(y)),
          CondScalar<Scalar>(std::move(dist))};
}

template <typename Scalar>
Eigen::VectorXi affine_dimension(const ConvexSetRep<Scalar>& c, Scalar eps_rank) {
  Eigen::VectorXi out(c.atoms());
  for (Index atom = 0; atom < c.atoms(); ++atom) out(atom) = static_cast<int>(detail::affine_dim(c.at(atom), eps_rank));
  return out;
}

template <typename Scalar>
MeasurableSet ri_membership(const CondVector<Scalar>& x, const ConvexSetRep<Scalar>& c, InteriorMode mode,
                            Scalar margin) {
  c.require_convex("ri_membership");
  CondVector<Scalar>::check(x, c.points.front(), "ri_membership");
  Mask in = Mask::Constant(x.atoms(), false);
  for_each_atom(x.atoms(), [&](Index atom) {
    const auto poly = c.at(atom);
    if (mode == InteriorMode::interior && detail::affine_dim(poly, Scalar(1e-9)) < x.dim()) return;
    in(atom) = detail::in_relative_interior(poly, Vector<Scalar>(x.row(atom).transpose()), margin);
  });
  return {x.space(), std::move(in)};
}

template <typename Scalar>
CondExtScalar<Scalar> support(const ConvexSetRep<Scalar>& c, const CondVector<Scalar>& z, Extremum kind, Scalar tol) {
  CondVector<Scalar>::check(z, c.points.front(), "support");
  Vector<Scalar> v(z.atoms());
  for (Index atom = 0; atom < z.atoms(); ++atom)
    v(atom) = detail::support_atom(c.at(atom), Vector<Scalar>(z.row(atom).transpose()), kind, tol);
  return CondExtScalar<Scalar>(std::move(v));
}

template <typename Scalar>
ConvexSetRep<Scalar> minkowski_difference(const ConvexSetRep<Scalar>& c, const ConvexSetRep<Scalar>& d) {
  c.require_convex("minkowski_difference");
  d.require_convex("minkowski_difference");
  std::vector<CondVector<Scalar>> points, rays, lines;
  for (const auto& p : c.points)
    for (const auto& q : d.points) points.push_back(p - q);
  for (const auto& r : c.rays) rays.push_back(r);
  for (const auto& r : d.rays) rays.push_back(-r);
  for (const auto& l : c.lines) lines.push_back(l);
  for (const auto& l : d.lines) lines.push_back(l);
  return ConvexSetRep<Scalar>(std::move(points), std::move(rays), std::move(lines));
}

template <typename Scalar>
SeparationResult<Scalar> separate(const ConvexSetRep<Scalar>& c, const ConvexSetRep<Scalar>& d, SeparationKind kind,
                                  Scalar tol) {
  const ConvexSetRep<Scalar> e = minkowski_difference(c, d);
  const Index k = c.atoms();
  const Index dim = c.dim();
  Matrix<Scalar> z = Matrix<Scalar>::Zero(k, dim);
  Mask failure = Mask::Constant(k, false);
  const Vector<Scalar> origin = Vector<Scalar>::Zero(dim);

  for_each_atom(k, [&](Index atom) {
    const auto pc = c.at(atom), pd = d.at(atom), pe = e.at(atom);
    const Scalar scale = std::max(detail::generator_scale(pc), detail::generator_scale(pd));
    switch (kind) {
      case SeparationKind::strong: {
        // Minimal-norm point W of C - D; <X - Y, W> >= ||W||^2 on C x D.
        const auto [xa, ya] = detail::nearest_pair_atom(pc, pd);
        const Vector<Scalar> w = xa - ya;
        if (w.norm() <= tol * scale) {
          failure(atom) = true;
        } else {
          z.row(atom) = w.transpose();
        }
        break;
      }
      case SeparationKind::weak: {
        if (detail::affine_dim(pe, Scalar(1e-9)) == dim && detail::in_relative_interior(pe, origin, tol)) {
          failure(atom) = true;
          break;
        }
        const auto n = detail::cone_normal<Scalar>(detail::cone_generators(pe), dim, false);
        if (n) {
          z.row(atom) = n->transpose();
        } else {
          failure(atom) = true;
        }
        break;
      }
      case SeparationKind::proper: {
        if (detail::in_relative_interior(pe, origin, tol)) {
          failure(atom) = true;
          break;
        }
        // 0 outside aff(C - D): the minimal-norm point of the affine hull is
        // orthogonal to every direction of it, so <X - Y, W> = ||W||^2.
        Matrix<Scalar> diffs = pe.points.bottomRows(pe.points.rows() - 1);
        diffs.rowwise() -= pe.points.row(0);
        const detail::Polyhedron<Scalar> aff{pe.points.topRows(1), Matrix<Scalar>(0, dim),
                                             detail::stack_rows<Scalar>({&diffs, &pe.rays, &pe.lines}, dim)};
        const auto pr = detail::project_atom(aff, origin);
        if (pr.dist > tol * scale) {
          z.row(atom) = (pr.point / pr.point.norm()).transpose();
          break;
        }
        // Otherwise aff(C - D) is a linear space; apply the cone lemma in it.
        const auto n = detail::cone_normal<Scalar>(detail::cone_generators(pe), dim, true);
        if (n) {
          z.row(atom) = n->transpose();
        } else {
          failure(atom) = true;
        }
        break;
      }
    }
  });

  CondVector<Scalar> zv(c.space(), std::move(z));
  const auto inf_c = support(c, zv, Extremum::inf, tol);
  const auto sup_c = support(c, zv, Extremum::sup, tol);
  const auto inf_d = support(d, zv, Extremum::inf, tol);
  const auto sup_d = support(d, zv, Extremum::sup, tol);
  return {kind, std::move(zv), inf_c - sup_d, sup_c - inf_d, MeasurableSet(c.space(), std::move(failure))};
}

template <typename Scalar>
CondVector<Scalar> hahn_banach_extend(const MaxAffineFn<Scalar>& p, const ConvexSetRep<Scalar>& e,
                                      std::span<const CondScalar<Scalar>> g_images, Scalar tol) {
  if (!p.sublinear()) throw Error("hahn_banach_extend: p has nonzero offsets, so it is not sublinear");
  if (p.domain) throw Error("hahn_banach_extend: p must be finite everywhere");
  e.require_convex("hahn_banach_extend");
  CondVector<Scalar>::check(p.pieces.front().slope, e.points.front(), "hahn_banach_extend");
  const Index k = p.atoms();
  const Index d = p.dim();
  for (Index atom = 0; atom < k; ++atom) {
    const auto pe = e.at(atom);
    if (!pe.points.isZero(0) || !(pe.rays.rows() == 0 || pe.rays.isZero(0)))
      throw Error("hahn_banach_extend: E must be a linear hull (zero points, no rays)");
  }
  Eigen::VectorXi labels = Eigen::VectorXi::Zero(k);
  std::vector<CondVector<Scalar>> frame;
  if (!e.lines.empty()) {
    const auto f = submodule_frame<Scalar>(e.lines);
    labels = f.labels;
    frame = f.frame;
  }
  const Index r_max = labels.size() ? labels.maxCoeff() : 0;
  if (static_cast<Index>(g_images.size()) != r_max)
    throw Error("hahn_banach_extend: expected one image per frame vector of E (" + std::to_string(r_max) + ")");
  for (const auto& g : g_images)
    if (g.atoms() != k) throw Error("hahn_banach_extend: image atom count mismatch");

  Matrix<Scalar> h = Matrix<Scalar>::Zero(k, d);
  Mask violated = Mask::Constant(k, false);
  for_each_atom(k, [&](Index atom) {
    const Matrix<Scalar> y = p.slopes(atom);
    const Index r = labels(atom);
    const Scalar scale = std::max(Scalar(1), y.rowwise().norm().maxCoeff());
    for (Index j = 0; j < r; ++j) {
      const Vector<Scalar> u = frame[static_cast<std::size_t>(j)].row(atom).transpose();
      const Scalar g = g_images[static_cast<std::size_t>(j)][atom];
      if (g > (y * u).maxCoeff() + tol * scale || -g > (-(y * u)).maxCoeff() + tol * scale) violated(atom) = true;
    }
    if (violated(atom)) return;
    // h(X) = <X, H> with H in conv{Y_j} = subdifferential of p at 0, pinned
    // to g on E; the minimal-norm such H.
    LeastSquaresQp<Scalar> qp;
    qp.a = y.transpose();
    qp.b = Vector<Scalar>::Zero(d);
    qp.eq = Matrix<Scalar>::Zero(1 + r, y.rows());
    qp.eq.row(0).setOnes();
    qp.eq_rhs = Vector<Scalar>::Ones(1 + r);
    for (Index j = 0; j < r; ++j) {
      const Vector<Scalar> u = frame[static_cast<std::size_t>(j)].row(atom).transpose();
      qp.eq.row(1 + j) = (y * u).transpose();
      qp.eq_rhs(1 + j) = g_images[static_cast<std::size_t>(j)][atom];
    }
    try {
      const auto sol = solve_least_squares(qp);
      h.row(atom) = (y.transpose() * sol.w).transpose();
    } catch (const Error&) {
      violated(atom) = true;
    }
  });
  if (violated.any()) throw PreconditionError("hahn_banach_extend: g is not dominated by p on E", violated);
  return {p.space(), std::move(h)};
}

template <typename Scalar>
BoundedTest<Scalar> bounded_test(const ConvexSetRep<Scalar>& c, Scalar tol) {
  const auto all = MeasurableSet::all(c.space());
  const auto has_zero = membership(CondVector<Scalar>::zero(c.space(), c.dim()), c, all, tol);
  if (!has_zero.is_full()) throw PreconditionError("bounded_test: 0 is not in C", has_zero.complement().mask());
  const Index k = c.atoms();
  Mask bounded = Mask::Constant(k, true);
  Matrix<Scalar> witness = Matrix<Scalar>::Zero(k, c.dim());
  for (Index atom = 0; atom < k; ++atom) {
    const auto poly = c.at(atom);
    for (const auto* m : {&poly.rays, &poly.lines}) {
      for (Index i = 0; i < m->rows() && bounded(atom); ++i) {
        if (m->row(i).isZero(0)) continue;
        bounded(atom) = false;
        witness.row(atom) = m->row(i);
      }
    }
  }
  return {MeasurableSet(c.space(), std::move(bounded)), CondVector<Scalar>(c.space(), std::move(witness))};
}

}  // namespace condcvx
