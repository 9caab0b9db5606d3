#pragma once

#include <cmath>

#include "condcvx/convex_functions.hpp"
#include "condcvx/impl/convex_sets_impl.hpp"
#include "condcvx/lp.hpp"
#include "condcvx/parallel.hpp"
#include "condcvx/qp.hpp"
#include "condcvx/random.hpp"
#include "condcvx/stratified.hpp"

namespace condcvx {

namespace detail {

template <typename Scalar>
struct PieceTable {
  Matrix<Scalar> slopes;
  Vector<Scalar> offsets;

  Vector<Scalar> values(const Vector<Scalar>& x) const { return slopes * x + offsets; }
};

template <typename Scalar>
PieceTable<Scalar> pieces_at(const MaxAffineFn<Scalar>& f, Index atom) {
  return {f.slopes(atom), f.offsets(atom)};
}

template <typename Scalar>
bool in_domain(const MaxAffineFn<Scalar>& f, Index atom, const Vector<Scalar>& x, Scalar tol) {
  if (!f.domain) return true;
  return project_atom(f.domain->at(atom), x).dist <= tol * (Scalar(1) + x.norm());
}

template <typename Scalar>
std::vector<Index> active_pieces(const Vector<Scalar>& vals, Scalar tol) {
  const Scalar top = vals.maxCoeff();
  std::vector<Index> act;
  for (Index j = 0; j < vals.size(); ++j)
    if (top - vals(j) <= tol * (Scalar(1) + std::abs(top))) act.push_back(j);
  return act;
}

// f(x0 + h) - f(x0) written as max_j [(v_j(x0) - f(x0)) + <h, Y_j>], which
// keeps the increment accurate for tiny h.
template <typename Scalar>
Scalar increment(const MaxAffineFn<Scalar>& f, const PieceTable<Scalar>& t, Index atom, const Vector<Scalar>& x0,
                 const Vector<Scalar>& h, Scalar tol) {
  if (!in_domain(f, atom, Vector<Scalar>(x0 + h), tol)) return infinity<Scalar>();
  const Vector<Scalar> base = t.values(x0);
  const Scalar top = base.maxCoeff();
  return ((base.array() - top).matrix() + t.slopes * h).maxCoeff();
}

// Appends the variables x = P lambda + R mu + L nu (sum lambda = 1) to an LP
// whose first d variables are x.
template <typename Scalar>
LinearProgram<Scalar> with_membership(LinearProgram<Scalar> lp, const Polyhedron<Scalar>& c, bool homogeneous = false) {
  const Index d = c.dim();
  const Index n0 = lp.variables();
  const Index np = homogeneous ? 0 : c.points.rows(), nr = c.rays.rows(), nl = c.lines.rows();
  const Index n = n0 + np + nr + nl;
  LinearProgram<Scalar> out(n);
  out.cost.head(n0) = lp.cost;
  for (Index j = 0; j < n0; ++j) out.free[static_cast<std::size_t>(j)] = lp.free[static_cast<std::size_t>(j)];
  for (Index j = 0; j < nl; ++j) out.free[static_cast<std::size_t>(n0 + np + nr + j)] = true;
  for (Index r = 0; r < lp.eq.rows(); ++r) {
    RowVector<Scalar> row = RowVector<Scalar>::Zero(n);
    row.head(n0) = lp.eq.row(r);
    out.add_eq(row, lp.eq_rhs(r));
  }
  for (Index r = 0; r < lp.ub.rows(); ++r) {
    RowVector<Scalar> row = RowVector<Scalar>::Zero(n);
    row.head(n0) = lp.ub.row(r);
    out.add_ub(row, lp.ub_rhs(r));
  }
  for (Index k = 0; k < d; ++k) {
    RowVector<Scalar> row = RowVector<Scalar>::Zero(n);
    row(k) = 1;
    if (np) row.segment(n0, np) = -c.points.col(k).transpose();
    if (nr) row.segment(n0 + np, nr) = -c.rays.col(k).transpose();
    if (nl) row.segment(n0 + np + nr, nl) = -c.lines.col(k).transpose();
    out.add_eq(row, 0);
  }
  if (np) {
    RowVector<Scalar> row = RowVector<Scalar>::Zero(n);
    row.segment(n0, np).setOnes();
    out.add_eq(row, 1);
  }
  return out;
}

// Epigraph LP: variables (x, t), t >= <x, Y_j> + Z_j, x in dom f.
template <typename Scalar>
LinearProgram<Scalar> epigraph_lp(const MaxAffineFn<Scalar>& f, const PieceTable<Scalar>& t, Index atom) {
  const Index d = f.dim();
  LinearProgram<Scalar> lp(d + 1);
  for (Index j = 0; j <= d; ++j) lp.free[static_cast<std::size_t>(j)] = true;
  for (Index j = 0; j < t.slopes.rows(); ++j) {
    RowVector<Scalar> row(d + 1);
    row.head(d) = t.slopes.row(j);
    row(d) = -1;
    lp.add_ub(row, -t.offsets(j));
  }
  if (f.domain) lp = with_membership(lp, f.domain->at(atom));
  return lp;
}

template <typename Scalar>
Mask finite_at(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x0, Scalar tol) {
  const auto v = eval(f, x0, tol);
  Mask m(v.atoms());
  for (Index i = 0; i < v.atoms(); ++i) m(i) = v.finite_on(i);
  return m;
}

}  // namespace detail

template <typename Scalar>
CondExtScalar<Scalar> eval(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x, Scalar tol) {
  CondVector<Scalar>::check(f.pieces.front().slope, x, "eval");
  Vector<Scalar> out(x.atoms());
  for_each_atom(x.atoms(), [&](Index atom) {
    const Vector<Scalar> xr = x.row(atom).transpose();
    out(atom) = detail::in_domain(f, atom, xr, tol) ? detail::pieces_at(f, atom).values(xr).maxCoeff()
                                                    : infinity<Scalar>();
  });
  return CondExtScalar<Scalar>(std::move(out));
}

template <typename Scalar>
GridFn<Scalar> conjugate(const MaxAffineFn<Scalar>& f, const Lattice<Scalar>& dual) {
  if (dual.dim() != f.dim()) throw Error("conjugate: dual lattice dimension mismatch");
  const Index k = f.atoms();
  const Index d = f.dim();
  Matrix<Scalar> out(k, dual.nodes());
  Mask empty = Mask::Constant(k, false);
  for_each_atom(k, [&](Index atom) {
    const auto t = detail::pieces_at(f, atom);
    LinearProgram<Scalar> lp = detail::epigraph_lp(f, t, atom);
    for (Index node = 0; node < dual.nodes(); ++node) {
      // f*(y) = -min { t - <x, y> } over the epigraph.
      const Vector<Scalar> y = dual.node(node);
      lp.cost.setZero();
      lp.cost.head(d) = -y;
      lp.cost(d) = 1;
      const auto sol = solve_lp(lp);
      if (sol.status == LpStatus::infeasible) {
        empty(atom) = true;
        return;
      }
      out(atom, node) = sol.status == LpStatus::unbounded ? infinity<Scalar>() : -sol.objective;
    }
  });
  if (empty.any()) throw PreconditionError("conjugate: empty domain (improper function)", empty);
  return GridFn<Scalar>(f.space(), dual, std::move(out));
}

template <typename Scalar>
SubdifferentialRep<Scalar> subdifferential(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x0, Scalar tol) {
  CondVector<Scalar>::check(f.pieces.front().slope, x0, "subdifferential");
  if (f.domain) {
    const auto ri = ri_membership(x0, *f.domain, InteriorMode::relative);
    if (!ri.is_full()) throw PreconditionError("subdifferential: X0 is not in ri(dom f)", ri.complement().mask());
  }
  const Index k = x0.atoms();
  const Index d = x0.dim();
  SubdifferentialRep<Scalar> rep{x0, std::vector<std::vector<Index>>(static_cast<std::size_t>(k)),
                                 std::vector<Matrix<Scalar>>(static_cast<std::size_t>(k)),
                                 std::vector<Matrix<Scalar>>(static_cast<std::size_t>(k)), x0};
  Matrix<Scalar> repr(k, d);
  for_each_atom(k, [&](Index atom) {
    const auto t = detail::pieces_at(f, atom);
    const auto act = detail::active_pieces<Scalar>(t.values(x0.row(atom).transpose()), tol);
    Matrix<Scalar> gens(static_cast<Index>(act.size()), d);
    for (std::size_t i = 0; i < act.size(); ++i) gens.row(static_cast<Index>(i)) = t.slopes.row(act[i]);
    Matrix<Scalar> normals(0, d);
    if (f.domain) {
      // In ri(dom f) the normal cone of the domain is aff(dom)-perp.
      const auto dom = f.domain->at(atom);
      Matrix<Scalar> diffs = dom.points.bottomRows(dom.points.rows() - 1);
      diffs.rowwise() -= dom.points.row(0);
      const Matrix<Scalar> dirs =
          detail::independent_rows<Scalar>(detail::stack_rows<Scalar>({&diffs, &dom.rays, &dom.lines}, d), Scalar(1e-9));
      normals = detail::gram_schmidt_complete<Scalar>(dirs, d).bottomRows(d - dirs.rows());
    }
    const detail::Polyhedron<Scalar> sub{gens, Matrix<Scalar>(0, d), normals};
    repr.row(atom) = detail::project_atom(sub, Vector<Scalar>(Vector<Scalar>::Zero(d))).point.transpose();
    rep.active[static_cast<std::size_t>(atom)] = act;
    rep.generators[static_cast<std::size_t>(atom)] = std::move(gens);
    rep.normal_lines[static_cast<std::size_t>(atom)] = std::move(normals);
  });
  rep.representative = CondVector<Scalar>(x0.space(), std::move(repr));
  return rep;
}

template <typename Scalar>
CondVector<Scalar> bounded_subgradient(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x0,
                                       const CondScalar<Scalar>& v, std::uint64_t seed, int probes, Scalar tol) {
  if (v.atoms() != x0.atoms()) throw Error("bounded_subgradient: atom count mismatch");
  if ((v.values().array() < 0).any()) throw Error("bounded_subgradient: V must be nonnegative");
  const Mask infinite = !detail::finite_at(f, x0, tol);
  if (infinite.any()) throw PreconditionError("bounded_subgradient: f(X0) is not finite", infinite);
  const Index k = x0.atoms();
  const Index d = x0.dim();
  Mask growth_fails = Mask::Constant(k, false);
  for_each_atom(k, [&](Index atom) {
    auto rng = atom_rng(seed, atom, 1);
    const auto t = detail::pieces_at(f, atom);
    const Vector<Scalar> xr = x0.row(atom).transpose();
    for (double radius : kGrowthRadii) {
      for (int p = 0; p < probes; ++p) {
        const Vector<Scalar> h = static_cast<Scalar>(radius) * random_unit<Scalar>(rng, d);
        const Scalar inc = detail::increment(f, t, atom, xr, h, tol);
        const Scalar bound = -v[atom] * h.norm();
        if (inc < bound - tol * (Scalar(1) + std::abs(bound))) growth_fails(atom) = true;
      }
    }
  });
  if (growth_fails.any()) throw PreconditionError("bounded_subgradient: growth bound fails on a probe", growth_fails);
  auto y = subdifferential(f, x0, tol).representative;
  Mask too_long = Mask::Constant(k, false);
  for (Index atom = 0; atom < k; ++atom) too_long(atom) = y.row(atom).norm() > v[atom] + tol;
  if (too_long.any())
    throw PreconditionError("bounded_subgradient: minimal-norm subgradient exceeds V (growth bound fails)", too_long);
  return y;
}

template <typename Scalar>
CondExtScalar<Scalar> directional_derivative(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x0,
                                             const CondVector<Scalar>& x, Scalar tol) {
  CondVector<Scalar>::check(x0, x, "directional_derivative");
  const Mask infinite = !detail::finite_at(f, x0, tol);
  if (infinite.any()) throw PreconditionError("directional_derivative: f(X0) is not finite", infinite);
  const Index k = x0.atoms();
  const Index d = x0.dim();
  Vector<Scalar> out(k);
  for_each_atom(k, [&](Index atom) {
    const Vector<Scalar> xr = x0.row(atom).transpose();
    const Vector<Scalar> dir = x.row(atom).transpose();
    if (dir.norm() == 0) {
      out(atom) = 0;
      return;
    }
    if (f.domain) {
      // Largest step s <= 1 with X0 + s X in dom f.
      LinearProgram<Scalar> lp(d + 1);
      for (Index j = 0; j < d; ++j) lp.free[static_cast<std::size_t>(j)] = true;
      lp.cost(d) = -1;
      for (Index j = 0; j < d; ++j) {
        RowVector<Scalar> row = RowVector<Scalar>::Zero(d + 1);
        row(j) = 1;
        row(d) = -dir(j);
        lp.add_eq(row, xr(j));
      }
      RowVector<Scalar> cap = RowVector<Scalar>::Zero(d + 1);
      cap(d) = 1;
      lp.add_ub(cap, 1);
      const auto sol = solve_lp(detail::with_membership(lp, f.domain->at(atom)));
      if (sol.status != LpStatus::optimal || sol.x(d) * dir.norm() <= Scalar(1e-8) * (Scalar(1) + xr.norm())) {
        out(atom) = infinity<Scalar>();
        return;
      }
    }
    const auto t = detail::pieces_at(f, atom);
    Scalar best = -infinity<Scalar>();
    for (Index j : detail::active_pieces<Scalar>(t.values(xr), tol)) best = std::max(best, t.slopes.row(j).dot(dir));
    out(atom) = best;
  });
  return CondExtScalar<Scalar>(std::move(out));
}

template <typename Scalar>
std::vector<CondExtScalar<Scalar>> difference_quotients(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x0,
                                                        const CondVector<Scalar>& x, int max_exponent) {
  CondVector<Scalar>::check(x0, x, "difference_quotients");
  const Index k = x0.atoms();
  std::vector<CondExtScalar<Scalar>> out;
  for (int e = 0; e <= max_exponent; ++e) {
    const Scalar n = std::exp2(static_cast<Scalar>(e));
    Vector<Scalar> q(k);
    for (Index atom = 0; atom < k; ++atom) {
      const auto t = detail::pieces_at(f, atom);
      const Vector<Scalar> xr = x0.row(atom).transpose();
      const Vector<Scalar> h = x.row(atom).transpose() / n;
      q(atom) = ext_mul(n, detail::increment(f, t, atom, xr, h, Scalar(1e-9)));
    }
    out.emplace_back(std::move(q));
  }
  return out;
}

template <typename Scalar>
Differentiability<Scalar> differentiability_check(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x0,
                                                  std::uint64_t seed, int sequences, Scalar tol) {
  CondVector<Scalar>::check(f.pieces.front().slope, x0, "differentiability_check");
  const Mask infinite = !detail::finite_at(f, x0, tol);
  if (infinite.any()) throw PreconditionError("differentiability_check: f(X0) is not finite", infinite);
  const Index k = x0.atoms();
  const Index d = x0.dim();
  Mask interior = Mask::Constant(k, true);
  if (f.domain) interior = ri_membership(x0, *f.domain, InteriorMode::interior).mask();
  Mask diff = Mask::Constant(k, false);
  Mask verified = Mask::Constant(k, false);
  Matrix<Scalar> grad = Matrix<Scalar>::Zero(k, d);
  Vector<Scalar> tail = Vector<Scalar>::Zero(k);
  for_each_atom(k, [&](Index atom) {
    const auto t = detail::pieces_at(f, atom);
    const Vector<Scalar> xr = x0.row(atom).transpose();
    const auto act = detail::active_pieces<Scalar>(t.values(xr), tol);
    const Scalar scale = Scalar(1) + t.slopes.rowwise().norm().maxCoeff();
    bool single = interior(atom);
    for (Index j : act) single = single && (t.slopes.row(j) - t.slopes.row(act.front())).norm() <= tol * scale;
    diff(atom) = single;
    if (single) grad.row(atom) = t.slopes.row(act.front());
    // Difference quotients (f(X0 + X_n) - f(X0) - <X_n, Y>) / ||X_n|| along
    // X_n = U 2^-n; the last term of each sequence is reported.
    const Vector<Scalar> y = grad.row(atom).transpose();
    Scalar worst = 0;
    for (int s = 0; s < sequences; ++s) {
      auto rng = atom_rng(seed, atom, 100 + static_cast<std::uint64_t>(s));
      const Vector<Scalar> u = random_unit<Scalar>(rng, d);
      const Vector<Scalar> h = u * std::exp2(Scalar(-30));
      const Scalar inc = detail::increment(f, t, atom, xr, h, tol);
      const Scalar q = inc == infinity<Scalar>() ? inc : std::abs(inc - h.dot(y)) / h.norm();
      worst = std::max(worst, q);
    }
    tail(atom) = worst;
    verified(atom) = single && worst <= Scalar(1e-6);
  });
  return {MeasurableSet(x0.space(), std::move(diff)), CondVector<Scalar>(x0.space(), std::move(grad)),
          CondExtScalar<Scalar>(std::move(tail)), MeasurableSet(x0.space(), std::move(verified))};
}

template <typename Scalar>
ArgminResult<Scalar> argmin(const MaxAffineFn<Scalar>& f, const ConvexSetRep<Scalar>& c, Scalar tol) {
  c.require_convex("argmin");
  CondVector<Scalar>::check(f.pieces.front().slope, c.points.front(), "argmin");
  const Index k = f.atoms();
  const Index d = f.dim();
  Matrix<Scalar> x = Matrix<Scalar>::Zero(k, d), ray = Matrix<Scalar>::Zero(k, d);
  Vector<Scalar> value(k);
  Mask unique = Mask::Constant(k, false), coercive = Mask::Constant(k, true), unbounded = Mask::Constant(k, false);
  Mask empty = Mask::Constant(k, false);
  for_each_atom(k, [&](Index atom) {
    const auto t = detail::pieces_at(f, atom);
    const auto pc = c.at(atom);
    LinearProgram<Scalar> lp = detail::with_membership(detail::epigraph_lp(f, t, atom), pc);
    lp.cost.setZero();
    lp.cost(d) = 1;
    const auto sol = solve_lp(lp);
    if (sol.status == LpStatus::infeasible) {
      empty(atom) = true;
      return;
    }
    if (sol.status == LpStatus::unbounded) {
      unbounded(atom) = true;
      value(atom) = -infinity<Scalar>();
      ray.row(atom) = sol.ray.head(d).transpose();
    } else {
      x.row(atom) = sol.x.head(d).transpose();
      value(atom) = t.values(x.row(atom).transpose()).maxCoeff();
    }

    // Coercivity: the recession cone of C cap dom f on which no piece grows
    // must be {0}. Probe each signed axis for a nonzero element.
    const bool has_recession = !pc.bounded() || (f.domain && !f.domain->at(atom).bounded());
    if (has_recession) {
      for (Index a = 0; a < d && coercive(atom); ++a) {
        for (Scalar sign : {Scalar(1), Scalar(-1)}) {
          LinearProgram<Scalar> rec(d);
          for (Index j = 0; j < d; ++j) rec.free[static_cast<std::size_t>(j)] = true;
          for (Index j = 0; j < t.slopes.rows(); ++j) rec.add_ub(t.slopes.row(j), 0);
          RowVector<Scalar> unit = RowVector<Scalar>::Zero(d);
          unit(a) = sign;
          rec.add_eq(unit, 1);
          rec = detail::with_membership(rec, pc, true);
          if (f.domain) rec = detail::with_membership(rec, f.domain->at(atom), true);
          if (solve_lp(rec).status != LpStatus::infeasible) {
            coercive(atom) = false;
            break;
          }
        }
      }
    }
    if (unbounded(atom)) return;

    // Uniqueness: the optimal face {x in C cap dom : f(x) <= v} is a point.
    // The coordinate range of the band {f(x) <= v + eps} is concave and
    // piecewise linear in eps, so 2 r(eps) - r(2 eps) bounds r(0) from above
    // and stays exact near a sharp vertex whose band is long and thin.
    const Scalar eps = tol * (Scalar(1) + std::abs(value(atom)));
    auto band_range = [&](Index a, Scalar width) -> std::optional<Scalar> {
      LinearProgram<Scalar> face = lp;
      RowVector<Scalar> cap = RowVector<Scalar>::Zero(face.variables());
      cap(d) = 1;
      face.add_ub(cap, value(atom) + width);
      Scalar lo = 0, hi = 0;
      for (Scalar sign : {Scalar(1), Scalar(-1)}) {
        face.cost.setZero();
        face.cost(a) = sign;
        const auto s = solve_lp(face);
        if (s.status != LpStatus::optimal) return std::nullopt;
        (sign > 0 ? lo : hi) = s.x(a);
      }
      return hi - lo;
    };
    const Scalar limit = Scalar(1e-7) * (Scalar(1) + x.row(atom).norm());
    bool single = true;
    for (Index a = 0; a < d && single; ++a) {
      const auto r1 = band_range(a, eps);
      if (!r1) {
        single = false;
      } else if (*r1 > limit) {
        const auto r2 = band_range(a, 2 * eps);
        single = r2 && Scalar(2) * *r1 - *r2 <= limit;
      }
    }
    unique(atom) = single;
  });
  if (empty.any()) throw PreconditionError("argmin: C does not meet dom f", empty);
  return {CondVector<Scalar>(f.space(), std::move(x)),  CondExtScalar<Scalar>(std::move(value)),
          MeasurableSet(f.space(), std::move(unique)),  MeasurableSet(f.space(), std::move(coercive)),
          MeasurableSet(f.space(), std::move(unbounded)), CondVector<Scalar>(f.space(), std::move(ray))};
}

template <typename Scalar>
SublinearSupport<Scalar> sublinear_support(const MaxAffineFn<Scalar>& f, std::uint64_t seed, int probes) {
  if (!f.sublinear()) throw Error("sublinear_support: nonzero offsets, f is not positively homogeneous");
  if (f.domain) throw Error("sublinear_support: f must be finite everywhere");
  const Index k = f.atoms();
  const Index d = f.dim();
  std::vector<CondVector<Scalar>> gens;
  for (const auto& p : f.pieces) gens.push_back(p.slope);
  Vector<Scalar> dev = Vector<Scalar>::Zero(k);
  for_each_atom(k, [&](Index atom) {
    const auto t = detail::pieces_at(f, atom);
    // f(0) = 0 and f(X) = max over the generators of <X, G>.
    if (t.values(Vector<Scalar>::Zero(d)).maxCoeff() != 0) throw Error("sublinear_support: f(0) != 0");
    auto rng = atom_rng(seed, atom, 2);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int p = 0; p < probes; ++p) {
      Vector<Scalar> xp(d);
      for (Index i = 0; i < d; ++i) xp(i) = static_cast<Scalar>(n(rng));
      Scalar support = -infinity<Scalar>();
      for (const auto& g : gens) support = std::max(support, g.row(atom).dot(xp));
      dev(atom) = std::max(dev(atom), std::abs(t.values(xp).maxCoeff() - support));
    }
  });
  return {std::move(gens), CondScalar<Scalar>(std::move(dev))};
}

}  // namespace condcvx
