#pragma once

#include <cmath>

#include "condcvx/grid_functions.hpp"
#include "condcvx/lp.hpp"
#include "condcvx/parallel.hpp"

namespace condcvx {

template <typename Scalar>
Lattice<Scalar>::Lattice(Vector<Scalar> m, Vector<Scalar> s, Eigen::VectorXi c)
    : mins(std::move(m)), steps(std::move(s)), counts(std::move(c)) {
  if (mins.size() == 0 || steps.size() != mins.size() || counts.size() != mins.size())
    throw Error("lattice: mins, steps and counts need the same nonzero length");
  if (!mins.allFinite() || !steps.allFinite() || (steps.array() <= 0).any())
    throw Error("lattice: steps must be finite and positive");
  if ((counts.array() < 1).any()) throw Error("lattice: every axis needs at least one node");
}

template <typename Scalar>
Lattice<Scalar> Lattice<Scalar>::from_bounds(const Vector<Scalar>& mins, const Vector<Scalar>& maxs,
                                             const Vector<Scalar>& steps) {
  if (maxs.size() != mins.size() || steps.size() != mins.size()) throw Error("lattice bounds: length mismatch");
  Eigen::VectorXi counts(mins.size());
  for (Index a = 0; a < mins.size(); ++a) {
    if (!(steps(a) > 0)) throw Error("lattice bounds: steps must be positive");
    const Scalar n = (maxs(a) - mins(a)) / steps(a);
    const Scalar r = std::round(n);
    if (r < 0 || std::abs(n - r) > Scalar(1e-9) * std::max(Scalar(1), std::abs(n)))
      throw Error("lattice bounds: max is not reachable from min in whole steps");
    counts(a) = static_cast<int>(r) + 1;
  }
  return Lattice(mins, steps, counts);
}

template <typename Scalar>
Index Lattice<Scalar>::nodes() const {
  Index n = 1;
  for (Index a = 0; a < dim(); ++a) n *= counts(a);
  return n;
}

template <typename Scalar>
Vector<Scalar> Lattice<Scalar>::maxs() const {
  return mins + steps.cwiseProduct((counts.array() - 1).matrix().template cast<Scalar>());
}

template <typename Scalar>
Eigen::VectorXi Lattice<Scalar>::multi_index(Index flat) const {
  Eigen::VectorXi m(dim());
  for (Index a = dim() - 1; a >= 0; --a) {
    m(a) = static_cast<int>(flat % counts(a));
    flat /= counts(a);
  }
  return m;
}

template <typename Scalar>
Index Lattice<Scalar>::flat_index(const Eigen::VectorXi& multi) const {
  Index flat = 0;
  for (Index a = 0; a < dim(); ++a) flat = flat * counts(a) + multi(a);
  return flat;
}

template <typename Scalar>
Vector<Scalar> Lattice<Scalar>::node(Index flat) const {
  const Eigen::VectorXi m = multi_index(flat);
  Vector<Scalar> x(dim());
  for (Index a = 0; a < dim(); ++a) x(a) = mins(a) + static_cast<Scalar>(m(a)) * steps(a);
  return x;
}

template <typename Scalar>
GridFn<Scalar>::GridFn(SpacePtr s, Lattice<Scalar> g, Matrix<Scalar> v)
    : space(std::move(s)), grid(std::move(g)), values(std::move(v)) {
  if (!space) throw Error("grid function without a measure space");
  if (values.rows() != space->atoms() || values.cols() != grid.nodes())
    throw Error("grid function: values must be atoms x lattice nodes");
  if (values.hasNaN()) throw Error("grid function with a NaN value");
  if ((values.array() == -infinity<Scalar>()).any()) throw Error("grid function takes the value -inf (improper)");
}

template <typename Scalar>
Mask GridFn<Scalar>::improper() const {
  Mask m(atoms());
  for (Index i = 0; i < atoms(); ++i) m(i) = (values.row(i).array() == infinity<Scalar>()).all();
  return m;
}

namespace detail {

template <typename Scalar>
void require_proper(const GridFn<Scalar>& f, const char* what) {
  const Mask bad = f.improper();
  if (bad.any()) throw PreconditionError(std::string(what) + ": function is +inf everywhere on some atoms", bad);
}

}  // namespace detail

template <typename Scalar>
CondExtScalar<Scalar> eval(const GridFn<Scalar>& f, const CondVector<Scalar>& x) {
  require_same_space(f.space, x.space(), "grid eval");
  const auto& g = f.grid;
  const Index d = g.dim();
  if (x.dim() != d) throw Error("grid eval: dimension mismatch");
  Vector<Scalar> out(x.atoms());
  for (Index atom = 0; atom < x.atoms(); ++atom) {
    Eigen::VectorXi base(d);
    Vector<Scalar> frac(d);
    for (Index a = 0; a < d; ++a) {
      const Scalar t = (x.coords()(atom, a) - g.mins(a)) / g.steps(a);
      const Scalar top = static_cast<Scalar>(g.counts(a) - 1);
      if (t < -Scalar(1e-9) || t > top + Scalar(1e-9)) throw Error("grid eval: query point outside the lattice");
      const Scalar tc = std::clamp(t, Scalar(0), top);
      base(a) = std::min(static_cast<int>(std::floor(tc)), std::max(0, g.counts(a) - 2));
      frac(a) = tc - static_cast<Scalar>(base(a));
    }
    Scalar v = 0;
    for (Index corner = 0; corner < (Index(1) << d); ++corner) {
      Scalar w = 1;
      Eigen::VectorXi m = base;
      for (Index a = 0; a < d; ++a) {
        const bool up = (corner >> a) & 1;
        w *= up ? frac(a) : Scalar(1) - frac(a);
        if (up) m(a) = std::min(m(a) + 1, g.counts(a) - 1);
      }
      if (w == 0) continue;
      const Scalar fv = f.values(atom, g.flat_index(m));
      if (fv == infinity<Scalar>()) {
        v = infinity<Scalar>();
        break;
      }
      v += w * fv;
    }
    out(atom) = v;
  }
  return CondExtScalar<Scalar>(std::move(out));
}

template <typename Scalar>
GridFn<Scalar> conjugate(const GridFn<Scalar>& f, const Lattice<Scalar>& dual, Eigen::MatrixXi* argmax) {
  detail::require_proper(f, "conjugate");
  if (dual.dim() != f.grid.dim()) throw Error("conjugate: dual lattice dimension mismatch");
  const Index k = f.atoms();
  const Index n = f.grid.nodes();
  const Index m = dual.nodes();
  const Index d = dual.dim();
  Matrix<Scalar> xs(n, d), ys(m, d);
  for (Index i = 0; i < n; ++i) xs.row(i) = f.grid.node(i).transpose();
  for (Index j = 0; j < m; ++j) ys.row(j) = dual.node(j).transpose();
  Matrix<Scalar> out(k, m);
  if (argmax) argmax->resize(k, m);
  for_each_atom(k, [&](Index atom) {
    std::vector<Index> finite;
    for (Index i = 0; i < n; ++i)
      if (f.values(atom, i) != infinity<Scalar>()) finite.push_back(i);
    for (Index j = 0; j < m; ++j) {
      Scalar best = -infinity<Scalar>();
      Index at = -1;
      for (Index i : finite) {
        Scalar s = 0;
        for (Index a = 0; a < d; ++a) s += xs(i, a) * ys(j, a);
        s -= f.values(atom, i);
        if (s > best) {
          best = s;
          at = i;
        }
      }
      out(atom, j) = best;
      if (argmax) (*argmax)(atom, j) = static_cast<int>(at);
    }
  });
  return GridFn<Scalar>(f.space, dual, std::move(out));
}

template <typename Scalar>
Lattice<Scalar> default_dual_lattice(const GridFn<Scalar>& f) {
  const auto& g = f.grid;
  const Index d = g.dim();
  const Scalar h_min = g.steps.minCoeff();
  Vector<Scalar> mins(d), steps(d);
  Eigen::VectorXi counts(d);
  for (Index a = 0; a < d; ++a) {
    // Slopes of the convex envelope are bounded by the slopes between
    // consecutive finite nodes along each axis line.
    Scalar slope = 0;
    for (Index atom = 0; atom < f.atoms(); ++atom) {
      for (Index i = 0; i < g.nodes(); ++i) {
        const Eigen::VectorXi mi = g.multi_index(i);
        if (f.values(atom, i) == infinity<Scalar>()) continue;
        Eigen::VectorXi mj = mi;
        for (int step = 1; mi(a) + step < g.counts(a); ++step) {
          mj(a) = mi(a) + step;
          const Scalar v = f.values(atom, g.flat_index(mj));
          if (v == infinity<Scalar>()) continue;
          slope = std::max(slope, std::abs(v - f.values(atom, i)) / (static_cast<Scalar>(step) * g.steps(a)));
          break;
        }
      }
    }
    if (d > 1) slope *= 2;
    const Scalar width = static_cast<Scalar>(std::max(1, g.counts(a) - 1)) * g.steps(a);
    // A dual step eta keeps the biconjugate within (eta / 2) * width of the
    // envelope per axis; this choice bounds the total by one primal step.
    const Scalar eta = std::exp2(std::floor(std::log2(Scalar(2) * h_min / (static_cast<Scalar>(d) * width))));
    const Scalar half = std::ceil(slope / eta) + 1;
    if (half > Scalar(4e6)) throw Error("default dual lattice would be too large; pass one explicitly");
    steps(a) = eta;
    mins(a) = -half * eta;
    counts(a) = static_cast<int>(2 * half) + 1;
  }
  if (Lattice<Scalar>(mins, steps, counts).nodes() > Index(8000000))
    throw Error("default dual lattice would be too large; pass one explicitly");
  return Lattice<Scalar>(mins, steps, counts);
}

template <typename Scalar>
GridFn<Scalar> lower_convex_envelope(const GridFn<Scalar>& f) {
  detail::require_proper(f, "lower_convex_envelope");
  const auto& g = f.grid;
  const Index k = f.atoms();
  const Index n = g.nodes();
  Matrix<Scalar> out = Matrix<Scalar>::Constant(k, n, infinity<Scalar>());
  if (g.dim() == 1) {
    for_each_atom(k, [&](Index atom) {
      // Andrew's monotone chain, lower hull, on node indices.
      std::vector<Index> hull;
      auto cross = [&](Index o, Index a, Index b) {
        const Scalar xo = static_cast<Scalar>(o), xa = static_cast<Scalar>(a), xb = static_cast<Scalar>(b);
        return (xa - xo) * (f.values(atom, b) - f.values(atom, o)) - (f.values(atom, a) - f.values(atom, o)) * (xb - xo);
      };
      for (Index i = 0; i < n; ++i) {
        if (f.values(atom, i) == infinity<Scalar>()) continue;
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0) hull.pop_back();
        hull.push_back(i);
      }
      for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
        const Index a = hull[s], b = hull[s + 1];
        for (Index i = a; i <= b; ++i) {
          const Scalar t = static_cast<Scalar>(i - a) / static_cast<Scalar>(b - a);
          out(atom, i) = f.values(atom, a) + t * (f.values(atom, b) - f.values(atom, a));
        }
      }
      out(atom, hull.front()) = f.values(atom, hull.front());
    });
  } else {
    // Per node: min sum w_i f(x_i) over convex weights reproducing the node.
    for_each_atom(k, [&](Index atom) {
      std::vector<Index> finite;
      for (Index i = 0; i < n; ++i)
        if (f.values(atom, i) != infinity<Scalar>()) finite.push_back(i);
      const Index nf = static_cast<Index>(finite.size());
      for (Index node = 0; node < n; ++node) {
        LinearProgram<Scalar> lp(nf);
        Matrix<Scalar> rows(g.dim() + 1, nf);
        for (Index c = 0; c < nf; ++c) {
          const auto i = finite[static_cast<std::size_t>(c)];
          lp.cost(c) = f.values(atom, i);
          rows.col(c).head(g.dim()) = g.node(i);
          rows(g.dim(), c) = 1;
        }
        Vector<Scalar> rhs(g.dim() + 1);
        rhs.head(g.dim()) = g.node(node);
        rhs(g.dim()) = 1;
        for (Index r = 0; r < rows.rows(); ++r) lp.add_eq(rows.row(r), rhs(r));
        const auto sol = solve_lp(lp);
        if (sol.status == LpStatus::optimal) out(atom, node) = sol.objective;
      }
    });
  }
  return GridFn<Scalar>(f.space, g, std::move(out));
}

template <typename Scalar>
FenchelMoreauReport<Scalar> fenchel_moreau_check(const GridFn<Scalar>& f, const std::optional<Lattice<Scalar>>& dual) {
  const Lattice<Scalar> dl = dual ? *dual : default_dual_lattice(f);
  auto conj = conjugate(f, dl);
  auto bi = conjugate(conj, f.grid);
  auto tri = conjugate(bi, dl);
  auto env = lower_convex_envelope(f);
  const Index k = f.atoms();
  Vector<Scalar> dev = Vector<Scalar>::Zero(k), gap(k), mismatch(k);
  for (Index atom = 0; atom < k; ++atom) {
    Scalar g = infinity<Scalar>();
    for (Index i = 0; i < f.grid.nodes(); ++i) {
      if (env.values(atom, i) != infinity<Scalar>())
        dev(atom) = std::max(dev(atom), std::abs(bi.values(atom, i) - env.values(atom, i)));
      if (f.values(atom, i) != infinity<Scalar>()) g = std::min(g, f.values(atom, i) - bi.values(atom, i));
    }
    gap(atom) = g;
    mismatch(atom) = (conj.values.row(atom) - tri.values.row(atom)).cwiseAbs().maxCoeff();
  }
  return {dl,
          std::move(conj),
          std::move(bi),
          std::move(tri),
          std::move(env),
          CondScalar<Scalar>(std::move(dev)),
          CondScalar<Scalar>(std::move(gap)),
          CondScalar<Scalar>(std::move(mismatch))};
}

namespace detail {

template <typename Scalar>
struct Conv2 {
  GridFn<Scalar> g;
  Eigen::MatrixXi left, right;
};

template <typename Scalar>
Conv2<Scalar> min_plus(const GridFn<Scalar>& a, const GridFn<Scalar>& b) {
  require_same_space(a.space, b.space, "inf_convolution");
  if (a.grid.dim() != b.grid.dim() || a.grid.steps != b.grid.steps)
    throw Error("inf_convolution: lattices must share dimension and steps");
  const Lattice<Scalar> out(a.grid.mins + b.grid.mins, a.grid.steps,
                            (a.grid.counts + b.grid.counts).array() - 1);
  const Index k = a.atoms();
  const Index na = a.grid.nodes(), nb = b.grid.nodes(), no = out.nodes();
  // Output node of (i, j) = flat index of the summed multi-indices.
  std::vector<Eigen::VectorXi> ma(static_cast<std::size_t>(na)), mb(static_cast<std::size_t>(nb));
  for (Index i = 0; i < na; ++i) ma[static_cast<std::size_t>(i)] = a.grid.multi_index(i);
  for (Index j = 0; j < nb; ++j) mb[static_cast<std::size_t>(j)] = b.grid.multi_index(j);
  Matrix<Scalar> v = Matrix<Scalar>::Constant(k, no, infinity<Scalar>());
  Eigen::MatrixXi left = Eigen::MatrixXi::Constant(k, no, -1), right = Eigen::MatrixXi::Constant(k, no, -1);
  for_each_atom(k, [&](Index atom) {
    for (Index i = 0; i < na; ++i) {
      const Scalar fa = a.values(atom, i);
      if (fa == infinity<Scalar>()) continue;
      for (Index j = 0; j < nb; ++j) {
        const Scalar fb = b.values(atom, j);
        if (fb == infinity<Scalar>()) continue;
        const Index o = out.flat_index(ma[static_cast<std::size_t>(i)] + mb[static_cast<std::size_t>(j)]);
        if (fa + fb < v(atom, o)) {
          v(atom, o) = fa + fb;
          left(atom, o) = static_cast<int>(i);
          right(atom, o) = static_cast<int>(j);
        }
      }
    }
  });
  return {GridFn<Scalar>(a.space, out, std::move(v)), std::move(left), std::move(right)};
}

template <typename Scalar>
Scalar midpoint_violation(const GridFn<Scalar>& g, Index atom) {
  const auto& l = g.grid;
  const Index n = l.nodes();
  Scalar worst = 0;
  std::vector<Eigen::VectorXi> mi(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) mi[static_cast<std::size_t>(i)] = l.multi_index(i);
  for (Index i = 0; i < n; ++i) {
    const Scalar gi = g.values(atom, i);
    if (gi == infinity<Scalar>()) continue;
    for (Index j = i + 1; j < n; ++j) {
      const Scalar gj = g.values(atom, j);
      if (gj == infinity<Scalar>()) continue;
      const Eigen::VectorXi s = mi[static_cast<std::size_t>(i)] + mi[static_cast<std::size_t>(j)];
      if (((s.array() / 2) * 2 != s.array()).any()) continue;
      const Scalar gm = g.values(atom, l.flat_index(s / 2));
      worst = std::max(worst, gm - (gi + gj) / 2);
    }
  }
  return worst;
}

}  // namespace detail

template <typename Scalar>
std::vector<CondVector<Scalar>> InfConvolution<Scalar>::splitting(const std::vector<GridFn<Scalar>>& fs,
                                                                  Index node) const {
  std::vector<CondVector<Scalar>> out;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    Matrix<Scalar> rows = Matrix<Scalar>::Zero(g.atoms(), g.grid.dim());
    for (Index atom = 0; atom < g.atoms(); ++atom) {
      const int at = split[j](atom, node);
      if (at >= 0) rows.row(atom) = fs[j].grid.node(at).transpose();
    }
    out.emplace_back(g.space, std::move(rows));
  }
  return out;
}

template <typename Scalar>
InfConvolution<Scalar> inf_convolution(const std::vector<GridFn<Scalar>>& fs) {
  if (fs.empty()) throw Error("inf_convolution needs at least one function");
  for (const auto& f : fs) detail::require_proper(f, "inf_convolution");
  GridFn<Scalar> acc = fs.front();
  std::vector<Eigen::MatrixXi> split;
  {
    Eigen::MatrixXi id(acc.atoms(), acc.grid.nodes());
    for (Index atom = 0; atom < acc.atoms(); ++atom)
      for (Index i = 0; i < acc.grid.nodes(); ++i) id(atom, i) = acc.values(atom, i) == infinity<Scalar>() ? -1 : static_cast<int>(i);
    split.push_back(std::move(id));
  }
  for (std::size_t j = 1; j < fs.size(); ++j) {
    auto step = detail::min_plus(acc, fs[j]);
    std::vector<Eigen::MatrixXi> next;
    for (const auto& s : split) {
      Eigen::MatrixXi composed = Eigen::MatrixXi::Constant(step.left.rows(), step.left.cols(), -1);
      for (Index atom = 0; atom < composed.rows(); ++atom)
        for (Index o = 0; o < composed.cols(); ++o)
          if (step.left(atom, o) >= 0) composed(atom, o) = s(atom, step.left(atom, o));
      next.push_back(std::move(composed));
    }
    next.push_back(std::move(step.right));
    split = std::move(next);
    acc = std::move(step.g);
  }
  Vector<Scalar> mid(acc.atoms());
  for_each_atom(acc.atoms(), [&](Index atom) { mid(atom) = detail::midpoint_violation(acc, atom); });
  return {std::move(acc), std::move(split), CondExtScalar<Scalar>(std::move(mid))};
}

template <typename Scalar>
GridFn<Scalar> resample(const GridFn<Scalar>& f, const Lattice<Scalar>& target) {
  if (target.dim() != f.grid.dim() || target.steps != f.grid.steps) throw Error("resample: lattice steps differ");
  Eigen::VectorXi offset(target.dim());
  for (Index a = 0; a < target.dim(); ++a) {
    const Scalar s = (target.mins(a) - f.grid.mins(a)) / target.steps(a);
    if (std::abs(s - std::round(s)) > Scalar(1e-9)) throw Error("resample: lattices are not aligned");
    offset(a) = static_cast<int>(std::round(s));
  }
  Matrix<Scalar> v = Matrix<Scalar>::Constant(f.atoms(), target.nodes(), infinity<Scalar>());
  for (Index i = 0; i < target.nodes(); ++i) {
    const Eigen::VectorXi m = target.multi_index(i) + offset;
    if ((m.array() < 0).any() || (m.array() >= f.grid.counts.array()).any()) continue;
    v.col(i) = f.values.col(f.grid.flat_index(m));
  }
  return GridFn<Scalar>(f.space, target, std::move(v));
}

namespace detail {

// Discrete subdifferential of a 1-d grid function at node k: the interval
// between the backward and forward difference quotients.
template <typename Scalar>
std::pair<Scalar, Scalar> slope_interval(const GridFn<Scalar>& f, Index atom, Index k) {
  const Scalar h = f.grid.steps(0);
  const Index n = f.grid.nodes();
  const Scalar v = f.values(atom, k);
  Scalar lo = -infinity<Scalar>(), hi = infinity<Scalar>();
  if (k > 0 && f.values(atom, k - 1) != infinity<Scalar>()) lo = (v - f.values(atom, k - 1)) / h;
  if (k + 1 < n && f.values(atom, k + 1) != infinity<Scalar>()) hi = (f.values(atom, k + 1) - v) / h;
  return {lo, hi};
}

}  // namespace detail

template <typename Scalar>
InfConvReport<Scalar> infconv_checks(const std::vector<GridFn<Scalar>>& fs, const std::optional<Lattice<Scalar>>& dual) {
  const auto conv = inf_convolution(fs);
  const auto& g = conv.g;
  const Lattice<Scalar> dl = dual ? *dual : default_dual_lattice(g);
  const Index k = g.atoms();
  const Index d = g.grid.dim();

  // (a) conjugate additivity.
  const auto gc = conjugate(g, dl);
  Matrix<Scalar> sum = Matrix<Scalar>::Zero(k, dl.nodes());
  for (const auto& f : fs) sum += conjugate(f, dl).values;
  Vector<Scalar> dev = Vector<Scalar>::Zero(k);
  for (Index atom = 0; atom < k; ++atom)
    for (Index j = 0; j < dl.nodes(); ++j)
      if (std::isfinite(gc.values(atom, j)) && std::isfinite(sum(atom, j)))
        dev(atom) = std::max(dev(atom), std::abs(gc.values(atom, j) - sum(atom, j)));

  // (b) intersection of the pieces' slope intervals at the split points
  // lies in the slope interval of the convolution.
  InfConvReport<Scalar> rep{dl, CondScalar<Scalar>(dev), d == 1, CondExtScalar<Scalar>::constant(k, 0), dl.steps(0), {}, {}};
  if (d == 1) {
    Vector<Scalar> viol = Vector<Scalar>::Zero(k);
    for (Index atom = 0; atom < k; ++atom) {
      for (Index z = 0; z < g.grid.nodes(); ++z) {
        if (g.values(atom, z) == infinity<Scalar>()) continue;
        Scalar lo = -infinity<Scalar>(), hi = infinity<Scalar>();
        for (std::size_t j = 0; j < fs.size(); ++j) {
          const auto [l, h] = detail::slope_interval(fs[j], atom, conv.split[j](atom, z));
          lo = std::max(lo, l);
          hi = std::min(hi, h);
        }
        if (lo > hi) continue;
        const auto [gl, gh] = detail::slope_interval(g, atom, z);
        Scalar v = 0;
        if (lo < gl) v = std::max(v, gl - lo);
        if (hi > gh) v = std::max(v, hi - gh);
        viol(atom) = std::max(viol(atom), v);
      }
    }
    rep.subdiff_violation = CondExtScalar<Scalar>(std::move(viol));
  }

  // (c) a split point interior to some dom f_j puts the node in int dom g.
  auto interior = [](const GridFn<Scalar>& f, Index atom, Index node) {
    const auto& l = f.grid;
    const Eigen::VectorXi m = l.multi_index(node);
    for (Index a = 0; a < l.dim(); ++a) {
      for (int s : {-1, 1}) {
        Eigen::VectorXi nb = m;
        nb(a) += s;
        if (nb(a) < 0 || nb(a) >= l.counts(a) || f.values(atom, l.flat_index(nb)) == infinity<Scalar>()) return false;
      }
    }
    return true;
  };
  rep.interior_violations = Eigen::VectorXi::Zero(k);
  rep.interior_checked = Eigen::VectorXi::Zero(k);
  for (Index atom = 0; atom < k; ++atom) {
    for (Index z = 0; z < g.grid.nodes(); ++z) {
      if (g.values(atom, z) == infinity<Scalar>()) continue;
      bool hypothesis = false;
      for (std::size_t j = 0; j < fs.size() && !hypothesis; ++j) hypothesis = interior(fs[j], atom, conv.split[j](atom, z));
      if (!hypothesis) continue;
      ++rep.interior_checked(atom);
      if (!interior(g, atom, z)) ++rep.interior_violations(atom);
    }
  }
  return rep;
}

}  // namespace condcvx
