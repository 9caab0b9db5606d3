#pragma once

#include <cmath>

#include "condcvx/parallel.hpp"
#include "condcvx/stratified.hpp"

namespace condcvx {

namespace detail {

// Residual of v after projecting onto the orthonormal rows q (two passes of
// classical Gram-Schmidt, which is enough to keep orthogonality at rounding
// level for the small d used here).
template <typename Scalar>
Vector<Scalar> residual(const Matrix<Scalar>& q, Index used, Vector<Scalar> v) {
  for (int pass = 0; pass < 2; ++pass)
    for (Index j = 0; j < used; ++j) v -= q.row(j).dot(v) * q.row(j).transpose();
  return v;
}

template <typename Scalar>
void canonical_sign(auto&& row) {
  for (Index c = 0; c < row.size(); ++c) {
    if (std::abs(row(c)) > Scalar(1e-12)) {
      if (row(c) < 0) row *= Scalar(-1);
      return;
    }
  }
}

template <typename Scalar>
Matrix<Scalar> gram_schmidt_complete(const Matrix<Scalar>& rows, Index d) {
  Matrix<Scalar> q = Matrix<Scalar>::Zero(d, d);
  Index used = 0;
  for (Index i = 0; i < rows.rows(); ++i) {
    const Vector<Scalar> z = residual<Scalar>(q, used, rows.row(i).transpose());
    const Scalar n = z.norm();
    if (!(n > 0)) throw Error("Gram-Schmidt on dependent rows");
    q.row(used) = (z / n).transpose();
    canonical_sign<Scalar>(q.row(used));
    ++used;
  }
  // Completion: per step some base vector keeps a residual of at least
  // 1/sqrt(d), so the threshold below never starves.
  const Scalar keep = Scalar(0.5) / std::sqrt(static_cast<Scalar>(d));
  for (Index e = 0; e < d && used < d; ++e) {
    const Vector<Scalar> z = residual<Scalar>(q, used, Vector<Scalar>::Unit(d, e));
    const Scalar n = z.norm();
    if (n <= keep) continue;
    q.row(used) = (z / n).transpose();
    canonical_sign<Scalar>(q.row(used));
    ++used;
  }
  if (used != d) throw Error("frame completion failed");
  return q;
}

}  // namespace detail

template <typename Scalar>
Matrix<Scalar> OrthonormalFrame<Scalar>::at(Index atom) const {
  Matrix<Scalar> m(dim, dim);
  for (Index j = 0; j < dim; ++j) m.row(j) = frame[static_cast<std::size_t>(j)].row(atom);
  return m;
}

template <typename Scalar>
CondVector<Scalar> CondLinearMap<Scalar>::operator()(const CondVector<Scalar>& x) const {
  require_same_space(space, x.space(), "linear map");
  if (x.dim() != cols()) throw Error("linear map: dimension mismatch");
  Matrix<Scalar> out(x.atoms(), rows());
  for (Index i = 0; i < x.atoms(); ++i) out.row(i) = (matrices[static_cast<std::size_t>(i)] * x.row(i).transpose()).transpose();
  return {space, std::move(out)};
}

template <typename Scalar>
CondLinearMap<Scalar> CondLinearMap<Scalar>::identity(SpacePtr space, Index d) {
  const auto k = static_cast<std::size_t>(space->atoms());
  return {std::move(space), std::vector<Matrix<Scalar>>(k, Matrix<Scalar>::Identity(d, d))};
}

template <typename Scalar>
StratifiedBasis<Scalar> rank_partition(std::span<const CondVector<Scalar>> generators, Scalar eps_rank) {
  if (generators.empty()) throw Error("rank_partition needs at least one generator");
  const auto& g0 = generators.front();
  for (const auto& g : generators) CondVector<Scalar>::check(g0, g, "rank_partition");
  const Index k_atoms = g0.atoms();
  const Index d = g0.dim();
  const Index n = static_cast<Index>(generators.size());

  // Per atom: the greedy picks (lowest-index generator passing the residual
  // test at each step). Picking X_i this way realizes the largest set on
  // which an i-th independent element exists.
  std::vector<std::vector<Index>> picks(static_cast<std::size_t>(k_atoms));
  for_each_atom(k_atoms, [&](Index atom) {
    Matrix<Scalar> q = Matrix<Scalar>::Zero(d, d);
    Index used = 0;
    auto& mine = picks[static_cast<std::size_t>(atom)];
    bool progress = true;
    while (used < d && progress) {
      progress = false;
      for (Index j = 0; j < n; ++j) {
        const Vector<Scalar> row = generators[static_cast<std::size_t>(j)].row(atom).transpose();
        const Vector<Scalar> z = detail::residual<Scalar>(q, used, row);
        if (z.norm() > eps_rank * std::max(Scalar(1), row.norm())) {
          q.row(used++) = (z / z.norm()).transpose();
          mine.push_back(j);
          progress = true;
          break;
        }
      }
    }
  });

  StratifiedBasis<Scalar> out;
  out.space = g0.space();
  out.dim = d;
  out.labels.resize(k_atoms);
  Index k = 0;
  for (Index atom = 0; atom < k_atoms; ++atom) {
    out.labels(atom) = static_cast<int>(picks[static_cast<std::size_t>(atom)].size());
    k = std::max<Index>(k, out.labels(atom));
  }
  out.source = Eigen::MatrixXi::Zero(k_atoms, k);
  for (Index i = 0; i < k; ++i) {
    Matrix<Scalar> rows(k_atoms, d);
    for (Index atom = 0; atom < k_atoms; ++atom) {
      const auto& mine = picks[static_cast<std::size_t>(atom)];
      // Off {labels >= i + 1} the vector X_i is 0 and has no source.
      if (i >= static_cast<Index>(mine.size())) {
        out.source(atom, i) = -1;
        rows.row(atom).setZero();
        continue;
      }
      const Index j = mine[static_cast<std::size_t>(i)];
      out.source(atom, i) = static_cast<int>(j);
      rows.row(atom) = generators[static_cast<std::size_t>(j)].row(atom);
    }
    out.vectors.emplace_back(out.space, std::move(rows));
  }
  return out;
}

template <typename Scalar>
OrthonormalFrame<Scalar> orthonormalize(const StratifiedBasis<Scalar>& basis) {
  const Index k_atoms = basis.labels.size();
  const Index d = basis.dim;
  std::vector<Matrix<Scalar>> per_atom(static_cast<std::size_t>(k_atoms));
  for_each_atom(k_atoms, [&](Index atom) {
    const Index r = basis.labels(atom);
    Matrix<Scalar> rows(r, d);
    for (Index i = 0; i < r; ++i) rows.row(i) = basis.vectors[static_cast<std::size_t>(i)].row(atom);
    per_atom[static_cast<std::size_t>(atom)] = detail::gram_schmidt_complete<Scalar>(rows, d);
  });
  OrthonormalFrame<Scalar> out{basis.space, d, basis.labels, {}};
  for (Index j = 0; j < d; ++j) {
    Matrix<Scalar> rows(k_atoms, d);
    for (Index atom = 0; atom < k_atoms; ++atom) rows.row(atom) = per_atom[static_cast<std::size_t>(atom)].row(j);
    out.frame.emplace_back(basis.space, std::move(rows));
  }
  return out;
}

template <typename Scalar>
OrthonormalFrame<Scalar> submodule_frame(std::span<const CondVector<Scalar>> generators, Scalar eps_rank) {
  return orthonormalize(rank_partition(generators, eps_rank));
}

template <typename Scalar>
OrthonormalFrame<Scalar> complement(const OrthonormalFrame<Scalar>& f) {
  const Index k_atoms = f.labels.size();
  const Index d = f.dim;
  OrthonormalFrame<Scalar> out{f.space, d, Eigen::VectorXi::Constant(k_atoms, static_cast<int>(d)) - f.labels, {}};
  std::vector<Matrix<Scalar>> rows(static_cast<std::size_t>(d), Matrix<Scalar>(k_atoms, d));
  for (Index atom = 0; atom < k_atoms; ++atom) {
    const Index r = f.labels(atom);
    for (Index j = 0; j < d; ++j) {
      const Index from = j < d - r ? r + j : j - (d - r);
      rows[static_cast<std::size_t>(j)].row(atom) = f.frame[static_cast<std::size_t>(from)].row(atom);
    }
  }
  for (auto& r : rows) out.frame.emplace_back(f.space, std::move(r));
  return out;
}

template <typename Scalar>
std::pair<CondVector<Scalar>, CondVector<Scalar>> decompose(const CondVector<Scalar>& x,
                                                            const OrthonormalFrame<Scalar>& f) {
  require_same_space(x.space(), f.space, "decompose");
  if (x.dim() != f.dim) throw Error("decompose: dimension mismatch");
  Matrix<Scalar> y = Matrix<Scalar>::Zero(x.atoms(), x.dim());
  for (Index atom = 0; atom < x.atoms(); ++atom) {
    for (Index j = 0; j < f.labels(atom); ++j) {
      const auto u = f.frame[static_cast<std::size_t>(j)].row(atom);
      y.row(atom) += u.dot(x.row(atom)) * u;
    }
  }
  Matrix<Scalar> z = x.coords() - y;
  return {CondVector<Scalar>(x.space(), std::move(y)), CondVector<Scalar>(x.space(), std::move(z))};
}

template <typename Scalar>
CondScalar<Scalar> linear_map_norm(const CondLinearMap<Scalar>& f) {
  const Index k_atoms = static_cast<Index>(f.matrices.size());
  Vector<Scalar> out(k_atoms);
  for_each_atom(k_atoms, [&](Index atom) {
    const auto& m = f.matrices[static_cast<std::size_t>(atom)];
    if (m.size() == 0) {
      out(atom) = 0;
      return;
    }
    Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
    out(atom) = svd.singularValues()(0);
  });
  return CondScalar<Scalar>(std::move(out));
}

template <typename Scalar>
CondLinearMap<Scalar> extend_linear(const OrthonormalFrame<Scalar>& f, std::span<const FrameImage<Scalar>> images) {
  const Index k_atoms = f.labels.size();
  if (images.empty()) throw Error("extend_linear needs at least one image");
  if (static_cast<Index>(images.size()) > f.dim) throw Error("extend_linear: more images than frame vectors");
  const Index m = images.front().value.dim();
  Mask complement_given = Mask::Constant(k_atoms, false);
  Mask missing = Mask::Constant(k_atoms, false);
  for (std::size_t j = 0; j < images.size(); ++j) {
    const auto& img = images[j];
    require_same_space(f.space, img.defined.space(), "extend_linear");
    require_same_space(f.space, img.value.space(), "extend_linear");
    if (img.value.dim() != m) throw Error("extend_linear: images of different dimensions");
    for (Index atom = 0; atom < k_atoms; ++atom) {
      const bool inside = static_cast<Index>(j) < f.labels(atom);
      if (img.defined.contains(atom) && !inside) complement_given(atom) = true;
      if (!img.defined.contains(atom) && inside) missing(atom) = true;
    }
  }
  for (Index atom = 0; atom < k_atoms; ++atom)
    if (f.labels(atom) > static_cast<int>(images.size())) missing(atom) = true;
  if (complement_given.any())
    throw PreconditionError("extend_linear: image given for a complement direction", complement_given);
  if (missing.any()) throw PreconditionError("extend_linear: image missing for a submodule direction", missing);

  CondLinearMap<Scalar> out{f.space, std::vector<Matrix<Scalar>>(static_cast<std::size_t>(k_atoms))};
  for (Index atom = 0; atom < k_atoms; ++atom) {
    Matrix<Scalar> a = Matrix<Scalar>::Zero(m, f.dim);
    for (Index j = 0; j < f.labels(atom); ++j)
      a += images[static_cast<std::size_t>(j)].value.row(atom).transpose() * f.frame[static_cast<std::size_t>(j)].row(atom);
    out.matrices[static_cast<std::size_t>(atom)] = std::move(a);
  }
  return out;
}

template <typename Scalar>
std::pair<CondVector<Scalar>, OrthonormalFrame<Scalar>> hyperplane_normal_form(const CondVector<Scalar>& z,
                                                                               const CondScalar<Scalar>& v,
                                                                               const MeasurableSet& a) {
  require_same_space(z.space(), a.space(), "hyperplane_normal_form");
  if (v.atoms() != z.atoms()) throw Error("hyperplane_normal_form: atom count mismatch");
  const Index k_atoms = z.atoms();
  const Index d = z.dim();
  const Mask vanishing = a.mask() && (z.coords().rowwise().norm().array() == Scalar(0));
  if (vanishing.any()) throw PreconditionError("hyperplane normal vanishes on part of its support", vanishing);

  Matrix<Scalar> x0 = Matrix<Scalar>::Zero(k_atoms, d);
  std::vector<Matrix<Scalar>> rows(static_cast<std::size_t>(d), Matrix<Scalar>(k_atoms, d));
  Eigen::VectorXi labels = Eigen::VectorXi::Zero(k_atoms);
  for (Index atom = 0; atom < k_atoms; ++atom) {
    Matrix<Scalar> q = Matrix<Scalar>::Identity(d, d);
    if (a.contains(atom)) {
      const Vector<Scalar> zr = z.row(atom).transpose();
      const Scalar n2 = zr.squaredNorm();
      x0.row(atom) = (v[atom] / n2) * zr.transpose();
      // Complete Z/||Z|| to a frame, then move it to the last slot.
      const Matrix<Scalar> full = detail::gram_schmidt_complete<Scalar>((zr / std::sqrt(n2)).transpose(), d);
      q.topRows(d - 1) = full.bottomRows(d - 1);
      q.row(d - 1) = (zr / std::sqrt(n2)).transpose();
      labels(atom) = static_cast<int>(d - 1);
    }
    for (Index j = 0; j < d; ++j) rows[static_cast<std::size_t>(j)].row(atom) = q.row(j);
  }
  OrthonormalFrame<Scalar> frame{z.space(), d, labels, {}};
  for (auto& r : rows) frame.frame.emplace_back(z.space(), std::move(r));
  return {CondVector<Scalar>(z.space(), std::move(x0)), std::move(frame)};
}

}  // namespace condcvx
