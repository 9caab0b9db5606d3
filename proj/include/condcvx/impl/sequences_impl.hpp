#pragma once

#include <cmath>

#include "condcvx/parallel.hpp"
#include "condcvx/sequences.hpp"

namespace condcvx {

template <typename Scalar>
CondSequence<Scalar>::CondSequence(std::vector<CondVector<Scalar>> terms, std::optional<CondScalar<Scalar>> bound)
    : terms_(std::move(terms)), bound_(std::move(bound)) {
  if (terms_.empty()) throw Error("conditional sequence needs at least one term");
  for (const auto& x : terms_) CondVector<Scalar>::check(terms_.front(), x, "conditional sequence");
  if (bound_) {
    if (bound_->atoms() != atoms()) throw Error("sequence bound: atom count mismatch");
    for (const auto& x : terms_)
      for (Index i = 0; i < atoms(); ++i)
        if (x.row(i).norm() > (*bound_)[i]) throw Error("sequence bound does not dominate ||X_n||");
  }
}

template <typename Scalar>
BwExtraction<Scalar> bw_extract(const CondSequence<Scalar>& seq, int depth, Scalar slack) {
  if (depth < 1) throw Error("bw_extract: depth must be >= 1");
  if (!(slack >= 0)) throw Error("bw_extract: slack must be nonnegative");
  const Index k = seq.atoms();
  const Index d = seq.dim();
  const Index t = seq.horizon();
  Eigen::MatrixXi picks = Eigen::MatrixXi::Zero(k, depth);
  Matrix<Scalar> levels(k, d);
  Vector<Scalar> excess = Vector<Scalar>::Zero(k);
  Mask stalled = Mask::Constant(k, false);
  for_each_atom(k, [&](Index atom) {
    std::vector<Index> keep(static_cast<std::size_t>(t));
    for (Index n = 0; n < t; ++n) keep[static_cast<std::size_t>(n)] = n + 1;
    for (Index i = 0; i < d; ++i) {
      Scalar level = std::numeric_limits<Scalar>::infinity();
      for (Index n : keep) level = std::min(level, seq(n).coords()(atom, i));
      levels(atom, i) = level;
      std::vector<Index> next;
      for (Index n : keep)
        if (seq(n).coords()(atom, i) <= level + slack) next.push_back(n);
      keep = std::move(next);
    }
    if (static_cast<Index>(keep.size()) < depth) {
      stalled(atom) = true;
      return;
    }
    for (int j = 0; j < depth; ++j) {
      const Index n = keep[static_cast<std::size_t>(j)];
      picks(atom, j) = static_cast<int>(n);
      for (Index i = 0; i < d; ++i) excess(atom) = std::max(excess(atom), seq(n).coords()(atom, i) - levels(atom, i));
    }
  });
  if (stalled.any()) throw PreconditionError("bw_extract: horizon exhausted before the requested depth", stalled);
  std::vector<CondInteger> indices;
  for (int j = 0; j < depth; ++j) indices.emplace_back(picks.col(j));
  auto limit = select_by_index<Scalar>(seq.terms(), indices.back());
  return {std::move(indices), std::move(limit), CondVector<Scalar>(seq.space(), std::move(levels)),
          CondScalar<Scalar>(std::move(excess))};
}

template <typename Scalar>
Vector<Scalar> tail_diameters(const CondSequence<Scalar>& seq, Index atom) {
  const Index t = seq.horizon();
  Vector<Scalar> diam = Vector<Scalar>::Zero(t);
  for (Index n = t - 1; n-- > 0;) {
    Scalar far = diam(n + 1);
    for (Index m = n + 1; m < t; ++m) far = std::max(far, (seq(n + 1).row(atom) - seq(m + 1).row(atom)).norm());
    diam(n) = far;
  }
  return diam;
}

template <typename Scalar>
CauchyResult<Scalar> cauchy_limit(const CondSequence<Scalar>& seq, const std::vector<CondScalar<Scalar>>& schedule,
                                  Index min_tail) {
  const Index k = seq.atoms();
  const Index t = seq.horizon();
  if (min_tail == 0) min_tail = (t + 1) / 2;
  if (min_tail < 1 || min_tail > t) throw Error("cauchy_limit: min_tail must lie in 1..T");
  for (const auto& eps : schedule) {
    if (eps.atoms() != k) throw Error("cauchy_limit: schedule atom count mismatch");
    if ((eps.values().array() <= 0).any()) throw Error("cauchy_limit: schedule entries must be strictly positive");
  }
  const Index last_cut = t - min_tail + 1;
  const auto s = schedule.size();
  std::vector<Eigen::VectorXi> cuts(s, Eigen::VectorXi::Zero(k));
  Matrix<Scalar> diams(k, static_cast<Index>(s));
  Mask ok = Mask::Constant(k, true);
  for_each_atom(k, [&](Index atom) {
    const Vector<Scalar> diam = tail_diameters(seq, atom);
    for (std::size_t e = 0; e < s; ++e) {
      diams(atom, static_cast<Index>(e)) = diam(last_cut - 1);
      for (Index n0 = 1; n0 <= last_cut; ++n0) {
        if (diam(n0 - 1) <= schedule[e][atom]) {
          cuts[e](atom) = static_cast<int>(n0);
          diams(atom, static_cast<Index>(e)) = diam(n0 - 1);
          break;
        }
      }
      if (cuts[e](atom) == 0) ok(atom) = false;
    }
  });
  std::vector<CondScalar<Scalar>> diameters;
  for (std::size_t e = 0; e < s; ++e) diameters.emplace_back(diams.col(static_cast<Index>(e)));
  return {seq(t), MeasurableSet(seq.space(), std::move(ok)), std::move(cuts), std::move(diameters)};
}

}  // namespace condcvx
