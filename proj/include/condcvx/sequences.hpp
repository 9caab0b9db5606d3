#pragma once

// Finite-horizon conditional sequences: the measurable-subsequence
// Bolzano-Weierstrass extractor and the conditional Cauchy test.

#include <optional>
#include <vector>

#include "condcvx/core.hpp"

namespace condcvx {

template <typename Scalar>
class CondSequence {
 public:
  /// Terms X_1..X_T. If `bound` is given it must dominate every ||X_n||.
  explicit CondSequence(std::vector<CondVector<Scalar>> terms, std::optional<CondScalar<Scalar>> bound = std::nullopt);

  Index horizon() const { return static_cast<Index>(terms_.size()); }
  Index atoms() const { return terms_.front().atoms(); }
  Index dim() const { return terms_.front().dim(); }
  const SpacePtr& space() const { return terms_.front().space(); }
  /// 1-based, as in the index functions N.
  const CondVector<Scalar>& operator()(Index n) const { return terms_.at(static_cast<std::size_t>(n - 1)); }
  const std::vector<CondVector<Scalar>>& terms() const { return terms_; }
  const std::optional<CondScalar<Scalar>>& bound() const { return bound_; }

 private:
  std::vector<CondVector<Scalar>> terms_;
  std::optional<CondScalar<Scalar>> bound_;
};

template <typename Scalar>
struct BwExtraction {
  std::vector<CondInteger> indices;  // N_1 < ... < N_m per atom
  CondVector<Scalar> limit;          // X_{N_m}
  CondVector<Scalar> levels;         // per atom and coordinate, the horizon liminf L_i used
  CondScalar<Scalar> max_excess;     // max over n, i of X^i_{N_n} - L_i (at most slack)
};

/// Coordinates are processed in order 1..d. At coordinate i the current
/// index set is thinned to the indices whose i-th value is within `slack` of
/// L_i, the minimum of that coordinate over the current index set (the
/// smallest tail infimum within the horizon). The first `depth` surviving
/// indices are returned. Atoms where fewer than `depth` survive raise a
/// PreconditionError carrying that stall set.
template <typename Scalar>
BwExtraction<Scalar> bw_extract(const CondSequence<Scalar>& seq, int depth, Scalar slack);

template <typename Scalar>
struct CauchyResult {
  CondVector<Scalar> limit;  // X_T
  MeasurableSet cauchy_on;
  /// Per schedule entry: the smallest admissible cut n0 with tail diameter
  /// <= eps, 0 where none exists.
  std::vector<Eigen::VectorXi> cuts;
  /// Per schedule entry: the tail diameter at the cut (at the last admissible
  /// cut where none exists).
  std::vector<CondScalar<Scalar>> diameters;
};

/// A cut n0 is admissible when the tail n0..T has at least `min_tail` terms
/// (0 selects ceil(T/2)).
template <typename Scalar>
CauchyResult<Scalar> cauchy_limit(const CondSequence<Scalar>& seq, const std::vector<CondScalar<Scalar>>& schedule,
                                  Index min_tail = 0);

/// diam{X_n, .., X_T} for n = 1..T on one atom (entry n-1).
template <typename Scalar>
Vector<Scalar> tail_diameters(const CondSequence<Scalar>& seq, Index atom);

extern template class CondSequence<double>;
extern template BwExtraction<double> bw_extract(const CondSequence<double>&, int, double);
extern template CauchyResult<double> cauchy_limit(const CondSequence<double>&, const std::vector<CondScalar<double>>&,
                                                  Index);
extern template Vector<double> tail_diameters(const CondSequence<double>&, Index);

}  // namespace condcvx
