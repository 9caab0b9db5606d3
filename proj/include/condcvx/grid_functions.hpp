#pragma once

// Per-atom extended-real functions sampled on a shared rectangular lattice
// (d <= 2 in practice): evaluation, discrete Legendre transforms, the
// Fenchel-Moreau check and min-plus inf-convolution.

#include <optional>
#include <vector>

#include "condcvx/core.hpp"

namespace condcvx {

/// Rectangular lattice: node k along axis a is mins[a] + k * steps[a],
/// k = 0..counts[a]-1. Flat node indices run with the last axis fastest.
template <typename Scalar>
struct Lattice {
  Vector<Scalar> mins;
  Vector<Scalar> steps;
  Eigen::VectorXi counts;

  Lattice() = default;
  Lattice(Vector<Scalar> m, Vector<Scalar> s, Eigen::VectorXi c);
  /// counts = round((maxs - mins) / steps) + 1; maxs must sit on the lattice.
  static Lattice from_bounds(const Vector<Scalar>& mins, const Vector<Scalar>& maxs, const Vector<Scalar>& steps);

  Index dim() const { return mins.size(); }
  Index nodes() const;
  Vector<Scalar> maxs() const;
  Eigen::VectorXi multi_index(Index flat) const;
  Index flat_index(const Eigen::VectorXi& multi) const;
  Vector<Scalar> node(Index flat) const;
  bool operator==(const Lattice& o) const {
    return mins == o.mins && steps == o.steps && counts == o.counts;
  }
};

template <typename Scalar>
struct GridFn {
  SpacePtr space;
  Lattice<Scalar> grid;
  Matrix<Scalar> values;  // atoms x nodes; +inf stored explicitly

  GridFn(SpacePtr s, Lattice<Scalar> g, Matrix<Scalar> v);
  Index atoms() const { return values.rows(); }
  /// Atoms on which every node is +inf.
  Mask improper() const;
};

template <typename Scalar>
CondExtScalar<Scalar> eval(const GridFn<Scalar>& f, const CondVector<Scalar>& x);

/// f*(y) = max over finite nodes x of <x, y> - f(x), at every node of `dual`.
/// If argmax is given it receives the maximizing primal node (atoms x dual
/// nodes, -1 where f is +inf everywhere on the atom).
template <typename Scalar>
GridFn<Scalar> conjugate(const GridFn<Scalar>& f, const Lattice<Scalar>& dual, Eigen::MatrixXi* argmax = nullptr);

/// A dyadic dual lattice for which the biconjugate of f reproduces the lower
/// convex envelope at the nodes within one primal step.
template <typename Scalar>
Lattice<Scalar> default_dual_lattice(const GridFn<Scalar>& f);

/// Per-atom lower convex envelope at the nodes (+inf outside conv(dom f)).
template <typename Scalar>
GridFn<Scalar> lower_convex_envelope(const GridFn<Scalar>& f);

template <typename Scalar>
struct FenchelMoreauReport {
  Lattice<Scalar> dual;
  GridFn<Scalar> conj;      // f*
  GridFn<Scalar> biconj;    // f**
  GridFn<Scalar> triconj;   // f***
  GridFn<Scalar> envelope;  // lower convex envelope, computed directly
  CondScalar<Scalar> max_deviation;  // |f** - envelope| where the envelope is finite
  CondScalar<Scalar> min_gap;        // min over nodes of f - f**
  CondScalar<Scalar> conj_mismatch;  // max |f* - f***|
};

template <typename Scalar>
FenchelMoreauReport<Scalar> fenchel_moreau_check(const GridFn<Scalar>& f,
                                                 const std::optional<Lattice<Scalar>>& dual = std::nullopt);

template <typename Scalar>
struct InfConvolution {
  GridFn<Scalar> g;
  /// split[j](atom, node) = node of fs[j]'s lattice used at output node;
  /// -1 where g is +inf.
  std::vector<Eigen::MatrixXi> split;
  CondExtScalar<Scalar> midpoint_violation;  // max of g(mid) - (g(a)+g(b))/2, 0 if none; +inf on a gap in dom g

  /// The decomposition X = X_1 + ... + X_n at one output node, as vectors.
  std::vector<CondVector<Scalar>> splitting(const std::vector<GridFn<Scalar>>& fs, Index node) const;
};

/// Min-plus convolution over all lattice decompositions. All inputs must
/// share the lattice steps; the output lives on the Minkowski-sum lattice.
/// n > 2 is folded left to right; ties go to the lowest node of the left
/// operand.
template <typename Scalar>
InfConvolution<Scalar> inf_convolution(const std::vector<GridFn<Scalar>>& fs);

/// f restricted (or extended with +inf) to another lattice with the same steps.
template <typename Scalar>
GridFn<Scalar> resample(const GridFn<Scalar>& f, const Lattice<Scalar>& target);

template <typename Scalar>
struct InfConvReport {
  Lattice<Scalar> dual;
  CondScalar<Scalar> conj_deviation;     // max |(box f)* - sum f_j*| where finite
  bool subdiff_evaluated = false;        // slope intervals are only defined for d = 1
  CondExtScalar<Scalar> subdiff_violation;  // how far the intersection sticks out (+inf if unbounded)
  Scalar slope_step = 0;                 // tolerance unit for subdiff_violation
  Eigen::VectorXi interior_violations;   // per atom
  Eigen::VectorXi interior_checked;      // per atom: nodes where the hypothesis held
};

template <typename Scalar>
InfConvReport<Scalar> infconv_checks(const std::vector<GridFn<Scalar>>& fs,
                                     const std::optional<Lattice<Scalar>>& dual = std::nullopt);

extern template struct Lattice<double>;
extern template struct GridFn<double>;
extern template struct InfConvolution<double>;
extern template CondExtScalar<double> eval(const GridFn<double>&, const CondVector<double>&);
extern template GridFn<double> conjugate(const GridFn<double>&, const Lattice<double>&, Eigen::MatrixXi*);
extern template Lattice<double> default_dual_lattice(const GridFn<double>&);
extern template GridFn<double> lower_convex_envelope(const GridFn<double>&);
extern template FenchelMoreauReport<double> fenchel_moreau_check(const GridFn<double>&,
                                                                 const std::optional<Lattice<double>>&);
extern template InfConvolution<double> inf_convolution(const std::vector<GridFn<double>>&);
extern template GridFn<double> resample(const GridFn<double>&, const Lattice<double>&);
extern template InfConvReport<double> infconv_checks(const std::vector<GridFn<double>>&,
                                                     const std::optional<Lattice<double>>&);

}  // namespace condcvx
