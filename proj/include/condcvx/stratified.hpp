#pragma once

// Module theory of (L0)^d on a finite atom set: rank partitions, orthonormal
// frames, orthogonal decomposition, operator norms, norm-preserving linear
// extension and the normal form of a hyperplane.

#include <utility>
#include <vector>

#include "condcvx/core.hpp"

namespace condcvx {

/// Rank partition A_0..A_k with vectors X_1..X_k. On atoms labelled r the
/// rows of X_1..X_r form a basis of the span of the generator rows; rows of
/// X_i on atoms with label < i are filler (generator 0) and carry no meaning.
template <typename Scalar>
struct StratifiedBasis {
  SpacePtr space;
  Index dim = 0;
  Eigen::VectorXi labels;
  std::vector<CondVector<Scalar>> vectors;
  Eigen::MatrixXi source;  // K x k: generator picked for X_i on each atom, -1 where X_i = 0

  Index rank() const { return static_cast<Index>(vectors.size()); }
  MeasurableSet stratum(int r) const { return {space, labels.array() == r}; }
};

/// Per atom, frame[0..d-1] is an orthonormal basis of R^d whose first
/// labels(atom) rows span the submodule and whose remaining rows span its
/// orthogonal complement.
template <typename Scalar>
struct OrthonormalFrame {
  SpacePtr space;
  Index dim = 0;
  Eigen::VectorXi labels;
  std::vector<CondVector<Scalar>> frame;

  /// Per-atom d x d matrix whose rows are the frame vectors.
  Matrix<Scalar> at(Index atom) const;
};

/// Per-atom m x d matrices: the images of the standard base under an
/// L0-linear map (L0)^d -> (L0)^m.
template <typename Scalar>
struct CondLinearMap {
  SpacePtr space;
  std::vector<Matrix<Scalar>> matrices;

  Index rows() const { return matrices.front().rows(); }
  Index cols() const { return matrices.front().cols(); }
  CondVector<Scalar> operator()(const CondVector<Scalar>& x) const;

  static CondLinearMap identity(SpacePtr space, Index d);
};

template <typename Scalar>
StratifiedBasis<Scalar> rank_partition(std::span<const CondVector<Scalar>> generators, Scalar eps_rank = Scalar(1e-9));

template <typename Scalar>
OrthonormalFrame<Scalar> orthonormalize(const StratifiedBasis<Scalar>& basis);

/// orthonormalize(rank_partition(generators)).
template <typename Scalar>
OrthonormalFrame<Scalar> submodule_frame(std::span<const CondVector<Scalar>> generators,
                                         Scalar eps_rank = Scalar(1e-9));

/// The frame of the orthogonal complement: labels d - r, complement rows first.
template <typename Scalar>
OrthonormalFrame<Scalar> complement(const OrthonormalFrame<Scalar>& frame);

/// X = Y + Z with Y in the submodule and Z in its orthogonal complement.
template <typename Scalar>
std::pair<CondVector<Scalar>, CondVector<Scalar>> decompose(const CondVector<Scalar>& x,
                                                            const OrthonormalFrame<Scalar>& frame);

/// Largest singular value per atom.
template <typename Scalar>
CondScalar<Scalar> linear_map_norm(const CondLinearMap<Scalar>& f);

/// Image of frame vector j, given on `defined` (it must be given exactly on
/// the atoms where j lies inside the submodule).
template <typename Scalar>
struct FrameImage {
  MeasurableSet defined;
  CondVector<Scalar> value;
};

/// F(X) := f(Y) for X = Y + Z. images[j] is the image of frame vector j+1;
/// giving an image on an atom where that vector spans the complement is
/// rejected with a PreconditionError.
template <typename Scalar>
CondLinearMap<Scalar> extend_linear(const OrthonormalFrame<Scalar>& frame, std::span<const FrameImage<Scalar>> images);

/// Normal form of 1_A {<X,Z> = V}: X_0 with <X_0,Z> = V on A, a frame whose
/// first d-1 vectors span Z-perp on A and whose last vector is Z/||Z||.
/// Off A the frame is the standard base with label 0 and X_0 = 0.
template <typename Scalar>
std::pair<CondVector<Scalar>, OrthonormalFrame<Scalar>> hyperplane_normal_form(const CondVector<Scalar>& z,
                                                                               const CondScalar<Scalar>& v,
                                                                               const MeasurableSet& a);

namespace detail {
/// Rows of `rows` (assumed independent) are orthonormalized in order and the
/// result is completed to a basis of R^d with standard base vectors. Returns
/// a d x d matrix whose rows are the frame.
template <typename Scalar>
Matrix<Scalar> gram_schmidt_complete(const Matrix<Scalar>& rows, Index d);
}  // namespace detail

#define CONDCVX_STRATIFIED_EXTERN(S)                                                                                 \
  extern template struct OrthonormalFrame<S>;                                                                        \
  extern template struct CondLinearMap<S>;                                                                           \
  extern template StratifiedBasis<S> rank_partition(std::span<const CondVector<S>>, S);                              \
  extern template OrthonormalFrame<S> orthonormalize(const StratifiedBasis<S>&);                                     \
  extern template OrthonormalFrame<S> submodule_frame(std::span<const CondVector<S>>, S);                            \
  extern template OrthonormalFrame<S> complement(const OrthonormalFrame<S>&);                                        \
  extern template std::pair<CondVector<S>, CondVector<S>> decompose(const CondVector<S>&, const OrthonormalFrame<S>&); \
  extern template CondScalar<S> linear_map_norm(const CondLinearMap<S>&);                                            \
  extern template CondLinearMap<S> extend_linear(const OrthonormalFrame<S>&, std::span<const FrameImage<S>>);        \
  extern template std::pair<CondVector<S>, OrthonormalFrame<S>> hyperplane_normal_form(                              \
      const CondVector<S>&, const CondScalar<S>&, const MeasurableSet&);                                             \
  extern template Matrix<S> detail::gram_schmidt_complete(const Matrix<S>&, Index);

CONDCVX_STRATIFIED_EXTERN(double)
CONDCVX_STRATIFIED_EXTERN(long double)
#undef CONDCVX_STRATIFIED_EXTERN

}  // namespace condcvx
