#pragma once

// Hulls, membership, interiors, nearest pairs, the three separation
// theorems, Hahn-Banach extension and the boundedness test, all decided
// atom by atom on polyhedral representations and glued back together.

#include <utility>
#include <vector>

#include "condcvx/convex_set_rep.hpp"
#include "condcvx/max_affine.hpp"

namespace condcvx {

enum class HullKind { stable, sigma, convex, cone, affine, linear };
enum class SeparationKind { strong, weak, proper };
enum class InteriorMode { interior, relative };

template <typename Scalar>
ConvexSetRep<Scalar> hull(std::vector<CondVector<Scalar>> generators, HullKind kind);

/// Largest subset of A on which X lies in C (distance at most tol * (1 + ||X||)).
template <typename Scalar>
MeasurableSet membership(const CondVector<Scalar>& x, const ConvexSetRep<Scalar>& c, const MeasurableSet& a,
                         Scalar tol = Scalar(1e-9));

template <typename Scalar>
struct NearestPair {
  CondVector<Scalar> x;
  CondVector<Scalar> y;
  CondScalar<Scalar> dist;
};

/// Per-atom minimizers of ||X - Y|| over C x D. D must be bounded.
template <typename Scalar>
NearestPair<Scalar> nearest_pair(const ConvexSetRep<Scalar>& c, const ConvexSetRep<Scalar>& d);

/// Euclidean projection of X onto C.
template <typename Scalar>
NearestPair<Scalar> project(const CondVector<Scalar>& x, const ConvexSetRep<Scalar>& c);

template <typename Scalar>
MeasurableSet ri_membership(const CondVector<Scalar>& x, const ConvexSetRep<Scalar>& c, InteriorMode mode,
                            Scalar margin = Scalar(1e-9));

/// Dimension of aff(C) per atom.
template <typename Scalar>
Eigen::VectorXi affine_dimension(const ConvexSetRep<Scalar>& c, Scalar eps_rank = Scalar(1e-9));

/// inf or sup of <X, Z> over C per atom (may be infinite).
template <typename Scalar>
CondExtScalar<Scalar> support(const ConvexSetRep<Scalar>& c, const CondVector<Scalar>& z, Extremum kind,
                              Scalar tol = Scalar(1e-9));

template <typename Scalar>
struct SeparationResult {
  SeparationKind kind;
  CondVector<Scalar> z;
  CondExtScalar<Scalar> gap;      // ess inf_C <X,Z> - ess sup_D <Y,Z>
  CondExtScalar<Scalar> sup_gap;  // ess sup_C <X,Z> - ess inf_D <Y,Z>
  MeasurableSet failure;
};

/// Z = 0 on the failure set. Strong: Z is the minimal-norm point of C - D.
/// Weak and proper: Z has unit length off the failure set.
template <typename Scalar>
SeparationResult<Scalar> separate(const ConvexSetRep<Scalar>& c, const ConvexSetRep<Scalar>& d, SeparationKind kind,
                                  Scalar tol = Scalar(1e-9));

/// C - D as a representation: pairwise point differences, rays of C and -D,
/// lines of both.
template <typename Scalar>
ConvexSetRep<Scalar> minkowski_difference(const ConvexSetRep<Scalar>& c, const ConvexSetRep<Scalar>& d);

/// Linear h(X) = <X, H> with h = g on E and h <= p everywhere. E is a linear
/// hull (zero points, lines only); g_images[j] is g on the j-th vector of
/// submodule_frame(E.lines). Returns the minimal-norm H.
template <typename Scalar>
CondVector<Scalar> hahn_banach_extend(const MaxAffineFn<Scalar>& p, const ConvexSetRep<Scalar>& e,
                                      std::span<const CondScalar<Scalar>> g_images, Scalar tol = Scalar(1e-9));

template <typename Scalar>
struct BoundedTest {
  MeasurableSet bounded_on;
  CondVector<Scalar> witness;  // a recession direction off bounded_on, 0 on it
};

template <typename Scalar>
BoundedTest<Scalar> bounded_test(const ConvexSetRep<Scalar>& c, Scalar tol = Scalar(1e-9));

namespace detail {

template <typename Scalar>
struct Projection {
  Vector<Scalar> point;
  Scalar dist;
};

/// Per-atom projection of x onto conv(P) + cone(R) + span(L).
template <typename Scalar>
Projection<Scalar> project_atom(const Polyhedron<Scalar>& c, const Vector<Scalar>& x);

/// Per-atom minimal-norm point of C - D and a pair attaining it.
template <typename Scalar>
std::pair<Vector<Scalar>, Vector<Scalar>> nearest_pair_atom(const Polyhedron<Scalar>& c, const Polyhedron<Scalar>& d);

/// Per-atom relative interior test: x is a combination with every point and
/// ray weight at least `margin`.
template <typename Scalar>
bool in_relative_interior(const Polyhedron<Scalar>& c, const Vector<Scalar>& x, Scalar margin);

template <typename Scalar>
Index affine_dim(const Polyhedron<Scalar>& c, Scalar eps_rank);

template <typename Scalar>
Scalar support_atom(const Polyhedron<Scalar>& c, const Vector<Scalar>& z, Extremum kind, Scalar tol);

}  // namespace detail

#define CONDCVX_CONVEX_SETS_EXTERN(S)                                                                                \
  extern template ConvexSetRep<S> hull(std::vector<CondVector<S>>, HullKind);                                        \
  extern template MeasurableSet membership(const CondVector<S>&, const ConvexSetRep<S>&, const MeasurableSet&, S);   \
  extern template NearestPair<S> nearest_pair(const ConvexSetRep<S>&, const ConvexSetRep<S>&);                       \
  extern template NearestPair<S> project(const CondVector<S>&, const ConvexSetRep<S>&);                              \
  extern template MeasurableSet ri_membership(const CondVector<S>&, const ConvexSetRep<S>&, InteriorMode, S);        \
  extern template Eigen::VectorXi affine_dimension(const ConvexSetRep<S>&, S);                                       \
  extern template CondExtScalar<S> support(const ConvexSetRep<S>&, const CondVector<S>&, Extremum, S);               \
  extern template SeparationResult<S> separate(const ConvexSetRep<S>&, const ConvexSetRep<S>&, SeparationKind, S);   \
  extern template ConvexSetRep<S> minkowski_difference(const ConvexSetRep<S>&, const ConvexSetRep<S>&);              \
  extern template CondVector<S> hahn_banach_extend(const MaxAffineFn<S>&, const ConvexSetRep<S>&,                    \
                                                   std::span<const CondScalar<S>>, S);                               \
  extern template BoundedTest<S> bounded_test(const ConvexSetRep<S>&, S);                                            \
  extern template detail::Projection<S> detail::project_atom(const detail::Polyhedron<S>&, const Vector<S>&);        \
  extern template std::pair<Vector<S>, Vector<S>> detail::nearest_pair_atom(const detail::Polyhedron<S>&,            \
                                                                            const detail::Polyhedron<S>&);           \
  extern template bool detail::in_relative_interior(const detail::Polyhedron<S>&, const Vector<S>&, S);              \
  extern template Index detail::affine_dim(const detail::Polyhedron<S>&, S);                                         \
  extern template S detail::support_atom(const detail::Polyhedron<S>&, const Vector<S>&, Extremum, S);

CONDCVX_CONVEX_SETS_EXTERN(double)
#undef CONDCVX_CONVEX_SETS_EXTERN

}  // namespace condcvx
