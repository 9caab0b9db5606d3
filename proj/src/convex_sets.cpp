#include "condcvx/impl/convex_sets_impl.hpp"

namespace condcvx {

#define CONDCVX_CONVEX_SETS_INSTANTIATE(S)                                                                    \
  template ConvexSetRep<S> hull(std::vector<CondVector<S>>, HullKind);                                        \
  template MeasurableSet membership(const CondVector<S>&, const ConvexSetRep<S>&, const MeasurableSet&, S);   \
  template NearestPair<S> nearest_pair(const ConvexSetRep<S>&, const ConvexSetRep<S>&);                       \
  template NearestPair<S> project(const CondVector<S>&, const ConvexSetRep<S>&);                              \
  template MeasurableSet ri_membership(const CondVector<S>&, const ConvexSetRep<S>&, InteriorMode, S);        \
  template Eigen::VectorXi affine_dimension(const ConvexSetRep<S>&, S);                                       \
  template CondExtScalar<S> support(const ConvexSetRep<S>&, const CondVector<S>&, Extremum, S);               \
  template SeparationResult<S> separate(const ConvexSetRep<S>&, const ConvexSetRep<S>&, SeparationKind, S);   \
  template ConvexSetRep<S> minkowski_difference(const ConvexSetRep<S>&, const ConvexSetRep<S>&);              \
  template CondVector<S> hahn_banach_extend(const MaxAffineFn<S>&, const ConvexSetRep<S>&,                    \
                                            std::span<const CondScalar<S>>, S);                               \
  template BoundedTest<S> bounded_test(const ConvexSetRep<S>&, S);                                            \
  template detail::Projection<S> detail::project_atom(const detail::Polyhedron<S>&, const Vector<S>&);        \
  template std::pair<Vector<S>, Vector<S>> detail::nearest_pair_atom(const detail::Polyhedron<S>&,            \
                                                                     const detail::Polyhedron<S>&);           \
  template bool detail::in_relative_interior(const detail::Polyhedron<S>&, const Vector<S>&, S);              \
  template Index detail::affine_dim(const detail::Polyhedron<S>&, S);                                         \
  template S detail::support_atom(const detail::Polyhedron<S>&, const Vector<S>&, Extremum, S);

CONDCVX_CONVEX_SETS_INSTANTIATE(double)

}  // namespace condcvx
