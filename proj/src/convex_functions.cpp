#include "condcvx/impl/convex_functions_impl.hpp"

namespace condcvx {

#define CONDCVX_INSTANTIATE(S)                                                                                      \
  template CondExtScalar<S> eval(const MaxAffineFn<S>&, const CondVector<S>&, S);                                  \
  template GridFn<S> conjugate(const MaxAffineFn<S>&, const Lattice<S>&);                                          \
  template SubdifferentialRep<S> subdifferential(const MaxAffineFn<S>&, const CondVector<S>&, S);                  \
  template CondVector<S> bounded_subgradient(const MaxAffineFn<S>&, const CondVector<S>&, const CondScalar<S>&,    \
                                             std::uint64_t, int, S);                                                \
  template CondExtScalar<S> directional_derivative(const MaxAffineFn<S>&, const CondVector<S>&,                    \
                                                   const CondVector<S>&, S);                                        \
  template std::vector<CondExtScalar<S>> difference_quotients(const MaxAffineFn<S>&, const CondVector<S>&,        \
                                                              const CondVector<S>&, int);                           \
  template Differentiability<S> differentiability_check(const MaxAffineFn<S>&, const CondVector<S>&,               \
                                                        std::uint64_t, int, S);                                     \
  template ArgminResult<S> argmin(const MaxAffineFn<S>&, const ConvexSetRep<S>&, S);                               \
  template SublinearSupport<S> sublinear_support(const MaxAffineFn<S>&, std::uint64_t, int);

CONDCVX_INSTANTIATE(double)
#undef CONDCVX_INSTANTIATE

}  // namespace condcvx
