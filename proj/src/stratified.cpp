#include "condcvx/impl/stratified_impl.hpp"

namespace condcvx {

#define CONDCVX_STRATIFIED_INSTANTIATE(S)                                                                     \
  template struct OrthonormalFrame<S>;                                                                        \
  template struct CondLinearMap<S>;                                                                           \
  template StratifiedBasis<S> rank_partition(std::span<const CondVector<S>>, S);                              \
  template OrthonormalFrame<S> orthonormalize(const StratifiedBasis<S>&);                                     \
  template OrthonormalFrame<S> submodule_frame(std::span<const CondVector<S>>, S);                            \
  template OrthonormalFrame<S> complement(const OrthonormalFrame<S>&);                                        \
  template std::pair<CondVector<S>, CondVector<S>> decompose(const CondVector<S>&, const OrthonormalFrame<S>&); \
  template CondScalar<S> linear_map_norm(const CondLinearMap<S>&);                                            \
  template CondLinearMap<S> extend_linear(const OrthonormalFrame<S>&, std::span<const FrameImage<S>>);        \
  template std::pair<CondVector<S>, OrthonormalFrame<S>> hyperplane_normal_form(                              \
      const CondVector<S>&, const CondScalar<S>&, const MeasurableSet&);                                      \
  template Matrix<S> detail::gram_schmidt_complete(const Matrix<S>&, Index);

CONDCVX_STRATIFIED_INSTANTIATE(double)
CONDCVX_STRATIFIED_INSTANTIATE(long double)

}  // namespace condcvx
