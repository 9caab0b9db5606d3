#include "condcvx/impl/sequences_impl.hpp"

namespace condcvx {

template class CondSequence<double>;
template BwExtraction<double> bw_extract(const CondSequence<double>&, int, double);
template CauchyResult<double> cauchy_limit(const CondSequence<double>&, const std::vector<CondScalar<double>>&, Index);
template Vector<double> tail_diameters(const CondSequence<double>&, Index);

}  // namespace condcvx
