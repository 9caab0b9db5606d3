#include "condcvx/impl/qp_impl.hpp"

namespace condcvx {

template QpSolution<double> solve_least_squares(const LeastSquaresQp<double>&, const std::optional<Vector<double>>&);

}  // namespace condcvx
