#include "condcvx/impl/lp_impl.hpp"

namespace condcvx {

template struct LinearProgram<double>;
template LpSolution<double> solve_lp(const LinearProgram<double>&, double);

}  // namespace condcvx
