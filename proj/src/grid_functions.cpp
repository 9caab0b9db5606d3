#include "condcvx/impl/grid_functions_impl.hpp"

namespace condcvx {

template struct Lattice<double>;
template struct GridFn<double>;
template struct InfConvolution<double>;
template CondExtScalar<double> eval(const GridFn<double>&, const CondVector<double>&);
template GridFn<double> conjugate(const GridFn<double>&, const Lattice<double>&, Eigen::MatrixXi*);
template Lattice<double> default_dual_lattice(const GridFn<double>&);
template GridFn<double> lower_convex_envelope(const GridFn<double>&);
template FenchelMoreauReport<double> fenchel_moreau_check(const GridFn<double>&, const std::optional<Lattice<double>>&);
template InfConvolution<double> inf_convolution(const std::vector<GridFn<double>>&);
template GridFn<double> resample(const GridFn<double>&, const Lattice<double>&);
template InfConvReport<double> infconv_checks(const std::vector<GridFn<double>>&, const std::optional<Lattice<double>>&);

}  // namespace condcvx
