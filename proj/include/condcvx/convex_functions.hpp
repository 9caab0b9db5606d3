#pragma once

// Operations on max-affine L0-convex functions: evaluation, exact conjugate
// values, subgradients, directional derivatives, differentiability, argmin
// and the support representation of sublinear functions.

#include <cstdint>
#include <vector>

#include "condcvx/convex_sets.hpp"
#include "condcvx/grid_functions.hpp"
#include "condcvx/max_affine.hpp"

namespace condcvx {

/// max_j <X, Y_j> + Z_j per atom; +inf where X is outside the domain.
template <typename Scalar>
CondExtScalar<Scalar> eval(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x, Scalar tol = Scalar(1e-9));

/// Exact f*(y) at every node of `dual` (one epigraph LP per atom and node).
template <typename Scalar>
GridFn<Scalar> conjugate(const MaxAffineFn<Scalar>& f, const Lattice<Scalar>& dual);

template <typename Scalar>
struct SubdifferentialRep {
  CondVector<Scalar> base;
  std::vector<std::vector<Index>> active;  // per atom, active piece indices
  std::vector<Matrix<Scalar>> generators;  // per atom, rows spanning conv(active slopes)
  std::vector<Matrix<Scalar>> normal_lines;  // per atom, basis of aff(dom)-perp (empty without a domain)
  CondVector<Scalar> representative;       // minimal-norm element
};

/// Requires X0 in ri(dom f) on every atom (PreconditionError otherwise).
template <typename Scalar>
SubdifferentialRep<Scalar> subdifferential(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x0,
                                           Scalar tol = Scalar(1e-9));

/// Radii at which the growth bound f(X0 + X) >= f(X0) - V ||X|| is probed.
inline constexpr double kGrowthRadii[] = {1e-3, 1e-1, 1.0, 10.0, 1e3};

/// Minimal-norm subgradient, after probing the growth bound along `probes`
/// seeded random directions at each radius in kGrowthRadii.
template <typename Scalar>
CondVector<Scalar> bounded_subgradient(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x0,
                                       const CondScalar<Scalar>& v, std::uint64_t seed = 0, int probes = 64,
                                       Scalar tol = Scalar(1e-9));

/// f'(X0; X): max over active pieces of <X, Y_j>, +inf when X leaves dom f.
template <typename Scalar>
CondExtScalar<Scalar> directional_derivative(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x0,
                                             const CondVector<Scalar>& x, Scalar tol = Scalar(1e-9));

/// n [f(X0 + X/n) - f(X0)] for n = 2^0 .. 2^max_exponent.
template <typename Scalar>
std::vector<CondExtScalar<Scalar>> difference_quotients(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x0,
                                                        const CondVector<Scalar>& x, int max_exponent = 20);

template <typename Scalar>
struct Differentiability {
  MeasurableSet diff_on;
  CondVector<Scalar> gradient;        // 0 off diff_on
  CondExtScalar<Scalar> quotient_tail;  // worst final difference quotient over the sequences
  MeasurableSet quotient_verified;    // atoms of diff_on where the tail is below 1e-6
};

/// diff_on = atoms where the subdifferential is a singleton; the quotient
/// test runs along `sequences` seeded sequences X_n = U 2^-n.
template <typename Scalar>
Differentiability<Scalar> differentiability_check(const MaxAffineFn<Scalar>& f, const CondVector<Scalar>& x0,
                                                  std::uint64_t seed = 0, int sequences = 20,
                                                  Scalar tol = Scalar(1e-9));

template <typename Scalar>
struct ArgminResult {
  CondVector<Scalar> x;              // 0 where unbounded below
  CondExtScalar<Scalar> value;       // -inf where unbounded below
  MeasurableSet unique_on;
  MeasurableSet coercive_on;         // bounded sublevel sets (recession test)
  MeasurableSet unbounded_on;        // f unbounded below on C
  CondVector<Scalar> ray;            // descent ray on unbounded_on, 0 elsewhere
};

template <typename Scalar>
ArgminResult<Scalar> argmin(const MaxAffineFn<Scalar>& f, const ConvexSetRep<Scalar>& c, Scalar tol = Scalar(1e-9));

template <typename Scalar>
struct SublinearSupport {
  std::vector<CondVector<Scalar>> generators;  // slopes spanning the subdifferential at 0
  CondScalar<Scalar> max_probe_deviation;      // |f(X) - max_j <X, G_j>| over probes
};

/// f must be positively homogeneous (zero offsets, no domain).
template <typename Scalar>
SublinearSupport<Scalar> sublinear_support(const MaxAffineFn<Scalar>& f, std::uint64_t seed = 0, int probes = 1000);

#define CONDCVX_CONVEX_FUNCTIONS_EXTERN(S)                                                                         \
  extern template CondExtScalar<S> eval(const MaxAffineFn<S>&, const CondVector<S>&, S);                           \
  extern template GridFn<S> conjugate(const MaxAffineFn<S>&, const Lattice<S>&);                                   \
  extern template SubdifferentialRep<S> subdifferential(const MaxAffineFn<S>&, const CondVector<S>&, S);           \
  extern template CondVector<S> bounded_subgradient(const MaxAffineFn<S>&, const CondVector<S>&,                   \
                                                    const CondScalar<S>&, std::uint64_t, int, S);                  \
  extern template CondExtScalar<S> directional_derivative(const MaxAffineFn<S>&, const CondVector<S>&,             \
                                                          const CondVector<S>&, S);                                \
  extern template std::vector<CondExtScalar<S>> difference_quotients(const MaxAffineFn<S>&, const CondVector<S>&, \
                                                                     const CondVector<S>&, int);                   \
  extern template Differentiability<S> differentiability_check(const MaxAffineFn<S>&, const CondVector<S>&,        \
                                                               std::uint64_t, int, S);                             \
  extern template ArgminResult<S> argmin(const MaxAffineFn<S>&, const ConvexSetRep<S>&, S);                        \
  extern template SublinearSupport<S> sublinear_support(const MaxAffineFn<S>&, std::uint64_t, int);

CONDCVX_CONVEX_FUNCTIONS_EXTERN(double)
#undef CONDCVX_CONVEX_FUNCTIONS_EXTERN

}  // namespace condcvx
