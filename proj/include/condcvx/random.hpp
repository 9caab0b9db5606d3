#pragma once

// Seeded per-atom random streams for probe-based verification. Each atom
// (and each stream within an atom) gets its own generator, so probe values
// do not depend on the evaluation order or the thread count.

#include <cstdint>
#include <random>

#include "condcvx/core.hpp"

namespace condcvx {

inline std::mt19937_64 atom_rng(std::uint64_t seed, Index atom, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(atom), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

/// Uniformly distributed unit vector.
template <typename Scalar>
Vector<Scalar> random_unit(std::mt19937_64& rng, Index d) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector<Scalar> v(d);
  do {
    for (Index i = 0; i < d; ++i) v(i) = static_cast<Scalar>(n(rng));
  } while (v.norm() == 0);
  return v / v.norm();
}

}  // namespace condcvx
