#pragma once

// f(X) = max_j <X, Y_j> + Z_j per atom, +inf outside an optional domain.

#include <optional>
#include <vector>

#include "condcvx/convex_set_rep.hpp"

namespace condcvx {

template <typename Scalar>
struct AffinePiece {
  CondVector<Scalar> slope;
  CondScalar<Scalar> offset;
};

template <typename Scalar>
struct MaxAffineFn {
  std::vector<AffinePiece<Scalar>> pieces;
  std::optional<ConvexSetRep<Scalar>> domain;

  MaxAffineFn(std::vector<AffinePiece<Scalar>> p, std::optional<ConvexSetRep<Scalar>> dom = std::nullopt)
      : pieces(std::move(p)), domain(std::move(dom)) {
    if (pieces.empty()) throw Error("max-affine function needs at least one piece");
    const auto& y0 = pieces.front().slope;
    for (const auto& pc : pieces) {
      CondVector<Scalar>::check(y0, pc.slope, "max-affine pieces");
      if (pc.offset.atoms() != y0.atoms()) throw Error("max-affine pieces: offset atom count mismatch");
    }
    if (domain) {
      domain->require_convex("max-affine domain");
      CondVector<Scalar>::check(y0, domain->points.front(), "max-affine domain");
    }
  }

  const SpacePtr& space() const { return pieces.front().slope.space(); }
  Index dim() const { return pieces.front().slope.dim(); }
  Index atoms() const { return pieces.front().slope.atoms(); }

  /// Per atom: slopes (pieces x d) and offsets.
  Matrix<Scalar> slopes(Index atom) const {
    Matrix<Scalar> m(static_cast<Index>(pieces.size()), dim());
    for (std::size_t j = 0; j < pieces.size(); ++j) m.row(static_cast<Index>(j)) = pieces[j].slope.row(atom);
    return m;
  }
  Vector<Scalar> offsets(Index atom) const {
    Vector<Scalar> v(static_cast<Index>(pieces.size()));
    for (std::size_t j = 0; j < pieces.size(); ++j) v(static_cast<Index>(j)) = pieces[j].offset[atom];
    return v;
  }
  bool sublinear() const {
    for (const auto& pc : pieces)
      if (!pc.offset.values().isZero(0)) return false;
    return true;
  }
};

}  // namespace condcvx
