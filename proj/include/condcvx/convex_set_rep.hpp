#pragma once

// Finitely generated L0-convex sets: per atom conv(P) + cone(R) + span(S).

#include <vector>

#include "condcvx/core.hpp"

namespace condcvx {

namespace detail {
/// One atom's slice of a ConvexSetRep; generator rows stacked.
template <typename Scalar>
struct Polyhedron {
  Matrix<Scalar> points;
  Matrix<Scalar> rays;
  Matrix<Scalar> lines;

  Index dim() const { return points.cols(); }
  bool bounded() const {
    return (rays.rows() == 0 || rays.isZero(0)) && (lines.rows() == 0 || lines.isZero(0));
  }
};
}  // namespace detail

template <typename Scalar>
struct ConvexSetRep {
  std::vector<CondVector<Scalar>> points;
  std::vector<CondVector<Scalar>> rays;
  std::vector<CondVector<Scalar>> lines;
  /// Set by the stable / sigma hulls: the set is the finite point list
  /// itself per atom, not its convex hull.
  bool discrete = false;

  ConvexSetRep() = default;
  ConvexSetRep(std::vector<CondVector<Scalar>> p, std::vector<CondVector<Scalar>> r = {},
               std::vector<CondVector<Scalar>> l = {}, bool is_discrete = false)
      : points(std::move(p)), rays(std::move(r)), lines(std::move(l)), discrete(is_discrete) {
    if (points.empty()) throw Error("convex set needs at least one point generator");
    const auto& p0 = points.front();
    for (const auto* list : {&points, &rays, &lines})
      for (const auto& x : *list) CondVector<Scalar>::check(p0, x, "convex set generators");
    if (discrete && (!rays.empty() || !lines.empty())) throw Error("discrete sets carry points only");
  }

  const SpacePtr& space() const { return points.front().space(); }
  Index dim() const { return points.front().dim(); }
  Index atoms() const { return points.front().atoms(); }

  detail::Polyhedron<Scalar> at(Index atom) const {
    auto stack = [&](const std::vector<CondVector<Scalar>>& list) {
      Matrix<Scalar> m(static_cast<Index>(list.size()), dim());
      for (std::size_t j = 0; j < list.size(); ++j) m.row(static_cast<Index>(j)) = list[j].row(atom);
      return m;
    };
    return {stack(points), stack(rays), stack(lines)};
  }

  void require_convex(const char* what) const {
    if (discrete) throw Error(std::string(what) + ": needs a convex representation, got a stable hull");
  }
};

}  // namespace condcvx
