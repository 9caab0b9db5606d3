#pragma once

// Finite-atom realization of L0: measure space, events, conditional scalars
// and vectors, gluing, essential extrema and measurable index selection.
//
// Every object is a table of per-atom values. Atoms carry strictly positive
// mass, so "almost everywhere" is plain per-atom equality.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace condcvx {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Invalid input: shape mismatch, malformed data, unresolvable request.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hypothesis of an operation fails on some atoms. The offending atoms are
/// carried along so callers can report them as a failure set.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, Mask atoms)
      : Error(what), atoms_(std::move(atoms)) {}
  const Mask& atoms() const { return atoms_; }

 private:
  Mask atoms_;
};

template <typename Scalar>
constexpr Scalar infinity() {
  return std::numeric_limits<Scalar>::infinity();
}

// Extended reals: +inf - inf is +inf and 0 * (+-inf) is 0.
template <typename Scalar>
Scalar ext_add(Scalar a, Scalar b) {
  if (std::isinf(a) && std::isinf(b) && a != b) return infinity<Scalar>();
  return a + b;
}

template <typename Scalar>
Scalar ext_sub(Scalar a, Scalar b) {
  return ext_add(a, -b);
}

template <typename Scalar>
Scalar ext_mul(Scalar a, Scalar b) {
  if ((a == Scalar(0) && std::isinf(b)) || (b == Scalar(0) && std::isinf(a))) return Scalar(0);
  return a * b;
}

/// |a - b| <= tol * max(1, |a|, |b|); infinities compare equal only to themselves.
template <typename Scalar>
bool approx_equal(Scalar a, Scalar b, Scalar tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  using std::abs;
  return abs(a - b) <= tol * std::max({Scalar(1), abs(a), abs(b)});
}

class MeasureSpace {
 public:
  explicit MeasureSpace(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw Error("measure space needs at least one atom");
    for (double w : weights_) {
      if (!(w > 0.0) || !std::isfinite(w)) throw Error("atom weights must be finite and strictly positive");
    }
  }

  static std::shared_ptr<const MeasureSpace> make(std::vector<double> weights) {
    return std::make_shared<const MeasureSpace>(std::move(weights));
  }
  static std::shared_ptr<const MeasureSpace> uniform(Index atoms) {
    return make(std::vector<double>(static_cast<std::size_t>(atoms), 1.0));
  }

  Index atoms() const { return static_cast<Index>(weights_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

  bool operator==(const MeasureSpace& other) const { return weights_ == other.weights_; }

 private:
  std::vector<double> weights_;
};

using SpacePtr = std::shared_ptr<const MeasureSpace>;

inline bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

inline void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* what) {
  if (!same_space(a, b)) throw Error(std::string(what) + ": operands live on different measure spaces");
}

/// An event, i.e. a subset of the atoms.
class MeasurableSet {
 public:
  MeasurableSet(SpacePtr space, Mask mask) : space_(std::move(space)), mask_(std::move(mask)) {
    if (!space_) throw Error("measurable set without a measure space");
    if (mask_.size() != space_->atoms()) throw Error("set mask length differs from the number of atoms");
  }

  static MeasurableSet all(SpacePtr space) {
    const Index k = space->atoms();
    return {std::move(space), Mask::Constant(k, true)};
  }
  static MeasurableSet none(SpacePtr space) {
    const Index k = space->atoms();
    return {std::move(space), Mask::Constant(k, false)};
  }
  static MeasurableSet atom(SpacePtr space, Index i) {
    Mask m = Mask::Constant(space->atoms(), false);
    m(i) = true;
    return {std::move(space), std::move(m)};
  }

  const SpacePtr& space() const { return space_; }
  const Mask& mask() const { return mask_; }
  Index atoms() const { return mask_.size(); }
  bool contains(Index i) const { return mask_(i); }
  Index count() const { return mask_.count(); }
  /// Not in F_+ : carries no mass.
  bool is_null() const { return !mask_.any(); }
  bool is_full() const { return mask_.all(); }

  double measure() const {
    double m = 0.0;
    for (Index i = 0; i < atoms(); ++i)
      if (mask_(i)) m += space_->weights()[static_cast<std::size_t>(i)];
    return m;
  }

  MeasurableSet complement() const { return {space_, !mask_}; }

  friend MeasurableSet operator|(const MeasurableSet& a, const MeasurableSet& b) {
    require_same_space(a.space_, b.space_, "set union");
    return {a.space_, a.mask_ || b.mask_};
  }
  friend MeasurableSet operator&(const MeasurableSet& a, const MeasurableSet& b) {
    require_same_space(a.space_, b.space_, "set intersection");
    return {a.space_, a.mask_ && b.mask_};
  }
  friend MeasurableSet operator-(const MeasurableSet& a, const MeasurableSet& b) {
    require_same_space(a.space_, b.space_, "set difference");
    return {a.space_, a.mask_ && !b.mask_};
  }
  friend bool operator==(const MeasurableSet& a, const MeasurableSet& b) {
    return same_space(a.space_, b.space_) && (a.mask_ == b.mask_).all();
  }
  bool subset_of(const MeasurableSet& other) const { return (!mask_ || other.mask_).all(); }

 private:
  SpacePtr space_;
  Mask mask_;
};

/// Element of L0: one finite real per atom.
template <typename Scalar>
class CondScalar {
 public:
  explicit CondScalar(Vector<Scalar> values) : values_(std::move(values)) {
    if (values_.size() == 0) throw Error("conditional scalar needs at least one atom");
    if (!values_.allFinite()) throw Error("L0 element with a non-finite entry");
  }
  static CondScalar constant(Index atoms, Scalar c) { return CondScalar(Vector<Scalar>::Constant(atoms, c)); }

  Index atoms() const { return values_.size(); }
  Scalar operator[](Index i) const { return values_(i); }
  const Vector<Scalar>& values() const { return values_; }

 private:
  Vector<Scalar> values_;
};

/// Element of the extended reals per atom (+-inf allowed, NaN rejected).
template <typename Scalar>
class CondExtScalar {
 public:
  explicit CondExtScalar(Vector<Scalar> values) : values_(std::move(values)) {
    if (values_.size() == 0) throw Error("conditional scalar needs at least one atom");
    if (values_.hasNaN()) throw Error("extended scalar with a NaN entry");
  }
  CondExtScalar(const CondScalar<Scalar>& x) : values_(x.values()) {}  // NOLINT: L0 embeds in L-bar
  static CondExtScalar constant(Index atoms, Scalar c) { return CondExtScalar(Vector<Scalar>::Constant(atoms, c)); }

  Index atoms() const { return values_.size(); }
  Scalar operator[](Index i) const { return values_(i); }
  const Vector<Scalar>& values() const { return values_; }
  bool finite_on(Index i) const { return std::isfinite(values_(i)); }
  bool all_finite() const { return values_.allFinite(); }

  CondScalar<Scalar> finite() const { return CondScalar<Scalar>(values_); }

  friend CondExtScalar operator+(const CondExtScalar& a, const CondExtScalar& b) {
    check_atoms(a, b);
    return CondExtScalar(a.values_.binaryExpr(b.values_, [](Scalar x, Scalar y) { return ext_add(x, y); }));
  }
  friend CondExtScalar operator-(const CondExtScalar& a, const CondExtScalar& b) {
    check_atoms(a, b);
    return CondExtScalar(a.values_.binaryExpr(b.values_, [](Scalar x, Scalar y) { return ext_sub(x, y); }));
  }
  friend CondExtScalar operator*(const CondExtScalar& a, const CondExtScalar& b) {
    check_atoms(a, b);
    return CondExtScalar(a.values_.binaryExpr(b.values_, [](Scalar x, Scalar y) { return ext_mul(x, y); }));
  }

 private:
  static void check_atoms(const CondExtScalar& a, const CondExtScalar& b) {
    if (a.atoms() != b.atoms()) throw Error("extended scalars on different atom counts");
  }
  Vector<Scalar> values_;
};

/// Element of N(F): a positive integer per atom (1-based measurable index).
class CondInteger {
 public:
  explicit CondInteger(Eigen::VectorXi values) : values_(std::move(values)) {
    if (values_.size() == 0) throw Error("conditional integer needs at least one atom");
    if ((values_.array() < 1).any()) throw Error("measurable index entries must be >= 1");
  }
  static CondInteger constant(Index atoms, int n) { return CondInteger(Eigen::VectorXi::Constant(atoms, n)); }

  Index atoms() const { return values_.size(); }
  int operator[](Index i) const { return values_(i); }
  const Eigen::VectorXi& values() const { return values_; }

  friend bool operator==(const CondInteger& a, const CondInteger& b) {
    return a.atoms() == b.atoms() && a.values_ == b.values_;
  }

 private:
  Eigen::VectorXi values_;
};

/// Element of (L0)^d: one row of d finite reals per atom.
template <typename Scalar>
class CondVector {
 public:
  CondVector(SpacePtr space, Matrix<Scalar> coords) : space_(std::move(space)), coords_(std::move(coords)) {
    if (!space_) throw Error("conditional vector without a measure space");
    if (coords_.rows() != space_->atoms()) throw Error("conditional vector row count differs from the atom count");
    if (coords_.cols() < 1) throw Error("conditional vector needs dimension >= 1");
    if (!coords_.allFinite()) throw Error("conditional vector with a non-finite coordinate");
  }

  static CondVector zero(SpacePtr space, Index dim) {
    const Index k = space->atoms();
    return {std::move(space), Matrix<Scalar>::Zero(k, dim)};
  }
  /// The same deterministic vector on every atom.
  static CondVector constant(SpacePtr space, const Vector<Scalar>& v) {
    const Index k = space->atoms();
    return {std::move(space), v.transpose().replicate(k, 1)};
  }
  static CondVector unit(SpacePtr space, Index dim, Index axis) {
    Vector<Scalar> e = Vector<Scalar>::Zero(dim);
    e(axis) = Scalar(1);
    return constant(std::move(space), e);
  }

  const SpacePtr& space() const { return space_; }
  Index atoms() const { return coords_.rows(); }
  Index dim() const { return coords_.cols(); }
  const Matrix<Scalar>& coords() const { return coords_; }
  auto row(Index i) const { return coords_.row(i); }

  /// 1_A X.
  CondVector restricted(const MeasurableSet& a) const {
    require_same_space(space_, a.space(), "restriction");
    Matrix<Scalar> c = coords_;
    for (Index i = 0; i < atoms(); ++i)
      if (!a.contains(i)) c.row(i).setZero();
    return {space_, std::move(c)};
  }

  friend CondVector operator+(const CondVector& x, const CondVector& y) {
    check(x, y, "vector sum");
    return {x.space_, x.coords_ + y.coords_};
  }
  friend CondVector operator-(const CondVector& x, const CondVector& y) {
    check(x, y, "vector difference");
    return {x.space_, x.coords_ - y.coords_};
  }
  friend CondVector operator-(const CondVector& x) { return {x.space_, -x.coords_}; }
  friend CondVector operator*(Scalar a, const CondVector& x) { return {x.space_, a * x.coords_}; }
  friend CondVector operator*(const CondScalar<Scalar>& a, const CondVector& x) {
    if (a.atoms() != x.atoms()) throw Error("scalar multiplication: atom count mismatch");
    return {x.space_, a.values().asDiagonal() * x.coords_};
  }

  static void check(const CondVector& x, const CondVector& y, const char* what) {
    require_same_space(x.space_, y.space_, what);
    if (x.dim() != y.dim()) throw Error(std::string(what) + ": dimension mismatch");
  }

 private:
  SpacePtr space_;
  Matrix<Scalar> coords_;
};

template <typename Scalar>
CondScalar<Scalar> inner(const CondVector<Scalar>& x, const CondVector<Scalar>& y) {
  CondVector<Scalar>::check(x, y, "inner product");
  return CondScalar<Scalar>(x.coords().cwiseProduct(y.coords()).rowwise().sum());
}

template <typename Scalar>
CondScalar<Scalar> norm(const CondVector<Scalar>& x) {
  return CondScalar<Scalar>(x.coords().rowwise().norm());
}

/// (<X,Y>, ||X||) per atom.
template <typename Scalar>
std::pair<CondScalar<Scalar>, CondScalar<Scalar>> inner_norm(const CondVector<Scalar>& x, const CondVector<Scalar>& y) {
  return {inner(x, y), norm(x)};
}

/// For a list of events, the index of the unique event containing each atom.
/// Throws unless the events partition the atoms.
inline std::vector<std::size_t> partition_owners(std::span<const MeasurableSet> sets) {
  if (sets.empty()) throw Error("gluing needs at least one piece");
  const Index k = sets.front().atoms();
  std::vector<std::size_t> owner(static_cast<std::size_t>(k), sets.size());
  for (std::size_t n = 0; n < sets.size(); ++n) {
    require_same_space(sets.front().space(), sets[n].space(), "gluing");
    for (Index i = 0; i < k; ++i) {
      if (!sets[n].contains(i)) continue;
      if (owner[static_cast<std::size_t>(i)] != sets.size()) throw Error("gluing sets are not pairwise disjoint");
      owner[static_cast<std::size_t>(i)] = n;
    }
  }
  for (std::size_t o : owner)
    if (o == sets.size()) throw Error("gluing sets do not cover every atom");
  return owner;
}

template <typename Scalar>
using GluePiece = std::pair<MeasurableSet, CondVector<Scalar>>;

/// sum_n 1_{A_n} X_n for a partition (A_n).
template <typename Scalar>
CondVector<Scalar> glue(std::span<const GluePiece<Scalar>> pieces) {
  std::vector<MeasurableSet> sets;
  sets.reserve(pieces.size());
  for (const auto& p : pieces) sets.push_back(p.first);
  const auto owner = partition_owners(sets);
  const auto& first = pieces.front().second;
  Matrix<Scalar> c(first.atoms(), first.dim());
  for (std::size_t n = 0; n < pieces.size(); ++n) {
    CondVector<Scalar>::check(first, pieces[n].second, "gluing");
    require_same_space(first.space(), pieces[n].first.space(), "gluing");
  }
  for (Index i = 0; i < c.rows(); ++i) c.row(i) = pieces[owner[static_cast<std::size_t>(i)]].second.row(i);
  return {first.space(), std::move(c)};
}

template <typename Scalar>
CondVector<Scalar> glue(std::initializer_list<GluePiece<Scalar>> pieces) {
  return glue(std::span<const GluePiece<Scalar>>(pieces.begin(), pieces.size()));
}

/// 1_A x + 1_{A^c} y.
template <typename Scalar>
CondVector<Scalar> glue_two(const MeasurableSet& a, const CondVector<Scalar>& x, const CondVector<Scalar>& y) {
  return glue<Scalar>({{a, x}, {a.complement(), y}});
}

template <typename Scalar>
CondExtScalar<Scalar> glue(std::span<const std::pair<MeasurableSet, CondExtScalar<Scalar>>> pieces) {
  std::vector<MeasurableSet> sets;
  for (const auto& p : pieces) sets.push_back(p.first);
  const auto owner = partition_owners(sets);
  Vector<Scalar> v(pieces.front().second.atoms());
  for (const auto& p : pieces)
    if (p.second.atoms() != v.size()) throw Error("gluing: atom count mismatch");
  for (Index i = 0; i < v.size(); ++i) v(i) = pieces[owner[static_cast<std::size_t>(i)]].second[i];
  return CondExtScalar<Scalar>(std::move(v));
}

/// X_N = sum_n 1_{N = n} X_n, with 1-based indices.
template <typename Scalar>
CondVector<Scalar> select_by_index(std::span<const CondVector<Scalar>> seq, const CondInteger& n) {
  if (seq.empty()) throw Error("index selection from an empty sequence");
  const auto& first = seq.front();
  if (n.atoms() != first.atoms()) throw Error("index selection: atom count mismatch");
  for (const auto& x : seq) CondVector<Scalar>::check(first, x, "index selection");
  Matrix<Scalar> c(first.atoms(), first.dim());
  for (Index i = 0; i < c.rows(); ++i) {
    const int idx = n[i];
    if (idx > static_cast<int>(seq.size())) throw Error("measurable index out of range");
    c.row(i) = seq[static_cast<std::size_t>(idx - 1)].row(i);
  }
  return {first.space(), std::move(c)};
}

enum class Extremum { sup, inf };

/// Essential supremum / infimum of a finite family: per-atom max / min.
template <typename Scalar>
CondExtScalar<Scalar> ess_extrema(std::span<const CondExtScalar<Scalar>> family, Extremum kind) {
  if (family.empty()) throw Error("essential extremum of an empty family");
  Vector<Scalar> v = family.front().values();
  for (const auto& x : family.subspan(1)) {
    if (x.atoms() != v.size()) throw Error("essential extremum: atom count mismatch");
    if (kind == Extremum::sup)
      v = v.cwiseMax(x.values());
    else
      v = v.cwiseMin(x.values());
  }
  return CondExtScalar<Scalar>(std::move(v));
}

/// The largest event B within A on which `pred(atom)` holds.
template <typename Pred>
MeasurableSet largest_set_where(Pred&& pred, const MeasurableSet& a) {
  Mask m = Mask::Constant(a.atoms(), false);
  for (Index i = 0; i < a.atoms(); ++i) m(i) = a.contains(i) && static_cast<bool>(pred(i));
  return {a.space(), std::move(m)};
}

}  // namespace condcvx
