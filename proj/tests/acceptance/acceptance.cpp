// Property-based acceptance run. Every criterion compares library output
// with a brute-force per-atom oracle from tests/support and prints one
// PASS/FAIL line. Exit status is nonzero if any criterion fails.
//
// usage: acceptance <path to condcvx executable> <tests/data directory>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "json.hpp"

#include "condcvx/convex_functions.hpp"
#include "condcvx/sequences.hpp"
#include "condcvx/stratified.hpp"
#include "instances.hpp"

using namespace condcvx;
using namespace testing_support;
using oracle::V2;

namespace {

// Pinned tolerances.
constexpr double kRankEps = 1e-9;
constexpr double kGramTol = 1e-9;
constexpr double kAngleTol = 1e-8;
constexpr double kProjTol = 1e-9;
constexpr double kStrongGapTol = 1e-7;
constexpr double kMinDisjointDistance = 0.1;
constexpr double kOracleMargin = 1e-9;
constexpr double kHbTol = 1e-9;
constexpr double kFmGapTol = 1e-9;
constexpr double kStepFactor = 2.0;
constexpr double kSubgradTol = 1e-9;
constexpr double kArgminTol = 1e-7;

struct Verdict {
  bool pass = true;
  std::string detail;
};

/// Counts checks and keeps the first few failure descriptions.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 3) notes_.push_back(what);
  }
  long checks() const { return checks_; }
  long failures() const { return failures_; }
  Verdict verdict(const std::string& summary) const {
    std::ostringstream o;
    o << summary << "; " << checks_ << " checks, " << failures_ << " failed";
    for (const auto& n : notes_) o << " | " << n;
    return {failures_ == 0, o.str()};
  }

 private:
  long checks_ = 0;
  long failures_ = 0;
  std::vector<std::string> notes_;
};

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(3);
  o << v;
  return o.str();
}

std::string where(int inst, Index atom) { return "instance " + std::to_string(inst) + " atom " + std::to_string(atom); }

/// The j-th generator collects point j of every atom's list.
std::vector<CondVector<double>> stack_points(const SpacePtr& s, const std::vector<std::vector<V2>>& per_atom_pts) {
  std::vector<CondVector<double>> out;
  for (std::size_t j = 0; j < per_atom_pts.front().size(); ++j)
    out.push_back(per_atom(s, 2, [&](Index i) { return Vec(per_atom_pts[static_cast<std::size_t>(i)][j]); }));
  return out;
}

std::vector<V2> differences(const std::vector<V2>& c, const std::vector<V2>& d) {
  std::vector<V2> out;
  for (const auto& a : c)
    for (const auto& b : d) out.push_back(a - b);
  return out;
}

std::vector<V2> cloud(Rng& rng, const V2& centre, double spread, int n) {
  std::vector<V2> p;
  for (int j = 0; j < n; ++j) p.emplace_back(centre + spread * V2(rng.normal(), rng.normal()));
  return p;
}

V2 unit_at(double angle) { return {std::cos(angle), std::sin(angle)}; }

// ---------------------------------------------------------------------------

Verdict rank_oracle() {
  Rng rng(1001);
  Tally t;
  for (int inst = 0; inst < 500; ++inst) {
    const auto s = MeasureSpace::uniform(rng.integer(1, 8));
    const Index d = rng.integer(1, 5);
    const auto gens = random_generators(rng, s, d, rng.integer(1, 7), inst % 2 == 0);
    const auto b = rank_partition<double>(gens, kRankEps);
    for (Index i = 0; i < s->atoms(); ++i) {
      const int r = oracle::gauss_rank(stacked(gens, i), kRankEps);
      t.check(b.labels(i) == r, where(inst, i) + ": label " + std::to_string(b.labels(i)) + " vs " + std::to_string(r));
    }
  }
  return t.verdict("500 instances");
}

Verdict frame_invariants() {
  Rng rng(1002);
  Tally t;
  double worst_gram = 0, worst_angle = 0;
  for (int inst = 0; inst < 300; ++inst) {
    const auto s = MeasureSpace::uniform(rng.integer(1, 8));
    const Index d = rng.integer(1, 5);
    const auto gens = random_generators(rng, s, d, rng.integer(1, 7), inst % 3 == 0);
    const auto f = orthonormalize(rank_partition<double>(gens, kRankEps));
    for (Index i = 0; i < s->atoms(); ++i) {
      const Mat u = f.at(i);
      const double gram = (u * u.transpose() - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
      const Mat g = stacked(gens, i);
      const int r = oracle::gauss_rank(g, kRankEps);
      const double angle = oracle::subspace_gap(oracle::qr_span(g, r), u.topRows(f.labels(i)).transpose());
      worst_gram = std::max(worst_gram, gram);
      worst_angle = std::max(worst_angle, angle);
      t.check(gram <= kGramTol, where(inst, i) + ": gram deviation " + fmt(gram));
      t.check(angle < kAngleTol, where(inst, i) + ": principal angle " + fmt(angle));
    }
  }
  return t.verdict("300 instances, worst gram " + fmt(worst_gram) + ", worst angle " + fmt(worst_angle));
}

Verdict projection_optimality() {
  Rng rng(1003);
  Tally t;
  for (int inst = 0; inst < 200; ++inst) {
    const auto s = MeasureSpace::uniform(rng.integer(1, 6));
    const Index d = rng.integer(1, 5);
    const auto gens = random_generators(rng, s, d, rng.integer(1, 5), inst % 2 == 0);
    const auto x = per_atom(s, d, [&](Index) { return Vec(3 * rng.normal_vec(d)); });
    const auto [y, z] = decompose(x, submodule_frame<double>(gens, kRankEps));
    for (Index i = 0; i < s->atoms(); ++i) {
      for (const auto& g : gens) {
        const double ip = std::abs(z.row(i).dot(g.row(i)));
        t.check(ip < kProjTol, where(inst, i) + ": <Z,G> = " + fmt(ip));
      }
    }
    for (int v = 0; v < 100; ++v) {
      const auto vv = per_atom(s, d, [&](Index i) {
        Vec acc = Vec::Zero(d);
        for (const auto& g : gens) acc += rng.normal() * g.row(i).transpose();
        return acc;
      });
      for (Index i = 0; i < s->atoms(); ++i) {
        const double zn = z.row(i).norm(), dn = (x.row(i) - vv.row(i)).norm();
        t.check(zn <= dn + kProjTol, where(inst, i) + ": ||Z|| " + fmt(zn) + " > ||X-V|| " + fmt(dn));
      }
    }
  }
  return t.verdict("200 instances x 100 members");
}

Verdict strong_separation() {
  Rng rng(1004);
  Tally t;
  auto run_pair = [&](int inst, bool mixed) {
    const Index k = rng.integer(1, 5);
    const auto s = MeasureSpace::uniform(k);
    const int nc = rng.integer(1, 5), nd = rng.integer(1, 5);
    std::vector<std::vector<V2>> cp(k), dp(k);
    std::vector<bool> meets(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
      const V2 c0(rng.uniform(-3, 3), rng.uniform(-3, 3));
      const bool intersect = mixed && rng.coin();
      while (true) {
        auto c = cloud(rng, c0, 0.7, nc);
        auto d = cloud(rng, c0 + rng.uniform(0.5, 4) * unit_at(rng.uniform(0, 6.3)), 0.7, nd);
        if (intersect) {
          // A shared point makes the distance exactly zero.
          const V2 q = c0 + 0.3 * V2(rng.normal(), rng.normal());
          c.back() = q;
          d.back() = q;
        }
        const double dist = oracle::polytope_distance(c, d);
        if (intersect || dist > kMinDisjointDistance) {
          meets[static_cast<std::size_t>(i)] = dist == 0.0;
          cp[static_cast<std::size_t>(i)] = c;
          dp[static_cast<std::size_t>(i)] = d;
          break;
        }
      }
    }
    const ConvexSetRep<double> c(stack_points(s, cp)), d(stack_points(s, dp));
    const auto r = separate(c, d, SeparationKind::strong);
    for (Index i = 0; i < k; ++i) {
      const bool expect_fail = meets[static_cast<std::size_t>(i)];
      t.check(r.failure.contains(i) == expect_fail, where(inst, i) + (expect_fail ? ": meeting atom not in failure set"
                                                                                   : ": disjoint atom in failure set"));
      if (!expect_fail && !r.failure.contains(i)) {
        const double nz = r.z.row(i).squaredNorm();
        t.check(r.gap[i] >= nz - kStrongGapTol, where(inst, i) + ": gap " + fmt(r.gap[i]) + " < ||Z||^2 " + fmt(nz));
      }
    }
  };
  for (int inst = 0; inst < 200; ++inst) run_pair(inst, false);
  for (int inst = 0; inst < 100; ++inst) run_pair(200 + inst, true);
  return t.verdict("200 disjoint + 100 mixed pairs");
}

/// Dyadic triangle around `c`: three vertices at radius 1..2.
std::vector<V2> triangle_around(Rng& rng, const V2& c) {
  std::vector<V2> p;
  const double phase = rng.uniform(0, 6.3);
  for (int j = 0; j < 3; ++j) {
    const V2 v = rng.uniform(1, 2) * unit_at(phase + 2.0944 * j);
    p.emplace_back(c + V2(std::round(v.x() * 64) / 64, std::round(v.y() * 64) / 64));
  }
  return p;
}

/// Triangle with vertex `p` lying in the closed halfplane <x - p, n> >= 0
/// (side = +1) or <= 0 (side = -1).
std::vector<V2> triangle_at_vertex(Rng& rng, const V2& p, const V2& n, int side) {
  const V2 tang(-n.y(), n.x());
  std::vector<V2> out = {p};
  for (int j = 0; j < 2; ++j)
    out.push_back(p + side * rng.integer(1, 4) * n + (j ? 1 : -1) * rng.integer(1, 4) * tang);
  return out;
}

/// Three collinear points a + t u (t in [lo, hi], plus the midpoint), exact
/// in binary arithmetic.
std::vector<V2> segment(const V2& a, const V2& u, int lo, int hi) {
  return {a + lo * u, a + hi * u, a + 0.5 * (lo + hi) * u};
}

Verdict weak_proper_separation() {
  Rng rng(1005);
  Tally t;
  for (auto kind : {SeparationKind::weak, SeparationKind::proper}) {
    const bool proper = kind == SeparationKind::proper;
    for (int inst = 0; inst < 100; ++inst) {
      const Index k = rng.integer(2, 6);
      const auto s = MeasureSpace::uniform(k);
      std::vector<std::vector<V2>> cp(k), dp(k);
      Mask in_s(k);
      for (Index i = 0; i < k; ++i) {
        const V2 c0(rng.integer(-8, 8) / 4.0, rng.integer(-8, 8) / 4.0);
        const V2 n = V2(rng.integer(1, 3), rng.integer(-3, 3));
        const V2 u(rng.integer(-3, 3), rng.integer(1, 3));
        const int pattern = rng.integer(0, 3);
        auto& c = cp[static_cast<std::size_t>(i)];
        auto& d = dp[static_cast<std::size_t>(i)];
        switch (pattern) {
          case 0:  // two triangles around a common centre: 0 in int(C - D)
            c = triangle_around(rng, c0);
            d = triangle_around(rng, c0);
            in_s(i) = true;
            break;
          case 1:  // triangles touching at a vertex
            c = triangle_at_vertex(rng, c0, n, 1);
            d = triangle_at_vertex(rng, c0, n, -1);
            in_s(i) = false;
            break;
          case 2:  // overlapping collinear segments: 0 in ri(C - D) but not int
            c = segment(c0, u, -2, 1);
            d = segment(c0, u, -1, 3);
            in_s(i) = proper;
            break;
          default:  // collinear segments meeting at an endpoint
            c = segment(c0, u, -2, 0);
            d = segment(c0, u, 0, 3);
            in_s(i) = false;
            break;
        }
        const auto pos = oracle::origin_position(differences(c, d), kOracleMargin);
        const bool oracle_fail = proper ? pos.relative_interior : pos.interior;
        t.check(oracle_fail == bool(in_s(i)), where(inst, i) + ": construction disagrees with the oracle");
      }
      const ConvexSetRep<double> c(stack_points(s, cp)), d(stack_points(s, dp));
      const auto r = separate(c, d, kind);
      t.check(r.failure == MeasurableSet(s, in_s),
              std::string(proper ? "proper" : "weak") + " instance " + std::to_string(inst) + ": failure set differs");
      for (Index i = 0; i < k; ++i) {
        if (in_s(i)) continue;
        t.check(r.gap[i] >= -kOracleMargin, where(inst, i) + ": negative gap " + fmt(r.gap[i]));
        if (proper) t.check(r.sup_gap[i] > 0, where(inst, i) + ": not proper, sup gap " + fmt(r.sup_gap[i]));
      }
    }
  }
  return t.verdict("100 weak + 100 proper stratified instances");
}

Verdict hahn_banach() {
  Rng rng(1006);
  Tally t;
  for (int inst = 0; inst < 100; ++inst) {
    const Index k = rng.integer(1, 4);
    const Index d = rng.integer(2, 3);
    const auto s = MeasureSpace::uniform(k);
    // p sublinear with 0 in int conv(slopes): +-c e_a plus random slopes.
    std::vector<AffinePiece<double>> pieces;
    for (Index a = 0; a < d; ++a)
      for (double sign : {-1.0, 1.0})
        pieces.push_back({per_atom(s, d, [&](Index) { return Vec(sign * rng.uniform(0.5, 2) * Vec::Unit(d, a)); }),
                          CondScalar<double>::constant(k, 0)});
    for (int j = 0; j < 3; ++j)
      pieces.push_back({per_atom(s, d, [&](Index) { return rng.normal_vec(d); }), CondScalar<double>::constant(k, 0)});
    const MaxAffineFn<double> p(pieces);

    const int nlines = d == 3 ? rng.integer(1, 2) : 1;
    std::vector<CondVector<double>> lines;
    for (int j = 0; j < nlines; ++j) lines.push_back(per_atom(s, d, [&](Index) { return rng.normal_vec(d); }));
    const ConvexSetRep<double> e({CondVector<double>::zero(s, d)}, {}, lines);
    const auto frame = submodule_frame<double>(lines);

    // g = <., w> on E with w a strictly interior mixture of the slopes.
    const auto w = per_atom(s, d, [&](Index i) {
      Vec lam = Vec::NullaryExpr(static_cast<Index>(pieces.size()), [&] { return rng.uniform(0.1, 1); });
      lam /= lam.sum();
      Vec acc = Vec::Zero(d);
      for (std::size_t j = 0; j < pieces.size(); ++j) acc += lam(static_cast<Index>(j)) * pieces[j].slope.row(i).transpose();
      return acc;
    });
    std::vector<CondScalar<double>> g;
    // One image per vector of E's frame; the remaining frame vectors span
    // the complement.
    for (Index j = 0; j < frame.labels.maxCoeff(); ++j) g.push_back(inner(frame.frame[static_cast<std::size_t>(j)], w));
    const auto h = hahn_banach_extend<double>(p, e, g);
    for (Index i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double err = std::abs(h.row(i).dot(frame.frame[j].row(i)) - g[j][i]);
        t.check(err < kHbTol, where(inst, i) + ": extension error " + fmt(err));
      }
      const Mat slopes = p.slopes(i);
      double worst = -1e300;
      for (int q = 0; q < 1000; ++q) {
        const Vec x = std::exp(rng.uniform(-3, 3)) * rng.normal_vec(d);
        worst = std::max(worst, h.row(i).dot(x) - (slopes * x).maxCoeff());
      }
      t.check(worst <= kHbTol, where(inst, i) + ": h exceeds p by " + fmt(worst));
    }
  }
  return t.verdict("100 instances, 1000 probes per atom");
}

std::vector<double> row_of(const GridFn<double>& f, Index atom) {
  return std::vector<double>(f.values.row(atom).begin(), f.values.row(atom).end());
}

std::vector<double> nodes_of(const Lattice<double>& g) {
  std::vector<double> xs;
  for (Index n = 0; n < g.nodes(); ++n) xs.push_back(g.node(n)(0));
  return xs;
}

Verdict fenchel_moreau() {
  Rng rng(1007);
  Tally t;
  const double h = 1.0 / 128;
  const Lattice<double> grid(Vec::Constant(1, -100 * h), Vec::Constant(1, h), Eigen::VectorXi::Constant(1, 201));
  const auto xs = nodes_of(grid);
  double worst = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const Index k = rng.integer(1, 4);
    const auto s = MeasureSpace::uniform(k);
    Mat v(k, grid.nodes());
    for (Index i = 0; i < k; ++i) {
      // Dyadic quadratic-plus-noise values with interior +inf holes, so all
      // arithmetic in the transforms is exact.
      const double a = rng.dyadic(2, 4), b = rng.dyadic(1, 4);
      for (Index n = 0; n < grid.nodes(); ++n) {
        const double x = xs[static_cast<std::size_t>(n)];
        const bool hole = n > 0 && n + 1 < grid.nodes() && rng.coin(0.1);
        v(i, n) = hole ? oracle::kInf : a * x * x + b * x + rng.dyadic(1.0 / 16, 10);
      }
    }
    const GridFn<double> f(s, grid, v);
    const auto r = fenchel_moreau_check(f);
    for (Index i = 0; i < k; ++i) {
      const auto fi = row_of(f, i);
      const auto env = oracle::envelope(xs, fi);
      for (Index n = 0; n < grid.nodes(); ++n) {
        const double dev = std::abs(r.biconj.values(i, n) - env[static_cast<std::size_t>(n)]);
        worst = std::max(worst, dev);
        t.check(dev <= kStepFactor * h, where(inst, i) + ": |f** - envelope| = " + fmt(dev));
        if (v(i, n) != oracle::kInf)
          t.check(v(i, n) >= r.biconj.values(i, n) - kFmGapTol, where(inst, i) + ": f < f**");
      }
      for (Index n = 0; n < r.dual.nodes(); ++n) {
        t.check(r.conj.values(i, n) == r.triconj.values(i, n), where(inst, i) + ": f* != f***");
        // The transform itself against the Legendre loop.
        t.check(r.conj.values(i, n) == oracle::legendre(xs, fi, r.dual.node(n)(0)),
                where(inst, i) + ": f* differs from the Legendre loop");
      }
    }
  }
  return t.verdict("50 grid functions, worst |f** - envelope| " + fmt(worst) + " (step " + fmt(h) + ")");
}

Verdict subgradients() {
  Rng rng(1008);
  Tally t;
  long bounded_returns = 0, bounded_rejects = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const Index k = rng.integer(1, 4);
    const Index d = rng.integer(2, 3);
    const auto s = MeasureSpace::uniform(k);
    const auto x0 = per_atom(s, d, [&](Index) { return rng.normal_vec(d); });
    const int np = rng.integer(3, 6);
    const int active = rng.integer(2, 3);
    std::vector<AffinePiece<double>> pieces;
    for (int j = 0; j < np; ++j) {
      const auto y = per_atom(s, d, [&](Index) { return rng.normal_vec(d); });
      // Value at X0: 1 for the first `active` pieces, below 1 otherwise.
      const auto target = per_atom(s, 1, [&](Index) { return Vec::Constant(1, j < active ? 1.0 : 1.0 - rng.uniform(0.1, 2)); });
      pieces.push_back({y, CondScalar<double>(target.coords().col(0) - inner(y, x0).values())});
    }
    // Half of the instances carry a domain with X0 at its centroid: a
    // triangle in the plane, or a flat triangle inside 3-space.
    const bool with_domain = inst % 2 == 1;
    std::vector<CondVector<double>> dom_pts;
    if (with_domain) {
      std::vector<Mat> frames;
      for (Index i = 0; i < k; ++i) frames.push_back(Eigen::HouseholderQR<Mat>(Mat(Mat::NullaryExpr(d, d, [&] { return rng.normal(); }))).householderQ() * Mat::Identity(d, 2));
      const double phase = rng.uniform(0, 6.3);
      for (int j = 0; j < 3; ++j)
        dom_pts.push_back(per_atom(s, d, [&](Index i) {
          return Vec(x0.row(i).transpose() + frames[static_cast<std::size_t>(i)] * unit_at(phase + 2.0944 * j));
        }));
      // Re-centre so that X0 is exactly the mean of the three vertices.
      const auto mean = CondVector<double>(s, (dom_pts[0].coords() + dom_pts[1].coords() + dom_pts[2].coords()) / 3.0);
      for (auto& p : dom_pts) p = p - mean + x0;
    }
    const MaxAffineFn<double> f = with_domain ? MaxAffineFn<double>(pieces, ConvexSetRep<double>(dom_pts))
                                              : MaxAffineFn<double>(pieces);
    const auto rep = subdifferential(f, x0);
    for (Index i = 0; i < k; ++i) {
      const Mat sl = f.slopes(i);
      const Vec off = f.offsets(i);
      const Vec xi = x0.row(i).transpose();
      const Vec yi = rep.representative.row(i).transpose();
      const double f0 = (sl * xi + off).maxCoeff();
      double worst = -1e300;
      for (int q = 0; q < 10000; ++q) {
        Vec hh;
        if (with_domain) {
          Vec lam(3);
          for (int j = 0; j < 3; ++j) lam(j) = -std::log(rng.uniform(1e-12, 1));
          lam /= lam.sum();
          Vec p = Vec::Zero(d);
          for (int j = 0; j < 3; ++j) p += lam(j) * dom_pts[static_cast<std::size_t>(j)].row(i).transpose();
          hh = p - xi;
        } else {
          hh = std::pow(10.0, rng.uniform(-4, 1)) * rng.unit(d);
        }
        const double fx = (sl * (xi + hh) + off).maxCoeff();
        worst = std::max(worst, hh.dot(yi) - (fx - f0));
      }
      t.check(worst < kSubgradTol, where(inst, i) + ": subgradient inequality violated by " + fmt(worst));
    }
    if (!with_domain) {
      // Growth bound V: comfortably large (the probe must pass) or below the
      // minimal subgradient norm (a return is then still checked).
      double vmax = 0;
      for (Index i = 0; i < k; ++i) vmax = std::max(vmax, f.slopes(i).rowwise().norm().maxCoeff());
      const bool generous = rng.coin();
      const Vec v = generous ? Vec::Constant(k, vmax * rng.uniform(1, 1.5))
                             : Vec(rep.representative.coords().rowwise().norm() * rng.uniform(0, 0.9));
      try {
        const auto y = bounded_subgradient(f, x0, CondScalar<double>(v), static_cast<std::uint64_t>(inst));
        ++bounded_returns;
        for (Index i = 0; i < k; ++i)
          t.check(y.row(i).norm() <= v(i) + kSubgradTol, where(inst, i) + ": ||Y|| above V");
      } catch (const PreconditionError&) {
        ++bounded_rejects;
        t.check(!generous, "instance " + std::to_string(inst) + ": growth probe failed for a valid bound");
      }
    }
  }
  return t.verdict("200 functions, 10^4 probes per atom; bounded variant " + std::to_string(bounded_returns) +
                   " returned, " + std::to_string(bounded_rejects) + " rejected");
}

Verdict conditional_argmin() {
  Rng rng(1009);
  Tally t;
  auto random_f = [&](const SpacePtr& s, int np) {
    std::vector<AffinePiece<double>> p;
    for (int j = 0; j < np; ++j)
      p.push_back({per_atom(s, 2, [&](Index) { return rng.normal_vec(2); }), CondScalar<double>(rng.normal_vec(s->atoms()))});
    return MaxAffineFn<double>(p);
  };
  for (int inst = 0; inst < 200; ++inst) {
    const Index k = rng.integer(1, 4);
    const auto s = MeasureSpace::uniform(k);
    std::vector<CondVector<double>> pts;
    const int n = rng.integer(3, 6);
    for (int j = 0; j < n; ++j) pts.push_back(per_atom(s, 2, [&](Index) { return rng.normal_vec(2); }));
    const auto f = random_f(s, rng.integer(1, 4));
    const auto r = argmin(f, ConvexSetRep<double>(pts));
    t.check(r.coercive_on.is_full() && r.unbounded_on.is_null(), "instance " + std::to_string(inst) + ": not coercive");
    for (Index i = 0; i < k; ++i) {
      const auto poly = oracle::hull2d(plane_points(pts, i));
      const auto o = oracle::planar_argmin(f.slopes(i), f.offsets(i), poly);
      const V2 xi(r.x.coords()(i, 0), r.x.coords()(i, 1));
      t.check(std::abs(r.value[i] - o.value) <= kArgminTol, where(inst, i) + ": value " + fmt(r.value[i]) + " vs " + fmt(o.value));
      t.check(std::abs((f.slopes(i) * xi + f.offsets(i)).maxCoeff() - o.value) <= kArgminTol, where(inst, i) + ": f(X) off the optimum");
      t.check(oracle::polytope_distance({xi}, poly) <= kArgminTol, where(inst, i) + ": minimizer outside C");
    }
  }
  // Stratified: atoms drawn from two templates with different minimizers.
  for (int inst = 0; inst < 100; ++inst) {
    const Index k = rng.integer(3, 6);
    const auto one = MeasureSpace::uniform(1);
    std::array<std::vector<V2>, 2> poly;
    std::array<Mat, 2> sl;
    std::array<Vec, 2> off;
    std::array<oracle::PlanarArgmin, 2> best;
    while (true) {
      for (int tpl = 0; tpl < 2; ++tpl) {
        poly[tpl] = cloud(rng, V2(0, 0), 1.0, 5);
        const int np = rng.integer(1, 2);
        sl[tpl] = Mat(np, 2);
        off[tpl] = Vec(np);
        for (int j = 0; j < np; ++j) {
          sl[tpl].row(j) = rng.normal_vec(2).transpose();
          off[tpl](j) = rng.normal();
        }
        best[tpl] = oracle::planar_argmin(sl[tpl], off[tpl], oracle::hull2d(poly[tpl]));
      }
      if (best[0].unique && best[1].unique && (best[0].point - best[1].point).norm() > 1e-3) break;
    }
    std::vector<int> which(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) which[static_cast<std::size_t>(i)] = i < 2 ? static_cast<int>(i) : rng.integer(0, 1);
    const auto s = MeasureSpace::uniform(k);
    std::vector<std::vector<V2>> cp(k);
    for (Index i = 0; i < k; ++i) cp[static_cast<std::size_t>(i)] = poly[which[static_cast<std::size_t>(i)]];
    std::vector<AffinePiece<double>> pieces;
    const Index np = std::max(sl[0].rows(), sl[1].rows());
    for (Index j = 0; j < np; ++j) {
      // Pad the shorter template by repeating its last piece.
      auto pick = [&](Index i) { return std::min(j, sl[which[static_cast<std::size_t>(i)]].rows() - 1); };
      pieces.push_back({per_atom(s, 2, [&](Index i) { return Vec(sl[which[static_cast<std::size_t>(i)]].row(pick(i)).transpose()); }),
                        CondScalar<double>(Vec::NullaryExpr(k, [&](Index i) { return off[which[static_cast<std::size_t>(i)]](pick(i)); }))});
    }
    const auto r = argmin(MaxAffineFn<double>(pieces), ConvexSetRep<double>(stack_points(s, cp)));
    t.check(r.unique_on.is_full(), "stratified instance " + std::to_string(inst) + ": uniqueness not detected");
    for (Index i = 0; i < k; ++i) {
      const V2 xi(r.x.coords()(i, 0), r.x.coords()(i, 1));
      t.check((xi - best[which[static_cast<std::size_t>(i)]].point).norm() <= kArgminTol,
              "stratified " + where(inst, i) + ": minimizer off the template optimum");
      for (Index j = 0; j < k; ++j) {
        const bool same = (r.x.row(i) - r.x.row(j)).norm() <= kArgminTol;
        t.check(same == (which[static_cast<std::size_t>(i)] == which[static_cast<std::size_t>(j)]),
                "stratified " + where(inst, i) + ": agreement pattern differs from the oracle");
      }
    }
  }
  return t.verdict("200 random + 100 stratified instances");
}

Verdict inf_convolution_checks() {
  Rng rng(1010);
  Tally t;
  const double h = 1.0 / 64;
  double worst = 0;
  auto random_grid = [&](const SpacePtr& s) {
    const Lattice<double> g(Vec::Constant(1, rng.integer(-64, 32) * h), Vec::Constant(1, h),
                            Eigen::VectorXi::Constant(1, rng.integer(33, 65)));
    Mat v(s->atoms(), g.nodes());
    for (Index i = 0; i < s->atoms(); ++i) {
      for (Index n = 0; n < g.nodes(); ++n) v(i, n) = rng.coin(0.15) ? oracle::kInf : rng.dyadic(4, 6);
      v(i, rng.integer(0, static_cast<int>(g.nodes()) - 1)) = rng.dyadic(4, 6);
    }
    return GridFn<double>(s, g, v);
  };
  for (int inst = 0; inst < 50; ++inst) {
    const auto s = MeasureSpace::uniform(rng.integer(1, 4));
    const auto f1 = random_grid(s), f2 = random_grid(s);
    const auto c = inf_convolution<double>({f1, f2});
    t.check(c.g.grid.mins(0) == f1.grid.mins(0) + f2.grid.mins(0), "instance " + std::to_string(inst) + ": lattice origin");
    const auto rep = infconv_checks<double>({f1, f2});
    for (Index i = 0; i < s->atoms(); ++i) {
      const auto o = oracle::min_plus(row_of(f1, i), row_of(f2, i));
      t.check(static_cast<Index>(o.size()) == c.g.grid.nodes(), where(inst, i) + ": node count");
      for (Index n = 0; n < c.g.grid.nodes() && n < static_cast<Index>(o.size()); ++n)
        t.check(c.g.values(i, n) == o[static_cast<std::size_t>(n)], where(inst, i) + ": min-plus mismatch");
      // (f1 box f2)* against f1* + f2*, both from the Legendre loop, on
      // the dual lattice used by the library check.
      const auto xs = nodes_of(c.g.grid), x1 = nodes_of(f1.grid), x2 = nodes_of(f2.grid);
      const auto v1 = row_of(f1, i), v2 = row_of(f2, i);
      for (Index n = 0; n < rep.dual.nodes(); ++n) {
        const double y = rep.dual.node(n)(0);
        const double lhs = oracle::legendre(xs, o, y);
        const double rhs = oracle::legendre(x1, v1, y) + oracle::legendre(x2, v2, y);
        worst = std::max(worst, std::abs(lhs - rhs));
        t.check(std::abs(lhs - rhs) <= kStepFactor * h, where(inst, i) + ": conjugate additivity");
      }
      t.check(rep.conj_deviation[i] <= kStepFactor * h, where(inst, i) + ": library conjugate deviation " + fmt(rep.conj_deviation[i]));
    }
    // Indicator of {0}.
    const GridFn<double> delta(s, Lattice<double>(Vec::Zero(1), Vec::Constant(1, h), Eigen::VectorXi::Ones(1)),
                               Mat::Zero(s->atoms(), 1));
    for (const auto* f : {&f1, &f2}) {
      const auto id = inf_convolution<double>({*f, delta});
      t.check(id.g.grid == f->grid, "instance " + std::to_string(inst) + ": identity lattice");
      t.check(id.g.grid == f->grid && (id.g.values.array() == f->values.array()).all(),
              "instance " + std::to_string(inst) + ": f box delta_0 != f");
    }
  }
  return t.verdict("50 pairs, worst conjugate deviation " + fmt(worst));
}

Verdict bolzano_weierstrass() {
  Rng rng(1011);
  Tally t;
  const int horizon = 200, depth = 10;
  for (int inst = 0; inst < 100; ++inst) {
    const Index k = rng.integer(1, 4);
    const Index d = rng.integer(1, 3);
    const double delta = std::array<double, 3>{0.01, 0.1, 0.5}[static_cast<std::size_t>(rng.integer(0, 2))];
    const auto s = MeasureSpace::uniform(k);
    // Per atom a periodic pattern (period 1..3) on a 3 delta lattice plus
    // noise below delta / 4: residue classes either tie or sit well apart,
    // so every thinning step keeps whole classes and the horizon suffices.
    std::vector<int> period(static_cast<std::size_t>(k));
    std::vector<Mat> pattern;
    for (Index i = 0; i < k; ++i) {
      period[static_cast<std::size_t>(i)] = rng.integer(1, 3);
      pattern.push_back(Mat(period[static_cast<std::size_t>(i)], d));
      for (Index a = 0; a < pattern.back().size(); ++a) pattern.back().data()[a] = 3 * delta * rng.integer(-5, 5);
    }
    std::vector<CondVector<double>> terms;
    for (int n = 1; n <= horizon; ++n)
      terms.push_back(per_atom(s, d, [&](Index i) {
        const Vec base = pattern[static_cast<std::size_t>(i)].row(n % period[static_cast<std::size_t>(i)]).transpose();
        return Vec(base + Vec::NullaryExpr(d, [&] { return rng.uniform(-delta / 4, delta / 4); }));
      }));
    Vec bound = Vec::Zero(k);
    for (const auto& x : terms) bound = bound.cwiseMax(x.coords().rowwise().norm());
    const CondSequence<double> seq(terms, CondScalar<double>(bound));
    const auto r = bw_extract(seq, depth, delta);
    for (Index i = 0; i < k; ++i) {
      std::vector<std::vector<double>> x;
      for (const auto& term : terms) x.emplace_back(term.row(i).begin(), term.row(i).end());
      std::vector<double> levels;
      const auto o = oracle::bw_classical(x, depth, delta, &levels);
      t.check(o.has_value(), where(inst, i) + ": oracle stalled");
      for (int j = 0; j < depth; ++j) {
        const int nj = r.indices[static_cast<std::size_t>(j)][i];
        if (j > 0) t.check(nj > r.indices[static_cast<std::size_t>(j - 1)][i], where(inst, i) + ": indices not increasing");
        if (o) t.check(nj == (*o)[static_cast<std::size_t>(j)], where(inst, i) + ": index differs from the classical construction");
        for (Index a = 0; a < d; ++a) {
          const double gap = std::abs(x[static_cast<std::size_t>(nj - 1)][static_cast<std::size_t>(a)] - levels[static_cast<std::size_t>(a)]);
          t.check(gap <= delta * static_cast<double>(d), where(inst, i) + ": selected value " + fmt(gap) + " from the liminf");
        }
      }
    }
  }
  return t.verdict("100 sequences, T = 200, m = 10");
}

/// Runs a shell command and returns (exit status, stdout).
std::pair<int, std::string> capture(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, out};
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

Verdict determinism(const std::string& tool, const std::string& data) {
  Tally t;
  std::ifstream in(data + "/suite.json");
  if (!in) return {false, "cannot read " + data + "/suite.json"};
  const auto suite = nlohmann::json::parse(in);
  for (const auto& entry : suite) {
    std::string base = quoted(tool) + " " + entry["command"].get<std::string>() + " " +
                       quoted(data + "/" + entry["scenario"].get<std::string>());
    for (const auto& f : entry["flags"]) base += " " + quoted(f.get<std::string>());
    std::vector<std::pair<int, std::string>> runs;
    for (int threads : {1, 8, 1, 8}) runs.push_back(capture(base + " --threads " + std::to_string(threads) + " 2>/dev/null"));
    const auto name = entry["name"].get<std::string>();
    const int expected = entry.value("exit", 0);
    t.check(runs[0].first == expected, name + ": exit " + std::to_string(runs[0].first));
    // Input errors (exit 1) emit no document; every other run must.
    t.check(runs[0].second.empty() == (expected == 1), name + ": unexpected output presence");
    for (std::size_t j = 1; j < runs.size(); ++j)
      t.check(runs[j] == runs[0], name + ": run " + std::to_string(j) + " differs");
  }
  return t.verdict(std::to_string(suite.size()) + " suite documents, threads 1/8/1/8");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <condcvx executable> <tests/data directory>\n";
    return 1;
  }
  const std::string tool = argv[1], data = argv[2];
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"rank partition vs Gaussian elimination", rank_oracle},
      {"orthonormal frame: Gram and QR span", frame_invariants},
      {"projection onto a submodule", projection_optimality},
      {"strong separation", strong_separation},
      {"weak and proper separation failure sets", weak_proper_separation},
      {"Hahn-Banach domination", hahn_banach},
      {"Fenchel-Moreau on grids", fenchel_moreau},
      {"subgradient inequality and growth bound", subgradients},
      {"conditional argmin", conditional_argmin},
      {"inf-convolution", inf_convolution_checks},
      {"Bolzano-Weierstrass extractor", bolzano_weierstrass},
      {"CLI determinism across thread counts", [&] { return determinism(tool, data); }},
  };
  int failed = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[c].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << (c + 1 < 10 ? " " : "") << c + 1 << "  " << criteria[c].first
              << "  (" << v.detail << "; " << fmt(secs) << " s)" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
