#pragma once

// Brute-force reference computations used by the tests. None of these call
// into the library; they work on plain per-atom Eigen data.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using V2 = Eigen::Vector2d;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Rank of the row set by Gaussian elimination with full pivoting. A pivot
/// counts as zero when it is at most eps * max(1, largest row norm).
inline int gauss_rank(Mat a, double eps = 1e-9) {
  double scale = 1;
  for (Eigen::Index i = 0; i < a.rows(); ++i) scale = std::max(scale, a.row(i).norm());
  int rank = 0;
  for (Eigen::Index step = 0; step < std::min(a.rows(), a.cols()); ++step) {
    Eigen::Index pr = step, pc = step;
    double best = 0;
    for (Eigen::Index i = step; i < a.rows(); ++i)
      for (Eigen::Index j = step; j < a.cols(); ++j)
        if (std::abs(a(i, j)) > best) best = std::abs(a(i, j)), pr = i, pc = j;
    if (best <= eps * scale) break;
    a.row(step).swap(a.row(pr));
    a.col(step).swap(a.col(pc));
    for (Eigen::Index i = step + 1; i < a.rows(); ++i) a.row(i) -= a(i, step) / a(step, step) * a.row(step);
    ++rank;
  }
  return rank;
}

/// Orthonormal basis (columns) of the span of the rows of `rows`, by
/// column-pivoted Householder QR of the transpose.
inline Mat qr_span(const Mat& rows, int rank) {
  const Mat cols = rows.transpose();
  Eigen::ColPivHouseholderQR<Mat> qr(cols);
  const Mat q = qr.householderQ() * Mat::Identity(cols.rows(), cols.rows());
  return q.leftCols(rank);
}

/// sin of the largest principal angle between two spans (orthonormal columns).
inline double subspace_gap(const Mat& q1, const Mat& q2) {
  if (q1.cols() != q2.cols()) return 1;
  if (q1.cols() == 0) return 0;
  const Mat r = q2 - q1 * (q1.transpose() * q2);
  Eigen::JacobiSVD<Mat> svd(r);
  return svd.singularValues()(0);
}

/// Largest singular value by power iteration on A^T A.
inline double power_norm(const Mat& a, int iters = 2000) {
  Vec v = Vec::Ones(a.cols());
  for (int i = 0; i < a.cols(); ++i) v(i) += 0.1 * i;
  double sigma = 0;
  for (int it = 0; it < iters; ++it) {
    const Vec w = a.transpose() * (a * v);
    const double n = w.norm();
    if (n == 0) return 0;
    v = w / n;
    sigma = std::sqrt(n);
  }
  return sigma;
}

// ---- plane geometry -------------------------------------------------------

inline double cross(const V2& o, const V2& a, const V2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

/// Convex hull vertices in counter-clockwise order (monotone chain). Collinear
/// points are dropped; degenerate inputs give 1 or 2 vertices.
inline std::vector<V2> hull2d(std::vector<V2> p) {
  std::sort(p.begin(), p.end(), [](const V2& a, const V2& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<V2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 1e-14) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 1e-14) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

inline double point_segment(const V2& p, const V2& a, const V2& b) {
  const V2 ab = b - a;
  const double len = ab.squaredNorm();
  const double t = len == 0 ? 0 : std::clamp((p - a).dot(ab) / len, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

inline bool segments_cross(const V2& a, const V2& b, const V2& c, const V2& d) {
  const double d1 = cross(c, d, a), d2 = cross(c, d, b), d3 = cross(a, b, c), d4 = cross(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

inline double segment_distance(const V2& a, const V2& b, const V2& c, const V2& d) {
  if (segments_cross(a, b, c, d)) return 0;
  return std::min({point_segment(a, c, d), point_segment(b, c, d), point_segment(c, a, b), point_segment(d, a, b)});
}

/// Is p in the triangle (a, b, c), boundary included?
inline bool in_triangle(const V2& p, const V2& a, const V2& b, const V2& c) {
  const double s1 = cross(a, b, p), s2 = cross(b, c, p), s3 = cross(c, a, p);
  const bool neg = s1 < 0 || s2 < 0 || s3 < 0, pos = s1 > 0 || s2 > 0 || s3 > 0;
  return !(neg && pos);
}

inline bool in_conv(const V2& p, const std::vector<V2>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i; j < pts.size(); ++j)
      for (std::size_t k = j; k < pts.size(); ++k) {
        if (i == j || j == k) {
          if (point_segment(p, pts[i], pts[k]) == 0) return true;
          continue;
        }
        if (std::abs(cross(pts[i], pts[j], pts[k])) < 1e-300) continue;
        if (in_triangle(p, pts[i], pts[j], pts[k])) return true;
      }
  return false;
}

/// Distance between conv(P) and conv(Q) by enumerating every point pair as a
/// segment (the minimum over hull edges is among them) plus containment.
inline double polytope_distance(const std::vector<V2>& p, const std::vector<V2>& q) {
  for (const auto& x : p)
    if (in_conv(x, q)) return 0;
  for (const auto& y : q)
    if (in_conv(y, p)) return 0;
  double best = kInf;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i; j < p.size(); ++j)
      for (std::size_t k = 0; k < q.size(); ++k)
        for (std::size_t l = k; l < q.size(); ++l) best = std::min(best, segment_distance(p[i], p[j], q[k], q[l]));
  return best;
}

/// Relative position of the origin w.r.t. conv(pts) in the plane:
/// interior (2-d hull, strictly inside), relative interior, or neither.
struct OriginPosition {
  bool interior = false;
  bool relative_interior = false;
};

inline OriginPosition origin_position(const std::vector<V2>& pts, double margin = 1e-9) {
  const auto h = hull2d(pts);
  const V2 o(0, 0);
  OriginPosition r;
  if (h.size() >= 3) {
    bool inside = true;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const V2& a = h[i];
      const V2& b = h[(i + 1) % h.size()];
      if (cross(a, b, o) / (b - a).norm() <= margin) inside = false;
    }
    r.interior = r.relative_interior = inside;
  } else if (h.size() == 2) {
    const V2 u = (h[1] - h[0]).normalized();
    const double off = std::abs(cross(h[0], h[1], o)) / (h[1] - h[0]).norm();
    const double t = -h[0].dot(u);
    r.relative_interior = off <= 1e-12 && t > margin && t < (h[1] - h[0]).norm() - margin;
  } else {
    r.relative_interior = h[0].norm() <= 1e-12;
  }
  return r;
}

/// Minimum of max_j <x, s_j> + z_j over the polygon with CCW vertices `poly`
/// by vertex enumeration: every candidate optimum is a polygon vertex or the
/// intersection of two lines among the polygon edges and the piece ties.
struct PlanarArgmin {
  double value = kInf;
  V2 point;
  bool unique = true;
};

inline PlanarArgmin planar_argmin(const Mat& slopes, const Vec& offsets, const std::vector<V2>& poly) {
  auto f = [&](const V2& x) { return (slopes * x + offsets).maxCoeff(); };
  // Lines a.x = b.
  std::vector<std::pair<V2, double>> lines;
  const std::size_t m = poly.size();
  if (m >= 2) {
    for (std::size_t i = 0; i < m; ++i) {
      const V2 a = poly[i], b = poly[(i + 1) % m];
      const V2 n(b.y() - a.y(), a.x() - b.x());
      lines.emplace_back(n, n.dot(a));
    }
  }
  for (Eigen::Index i = 0; i < slopes.rows(); ++i)
    for (Eigen::Index j = i + 1; j < slopes.rows(); ++j) {
      const V2 n = (slopes.row(i) - slopes.row(j)).transpose();
      if (n.norm() > 1e-12) lines.emplace_back(n, offsets(j) - offsets(i));
    }
  auto inside = [&](const V2& x) {
    if (m == 1) return (x - poly[0]).norm() <= 1e-9;
    if (m == 2) return point_segment(x, poly[0], poly[1]) <= 1e-9;
    for (std::size_t i = 0; i < m; ++i)
      if (cross(poly[i], poly[(i + 1) % m], x) < -1e-9 * (1 + x.norm())) return false;
    return true;
  };
  std::vector<V2> cand(poly.begin(), poly.end());
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      Eigen::Matrix2d a;
      a.row(0) = lines[i].first.transpose();
      a.row(1) = lines[j].first.transpose();
      if (std::abs(a.determinant()) < 1e-12 * a.norm() * a.norm()) continue;
      const V2 x = a.partialPivLu().solve(V2(lines[i].second, lines[j].second));
      if (inside(x)) cand.push_back(x);
    }
  // Segment polygons: also intersections of tie lines with the segment.
  if (m == 2) {
    for (const auto& [n, b] : lines) {
      const double den = n.dot(poly[1] - poly[0]);
      if (std::abs(den) < 1e-14) continue;
      const double t = (b - n.dot(poly[0])) / den;
      if (t >= 0 && t <= 1) cand.push_back(poly[0] + t * (poly[1] - poly[0]));
    }
  }
  PlanarArgmin best;
  for (const auto& x : cand) {
    const double v = f(x);
    if (v < best.value) best.value = v, best.point = x;
  }
  const double tol = 1e-9 * (1 + std::abs(best.value));
  for (const auto& x : cand)
    if (f(x) <= best.value + tol && (x - best.point).norm() > 1e-7) best.unique = false;
  return best;
}

// ---- one-dimensional grid functions ---------------------------------------

/// max over finite nodes of x*y - f(x), exactly as a loop.
inline double legendre(const std::vector<double>& xs, const std::vector<double>& f, double y) {
  double best = -kInf;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (f[i] < kInf) best = std::max(best, xs[i] * y - f[i]);
  return best;
}

/// Lower convex envelope at the nodes: min over node pairs a <= x <= b of the
/// chord value (+inf outside conv(dom f)).
inline std::vector<double> envelope(const std::vector<double>& xs, const std::vector<double>& f) {
  const std::size_t n = xs.size();
  std::vector<double> out(n, kInf);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t a = 0; a <= x; ++a) {
      if (f[a] == kInf) continue;
      for (std::size_t b = x; b < n; ++b) {
        if (f[b] == kInf) continue;
        const double v = a == b ? f[a] : f[a] + (f[b] - f[a]) * (xs[x] - xs[a]) / (xs[b] - xs[a]);
        out[x] = std::min(out[x], v);
      }
    }
  return out;
}

/// min over i + j = k of f[i] + g[j]: output has f.size() + g.size() - 1 nodes.
inline std::vector<double> min_plus(const std::vector<double>& f, const std::vector<double>& g) {
  std::vector<double> out(f.size() + g.size() - 1, kInf);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      if (f[i] < kInf && g[j] < kInf) out[i + j] = std::min(out[i + j], f[i] + g[j]);
  return out;
}

// ---- sequences --------------------------------------------------------------

/// Scalar nested subsequence construction on one atom. x[n][i] is coordinate
/// i of term n+1. Level i: L = min over n of inf over the tail of the current
/// subsequence; N^i_n = min{m in previous level : m > N^i_{n-1}, x_m <= L + slack}.
/// Returns the first `depth` indices (1-based) of the last level, or nothing
/// if the horizon runs out.
inline std::optional<std::vector<int>> bw_classical(const std::vector<std::vector<double>>& x, int depth, double slack,
                                                    std::vector<double>* levels = nullptr) {
  std::vector<int> current;
  for (std::size_t n = 0; n < x.size(); ++n) current.push_back(static_cast<int>(n) + 1);
  const std::size_t d = x.empty() ? 0 : x[0].size();
  if (levels) levels->clear();
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> tail_inf(current.size());
    double run = kInf;
    for (std::size_t k = current.size(); k-- > 0;) {
      run = std::min(run, x[static_cast<std::size_t>(current[k] - 1)][i]);
      tail_inf[k] = run;
    }
    double level = kInf;
    for (double t : tail_inf) level = std::min(level, t);
    if (levels) levels->push_back(level);
    std::vector<int> next;
    int prev = 0;
    while (true) {
      int found = 0;
      for (int m : current)
        if (m > prev && x[static_cast<std::size_t>(m - 1)][i] <= level + slack) {
          found = m;
          break;
        }
      if (!found) break;
      next.push_back(found);
      prev = found;
    }
    current = std::move(next);
  }
  if (static_cast<int>(current.size()) < depth) return std::nullopt;
  current.resize(static_cast<std::size_t>(depth));
  return current;
}

/// Smallest n0 <= last_cut with max_{n0 <= a < b <= T} |x_a - x_b| <= eps, 0 if none.
inline int cauchy_cut(const std::vector<Vec>& x, double eps, int last_cut) {
  const int t = static_cast<int>(x.size());
  for (int n0 = 1; n0 <= last_cut; ++n0) {
    double diam = 0;
    for (int a = n0; a <= t; ++a)
      for (int b = a + 1; b <= t; ++b) diam = std::max(diam, (x[a - 1] - x[b - 1]).norm());
    if (diam <= eps) return n0;
  }
  return 0;
}

}  // namespace oracle
