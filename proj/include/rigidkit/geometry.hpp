#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rigidkit/linalg.hpp"
#include "rigidkit/multigraph.hpp"

namespace rigidkit {

// Homogeneous point: d+1 coordinates, last one 1 for finite points and 0 for
// points at infinity.
using Point = Vec;

inline Point finite_point(const Vec& x) {
  Point p = x;
  p.push_back(1);
  return p;
}

inline Point point_at_infinity(const Vec& x) {
  Point p = x;
  p.push_back(0);
  return p;
}

inline Vec affine_part(const Point& p) {
  if (p.back() == 0) throw std::invalid_argument("point at infinity has no affine part");
  Vec x(p.begin(), p.end() - 1);
  for (auto& c : x) c /= p.back();
  return x;
}

// r-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> combinations(int n, int r) {
  std::vector<std::vector<int>> out;
  if (r < 0 || r > n) return out;
  std::vector<int> c(r);
  for (int i = 0; i < r; ++i) c[i] = i;
  for (;;) {
    out.push_back(c);
    int i = r - 1;
    while (i >= 0 && c[i] == n - r + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

// Sign attached to a deleted-column tuple, with columns counted from 0.
inline int deleted_sign(const std::vector<int>& deleted) {
  int s = 1;
  for (int i : deleted) s += i;
  return s % 2 == 0 ? 1 : -1;
}

struct Extensor {
  int k = 0;
  Vec coords;                     // empty when the join overflows d+1
  std::vector<Point> generators;  // kept so joins stay well-defined
};

inline Extensor pluecker(const std::vector<Point>& points, const Dimension& dim) {
  const int k = static_cast<int>(points.size());
  const int n = dim.d + 1;
  if (k < 1 || k > n) throw std::invalid_argument("pluecker needs 1..d+1 points");
  for (const auto& p : points)
    if (static_cast<int>(p.size()) != n) throw std::invalid_argument("point has wrong length");
  Extensor E{k, {}, points};
  for (const auto& del : combinations(n, n - k)) {
    std::vector<int> keep;
    for (int c = 0; c < n; ++c)
      if (!std::binary_search(del.begin(), del.end(), c)) keep.push_back(c);
    Mat M(k, Vec(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) M[i][j] = points[i][keep[j]];
    E.coords.push_back(deleted_sign(del) * determinant(std::move(M)));
  }
  return E;
}

inline Extensor join(const Extensor& P, const Extensor& Q, const Dimension& dim) {
  if (P.k + Q.k > dim.d + 1) return Extensor{P.k + Q.k, {}, {}};
  std::vector<Point> pts = P.generators;
  pts.insert(pts.end(), Q.generators.begin(), Q.generators.end());
  return pluecker(pts, dim);
}

inline bool is_zero(const Extensor& E) { return E.coords.empty() || is_zero(E.coords); }

// A (d-2)-affine subspace given by d-1 spanning points (homogeneous).
struct Hinge {
  std::vector<Point> points;
};

inline Extensor hinge_extensor(const Hinge& A, const Dimension& dim) {
  if (static_cast<int>(A.points.size()) != dim.d - 1) throw std::invalid_argument("hinge needs d-1 points");
  Extensor C = pluecker(A.points, dim);
  if (is_zero(C)) throw std::invalid_argument("hinge points are affinely dependent");
  return C;
}

inline Extensor translation_extensor(const Vec& x, const Dimension& dim) {
  if (static_cast<int>(x.size()) != dim.d || is_zero(x)) throw std::invalid_argument("translation needs a nonzero d-vector");
  std::vector<Point> pts;
  for (const auto& b : nullspace(Mat{x}, dim.d)) pts.push_back(point_at_infinity(b));
  return pluecker(pts, dim);
}

// Canonical basis of the orthogonal complement of <C>: pivot at the first
// nonzero coordinate j, rows e_k - (C_k / C_j) e_j for k != j.
inline Mat complement_basis(const Vec& C) {
  std::size_t j = 0;
  while (j < C.size() && C[j] == 0) ++j;
  if (j == C.size()) throw std::invalid_argument("zero extensor has no complement basis");
  Mat R;
  for (std::size_t k = 0; k < C.size(); ++k) {
    if (k == j) continue;
    Vec r(C.size());
    r[k] = 1;
    r[j] = -C[k] / C[j];
    R.push_back(std::move(r));
  }
  return R;
}

// Join of a (d-1)-vector S (any screw center, not only decomposable ones) with
// a point, by Laplace expansion along the point's row.
inline Vec motion_at_point(const Vec& S, const Point& p, const Dimension& dim) {
  const int n = dim.d + 1;
  if (static_cast<int>(S.size()) != dim.D || static_cast<int>(p.size()) != n)
    throw std::invalid_argument("motion_at_point: wrong lengths");
  std::map<std::pair<int, int>, int> pos;
  int idx = 0;
  for (const auto& del : combinations(n, 2)) pos[{del[0], del[1]}] = idx++;
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    Scalar sum = 0;
    for (int c = 0; c < n; ++c) {
      if (c == i) continue;
      const int col = c < i ? c + 1 : c;  // 1-based position among the kept columns
      const int a = std::min(i, c), b = std::max(i, c);
      const int sign = ((dim.d + col) % 2 == 0 ? 1 : -1) * deleted_sign({a, b});
      sum += sign * p[c] * S[pos[{a, b}]];
    }
    out[i] = deleted_sign({i}) * sum;
  }
  return out;
}

inline bool extensor_basis_check(const std::vector<Point>& points, const Dimension& dim) {
  if (static_cast<int>(points.size()) != dim.d + 1) throw std::invalid_argument("need d+1 points");
  Mat rows;
  for (const auto& sub : combinations(dim.d + 1, dim.d - 1)) {
    std::vector<Point> pts;
    for (int i : sub) pts.push_back(points[i]);
    rows.push_back(pluecker(pts, dim).coords);
  }
  return rank(rows) == dim.D;
}

// Hyperplane {x : x . c = 1}; never through the origin.
struct Panel {
  Vec c;
};

inline bool on_panel(const Panel& P, const Point& p) {
  Scalar s = 0;
  for (std::size_t i = 0; i < P.c.size(); ++i) s += P.c[i] * p[i];
  return s == p.back();
}

inline bool hinge_on_panel(const Panel& P, const Hinge& h) {
  return std::all_of(h.points.begin(), h.points.end(), [&](const Point& p) { return on_panel(P, p); });
}

inline bool parallel_normals(const Vec& a, const Vec& b) { return rank(Mat{a, b}) < 2; }

struct PanelMeet {
  enum class Kind { Meet, Coincident, Parallel } kind = Kind::Meet;
  Hinge hinge;
};

inline PanelMeet panel_intersection(const Panel& P1, const Panel& P2, const Dimension& dim) {
  PanelMeet r;
  if (P1.c == P2.c) {
    r.kind = PanelMeet::Kind::Coincident;
    return r;
  }
  if (parallel_normals(P1.c, P2.c)) {
    r.kind = PanelMeet::Kind::Parallel;
    return r;
  }
  Mat A{P1.c, P2.c};
  auto x0 = solve(A, Vec{1, 1});
  if (!x0) throw std::logic_error("independent panel normals must meet");
  r.hinge.points.push_back(finite_point(*x0));
  for (const auto& n : nullspace(A, dim.d)) r.hinge.points.push_back(finite_point(added(*x0, n)));
  return r;
}

// Same (d-2)-flat iff the extensors are proportional.
inline bool same_flat(const Hinge& a, const Hinge& b, const Dimension& dim) {
  return rank(Mat{hinge_extensor(a, dim).coords, hinge_extensor(b, dim).coords}) == 1;
}

inline Panel random_panel(Rng& rng, const Dimension& dim) {
  for (;;) {
    Vec c = rng.vector(dim.d);
    if (!is_zero(c)) return Panel{c};
  }
}

inline Point random_point_on_panel(Rng& rng, const Panel& P) {
  std::size_t j = 0;
  while (P.c[j] == 0) ++j;
  Vec x = rng.vector(static_cast<int>(P.c.size()));
  Scalar s = 1;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (k != j) s -= P.c[k] * x[k];
  x[j] = s / P.c[j];
  return finite_point(x);
}

inline Hinge random_hinge(Rng& rng, const Dimension& dim) {
  for (;;) {
    Hinge h;
    for (int i = 0; i < dim.d - 1; ++i) h.points.push_back(finite_point(rng.vector(dim.d)));
    if (!is_zero(pluecker(h.points, dim))) return h;
  }
}

inline Hinge random_hinge_in_panel(Rng& rng, const Panel& P, const Dimension& dim) {
  for (;;) {
    Hinge h;
    for (int i = 0; i < dim.d - 1; ++i) h.points.push_back(random_point_on_panel(rng, P));
    if (!is_zero(pluecker(h.points, dim))) return h;
  }
}

}  // namespace rigidkit
