#pragma once

#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "rigidkit/geometry.hpp"
#include "rigidkit/multigraph.hpp"
#include "rigidkit/tree_packing.hpp"

namespace rigidkit {

struct BodyHingeRealization {
  Dimension dim;
  std::map<int, Hinge> hinges;  // edge id -> hinge
};

struct PanelHingeRealization {
  Dimension dim;
  std::vector<Panel> panels;  // vertex -> panel
  std::map<int, Hinge> hinges;

  BodyHingeRealization body() const { return {dim, hinges}; }
};

struct RigidityMatrix {
  int D = 0;
  int vertices = 0;
  Mat entries;
  std::vector<EdgeCopy> row_of;  // row -> (edge id, copy)

  int column(int v, int i) const { return v * D + i; }
  int cols() const { return D * vertices; }
};

// Replaces the canonical complement basis of each hinge with a random
// invertible recombination of it; the row space of each block is unchanged.
struct BasisScrambler {
  Rng* rng = nullptr;
};

inline RigidityMatrix assemble(const Multigraph& G, const BodyHingeRealization& p, BasisScrambler scramble = {}) {
  const Dimension& dim = p.dim;
  RigidityMatrix R;
  R.D = dim.D;
  R.vertices = G.vertex_count();
  for (const auto& e : G.edges()) {
    auto it = p.hinges.find(e.id);
    if (it == p.hinges.end()) throw std::invalid_argument("realization misses edge " + std::to_string(e.id));
    Mat r = complement_basis(hinge_extensor(it->second, dim).coords);
    if (scramble.rng) {
      Mat T;
      do {
        T.assign(dim.D - 1, Vec());
        for (auto& row : T) row = scramble.rng->vector(dim.D - 1);
      } while (rank(T) < dim.D - 1);
      Mat mixed(dim.D - 1, Vec(dim.D));
      for (int i = 0; i < dim.D - 1; ++i)
        for (int k = 0; k < dim.D - 1; ++k)
          for (int j = 0; j < dim.D; ++j) mixed[i][j] += T[i][k] * r[k][j];
      r = std::move(mixed);
    }
    for (int i = 0; i < dim.D - 1; ++i) {
      Vec row(R.cols());
      for (int j = 0; j < dim.D; ++j) {
        row[R.column(e.u, j)] = r[i][j];
        row[R.column(e.v, j)] = -r[i][j];
      }
      R.entries.push_back(std::move(row));
      R.row_of.push_back({e.id, i + 1});
    }
  }
  return R;
}

inline RigidityMatrix assemble(const Multigraph& G, const PanelHingeRealization& p) { return assemble(G, p.body()); }

inline int rank(const RigidityMatrix& R) { return rank(R.entries); }

inline int degrees_of_freedom(const Multigraph& G, const BodyHingeRealization& p) {
  return p.dim.D * (G.vertex_count() - 1) - rank(assemble(G, p));
}

inline int rank_without_vertex(const RigidityMatrix& R, int v) {
  if (v < 0 || v >= R.vertices) throw std::out_of_range("vertex out of range");
  Mat M;
  for (const auto& row : R.entries) {
    Vec r;
    for (int c = 0; c < R.cols(); ++c)
      if (c / R.D != v) r.push_back(row[c]);
    M.push_back(std::move(r));
  }
  if (M.empty() || M[0].empty()) return 0;
  return rank(M);
}

using Motion = std::vector<Vec>;  // vertex -> screw center

struct MotionSpace {
  std::vector<Motion> all;
  std::vector<Motion> trivial;
  int nontrivial_dim = 0;
};

inline Motion to_motion(const Vec& x, int D, int n) {
  Motion m(n);
  for (int v = 0; v < n; ++v) m[v] = Vec(x.begin() + v * D, x.begin() + (v + 1) * D);
  return m;
}

inline Vec flatten(const Motion& m) {
  Vec x;
  for (const auto& s : m) x.insert(x.end(), s.begin(), s.end());
  return x;
}

inline MotionSpace motion_space(const RigidityMatrix& R) {
  MotionSpace ms;
  Mat basis = R.entries.empty() ? Mat{} : nullspace(R.entries, R.cols());
  if (R.entries.empty())
    for (int c = 0; c < R.cols(); ++c) {
      Vec x(R.cols());
      x[c] = 1;
      basis.push_back(std::move(x));
    }
  for (auto& x : basis) {
    std::size_t j = 0;
    while (j < x.size() && x[j] == 0) ++j;
    const Scalar s = x[j];
    for (auto& y : x) y /= s;
    ms.all.push_back(to_motion(x, R.D, R.vertices));
  }
  for (int i = 0; i < R.D; ++i) {
    Motion m(R.vertices, Vec(R.D));
    for (auto& s : m) s[i] = 1;
    ms.trivial.push_back(std::move(m));
  }
  ms.nontrivial_dim = static_cast<int>(ms.all.size()) - (R.vertices > 0 ? R.D : 0);
  return ms;
}

inline void dump_matrix(std::ostream& os, const RigidityMatrix& R) {
  for (std::size_t i = 0; i < R.entries.size(); ++i) {
    os << R.row_of[i].edge << ' ' << R.row_of[i].copy << " :";
    for (const auto& x : R.entries[i]) os << ' ' << to_string(x);
    os << '\n';
  }
}

// Incidence invariants of a panel-and-hinge realization. Returns an empty
// string when valid, else a description of the first violation. With
// strict_parallel off, parallel edges may also share the one flat where two
// distinct panels meet (re-added redundant edges do this).
inline std::string panel_realization_error(const Multigraph& G, const PanelHingeRealization& p,
                                           bool strict_parallel = true) {
  if (static_cast<int>(p.panels.size()) != G.vertex_count()) return "panel count differs from vertex count";
  for (const auto& P : p.panels)
    if (static_cast<int>(P.c.size()) != p.dim.d || is_zero(P.c)) return "malformed panel";
  for (const auto& e : G.edges()) {
    auto it = p.hinges.find(e.id);
    if (it == p.hinges.end()) return "edge " + std::to_string(e.id) + " has no hinge";
    if (static_cast<int>(it->second.points.size()) != p.dim.d - 1 || is_zero(pluecker(it->second.points, p.dim)))
      return "edge " + std::to_string(e.id) + " has a degenerate hinge";
    if (!hinge_on_panel(p.panels[e.u], it->second) || !hinge_on_panel(p.panels[e.v], it->second))
      return "edge " + std::to_string(e.id) + " hinge leaves an endpoint panel";
  }
  if (!strict_parallel) return "";
  for (const auto& e : G.edges())
    for (int f : edges_between(G, e.u, e.v)) {
      if (f <= e.id) continue;
      if (p.panels[e.u].c != p.panels[e.v].c) return "parallel edges between distinct panels";
      if (same_flat(p.hinges.at(e.id), p.hinges.at(f), p.dim)) return "parallel edges share a hinge";
    }
  return "";
}

// Every two panels meet in a (d-2)-flat.
inline bool is_nonparallel(const PanelHingeRealization& p) {
  for (std::size_t u = 0; u < p.panels.size(); ++u)
    for (std::size_t v = u + 1; v < p.panels.size(); ++v)
      if (parallel_normals(p.panels[u].c, p.panels[v].c)) return false;
  return true;
}

// Every two panels meet or coincide.
inline bool is_nondegenerate(const PanelHingeRealization& p) {
  for (std::size_t u = 0; u < p.panels.size(); ++u)
    for (std::size_t v = u + 1; v < p.panels.size(); ++v)
      if (p.panels[u].c != p.panels[v].c && parallel_normals(p.panels[u].c, p.panels[v].c)) return false;
  return true;
}

inline int predicted_rank(const Multigraph& G, const Dimension& dim) { return rank_and_base(G, dim).rank; }

}  // namespace rigidkit
