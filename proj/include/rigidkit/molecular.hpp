#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rigidkit/geometry.hpp"
#include "rigidkit/linalg.hpp"
#include "rigidkit/multigraph.hpp"
#include "rigidkit/rigidity_matrix.hpp"
#include "rigidkit/tree_packing.hpp"

namespace rigidkit {

// The input violates the corollary's hypotheses (degree or simplicity).
class MolecularInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Multigraph square(const Multigraph& G) {
  const int n = G.vertex_count();
  std::vector<std::set<int>> nbr(n);
  for (const auto& e : G.edges()) {
    nbr[e.u].insert(e.v);
    nbr[e.v].insert(e.u);
  }
  std::set<std::pair<int, int>> pairs;
  for (int v = 0; v < n; ++v)
    for (int a : nbr[v]) {
      pairs.insert({std::min(v, a), std::max(v, a)});
      for (int b : nbr[v])
        if (a < b) pairs.insert({a, b});
    }
  Multigraph S(n);
  for (auto [u, v] : pairs) S.add_edge(u, v);
  return S;
}

// Standard 3-D bar-and-joint rigidity matrix: row (p_u - p_w) under u and
// (p_w - p_u) under w.
inline Mat bar_joint_matrix(const Multigraph& G, const std::vector<Vec>& pos) {
  Mat M;
  for (const auto& e : G.edges()) {
    Vec row(3 * G.vertex_count());
    for (int i = 0; i < 3; ++i) {
      row[3 * e.u + i] = pos[e.u][i] - pos[e.v][i];
      row[3 * e.v + i] = pos[e.v][i] - pos[e.u][i];
    }
    M.push_back(std::move(row));
  }
  return M;
}

// Max exact rank over up to eight random joint placements.
inline int bar_joint_rank(const Multigraph& G, Rng& rng) {
  int best = 0;
  const int n = G.vertex_count();
  const int cap = n >= 3 ? std::min(G.edge_count(), 3 * n - 6) : G.edge_count();
  for (int attempt = 0; attempt < 8 && best < cap; ++attempt) {
    std::vector<Vec> pos;
    for (int v = 0; v < G.vertex_count(); ++v) pos.push_back(rng.vector(3));
    if (G.edge_count() > 0) best = std::max(best, rank(bar_joint_matrix(G, pos)));
  }
  return best;
}

struct MolecularReport {
  int n = 0;
  int edges_of_square = 0;
  int deficiency = 0;
  int predicted_rank = 0;
  std::optional<int> oracle_rank;
  std::optional<bool> agree;
};

inline MolecularReport molecular_prediction(const Multigraph& G, bool check_oracle, Rng& rng) {
  if (!G.is_simple()) throw MolecularInputError("molecular prediction needs a simple graph");
  if (G.vertex_count() == 0 || G.min_degree() < 2) throw MolecularInputError("minimum degree is below 2");
  const Dimension dim(3);
  MolecularReport r;
  r.n = G.vertex_count();
  const Multigraph S = square(G);
  r.edges_of_square = S.edge_count();
  r.deficiency = deficiency(G, dim).k;
  r.predicted_rank = 3 * r.n - 6 - r.deficiency;
  if (check_oracle) {
    r.oracle_rank = bar_joint_rank(S, rng);
    r.agree = *r.oracle_rank == r.predicted_rank;
  }
  return r;
}

// Point-plane polarity in R^3: panel {x . c = 1} goes to the point c, and the
// hinge of uv to the line through c(u) and c(v).
inline BodyHingeRealization dualize3d(const Multigraph& G, const PanelHingeRealization& p) {
  if (p.dim.d != 3) throw std::invalid_argument("duality is implemented for d = 3");
  if (!is_nonparallel(p)) throw std::invalid_argument("duality needs a nonparallel realization");
  BodyHingeRealization q{p.dim, {}};
  for (const auto& e : G.edges()) q.hinges[e.id] = Hinge{{finite_point(p.panels[e.u].c), finite_point(p.panels[e.v].c)}};
  return q;
}

}  // namespace rigidkit
