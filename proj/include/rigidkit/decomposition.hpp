#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rigidkit/multigraph.hpp"
#include "rigidkit/tree_packing.hpp"

namespace rigidkit {

// Raised when an operation's graph-theoretic precondition fails. Carries the
// offending edge ids (for example the redundant edges of a non-minimal input).
class HypothesisError : public std::runtime_error {
 public:
  HypothesisError(const std::string& what, std::vector<int> certificate = {})
      : std::runtime_error(what), certificate_(std::move(certificate)) {}
  const std::vector<int>& certificate() const { return certificate_; }

 private:
  std::vector<int> certificate_;
};

struct DofClassification {
  int k = 0;
  bool minimal = true;
  std::vector<int> redundant_edges;
};

inline DofClassification classify(const Multigraph& G, const Dimension& dim) {
  DofClassification c;
  c.k = deficiency(G, dim).k;
  for (const auto& e : G.edges())
    if (min_copy_base(G, dim, e.id).h == 0) c.redundant_edges.push_back(e.id);
  c.minimal = c.redundant_edges.empty();
  return c;
}

// Cheaper minimality test: e is redundant iff dropping all of e~ keeps the rank.
inline bool is_minimal(const Multigraph& G, const Dimension& dim) {
  const int r = rank_and_base(G, dim).rank;
  for (const auto& e : G.edges())
    if (rank_and_base(remove_edges(G, {e.id}), dim).rank == r) return false;
  return true;
}

// Drops redundant edges lowest id first. One pass suffices: an edge that every
// base of G meets is met by every base of a rank-preserving subgraph too.
inline Multigraph minimize(const Multigraph& G, const Dimension& dim) {
  const int r = rank_and_base(G, dim).rank;
  Multigraph H = G;
  for (const auto& e : G.edges()) {
    Multigraph T = remove_edges(H, {e.id});
    if (rank_and_base(T, dim).rank == r) H = std::move(T);
  }
  return H;
}

struct RigidSubgraph {
  std::vector<int> vertices;  // sorted
  std::vector<int> edges;     // edges of G[vertices]
};

inline RigidSubgraph rigid_subgraph_on(const Multigraph& G, std::vector<int> vs) {
  std::sort(vs.begin(), vs.end());
  RigidSubgraph r{vs, {}};
  for (const auto& e : G.edges())
    if (std::binary_search(vs.begin(), vs.end(), e.u) && std::binary_search(vs.begin(), vs.end(), e.v))
      r.edges.push_back(e.id);
  return r;
}

// For each vertex a of G - w, the vertex set of the maximal rigid subgraph of
// G - w containing a: a joins x there iff one extra copy of ax is spanned by a
// base of (G - w)~. Rigid sets sharing a vertex have a rigid union.
inline std::vector<std::vector<int>> rigid_closures_without(const Multigraph& G, const Dimension& dim, int w) {
  const int n = G.vertex_count();
  CopyMatroid M(G, dim);
  for (const auto& e : G.edges())
    if (e.u != w && e.v != w)
      for (int i = 1; i < dim.D; ++i) M.insert({e.id, i});
  std::vector<std::vector<int>> out(n);
  for (int a = 0; a < n; ++a) {
    if (a == w) continue;
    out[a].push_back(a);
    for (int x = 0; x < n; ++x) {
      if (x == a || x == w) continue;
      CopyMatroid probe = M;
      if (!probe.insert_handle(probe.add_virtual(a, x))) out[a].push_back(x);
    }
    std::sort(out[a].begin(), out[a].end());
  }
  return out;
}

// Complete search for 0-dof induced subgraphs on 2..|V|-1 vertices; returns the
// largest one, which is maximal under inclusion.
inline std::optional<RigidSubgraph> maximal_proper_rigid_subgraph(const Multigraph& G, const Dimension& dim) {
  const int n = G.vertex_count();
  std::vector<int> best;
  for (int w = 0; w < n; ++w)
    for (const auto& R : rigid_closures_without(G, dim, w))
      if (R.size() >= 2 && R.size() > best.size()) best = R;
  if (best.empty()) return std::nullopt;
  return rigid_subgraph_on(G, best);
}

struct ProperRigidSearch {
  std::optional<RigidSubgraph> found;
  enum class Source { None, ParallelClass, Circuit, Closure } source = Source::None;
};

inline void check_cardinality_bounds(const Multigraph& G, const Dimension& dim, int k) {
  const int lhs = (dim.D - 1) * G.edge_count();
  const int n = G.vertex_count();
  const bool ok = k == 0 ? lhs < dim.D * (n - 1) + dim.D - 1 : lhs == dim.D * (n - 1) - k;
  if (!ok) throw std::logic_error("edge-count bound fails for a graph without proper rigid subgraph");
}

// Parallel classes first, then fundamental circuits of one base, then the
// complete closure search. The circuit search alone can miss rigid subgraphs
// when G~ is itself independent (two triangles sharing a vertex, d = 2).
inline ProperRigidSearch search_proper_rigid_subgraph(const Multigraph& G, const Dimension& dim) {
  ProperRigidSearch s;
  const int n = G.vertex_count();
  if (n <= 2) return s;
  for (const auto& e : G.edges())
    if (edges_between(G, e.u, e.v).size() >= 2) {
      s.found = rigid_subgraph_on(G, {e.u, e.v});
      s.source = ProperRigidSearch::Source::ParallelClass;
      return s;
    }
  auto b = rank_and_base(G, dim);
  for (const auto& e : G.edges())
    for (int i = 1; i < dim.D; ++i) {
      EdgeCopy c{e.id, i};
      if (std::binary_search(b.base.begin(), b.base.end(), c)) continue;
      auto vs = vertices_of(G, fundamental_circuit(G, dim, b.base, c));
      if (static_cast<int>(vs.size()) < n) {
        s.found = rigid_subgraph_on(G, vs);
        s.source = ProperRigidSearch::Source::Circuit;
        return s;
      }
    }
  if (auto r = maximal_proper_rigid_subgraph(G, dim)) {
    s.found = r;
    s.source = ProperRigidSearch::Source::Closure;
  }
  return s;
}

inline std::optional<RigidSubgraph> find_proper_rigid_subgraph(const Multigraph& G, const Dimension& dim) {
  return search_proper_rigid_subgraph(G, dim).found;
}

struct CutPart {
  Surgery part;  // induced subgraph with vmap from G
  int k = 0;
};

struct CutDecomposition {
  enum class Kind { Bridge, Disconnected } kind = Kind::Bridge;
  int bridge = -1;
  CutPart first;   // side containing vertex 0
  CutPart second;
  int k = 0;            // deficiency of G
  int predicted_k = 0;  // k1 + k2 + 1 or k1 + k2 + D
  bool relation_holds = false;
};

inline CutDecomposition cut_decompose(const Multigraph& G, const Dimension& dim) {
  CutDecomposition r;
  std::vector<int> label;
  if (!is_connected(G)) {
    r.kind = CutDecomposition::Kind::Disconnected;
    label = components(G);
  } else {
    r.bridge = find_bridge(G);
    if (r.bridge < 0) throw HypothesisError("graph is 2-edge-connected: no cut");
    label = components(G, {r.bridge});
  }
  std::vector<int> side1, side2;
  for (int v = 0; v < G.vertex_count(); ++v) (label[v] == label[0] ? side1 : side2).push_back(v);
  r.first.part = induced_subgraph(G, side1);
  r.second.part = induced_subgraph(G, side2);
  r.first.k = deficiency(r.first.part.graph, dim).k;
  r.second.k = deficiency(r.second.part.graph, dim).k;
  r.k = deficiency(G, dim).k;
  r.predicted_k = r.first.k + r.second.k + (r.kind == CutDecomposition::Kind::Bridge ? 1 : dim.D);
  r.relation_holds = r.k == r.predicted_k;
  return r;
}

struct ReductionStep {
  enum class Kind { Contraction, SplitOff } kind = Kind::SplitOff;
  Multigraph before;
  Surgery after;
  int k_before = 0;
  int k_after = 0;
  RigidSubgraph contracted;  // Contraction
  int v = -1, a = -1, b = -1;  // SplitOff, in before's labels
};

// Lowest-id vertex of degree 2 with two distinct neighbours, or -1.
inline int splittable_vertex(const Multigraph& G) {
  for (int v = 0; v < G.vertex_count(); ++v) {
    if (G.degree(v) != 2) continue;
    auto inc = G.incident(v);
    if (Multigraph::other(G.edge(inc[0]), v) != Multigraph::other(G.edge(inc[1]), v)) return v;
  }
  return -1;
}

inline ReductionStep reduction_step(const Multigraph& G, const Dimension& dim) {
  if (G.vertex_count() < 3) throw HypothesisError("reduction needs at least 3 vertices");
  if (!is_connected(G)) throw HypothesisError("reduction needs a connected graph");
  auto cls = classify(G, dim);
  if (!cls.minimal) throw HypothesisError("graph is not minimal", cls.redundant_edges);
  ReductionStep s;
  s.before = G;
  s.k_before = cls.k;
  auto search = search_proper_rigid_subgraph(G, dim);
  if (search.found) {
    s.kind = ReductionStep::Kind::Contraction;
    s.contracted = *search.found;
    s.after = contract(G, s.contracted.edges);
    s.k_after = cls.k;
  } else {
    check_cardinality_bounds(G, dim, cls.k);
    s.kind = ReductionStep::Kind::SplitOff;
    s.v = splittable_vertex(G);
    if (s.v < 0) throw HypothesisError("no vertex of degree 2 to split off");
    auto inc = G.incident(s.v);
    s.a = Multigraph::other(G.edge(inc[0]), s.v);
    s.b = Multigraph::other(G.edge(inc[1]), s.v);
    if (s.a > s.b) std::swap(s.a, s.b);
    s.after = split_off(G, s.v);
    s.k_after = cls.k == 0 ? 0 : cls.k - 1;
  }
  auto check = classify(s.after.graph, dim);
  if (check.k != s.k_after || !check.minimal)
    throw std::logic_error("reduction step produced a graph outside the expected class");
  return s;
}

struct ConstructionSequence {
  std::vector<ReductionStep> steps;
  Multigraph terminal;
};

inline ConstructionSequence inductive_sequence(const Multigraph& G, const Dimension& dim) {
  if (G.vertex_count() < 2) throw HypothesisError("need at least 2 vertices");
  auto cls = classify(G, dim);
  if (cls.k != 0) throw HypothesisError("graph is not body-and-hinge rigid");
  if (!cls.minimal) throw HypothesisError("graph is not minimal", cls.redundant_edges);
  ConstructionSequence seq;
  Multigraph cur = G;
  while (cur.vertex_count() > 2) {
    seq.steps.push_back(reduction_step(cur, dim));
    cur = seq.steps.back().after.graph;
  }
  seq.terminal = cur;
  return seq;
}

}  // namespace rigidkit
