#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rigidkit {

struct Dimension {
  int d;
  int D;
  explicit Dimension(int d_) : d(d_), D(d_ * (d_ + 1) / 2) {
    if (d_ < 2) throw std::invalid_argument("dimension must be at least 2");
  }
};

struct Edge {
  int u;
  int v;
  int id;
};

// Vertices are 0..n-1. Edges stay sorted by id; ids survive surgeries and new
// edges get ids above every id seen so far.
class Multigraph {
 public:
  Multigraph() = default;
  explicit Multigraph(int n) : n_(n) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
  }

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  int next_edge_id() const { return next_id_; }

  int add_edge(int u, int v) { return add_edge_with_id(u, v, next_id_); }

  int add_edge_with_id(int u, int v, int id) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::out_of_range("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop");
    if (id < next_id_ && has_edge(id)) throw std::invalid_argument("duplicate edge id");
    Edge e{u, v, id};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                               [](const Edge& a, int x) { return a.id < x; });
    edges_.insert(it, e);
    next_id_ = std::max(next_id_, id + 1);
    return id;
  }

  // Keeps next_edge_id monotone so ids are never reused after removal.
  void reserve_ids_from(const Multigraph& other) { next_id_ = std::max(next_id_, other.next_id_); }

  bool has_edge(int id) const { return find(id) != nullptr; }

  const Edge& edge(int id) const {
    const Edge* e = find(id);
    if (!e) throw std::out_of_range("no edge with id " + std::to_string(id));
    return *e;
  }

  int edge_index(int id) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                               [](const Edge& a, int x) { return a.id < x; });
    if (it == edges_.end() || it->id != id) return -1;
    return static_cast<int>(it - edges_.begin());
  }

  int degree(int v) const {
    int k = 0;
    for (const auto& e : edges_) k += (e.u == v) + (e.v == v);
    return k;
  }

  std::vector<int> incident(int v) const {
    std::vector<int> ids;
    for (const auto& e : edges_)
      if (e.u == v || e.v == v) ids.push_back(e.id);
    return ids;
  }

  static int other(const Edge& e, int v) { return e.u == v ? e.v : e.u; }

  bool is_simple() const {
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges_)
      if (!seen.insert({std::min(e.u, e.v), std::max(e.u, e.v)}).second) return false;
    return true;
  }

  int min_degree() const {
    int m = n_ == 0 ? 0 : edge_count() * 2;
    for (int v = 0; v < n_; ++v) m = std::min(m, degree(v));
    return m;
  }

 private:
  const Edge* find(int id) const {
    int i = edge_index(id);
    return i < 0 ? nullptr : &edges_[i];
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  int next_id_ = 0;
};

// Result of a surgery: the new graph plus old-vertex -> new-vertex map (-1 if
// the vertex disappeared). new_edge is the id of an inserted edge, if any.
struct Surgery {
  Multigraph graph;
  std::vector<int> vmap;
  int new_edge = -1;
};

struct Partition {
  std::vector<std::vector<int>> blocks;
};

struct CutResult {
  int count = 0;
  std::vector<int> edges;
};

struct EdgeCopyId {
  int edge;
  int copy;
  friend bool operator==(const EdgeCopyId&, const EdgeCopyId&) = default;
  friend auto operator<=>(const EdgeCopyId&, const EdgeCopyId&) = default;
};

struct MultipliedGraph {
  Multigraph graph;
  std::vector<EdgeCopyId> origin;  // indexed by new edge id
};

inline MultipliedGraph multiply(const Multigraph& G, int k) {
  if (k < 1) throw std::invalid_argument("multiplicity must be at least 1");
  MultipliedGraph r{Multigraph(G.vertex_count()), {}};
  for (const auto& e : G.edges())
    for (int i = 1; i <= k; ++i) {
      r.graph.add_edge(e.u, e.v);
      r.origin.push_back({e.id, i});
    }
  return r;
}

inline std::vector<int> block_of(const Multigraph& G, const Partition& P) {
  std::vector<int> b(G.vertex_count(), -1);
  for (std::size_t i = 0; i < P.blocks.size(); ++i) {
    if (P.blocks[i].empty()) throw std::invalid_argument("empty block in partition");
    for (int v : P.blocks[i]) {
      if (v < 0 || v >= G.vertex_count()) throw std::invalid_argument("partition vertex out of range");
      if (b[v] != -1) throw std::invalid_argument("overlapping partition blocks");
      b[v] = static_cast<int>(i);
    }
  }
  for (int x : b)
    if (x == -1) throw std::invalid_argument("partition misses a vertex");
  return b;
}

inline CutResult partition_cut(const Multigraph& G, const Partition& P) {
  const auto b = block_of(G, P);
  CutResult r;
  for (const auto& e : G.edges())
    if (b[e.u] != b[e.v]) {
      ++r.count;
      r.edges.push_back(e.id);
    }
  return r;
}

class UnionFind {
 public:
  explicit UnionFind(int n) : p_(n) { std::iota(p_.begin(), p_.end(), 0); }
  int find(int x) {
    while (p_[x] != x) x = p_[x] = p_[p_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    p_[b] = a;
    return true;
  }

 private:
  std::vector<int> p_;
};

// Component label per vertex, labels numbered by lowest member vertex.
inline std::vector<int> components(const Multigraph& G, const std::vector<int>& skip_edges = {}) {
  UnionFind uf(G.vertex_count());
  for (const auto& e : G.edges())
    if (std::find(skip_edges.begin(), skip_edges.end(), e.id) == skip_edges.end()) uf.unite(e.u, e.v);
  std::vector<int> label(G.vertex_count(), -1);
  int next = 0;
  std::map<int, int> root_label;
  for (int v = 0; v < G.vertex_count(); ++v) {
    int r = uf.find(v);
    auto it = root_label.find(r);
    if (it == root_label.end()) it = root_label.emplace(r, next++).first;
    label[v] = it->second;
  }
  return label;
}

inline int component_count(const Multigraph& G, const std::vector<int>& skip_edges = {}) {
  auto c = components(G, skip_edges);
  return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
}

inline bool is_connected(const Multigraph& G) { return component_count(G) <= 1; }

inline bool is_k_edge_connected(const Multigraph& G, int k) {
  if (k != 2 && k != 3) throw std::invalid_argument("k must be 2 or 3");
  if (!is_connected(G)) return false;
  const auto& E = G.edges();
  for (std::size_t i = 0; i < E.size(); ++i) {
    if (component_count(G, {E[i].id}) > 1) return false;
    if (k == 3)
      for (std::size_t j = i + 1; j < E.size(); ++j)
        if (component_count(G, {E[i].id, E[j].id}) > 1) return false;
  }
  return true;
}

// Lowest-id edge whose removal disconnects its component, or -1.
inline int find_bridge(const Multigraph& G) {
  const int base = component_count(G);
  for (const auto& e : G.edges())
    if (component_count(G, {e.id}) > base) return e.id;
  return -1;
}

inline Multigraph remove_edges(const Multigraph& G, const std::vector<int>& ids) {
  Multigraph H(G.vertex_count());
  for (const auto& e : G.edges())
    if (std::find(ids.begin(), ids.end(), e.id) == ids.end()) H.add_edge_with_id(e.u, e.v, e.id);
  H.reserve_ids_from(G);
  return H;
}

// G[S] with vertices renumbered in increasing order of S; edge ids preserved.
inline Surgery induced_subgraph(const Multigraph& G, std::vector<int> S) {
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  Surgery r{Multigraph(static_cast<int>(S.size())), std::vector<int>(G.vertex_count(), -1)};
  for (std::size_t i = 0; i < S.size(); ++i) r.vmap[S[i]] = static_cast<int>(i);
  for (const auto& e : G.edges())
    if (r.vmap[e.u] >= 0 && r.vmap[e.v] >= 0) r.graph.add_edge_with_id(r.vmap[e.u], r.vmap[e.v], e.id);
  r.graph.reserve_ids_from(G);
  return r;
}

inline Surgery contract(const Multigraph& G, const std::vector<int>& F) {
  UnionFind uf(G.vertex_count());
  for (int id : F) {
    const Edge& e = G.edge(id);
    uf.unite(e.u, e.v);
  }
  std::map<int, int> root_to_new;
  std::vector<int> vmap(G.vertex_count());
  for (int v = 0; v < G.vertex_count(); ++v) {
    int r = uf.find(v);
    auto it = root_to_new.find(r);
    if (it == root_to_new.end()) it = root_to_new.emplace(r, static_cast<int>(root_to_new.size())).first;
    vmap[v] = it->second;
  }
  Surgery s{Multigraph(static_cast<int>(root_to_new.size())), vmap};
  for (const auto& e : G.edges()) {
    if (std::find(F.begin(), F.end(), e.id) != F.end()) continue;
    if (vmap[e.u] == vmap[e.v]) continue;
    s.graph.add_edge_with_id(vmap[e.u], vmap[e.v], e.id);
  }
  s.graph.reserve_ids_from(G);
  return s;
}

inline Surgery remove_degree2(const Multigraph& G, int v) {
  if (v < 0 || v >= G.vertex_count() || G.degree(v) != 2) throw std::invalid_argument("vertex does not have degree 2");
  std::vector<int> keep;
  for (int x = 0; x < G.vertex_count(); ++x)
    if (x != v) keep.push_back(x);
  return induced_subgraph(G, keep);
}

inline Surgery split_off(const Multigraph& G, int v) {
  if (v < 0 || v >= G.vertex_count() || G.degree(v) != 2) throw std::invalid_argument("vertex does not have degree 2");
  auto inc = G.incident(v);
  int a = Multigraph::other(G.edge(inc[0]), v);
  int b = Multigraph::other(G.edge(inc[1]), v);
  if (a == b) throw std::invalid_argument("split-off neighbours coincide");
  Surgery s = remove_degree2(G, v);
  s.new_edge = s.graph.add_edge(s.vmap[a], s.vmap[b]);
  return s;
}

// Inverse of split_off: replace edge ab by a new vertex (index n) joined to a
// and b. new_edge holds the id of va; vb is new_edge + 1.
inline Surgery edge_split(const Multigraph& G, int ab) {
  const Edge e = G.edge(ab);
  Surgery s{Multigraph(G.vertex_count() + 1), {}};
  s.vmap.resize(G.vertex_count());
  std::iota(s.vmap.begin(), s.vmap.end(), 0);
  for (const auto& f : G.edges())
    if (f.id != ab) s.graph.add_edge_with_id(f.u, f.v, f.id);
  s.graph.reserve_ids_from(G);
  const int v = G.vertex_count();
  s.new_edge = s.graph.add_edge(v, e.u);
  s.graph.add_edge(v, e.v);
  return s;
}

struct ChainSearch {
  enum class Kind { Chain, Cycle, Absent } kind = Kind::Absent;
  std::vector<int> chain;  // v0..vd when kind == Chain
  int cycle_length = 0;
};

inline bool is_cycle(const Multigraph& G) {
  if (G.vertex_count() < 2 || !is_connected(G) || G.edge_count() != G.vertex_count()) return false;
  for (int v = 0; v < G.vertex_count(); ++v)
    if (G.degree(v) != 2) return false;
  return true;
}

inline ChainSearch find_chain(const Multigraph& G, const Dimension& dim) {
  ChainSearch r;
  if (is_cycle(G)) {
    r.kind = ChainSearch::Kind::Cycle;
    r.cycle_length = G.vertex_count();
    return r;
  }
  for (int v0 = 0; v0 < G.vertex_count(); ++v0) {
    for (int first : G.incident(v0)) {
      std::vector<int> path{v0};
      int cur = v0, via = first;
      bool ok = true;
      for (int step = 0; step < dim.d; ++step) {
        int nxt = Multigraph::other(G.edge(via), cur);
        if (std::find(path.begin(), path.end(), nxt) != path.end()) {
          ok = false;
          break;
        }
        path.push_back(nxt);
        cur = nxt;
        if (step + 1 == dim.d) break;
        if (G.degree(cur) != 2) {
          ok = false;
          break;
        }
        auto inc = G.incident(cur);
        via = inc[0] == via ? inc[1] : inc[0];
      }
      if (ok && static_cast<int>(path.size()) == dim.d + 1) {
        r.kind = ChainSearch::Kind::Chain;
        r.chain = path;
        return r;
      }
    }
  }
  return r;
}

// Edge ids joining x and y, in id order.
inline std::vector<int> edges_between(const Multigraph& G, int x, int y) {
  std::vector<int> ids;
  for (const auto& e : G.edges())
    if ((e.u == x && e.v == y) || (e.u == y && e.v == x)) ids.push_back(e.id);
  return ids;
}

}  // namespace rigidkit
