#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rigidkit/multigraph.hpp"

namespace rigidkit {

using EdgeCopy = EdgeCopyId;
using EdgeCopySet = std::vector<EdgeCopy>;

struct ForestPacking {
  std::vector<EdgeCopySet> forests;

  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& f : forests) s += f.size();
    return s;
  }
  EdgeCopySet members() const {
    EdgeCopySet all;
    for (const auto& f : forests) all.insert(all.end(), f.begin(), f.end());
    std::sort(all.begin(), all.end());
    return all;
  }
};

// Partition of a growing element set into `forests` forests of a graph on n
// vertices (union of graphic matroids). Elements are edges (u, v) identified
// by handles in insertion order.
class ForestUnion {
 public:
  ForestUnion(int n, int forests) : n_(n), k_(forests) {}

  int add_element(int u, int v) {
    ends_.push_back({u, v});
    where_.push_back(-1);
    return static_cast<int>(ends_.size()) - 1;
  }

  int forest_of(int h) const { return where_[h]; }
  int forest_count() const { return k_; }
  const std::vector<int>& last_reached() const { return reached_; }
  std::pair<int, int> ends(int h) const { return ends_[h]; }

  void remove(int h) { where_[h] = -1; }

  // Adds h to the packing by a shortest augmenting path in the exchange graph.
  // On failure the packing is unchanged and last_reached() holds the labelled set.
  bool insert(int h) {
    if (where_[h] != -1) return true;
    build_adjacency();
    std::vector<int> parent(ends_.size(), -2);
    std::deque<int> queue{h};
    parent[h] = -1;
    reached_.clear();
    while (!queue.empty()) {
      int y = queue.front();
      queue.pop_front();
      reached_.push_back(y);
      for (int i = 0; i < k_; ++i) {
        if (i == where_[y]) continue;
        auto path = forest_path(i, ends_[y].first, ends_[y].second);
        if (!path) {
          augment(y, i, parent);
          adj_.clear();
          return true;
        }
        std::sort(path->begin(), path->end());
        for (int z : *path)
          if (parent[z] == -2) {
            parent[z] = y;
            queue.push_back(z);
          }
      }
    }
    std::sort(reached_.begin(), reached_.end());
    adj_.clear();
    return false;
  }

 private:
  void build_adjacency() {
    adj_.assign(k_, std::vector<std::vector<std::pair<int, int>>>(n_));
    for (std::size_t h = 0; h < ends_.size(); ++h) {
      int f = where_[h];
      if (f < 0) continue;
      adj_[f][ends_[h].first].push_back({ends_[h].second, static_cast<int>(h)});
      adj_[f][ends_[h].second].push_back({ends_[h].first, static_cast<int>(h)});
    }
  }

  std::optional<std::vector<int>> forest_path(int f, int s, int t) const {
    std::vector<int> via(n_, -2);
    std::vector<int> from(n_, -1);
    std::deque<int> q{s};
    via[s] = -1;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      if (x == t) break;
      for (auto [y, h] : adj_[f][x])
        if (via[y] == -2) {
          via[y] = h;
          from[y] = x;
          q.push_back(y);
        }
    }
    if (via[t] == -2) return std::nullopt;
    std::vector<int> path;
    for (int x = t; x != s; x = from[x]) path.push_back(via[x]);
    return path;
  }

  // parent[z] = y means y takes z's place in z's forest.
  void augment(int y, int dest, const std::vector<int>& parent) {
    int cur = y;
    for (;;) {
      int old = where_[cur];
      where_[cur] = dest;
      if (parent[cur] == -1) break;
      cur = parent[cur];
      dest = old;
    }
  }

  int n_;
  int k_;
  std::vector<std::pair<int, int>> ends_;
  std::vector<int> where_;
  std::vector<int> reached_;
  std::vector<std::vector<std::vector<std::pair<int, int>>>> adj_;
};

// ForestUnion over the copies of G~ = (D-1)G, with D forests.
class CopyMatroid {
 public:
  CopyMatroid(const Multigraph& G, const Dimension& dim) : dim_(dim), fu_(G.vertex_count(), dim.D) {
    for (const auto& e : G.edges()) {
      ids_.push_back(e.id);
      for (int i = 1; i < dim.D; ++i) {
        fu_.add_element(e.u, e.v);
        copies_.push_back({e.id, i});
      }
    }
  }

  // Adds an element outside G~ between x and y; returns its handle.
  int add_virtual(int x, int y) {
    copies_.push_back({-1, -1});
    return fu_.add_element(x, y);
  }

  int handle(const EdgeCopy& c) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), c.edge);
    if (it == ids_.end() || *it != c.edge || c.copy < 1 || c.copy >= dim_.D)
      throw std::invalid_argument("edge copy not in G~");
    return static_cast<int>(it - ids_.begin()) * (dim_.D - 1) + c.copy - 1;
  }
  const EdgeCopy& copy(int h) const { return copies_[h]; }
  int element_count() const { return static_cast<int>(copies_.size()); }

  bool insert(const EdgeCopy& c) { return fu_.insert(handle(c)); }
  bool insert_handle(int h) { return fu_.insert(h); }
  void remove(const EdgeCopy& c) { fu_.remove(handle(c)); }
  void remove_handle(int h) { fu_.remove(h); }
  bool contains(const EdgeCopy& c) const { return fu_.forest_of(handle(c)) >= 0; }
  bool contains_handle(int h) const { return fu_.forest_of(h) >= 0; }

  EdgeCopySet members() const {
    EdgeCopySet s;
    for (int h = 0; h < element_count(); ++h)
      if (fu_.forest_of(h) >= 0 && copies_[h].edge >= 0) s.push_back(copies_[h]);
    std::sort(s.begin(), s.end());
    return s;
  }

  ForestPacking packing() const {
    ForestPacking p{std::vector<EdgeCopySet>(dim_.D)};
    for (int h = 0; h < element_count(); ++h)
      if (fu_.forest_of(h) >= 0 && copies_[h].edge >= 0) p.forests[fu_.forest_of(h)].push_back(copies_[h]);
    for (auto& f : p.forests) std::sort(f.begin(), f.end());
    return p;
  }

  std::vector<EdgeCopy> last_reached() const {
    std::vector<EdgeCopy> r;
    for (int h : fu_.last_reached()) r.push_back(copies_[h]);
    return r;
  }
  const std::vector<int>& last_reached_handles() const { return fu_.last_reached(); }
  std::pair<int, int> ends(int h) const { return fu_.ends(h); }

 private:
  Dimension dim_;
  ForestUnion fu_;
  std::vector<int> ids_;
  std::vector<EdgeCopy> copies_;
};

inline int count_bound(const Dimension& dim, int vertices) { return dim.D * (vertices - 1); }

inline std::vector<int> vertices_of(const Multigraph& G, const EdgeCopySet& F) {
  std::vector<int> vs;
  for (const auto& c : F) {
    const Edge& e = G.edge(c.edge);
    vs.push_back(e.u);
    vs.push_back(e.v);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

struct BaseResult {
  int rank = 0;
  EdgeCopySet base;
  ForestPacking packing;
};

inline BaseResult rank_and_base(const Multigraph& G, const Dimension& dim) {
  CopyMatroid M(G, dim);
  for (const auto& e : G.edges())
    for (int i = 1; i < dim.D; ++i) M.insert({e.id, i});
  BaseResult r;
  r.base = M.members();
  r.rank = static_cast<int>(r.base.size());
  r.packing = M.packing();
  return r;
}

struct IndependenceResult {
  bool independent = true;
  EdgeCopySet violating;  // |violating| > D(|V(violating)|-1) when dependent
  ForestPacking packing;  // certificate when independent
};

// Splits a dependent labelled set into connected pieces and returns one that
// breaks the count bound; some piece must, by pigeonhole.
inline EdgeCopySet violating_piece(const Multigraph& G, const Dimension& dim, const EdgeCopySet& T) {
  UnionFind uf(G.vertex_count());
  for (const auto& c : T) uf.unite(G.edge(c.edge).u, G.edge(c.edge).v);
  std::map<int, EdgeCopySet> pieces;
  for (const auto& c : T) pieces[uf.find(G.edge(c.edge).u)].push_back(c);
  for (auto& [root, P] : pieces) {
    const int nv = static_cast<int>(vertices_of(G, P).size());
    if (static_cast<int>(P.size()) > count_bound(dim, nv)) {
      std::sort(P.begin(), P.end());
      return P;
    }
  }
  throw std::logic_error("labelled set of a failed augmentation is not dependent");
}

inline IndependenceResult is_independent(const Multigraph& G, const Dimension& dim, const EdgeCopySet& F) {
  CopyMatroid M(G, dim);
  IndependenceResult r;
  for (const auto& c : F) {
    if (c.copy < 1 || c.copy >= dim.D || !G.has_edge(c.edge)) throw std::invalid_argument("not an edge copy of G~");
    if (!M.insert(c)) {
      r.independent = false;
      r.violating = violating_piece(G, dim, M.last_reached());
      return r;
    }
  }
  r.packing = M.packing();
  return r;
}

struct DeficiencyReport {
  int k = 0;
  int base_size = 0;
  std::optional<Partition> witness;
};

inline DeficiencyReport deficiency(const Multigraph& G, const Dimension& dim) {
  DeficiencyReport r;
  r.base_size = rank_and_base(G, dim).rank;
  r.k = count_bound(dim, G.vertex_count()) - r.base_size;
  return r;
}

inline int partition_deficiency(const Multigraph& G, const Dimension& dim, const Partition& P) {
  return dim.D * (static_cast<int>(P.blocks.size()) - 1) - (dim.D - 1) * partition_cut(G, P).count;
}

// Maximum of D(|P|-1) - (D-1) d_G(P) over every partition P of V, enumerated
// as restricted-growth strings. Ties keep the first partition found.
inline DeficiencyReport deficiency_bruteforce(const Multigraph& G, const Dimension& dim, int bound = 10) {
  const int n = G.vertex_count();
  if (n > bound) throw std::invalid_argument("too many vertices for partition enumeration");
  DeficiencyReport r;
  if (n == 0) return r;
  std::vector<int> a(n, 0), mx(n, 0);
  bool have = false;
  for (;;) {
    int blocks = *std::max_element(a.begin(), a.end()) + 1;
    int cut = 0;
    for (const auto& e : G.edges()) cut += a[e.u] != a[e.v];
    int val = dim.D * (blocks - 1) - (dim.D - 1) * cut;
    if (!have || val > r.k) {
      have = true;
      r.k = val;
      Partition P{std::vector<std::vector<int>>(blocks)};
      for (int v = 0; v < n; ++v) P.blocks[a[v]].push_back(v);
      r.witness = P;
    }
    int i = n - 1;
    while (i > 0 && a[i] == mx[i - 1] + 1) --i;
    if (i == 0) break;
    ++a[i];
    mx[i] = std::max(mx[i - 1], a[i]);
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      mx[j] = mx[i];
    }
  }
  r.base_size = count_bound(dim, n) - r.k;
  return r;
}

inline CopyMatroid load_independent(const Multigraph& G, const Dimension& dim, const EdgeCopySet& S) {
  CopyMatroid M(G, dim);
  for (const auto& c : S)
    if (!M.insert(c)) throw std::invalid_argument("set is not independent");
  return M;
}

inline EdgeCopySet fundamental_circuit(const Multigraph& G, const Dimension& dim, const EdgeCopySet& base,
                                       const EdgeCopy& c) {
  CopyMatroid M = load_independent(G, dim, base);
  if (M.contains(c)) throw std::invalid_argument("copy already in base");
  CopyMatroid probe = M;
  if (probe.insert(c)) throw std::invalid_argument("no circuit: base + c is independent");
  // The circuit lies inside the labelled set of the failed augmentation.
  EdgeCopySet X{c};
  for (const auto& y : probe.last_reached()) {
    if (y == c) continue;
    CopyMatroid trial = M;
    trial.remove(y);
    if (trial.insert(c)) X.push_back(y);
  }
  std::sort(X.begin(), X.end());
  return X;
}

struct MinCopyBase {
  EdgeCopySet base;
  int h = 0;
};

// Exchange descent: swap a copy of e out of the base for an outside copy whenever
// the copy lies on that outside copy's fundamental circuit.
inline MinCopyBase min_copy_base(const Multigraph& G, const Dimension& dim, int e) {
  CopyMatroid M(G, dim);
  for (const auto& f : G.edges())
    for (int i = 1; i < dim.D; ++i) M.insert({f.id, i});
  for (bool improved = true; improved;) {
    improved = false;
    for (int j = 1; j < dim.D && !improved; ++j) {
      if (!M.contains({e, j})) continue;
      CopyMatroid trial = M;
      trial.remove({e, j});
      for (const auto& f : G.edges()) {
        if (f.id == e) continue;
        for (int i = 1; i < dim.D && !improved; ++i)
          if (!trial.contains({f.id, i}) && trial.insert({f.id, i})) {
            M = trial;
            improved = true;
          }
        if (improved) break;
      }
    }
  }
  MinCopyBase r;
  r.base = M.members();
  for (const auto& c : r.base) r.h += c.edge == e;
  return r;
}

struct SplitPacking {
  Surgery split;
  ForestPacking packing;
  int ab_copies = 0;  // h'
};

inline int forest_degree(const Multigraph& G, const EdgeCopySet& F, int v) {
  int k = 0;
  for (const auto& c : F) {
    const Edge& e = G.edge(c.edge);
    k += (e.u == v) + (e.v == v);
  }
  return k;
}

// Rewires each forest of an independent packing of G~ onto G_v^{ab}: a forest
// meeting v once loses that copy, a forest meeting v twice trades both copies
// for a copy of ab.
inline SplitPacking split_forest_packing(const Multigraph& G, const Dimension& dim, const ForestPacking& packing,
                                         int v) {
  SplitPacking r{split_off(G, v), {}, 0};
  if (static_cast<int>(packing.forests.size()) != dim.D) throw std::invalid_argument("packing must have D forests");
  const int ab = r.split.new_edge;
  for (const auto& F : packing.forests) {
    EdgeCopySet Fp;
    for (const auto& c : F) {
      const Edge& e = G.edge(c.edge);
      if (e.u != v && e.v != v) Fp.push_back(c);
    }
    if (forest_degree(G, F, v) == 2) Fp.push_back({ab, ++r.ab_copies});
    std::sort(Fp.begin(), Fp.end());
    r.packing.forests.push_back(std::move(Fp));
  }
  if (r.ab_copies >= dim.D) throw std::logic_error("more ab copies needed than exist");
  return r;
}

struct EdgeSplitPacking {
  Surgery split;
  ForestPacking packing;
  int va = -1;
  int vb = -1;
};

// Extends a packing of H~ to the graph with ab replaced by a path a-v-b.
// With h' copies of ab used: h' < D-1 grows the packing by D, h' = D-1 by D-1.
inline EdgeSplitPacking edge_split_forest_packing(const Multigraph& H, const Dimension& dim,
                                                  const ForestPacking& packing, int ab) {
  EdgeSplitPacking r{edge_split(H, ab), {}, -1, -1};
  if (static_cast<int>(packing.forests.size()) != dim.D) throw std::invalid_argument("packing must have D forests");
  r.va = r.split.new_edge;
  r.vb = r.split.new_edge + 1;
  std::vector<int> order, rest;
  for (int i = 0; i < dim.D; ++i) {
    bool has_ab = std::any_of(packing.forests[i].begin(), packing.forests[i].end(),
                              [&](const EdgeCopy& c) { return c.edge == ab; });
    (has_ab ? order : rest).push_back(i);
  }
  const int hp = static_cast<int>(order.size());
  order.insert(order.end(), rest.begin(), rest.end());
  r.packing.forests.resize(dim.D);
  for (int pos = 0; pos < dim.D; ++pos) {
    const int i = pos + 1;
    EdgeCopySet F;
    for (const auto& c : packing.forests[order[pos]])
      if (c.edge != ab) F.push_back(c);
    if (i <= hp) {
      F.push_back({r.va, i});
      F.push_back({r.vb, i});
    } else if (hp < dim.D - 1) {
      if (i <= dim.D - 1)
        F.push_back({r.va, i});
      else
        F.push_back({r.vb, hp + 1});
    }
    std::sort(F.begin(), F.end());
    r.packing.forests[pos] = std::move(F);
  }
  return r;
}

}  // namespace rigidkit
