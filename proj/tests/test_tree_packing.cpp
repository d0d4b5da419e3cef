#include <gtest/gtest.h>

#include "corpus.hpp"
#include "oracles.hpp"
#include "rigidkit/tree_packing.hpp"

using namespace rigidkit;

namespace {

EdgeCopySet all_copies(const Multigraph& G, const Dimension& dim) {
  EdgeCopySet s;
  for (const auto& e : G.edges())
    for (int i = 1; i < dim.D; ++i) s.push_back({e.id, i});
  return s;
}

bool is_forest(const Multigraph& G, const EdgeCopySet& F) {
  UnionFind uf(G.vertex_count());
  for (const auto& c : F)
    if (!uf.unite(G.edge(c.edge).u, G.edge(c.edge).v)) return false;
  return true;
}

bool is_spanning_tree_on(const Multigraph& G, const EdgeCopySet& F, const std::vector<int>& vs) {
  if (F.size() + 1 != vs.size()) return false;
  for (const auto& c : F) {
    const Edge& e = G.edge(c.edge);
    if (!std::binary_search(vs.begin(), vs.end(), e.u) || !std::binary_search(vs.begin(), vs.end(), e.v)) return false;
  }
  return is_forest(G, F);
}

}  // namespace

TEST(TreePacking, IndependenceExamples) {
  Dimension d2(2), d3(3);
  auto edge = corpus::from_pairs(2, {{0, 1}});
  EXPECT_TRUE(is_independent(edge, d2, all_copies(edge, d2)).independent);
  auto dbl = corpus::double_edge();
  auto r = is_independent(dbl, d2, all_copies(dbl, d2));
  EXPECT_FALSE(r.independent);
  EXPECT_EQ(r.violating.size(), 4u);
  EXPECT_EQ(vertices_of(dbl, r.violating).size(), 2u);
  auto c6 = corpus::cycle(6);
  EXPECT_TRUE(is_independent(c6, d3, all_copies(c6, d3)).independent);
}

TEST(TreePacking, RankExamples) {
  Dimension d2(2), d3(3);
  EXPECT_EQ(rank_and_base(corpus::double_edge(), d2).rank, 3);
  EXPECT_EQ(rank_and_base(corpus::from_pairs(2, {{0, 1}}), d2).rank, 2);
  EXPECT_EQ(rank_and_base(corpus::cycle(7), d3).rank, 35);
}

TEST(TreePacking, DeficiencyExamples) {
  Dimension d2(2), d3(3);
  EXPECT_EQ(deficiency(corpus::from_pairs(2, {{0, 1}}), d2).k, 1);
  EXPECT_EQ(deficiency(corpus::complete(4), d2).k, 0);
  for (int n = 2; n <= 9; ++n) {
    auto C = corpus::cycle(n);
    if (n == 2) C = corpus::double_edge();
    EXPECT_EQ(deficiency(C, d3).k, std::max(0, n - 6)) << n;
    EXPECT_EQ(deficiency_bruteforce(C, d3).k, std::max(0, n - 6)) << n;
  }
}

TEST(TreePacking, BruteforceWitness) {
  Dimension d2(2);
  auto tri = deficiency_bruteforce(corpus::cycle(3), d2);
  EXPECT_EQ(tri.k, 0);
  ASSERT_TRUE(tri.witness);
  EXPECT_EQ(tri.witness->blocks.size(), 1u);
  auto p3 = deficiency_bruteforce(corpus::path(3), d2);
  EXPECT_EQ(p3.k, 2);
  EXPECT_EQ(p3.witness->blocks.size(), 3u);
  EXPECT_EQ(partition_deficiency(corpus::path(3), d2, *p3.witness), 2);
  EXPECT_THROW(deficiency_bruteforce(corpus::path(11), d2), std::invalid_argument);
}

TEST(TreePacking, WitnessAttainsMaximum) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    auto G = corpus::random_connected(rng, 6, static_cast<int>(rng.integer(0, 5)), false);
    for (int d = 2; d <= 3; ++d) {
      Dimension dim(d);
      auto r = deficiency_bruteforce(G, dim);
      EXPECT_EQ(partition_deficiency(G, dim, *r.witness), r.k);
    }
  }
}

TEST(TreePacking, OracleEquivalenceSixVertices) {
  // |V| <= 6, |E| <= 9 via seeded samples
  Rng rng(2024);
  for (int t = 0; t < 1500; ++t) {
    const int n = static_cast<int>(rng.integer(1, 6));
    const int extra = static_cast<int>(rng.integer(0, 9 - (n - 1)));
    auto G = corpus::random_connected(rng, n, extra, false);
    for (int d = 2; d <= 3; ++d) {
      Dimension dim(d);
      auto fast = deficiency(G, dim);
      EXPECT_EQ(fast.k, deficiency_bruteforce(G, dim).k);
      EXPECT_EQ(fast.base_size + fast.k, dim.D * (n - 1));
    }
  }
}

TEST(TreePacking, IndependenceTripleCrossCheck) {
  Rng rng(99);
  for (int t = 0; t < 300; ++t) {
    const int n = static_cast<int>(rng.integer(2, 5));
    auto G = corpus::random_connected(rng, n, static_cast<int>(rng.integer(0, 4)), false);
    Dimension dim(static_cast<int>(rng.integer(2, 3)));
    auto all = all_copies(G, dim);
    EdgeCopySet F;
    for (const auto& c : all)
      if (F.size() < 12 && rng.integer(0, 2) > 0) F.push_back(c);
    auto r = is_independent(G, dim, F);
    EXPECT_EQ(r.independent, oracle::count_independent(G, dim, F));
    EXPECT_EQ(r.independent, oracle::forest_partition_exists(G, dim, F));
    if (r.independent) {
      EXPECT_EQ(r.packing.size(), F.size());
      for (const auto& f : r.packing.forests) EXPECT_TRUE(is_forest(G, f));
    } else {
      auto vs = vertices_of(G, r.violating);
      EXPECT_GT(static_cast<int>(r.violating.size()), dim.D * (static_cast<int>(vs.size()) - 1));
      for (const auto& c : r.violating) EXPECT_TRUE(std::find(F.begin(), F.end(), c) != F.end());
    }
  }
}

TEST(TreePacking, PackingIsValid) {
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    auto G = corpus::random_connected(rng, 6, static_cast<int>(rng.integer(0, 6)), false);
    Dimension dim(static_cast<int>(rng.integer(2, 4)));
    auto b = rank_and_base(G, dim);
    EXPECT_EQ(static_cast<int>(b.packing.forests.size()), dim.D);
    EXPECT_EQ(b.packing.members(), b.base);
    for (const auto& f : b.packing.forests) EXPECT_TRUE(is_forest(G, f));
  }
}

TEST(TreePacking, FundamentalCircuitExamples) {
  Dimension d2(2), d3(3);
  auto dbl = corpus::double_edge();
  auto b = rank_and_base(dbl, d2);
  ASSERT_EQ(b.base.size(), 3u);
  EdgeCopy out{-1, -1};
  for (const auto& c : all_copies(dbl, d2))
    if (std::find(b.base.begin(), b.base.end(), c) == b.base.end()) out = c;
  EXPECT_EQ(fundamental_circuit(dbl, d2, b.base, out).size(), 4u);

  auto c6 = corpus::cycle(6);
  c6.add_edge(0, 1);
  auto b6 = rank_and_base(c6, d3);
  for (const auto& c : all_copies(c6, d3)) {
    if (std::binary_search(b6.base.begin(), b6.base.end(), c)) continue;
    auto X = fundamental_circuit(c6, d3, b6.base, c);
    auto vs = vertices_of(c6, X);
    EXPECT_EQ(static_cast<int>(X.size()), 6 * (static_cast<int>(vs.size()) - 1) + 1);
  }
  auto c6plain = corpus::cycle(6);
  auto bb = rank_and_base(c6plain, d3);
  EXPECT_THROW(fundamental_circuit(c6plain, d3, bb.base, bb.base[0]), std::invalid_argument);
}

TEST(TreePacking, CircuitProperty) {
  Rng rng(17);
  for (int t = 0; t < 60; ++t) {
    auto G = corpus::random_connected(rng, 5, static_cast<int>(rng.integer(1, 5)), false);
    Dimension dim(static_cast<int>(rng.integer(2, 3)));
    auto b = rank_and_base(G, dim);
    for (const auto& c : all_copies(G, dim)) {
      if (std::binary_search(b.base.begin(), b.base.end(), c)) continue;
      auto X = fundamental_circuit(G, dim, b.base, c);
      auto vs = vertices_of(G, X);
      ASSERT_EQ(static_cast<int>(X.size()), dim.D * (static_cast<int>(vs.size()) - 1) + 1);
      for (const auto& x : X) {
        EdgeCopySet rest;
        for (const auto& y : X)
          if (!(y == x)) rest.push_back(y);
        auto r = is_independent(G, dim, rest);
        ASSERT_TRUE(r.independent);
        for (const auto& f : r.packing.forests) EXPECT_TRUE(is_spanning_tree_on(G, f, vs));
      }
    }
  }
}

TEST(TreePacking, MinCopyBaseExamples) {
  Dimension d2(2);
  auto dbl = corpus::double_edge();
  auto m = min_copy_base(dbl, d2, 0);
  EXPECT_EQ(m.h, 1);
  EXPECT_EQ(m.base.size(), 3u);
  EXPECT_EQ(min_copy_base(corpus::cycle(3), d2, 1).h, 2);  // every copy is a coloop
  auto bridged = corpus::from_pairs(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}});
  EXPECT_EQ(min_copy_base(bridged, d2, 3).h, 2);
}

TEST(TreePacking, MinCopyBaseMatchesGreedyOracle) {
  Rng rng(8);
  for (int t = 0; t < 150; ++t) {
    auto G = corpus::random_connected(rng, 6, static_cast<int>(rng.integer(0, 6)), false);
    Dimension dim(static_cast<int>(rng.integer(2, 3)));
    const int rk = rank_and_base(G, dim).rank;
    for (const auto& e : G.edges()) {
      auto m = min_copy_base(G, dim, e.id);
      EXPECT_EQ(m.h, oracle::min_copies_in_base(G, dim, e.id));
      EXPECT_EQ(static_cast<int>(m.base.size()), rk);
      EXPECT_TRUE(is_independent(G, dim, m.base).independent);
    }
  }
}

TEST(TreePacking, SplitForestPackingExamples) {
  Dimension d2(2), d3(3);
  auto tri = corpus::cycle(3);
  auto b = rank_and_base(tri, d2);
  ASSERT_EQ(b.rank, 6);
  auto s = split_forest_packing(tri, d2, b.packing, 2);
  EXPECT_EQ(s.packing.size(), 3u);
  EXPECT_LE(s.ab_copies, 1);
  EXPECT_TRUE(is_independent(s.split.graph, d2, s.packing.members()).independent);

  auto c6 = corpus::cycle(6);
  auto b6 = rank_and_base(c6, d3);
  for (int v = 0; v < 6; ++v) {
    auto s6 = split_forest_packing(c6, d3, b6.packing, v);
    EXPECT_EQ(s6.packing.size(), 24u);
    EXPECT_EQ(s6.split.graph.vertex_count(), 5);
    EXPECT_LT(s6.ab_copies, d3.D - 1);
    for (const auto& f : s6.packing.forests) EXPECT_TRUE(is_forest(s6.split.graph, f));
  }
}

TEST(TreePacking, SplitWithoutDoubleTouchInsertsNoAbCopy) {
  Dimension d2(2);
  auto p = corpus::path(3);  // v = 1 in the middle
  ForestPacking pk;
  pk.forests = {EdgeCopySet{EdgeCopy{0, 1}}, EdgeCopySet{EdgeCopy{1, 1}}, EdgeCopySet{}};
  auto s = split_forest_packing(p, d2, pk, 1);
  EXPECT_EQ(s.ab_copies, 0);
  EXPECT_EQ(s.packing.size(), 0u);
}

TEST(TreePacking, EdgeSplitForestPackingExamples) {
  Dimension d2(2);
  auto dbl = corpus::double_edge();
  auto b = rank_and_base(dbl, d2);
  // edge 0 must carry exactly h' copies; pick the edge with one copy
  int ab = -1, hp = 0;
  for (const auto& e : dbl.edges()) {
    int h = 0;
    for (const auto& c : b.base) h += c.edge == e.id;
    if (h == 1) ab = e.id, hp = h;
  }
  ASSERT_GE(ab, 0);
  auto r = edge_split_forest_packing(dbl, d2, b.packing, ab);
  EXPECT_EQ(r.packing.size(), 6u);
  EXPECT_EQ(r.split.graph.vertex_count(), 3);
  int vb = 0;
  for (const auto& c : r.packing.members()) vb += c.edge == r.vb;
  EXPECT_EQ(vb, hp + 1);
  EXPECT_TRUE(is_independent(r.split.graph, d2, r.packing.members()).independent);

  auto edge = corpus::from_pairs(2, {{0, 1}});
  ForestPacking empty{std::vector<EdgeCopySet>(3)};
  auto e = edge_split_forest_packing(edge, d2, empty, 0);
  int va = 0;
  vb = 0;
  for (const auto& c : e.packing.members()) {
    va += c.edge == e.va;
    vb += c.edge == e.vb;
  }
  EXPECT_EQ(va, 2);
  EXPECT_EQ(vb, 1);
}

TEST(TreePacking, FullAbUsageGrowsByDMinusOne) {
  Dimension d2(2);
  auto edge = corpus::from_pairs(2, {{0, 1}});
  auto b = rank_and_base(edge, d2);  // both copies of the single edge
  auto r = edge_split_forest_packing(edge, d2, b.packing, 0);
  EXPECT_EQ(r.packing.size(), b.packing.size() + d2.D - 1);
  EXPECT_TRUE(is_independent(r.split.graph, d2, r.packing.members()).independent);
}

TEST(TreePacking, SplitRoundTripArithmetic) {
  Rng rng(21);
  int checked = 0;
  for (int t = 0; t < 300 && checked < 60; ++t) {
    auto G = corpus::random_connected(rng, 6, static_cast<int>(rng.integer(2, 6)), true);
    Dimension dim(static_cast<int>(rng.integer(2, 3)));
    if (deficiency(G, dim).k != 0) continue;
    for (int v = 0; v < G.vertex_count(); ++v) {
      if (G.degree(v) != 2) continue;
      auto b = rank_and_base(G, dim);
      auto s = split_forest_packing(G, dim, b.packing, v);
      ASSERT_EQ(s.packing.size(), b.packing.size() - dim.D);
      ASSERT_LT(s.ab_copies, dim.D - 1);
      ASSERT_TRUE(is_independent(s.split.graph, dim, s.packing.members()).independent);
      auto back = edge_split_forest_packing(s.split.graph, dim, s.packing, s.split.new_edge);
      EXPECT_EQ(back.packing.size(), s.packing.size() + dim.D);
      EXPECT_TRUE(is_independent(back.split.graph, dim, back.packing.members()).independent);
      ++checked;
    }
  }
  EXPECT_GT(checked, 10);
}
