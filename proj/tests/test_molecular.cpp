#include <gtest/gtest.h>

#include "corpus.hpp"
#include "rigidkit/molecular.hpp"
#include "rigidkit/realization.hpp"

using namespace rigidkit;

TEST(Molecular, SquareExamples) {
  EXPECT_EQ(square(corpus::cycle(3)).edge_count(), 3);
  EXPECT_EQ(square(corpus::cycle(4)).edge_count(), 6);
  EXPECT_EQ(square(corpus::path(3)).edge_count(), 3);
  EXPECT_EQ(square(corpus::complete(5)).edge_count(), 10);
  EXPECT_EQ(square(corpus::double_edge()).edge_count(), 1);
  // C7 squared: every vertex sees two on each side
  EXPECT_EQ(square(corpus::cycle(7)).edge_count(), 14);
}

TEST(Molecular, SquareContainsOriginalEdges) {
  Rng rng(1);
  for (int i = 0; i < 30; ++i) {
    auto G = corpus::random_connected(rng, 6, static_cast<int>(rng.integer(0, 5)), true);
    auto S = square(G);
    EXPECT_TRUE(S.is_simple());
    EXPECT_GE(S.edge_count(), G.edge_count());
    for (const auto& e : G.edges()) EXPECT_FALSE(edges_between(S, e.u, e.v).empty());
  }
}

TEST(Molecular, SpotValues) {
  Rng rng(2);
  struct Spot {
    Multigraph G;
    int def, predicted;
  };
  for (const auto& s : {Spot{corpus::cycle(3), 0, 3}, Spot{corpus::cycle(4), 0, 6}, Spot{corpus::cycle(7), 1, 14}}) {
    auto r = molecular_prediction(s.G, true, rng);
    EXPECT_EQ(r.deficiency, s.def);
    EXPECT_EQ(r.predicted_rank, s.predicted);
    ASSERT_TRUE(r.oracle_rank);
    EXPECT_EQ(*r.oracle_rank, s.predicted);
    EXPECT_TRUE(*r.agree);
  }
  EXPECT_FALSE(molecular_prediction(corpus::cycle(5), false, rng).oracle_rank);
}

TEST(Molecular, RejectsBadInput) {
  Rng rng(3);
  EXPECT_THROW(molecular_prediction(corpus::path(4), false, rng), MolecularInputError);
  auto dbl = corpus::cycle(7);
  dbl.add_edge(0, 1);
  EXPECT_THROW(molecular_prediction(dbl, false, rng), MolecularInputError);
}

TEST(Molecular, DualityPreservesRank) {
  Dimension d3(3);
  Rng rng(4);
  for (auto G : {corpus::cycle(6), corpus::cycle(7), corpus::complete(4), corpus::theta(2, 3, 3)}) {
    auto p = realize_panel_hinge(G, d3, rng);
    auto q = dualize3d(G, p);
    EXPECT_EQ(rank(assemble(G, q)), rank(assemble(G, p)));
    for (const auto& e : G.edges()) {
      // the dual hinge of uv passes through both dual points
      EXPECT_EQ(q.hinges.at(e.id).points[0], finite_point(p.panels[e.u].c));
      EXPECT_EQ(q.hinges.at(e.id).points[1], finite_point(p.panels[e.v].c));
    }
  }
  PanelHingeRealization flat{d3, {Panel{{1, 0, 0}}, Panel{{2, 0, 0}}}, {}};
  EXPECT_THROW(dualize3d(corpus::path(2), flat), std::invalid_argument);
}
