#include <gtest/gtest.h>

#include <sstream>

#include "corpus.hpp"
#include "rigidkit/realization.hpp"

using namespace rigidkit;

namespace {

void expect_valid(const Multigraph& G, const PanelHingeRealization& p, const Dimension& dim) {
  EXPECT_EQ(panel_realization_error(G, p, is_minimal(G, dim)), "");
  EXPECT_EQ(realization_rank(G, p), dim.D * (G.vertex_count() - 1) - deficiency(G, dim).k);
  if (G.is_simple()) {
    EXPECT_TRUE(is_nonparallel(p));
  }
  EXPECT_TRUE(is_nondegenerate(p));
}

}  // namespace

TEST(Realization, AffineImageKeepsIncidenceAndRank) {
  Rng rng(1);
  for (int d = 2; d <= 4; ++d) {
    Dimension dim(d);
    auto G = corpus::path(3);
    auto p = generic_nonparallel_panel_hinge(G, dim, rng);
    for (int t = 0; t < 5; ++t) {
      auto q = random_affine_image(p, rng);
      if (!q) continue;
      EXPECT_EQ(panel_realization_error(G, *q), "");
      EXPECT_EQ(realization_rank(G, *q), realization_rank(G, p));
    }
  }
  Dimension d2(2);
  PanelHingeRealization p{d2, {Panel{{1, 0}}}, {}};
  // translation by (1,0) carries x = 1 onto x = 2
  auto q = apply_affine(p, Mat{{1, 0}, {0, 1}}, Vec{1, 0});
  ASSERT_TRUE(q);
  EXPECT_EQ(q->panels[0].c, (Vec{Scalar(1, 2), 0}));
  // and translation by (-1,0) onto the origin is refused
  EXPECT_FALSE(apply_affine(p, Mat{{1, 0}, {0, 1}}, Vec{-1, 0}));
}

TEST(Realization, TwoVertexBase) {
  Rng rng(2);
  for (int d = 2; d <= 4; ++d) {
    Dimension dim(d);
    auto p = base_two_vertex(dim, rng);
    EXPECT_EQ(p.panels[0].c, p.panels[1].c);
    EXPECT_FALSE(same_flat(p.hinges[0], p.hinges[1], dim));
    expect_valid(corpus::double_edge(), p, dim);
  }
}

TEST(Realization, RedundancyCertificateOnDoubleEdge) {
  Rng rng(3);
  for (int d = 2; d <= 3; ++d) {
    Dimension dim(d);
    auto G = corpus::double_edge();
    auto p = base_two_vertex(dim, rng);
    auto cert = redundancy_certificate(G, p, 1);
    EXPECT_TRUE(cert.verified);
    EXPECT_GE(cert.i_star, 1);
    EXPECT_EQ(cert.lambdas.at({1, cert.i_star}), 1);
  }
}

TEST(Realization, ExamplesEachDispatchCase) {
  Dimension d2(2), d3(3);
  struct Case {
    Multigraph G;
    Dimension dim;
    std::string kind;
  };
  std::vector<Case> cases{
      {corpus::path(2), d2, "base"},
      {corpus::double_edge(), d3, "base"},
      {corpus::from_pairs(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}}), d2, "cut-bridge"},
      {corpus::from_pairs(4, {{0, 1}, {0, 1}, {1, 2}, {2, 3}, {3, 0}}), d2, "multiedge-contraction"},
      {corpus::bowtie(), d2, "simple-contraction"},
      {corpus::cycle(4), d2, "split-kpos"},
      {corpus::cycle(6), d3, "cycle-base"},
      {corpus::theta(2, 2, 2), d2, "split-k0"},
  };
  Rng rng(4);
  for (const auto& c : cases) {
    RealizationTrace tr;
    auto p = realize_panel_hinge(c.G, c.dim, rng, &tr);
    expect_valid(c.G, p, c.dim);
    bool seen = false;
    for (const auto& s : tr.steps) seen = seen || s.kind == c.kind;
    EXPECT_TRUE(seen) << c.kind;
  }
}

TEST(Realization, ChainCaseCarriesCertificates) {
  // Every cycle has length 8, so no proper subgraph is rigid.
  Dimension d3(3);
  auto G = corpus::theta(4, 4, 4);
  Rng rng(5);
  RealizationTrace tr;
  auto p = realize_panel_hinge(G, d3, rng, &tr);
  expect_valid(G, p, d3);
  ASSERT_FALSE(tr.certificates.empty());
  for (const auto& c : tr.certificates) EXPECT_TRUE(c.verified);
  ASSERT_FALSE(tr.candidates.empty());
  EXPECT_EQ(tr.candidates.back().target, 60);
  for (const auto& c : tr.candidates) {
    EXPECT_TRUE(c.extensor_basis_ok);
    if (c.chosen >= 0) {
      EXPECT_TRUE(c.block_nonsingular[c.chosen]);
      EXPECT_EQ(c.ranks[c.chosen], c.target);
    }
  }
  for (const auto& r : tr.perturbations) {
    EXPECT_TRUE(r.ok_after);
    EXPECT_GE(r.rank_after, r.rank_before);
  }
}

TEST(Realization, CorpusAllSmallGraphs) {
  auto all = corpus::all_connected(5, 7);
  Rng rng(6);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& G = all[i];
    for (int d = 2; d <= 3; ++d) {
      Dimension dim(d);
      auto p = realize_panel_hinge(G, dim, rng);
      expect_valid(G, p, dim);
    }
  }
}

TEST(Realization, RandomLargerGraphs) {
  Rng rng(7);
  for (int i = 0; i < 25; ++i) {
    Dimension dim(static_cast<int>(rng.integer(2, 3)));
    const int n = static_cast<int>(rng.integer(5, 7));
    auto G = corpus::random_connected(rng, n, static_cast<int>(rng.integer(0, 4)), rng.integer(0, 1) == 1);
    auto p = realize_panel_hinge(G, dim, rng);
    expect_valid(G, p, dim);
  }
}

TEST(Realization, SameSeedSameOutput) {
  Dimension d3(3);
  auto G = corpus::cycle(7);
  Rng a(9), b(9);
  std::ostringstream x, y;
  dump_realization(x, realize_panel_hinge(G, d3, a));
  dump_realization(y, realize_panel_hinge(G, d3, b));
  EXPECT_EQ(x.str(), y.str());
}

TEST(Realization, DumpLoadRoundTrip) {
  Dimension d3(3);
  Rng rng(10);
  auto G = corpus::complete(4);
  auto p = realize_panel_hinge(G, d3, rng);
  std::stringstream ss;
  dump_realization(ss, p);
  auto q = load_realization(ss);
  ASSERT_EQ(q.panels.size(), p.panels.size());
  for (std::size_t v = 0; v < p.panels.size(); ++v) EXPECT_EQ(q.panels[v].c, p.panels[v].c);
  for (const auto& [id, h] : p.hinges) EXPECT_EQ(q.hinges.at(id).points, h.points);
  std::istringstream bad("realization 2 1 0\n0 : 1/0 1\n");
  EXPECT_THROW(load_realization(bad), std::invalid_argument);
}

TEST(Realization, NondegeneratePerturbation) {
  Dimension d2(2);
  Rng rng(11);
  RealizeContext ctx{d2, rng, nullptr};
  // edge between two parallel panels is impossible, so use a disconnected pair
  Multigraph G(2);
  PanelHingeRealization p{d2, {Panel{{1, 1}}, Panel{{2, 2}}}, {}};
  auto q = perturb_nondegenerate(G, p, ctx);
  EXPECT_TRUE(is_nondegenerate(q));
}

// The flats spanned by chain points are the proof's fallback when every random
// free hinge fails; check they lie in the right panels and one of them works.
TEST(Realization, ChainPointFallbackFlats) {
  for (auto [G, d] : {std::pair{corpus::theta(2, 2, 2), 2}, std::pair{corpus::theta(4, 4, 4), 3}}) {
    Dimension dim(d);
    Rng rng(12);
    RealizeContext ctx{dim, rng, nullptr};
    auto found = find_chain(G, dim);
    ASSERT_EQ(found.kind, ChainSearch::Kind::Chain);
    const auto& chain = found.chain;
    auto s = split_off(G, chain[1]);
    auto q1 = realize_minimal(s.graph, 0, ctx);
    auto cert = redundancy_certificate(s.graph, q1, s.new_edge);
    ASSERT_TRUE(cert.verified);
    std::vector<Panel> panels{q1.panels[s.vmap[chain[0]]]};
    for (int i = 1; i < d; ++i) panels.push_back(q1.panels[s.vmap[chain[i + 1]]]);
    auto pts = chain_points(panels, dim);
    ASSERT_TRUE(pts);
    EXPECT_TRUE(extensor_basis_check(*pts, dim));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= d; ++j) EXPECT_EQ(on_panel(panels[i], (*pts)[j]), j != i);
    int working = 0;
    for (int i = 0; i < d; ++i) {
      std::vector<Point> others;
      for (int j = 0; j <= d; ++j)
        if (j != i) others.push_back((*pts)[j]);
      for (const auto& sub : combinations(d, d - 1)) {
        Hinge L;
        for (int j : sub) L.points.push_back(others[j]);
        EXPECT_TRUE(hinge_on_panel(panels[i], L));
        if (rank(candidate_block(G, chain, s, q1, cert, i, L)) < dim.D) continue;
        auto p = build_candidate(G, chain, s, q1, i, L);
        EXPECT_EQ(panel_realization_error(G, p), "");
        working += realization_rank(G, p) == dim.D * (G.vertex_count() - 1);
      }
    }
    EXPECT_GT(working, 0);
  }
}
