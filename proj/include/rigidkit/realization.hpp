#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rigidkit/decomposition.hpp"
#include "rigidkit/geometry.hpp"
#include "rigidkit/rigidity_matrix.hpp"
#include "rigidkit/tree_packing.hpp"

namespace rigidkit {

inline constexpr int kResampleBudget = 8;
inline constexpr int kHalvingBudget = 64;

// Verification failed after every allowed redraw.
class RealizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RedundancyCertificate {
  int edge = -1;  // the split edge ab
  int i_star = 0;
  std::map<EdgeCopy, Scalar> lambdas;
  bool verified = false;  // sum of lambda-weighted rows is exactly zero
};

struct PerturbationRecord {
  std::string kind;  // "nonparallel" or "nondegenerate"
  int rank_before = 0;
  int rank_after = 0;
  bool ok_after = false;  // nonparallel / nondegenerate as requested
  int halvings = 0;
};

struct CandidateRecord {
  std::vector<int> chain;
  int i_star = 0;
  std::vector<bool> block_nonsingular;  // M_i per candidate tried, last round
  std::vector<int> ranks;               // -1 when not assembled
  int target = 0;
  int chosen = -1;
  bool used_point_fallback = false;
  bool extensor_basis_ok = false;
};

struct TraceStep {
  std::string kind;
  int n = 0, m = 0, k = 0;
  int rank = 0;
};

struct RealizationTrace {
  std::vector<TraceStep> steps;
  std::vector<RedundancyCertificate> certificates;
  std::vector<PerturbationRecord> perturbations;
  std::vector<CandidateRecord> candidates;
};

struct RealizeContext {
  Dimension dim;
  Rng& rng;
  RealizationTrace* trace = nullptr;
};

inline int target_rank(const Multigraph& G, const Dimension& dim, int k) {
  return G.vertex_count() == 0 ? 0 : dim.D * (G.vertex_count() - 1) - k;
}

inline int realization_rank(const Multigraph& G, const PanelHingeRealization& p) {
  return G.edge_count() == 0 ? 0 : rank(assemble(G, p));
}

inline void record_step(RealizeContext& ctx, const std::string& kind, const Multigraph& G, int k, int r) {
  if (ctx.trace) ctx.trace->steps.push_back({kind, G.vertex_count(), G.edge_count(), k, r});
}

inline BodyHingeRealization generic_body_hinge(const Multigraph& G, const Dimension& dim, Rng& rng) {
  const int target = predicted_rank(G, dim);
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    BodyHingeRealization p{dim, {}};
    for (const auto& e : G.edges()) p.hinges[e.id] = random_hinge(rng, dim);
    if (G.edge_count() == 0 || rank(assemble(G, p)) == target) return p;
  }
  throw RealizationError("generic body-and-hinge rank not reached within budget");
}

inline std::vector<Panel> pairwise_nonparallel_panels(int n, const Dimension& dim, Rng& rng) {
  std::vector<Panel> panels;
  while (static_cast<int>(panels.size()) < n) {
    Panel P = random_panel(rng, dim);
    bool ok = true;
    for (const auto& Q : panels) ok = ok && !parallel_normals(P.c, Q.c);
    if (ok) panels.push_back(std::move(P));
  }
  return panels;
}

inline PanelHingeRealization generic_nonparallel_panel_hinge(const Multigraph& G, const Dimension& dim, Rng& rng) {
  if (!G.is_simple()) throw std::invalid_argument("nonparallel realization needs a simple graph");
  const int target = predicted_rank(G, dim);
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    PanelHingeRealization p{dim, pairwise_nonparallel_panels(G.vertex_count(), dim, rng), {}};
    for (const auto& e : G.edges()) p.hinges[e.id] = panel_intersection(p.panels[e.u], p.panels[e.v], dim).hinge;
    if (realization_rank(G, p) == target) return p;
  }
  throw RealizationError("generic nonparallel rank not reached within budget");
}

inline Hinge distinct_hinge_in_panel(Rng& rng, const Panel& P, const Dimension& dim, const std::vector<Hinge>& avoid) {
  for (;;) {
    Hinge h = random_hinge_in_panel(rng, P, dim);
    bool fresh = true;
    for (const auto& a : avoid) fresh = fresh && !same_flat(a, h, dim);
    if (fresh) return h;
  }
}

// Two vertices, two parallel edges with ids e and f.
inline PanelHingeRealization base_two_vertex(const Dimension& dim, Rng& rng, int e = 0, int f = 1) {
  Multigraph G(2);
  G.add_edge_with_id(0, 1, e);
  G.add_edge_with_id(0, 1, f);
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    Panel P = random_panel(rng, dim);
    PanelHingeRealization p{dim, {P, P}, {}};
    p.hinges[e] = random_hinge_in_panel(rng, P, dim);
    p.hinges[f] = distinct_hinge_in_panel(rng, P, dim, {p.hinges[e]});
    if (realization_rank(G, p) == dim.D) return p;
  }
  throw RealizationError("two-vertex base case failed");
}

// x -> A x + t on every point; panels follow. Fails if a panel would pass
// through the origin.
inline std::optional<PanelHingeRealization> apply_affine(const PanelHingeRealization& p, const Mat& A, const Vec& t) {
  auto Ainv = inverse(A);
  if (!Ainv) return std::nullopt;
  const int d = p.dim.d;
  PanelHingeRealization q{p.dim, {}, {}};
  for (const auto& P : p.panels) {
    Vec c(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) c[i] += (*Ainv)[j][i] * P.c[j];
    const Scalar s = 1 + dot(c, t);
    if (s == 0) return std::nullopt;
    for (auto& x : c) x /= s;
    q.panels.push_back(Panel{c});
  }
  for (const auto& [id, h] : p.hinges) {
    Hinge g;
    for (const auto& pt : h.points) {
      Point y(d + 1);
      for (int i = 0; i < d; ++i) {
        y[i] = pt[d] * t[i];
        for (int j = 0; j < d; ++j) y[i] += A[i][j] * pt[j];
      }
      y[d] = pt[d];
      g.points.push_back(std::move(y));
    }
    q.hinges[id] = std::move(g);
  }
  return q;
}

inline std::optional<PanelHingeRealization> random_affine_image(const PanelHingeRealization& p, Rng& rng) {
  const int d = p.dim.d;
  Mat A(d, Vec(d));
  Vec t(d);
  for (auto& row : A)
    for (auto& x : row) x = Scalar(static_cast<long>(rng.integer(-9, 9)));
  for (auto& x : t) x = Scalar(static_cast<long>(rng.integer(-9, 9)));
  if (rank(A) < d) return std::nullopt;
  return apply_affine(p, A, t);
}

// Normal of the pencil of hyperplanes through a (d-2)-flat not through the origin.
inline Vec pencil_direction(const Hinge& L, const Dimension& dim) {
  Mat pts;
  for (const auto& pt : L.points) pts.push_back(affine_part(pt));
  auto ns = nullspace(pts, dim.d);
  if (ns.size() != 1) throw std::logic_error("axis flat passes through the origin");
  return ns[0];
}

inline int coincident_or_parallel_pairs(const PanelHingeRealization& p) {
  int c = 0;
  for (std::size_t u = 0; u < p.panels.size(); ++u)
    for (std::size_t v = u + 1; v < p.panels.size(); ++v) c += parallel_normals(p.panels[u].c, p.panels[v].c);
  return c;
}

// Rotates the panel of x about the fixed hinge `axis` (already inside it):
// Pi^t(x) = {(c + t c') . y = 1}, where c' annihilates the axis points. The
// other hinges at x are re-cut against the neighbouring panels.
inline PanelHingeRealization perturb_nonparallel(const Multigraph& G, const PanelHingeRealization& p, int x,
                                                 const Hinge& axis, RealizeContext& ctx) {
  PerturbationRecord rec{"nonparallel", realization_rank(G, p), 0, false, 0};
  if (is_nonparallel(p)) {
    rec.rank_after = rec.rank_before;
    rec.ok_after = true;
    if (ctx.trace) ctx.trace->perturbations.push_back(rec);
    return p;
  }
  const Vec cp = pencil_direction(axis, ctx.dim);
  Scalar t(1, 1024);
  for (int h = 0; h < kHalvingBudget; ++h, t /= 2) {
    PanelHingeRealization q = p;
    q.panels[x].c = added(p.panels[x].c, scaled(cp, t));
    bool ok = !is_zero(q.panels[x].c);
    for (const auto& e : G.edges()) {
      if (!ok) break;
      if (e.u != x && e.v != x) continue;
      const int w = Multigraph::other(e, x);
      if (hinge_on_panel(q.panels[x], p.hinges.at(e.id)) && hinge_on_panel(q.panels[w], p.hinges.at(e.id))) continue;
      auto m = panel_intersection(q.panels[x], q.panels[w], ctx.dim);
      if (m.kind != PanelMeet::Kind::Meet) {
        ok = false;
        break;
      }
      q.hinges[e.id] = m.hinge;
    }
    if (!ok || !is_nonparallel(q)) continue;
    const int r = realization_rank(G, q);
    if (r < rec.rank_before) continue;
    rec.rank_after = r;
    rec.ok_after = true;
    rec.halvings = h;
    if (ctx.trace) ctx.trace->perturbations.push_back(rec);
    return q;
  }
  if (ctx.trace) ctx.trace->perturbations.push_back(rec);
  throw RealizationError("nonparallel perturbation exhausted its halvings");
}

// Moves whole classes of identical panels (with their interior hinges) by a
// small linear map until every two panels meet or coincide.
inline PanelHingeRealization perturb_nondegenerate(const Multigraph& G, const PanelHingeRealization& p,
                                                   RealizeContext& ctx) {
  PerturbationRecord rec{"nondegenerate", realization_rank(G, p), 0, false, 0};
  PanelHingeRealization cur = p;
  const int d = ctx.dim.d;
  for (int guard = 0; !is_nondegenerate(cur); ++guard) {
    if (guard > static_cast<int>(cur.panels.size())) throw RealizationError("nondegenerate perturbation did not settle");
    int x = -1;
    for (std::size_t u = 0; u < cur.panels.size() && x < 0; ++u)
      for (std::size_t v = u + 1; v < cur.panels.size(); ++v)
        if (cur.panels[u].c != cur.panels[v].c && parallel_normals(cur.panels[u].c, cur.panels[v].c)) {
          x = static_cast<int>(u);
          break;
        }
    std::vector<int> cls;
    for (std::size_t u = 0; u < cur.panels.size(); ++u)
      if (cur.panels[u].c == cur.panels[x].c) cls.push_back(static_cast<int>(u));
    auto in_cls = [&](int v) { return std::find(cls.begin(), cls.end(), v) != cls.end(); };
    Mat N(d, Vec(d));
    for (auto& row : N)
      for (auto& y : row) y = Scalar(static_cast<long>(ctx.rng.integer(-9, 9)));
    Scalar t(1, 1024);
    bool done = false;
    for (int h = 0; h < kHalvingBudget && !done; ++h, t /= 2) {
      Mat M(d, Vec(d));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) M[i][j] = (i == j ? 1 : 0) + t * N[i][j];
      auto moved = apply_affine(cur, M, Vec(d));
      if (!moved) continue;
      PanelHingeRealization q = cur;
      for (int u : cls) q.panels[u] = moved->panels[u];
      bool ok = true;
      for (const auto& e : G.edges()) {
        const bool a = in_cls(e.u), b = in_cls(e.v);
        if (a && b) {
          q.hinges[e.id] = moved->hinges.at(e.id);
        } else if (a || b) {
          auto m = panel_intersection(q.panels[e.u], q.panels[e.v], ctx.dim);
          if (m.kind != PanelMeet::Kind::Meet) {
            ok = false;
            break;
          }
          q.hinges[e.id] = m.hinge;
        }
      }
      if (!ok) continue;
      bool cls_ok = true;
      for (std::size_t v = 0; v < q.panels.size(); ++v)
        if (!in_cls(static_cast<int>(v)) && parallel_normals(q.panels[x].c, q.panels[v].c)) cls_ok = false;
      if (!cls_ok) continue;
      if (realization_rank(G, q) < rec.rank_before) continue;
      cur = std::move(q);
      rec.halvings = std::max(rec.halvings, h);
      done = true;
    }
    if (!done) throw RealizationError("nondegenerate perturbation exhausted its halvings");
  }
  rec.rank_after = realization_rank(G, cur);
  rec.ok_after = true;
  if (ctx.trace) ctx.trace->perturbations.push_back(rec);
  return cur;
}

// Finds the first copy of ab whose row lies in the span of the others and the
// exact coefficients of that dependency, normalised to 1 at (ab)_{i*}.
inline RedundancyCertificate redundancy_certificate(const Multigraph& G, const PanelHingeRealization& q, int ab) {
  const RigidityMatrix R = assemble(G, q);
  const int full = rank(R);
  RedundancyCertificate cert;
  cert.edge = ab;
  for (int i = 1; i < q.dim.D; ++i) {
    std::size_t row = 0;
    while (!(R.row_of[row] == EdgeCopy{ab, i})) ++row;
    Mat rest;
    for (std::size_t r = 0; r < R.entries.size(); ++r)
      if (r != row) rest.push_back(R.entries[r]);
    if (rank(rest) != full) continue;
    Mat Rt = transpose(R.entries, R.cols());
    for (auto& x : nullspace(Rt, R.entries.size())) {
      if (x[row] == 0) continue;
      const Scalar s = x[row];
      cert.i_star = i;
      for (std::size_t r = 0; r < x.size(); ++r)
        if (x[r] != 0) cert.lambdas[R.row_of[r]] = x[r] / s;
      break;
    }
    break;
  }
  if (cert.i_star == 0) throw RealizationError("no redundant row among the split edge copies");
  Vec sum(R.cols());
  for (std::size_t r = 0; r < R.entries.size(); ++r) {
    auto it = cert.lambdas.find(R.row_of[r]);
    if (it != cert.lambdas.end()) sum = added(sum, scaled(R.entries[r], it->second));
  }
  cert.verified = is_zero(sum) && cert.lambdas.at({ab, cert.i_star}) == 1;
  return cert;
}

inline PanelHingeRealization realize_minimal(const Multigraph& G, int k, RealizeContext& ctx);

inline PanelHingeRealization verified(const Multigraph& G, const PanelHingeRealization& p, int k, RealizeContext& ctx,
                                      const std::string& kind, bool strict_parallel = true) {
  const std::string err = panel_realization_error(G, p, strict_parallel);
  if (!err.empty()) throw std::logic_error(kind + ": " + err);
  const int r = realization_rank(G, p);
  if (r != target_rank(G, ctx.dim, k)) throw RealizationError(kind + ": rank " + std::to_string(r) + " below target");
  record_step(ctx, kind, G, k, r);
  return p;
}

inline PanelHingeRealization realize_small(const Multigraph& G, int k, RealizeContext& ctx) {
  const Dimension& dim = ctx.dim;
  if (G.vertex_count() == 1 || G.edge_count() <= 1) {
    PanelHingeRealization p{dim, pairwise_nonparallel_panels(G.vertex_count(), dim, ctx.rng), {}};
    for (const auto& e : G.edges()) p.hinges[e.id] = panel_intersection(p.panels[e.u], p.panels[e.v], dim).hinge;
    return verified(G, p, k, ctx, "base");
  }
  if (G.edge_count() != 2) throw HypothesisError("two-vertex minimal graph has at most two edges");
  auto p = base_two_vertex(dim, ctx.rng, G.edges()[0].id, G.edges()[1].id);
  return verified(G, p, k, ctx, "base");
}

// Panels of `fixed` vs `moved` pairwise nonparallel, over the given vertex lists.
inline bool cross_nonparallel(const std::vector<Panel>& a, const std::vector<Panel>& b) {
  for (const auto& P : a)
    for (const auto& Q : b)
      if (parallel_normals(P.c, Q.c)) return false;
  return true;
}

inline PanelHingeRealization realize_cut_case(const Multigraph& G, int k, RealizeContext& ctx) {
  const Dimension& dim = ctx.dim;
  auto cut = cut_decompose(G, dim);
  if (!cut.relation_holds) throw std::logic_error("cut additivity fails");
  const auto& s1 = cut.first.part;
  const auto& s2 = cut.second.part;
  auto q1 = realize_minimal(s1.graph, cut.first.k, ctx);
  auto q2 = realize_minimal(s2.graph, cut.second.k, ctx);
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    auto moved = random_affine_image(q2, ctx.rng);
    if (!moved || !cross_nonparallel(q1.panels, moved->panels)) continue;
    PanelHingeRealization p{dim, std::vector<Panel>(G.vertex_count()), {}};
    for (int v = 0; v < G.vertex_count(); ++v)
      p.panels[v] = s1.vmap[v] >= 0 ? q1.panels[s1.vmap[v]] : moved->panels[s2.vmap[v]];
    for (const auto& [id, h] : q1.hinges) p.hinges[id] = h;
    for (const auto& [id, h] : moved->hinges) p.hinges[id] = h;
    if (cut.bridge >= 0) {
      const Edge& e = G.edge(cut.bridge);
      p.hinges[e.id] = panel_intersection(p.panels[e.u], p.panels[e.v], dim).hinge;
    }
    if (realization_rank(G, p) != target_rank(G, dim, k)) continue;
    return verified(G, p, k, ctx, cut.bridge >= 0 ? "cut-bridge" : "cut-disconnected");
  }
  throw RealizationError("cut case: rank not reached within budget");
}

inline PanelHingeRealization realize_multiedge_contraction(const Multigraph& G, int k, RealizeContext& ctx) {
  const Dimension& dim = ctx.dim;
  std::vector<int> pair;
  for (const auto& e : G.edges()) {
    pair = edges_between(G, e.u, e.v);
    if (pair.size() >= 2) break;
  }
  if (pair.size() != 2) throw HypothesisError("minimal graph has a parallel class of size other than 2");
  const Edge e = G.edge(pair[0]);
  auto H = contract(G, pair);
  auto q = realize_minimal(H.graph, k, ctx);
  const int star = H.vmap[e.u];
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    PanelHingeRealization p{dim, std::vector<Panel>(G.vertex_count()), q.hinges};
    for (int v = 0; v < G.vertex_count(); ++v) p.panels[v] = q.panels[H.vmap[v]];
    std::vector<Hinge> avoid;
    for (const auto& f : H.graph.edges())
      if (f.u == star || f.v == star) avoid.push_back(q.hinges.at(f.id));
    p.hinges[pair[0]] = distinct_hinge_in_panel(ctx.rng, q.panels[star], dim, avoid);
    avoid.push_back(p.hinges[pair[0]]);
    p.hinges[pair[1]] = distinct_hinge_in_panel(ctx.rng, q.panels[star], dim, avoid);
    if (realization_rank(G, p) != target_rank(G, dim, k)) continue;
    return verified(G, p, k, ctx, "multiedge-contraction");
  }
  throw RealizationError("multiedge contraction: rank not reached within budget");
}

inline PanelHingeRealization realize_simple_contraction(const Multigraph& G, int k, const RigidSubgraph& sub,
                                                        RealizeContext& ctx) {
  const Dimension& dim = ctx.dim;
  auto inner = induced_subgraph(G, sub.vertices);
  auto H = contract(G, sub.edges);
  if (!H.graph.is_simple()) throw HypothesisError("contraction is not simple");
  const int star = H.vmap[sub.vertices[0]];
  for (int outer = 0; outer < kResampleBudget; ++outer) {
    auto q1 = realize_minimal(inner.graph, 0, ctx);
    auto q2 = realize_minimal(H.graph, k, ctx);
    std::vector<Panel> outside;
    for (int w = 0; w < H.graph.vertex_count(); ++w)
      if (w != star) outside.push_back(q2.panels[w]);
    for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
      auto moved = random_affine_image(q1, ctx.rng);
      if (!moved || !cross_nonparallel(moved->panels, outside)) continue;
      PanelHingeRealization p{dim, std::vector<Panel>(G.vertex_count()), {}};
      for (int v = 0; v < G.vertex_count(); ++v)
        p.panels[v] = inner.vmap[v] >= 0 ? moved->panels[inner.vmap[v]] : q2.panels[H.vmap[v]];
      for (const auto& e : G.edges()) {
        const bool a = inner.vmap[e.u] >= 0, b = inner.vmap[e.v] >= 0;
        if (a && b)
          p.hinges[e.id] = moved->hinges.at(e.id);
        else if (!a && !b)
          p.hinges[e.id] = q2.hinges.at(e.id);
        else
          p.hinges[e.id] = panel_intersection(p.panels[e.u], p.panels[e.v], dim).hinge;
      }
      if (realization_rank(G, p) != target_rank(G, dim, k)) continue;
      return verified(G, p, k, ctx, "simple-contraction");
    }
  }
  throw RealizationError("simple contraction: rank not reached within budget");
}

inline PanelHingeRealization realize_attach_degree2(const Multigraph& G, int k, RealizeContext& ctx) {
  const Dimension& dim = ctx.dim;
  if (k != 0) throw HypothesisError("attaching a degree-2 vertex applies to 0-dof graphs");
  int v = -1;
  for (int x = 0; x < G.vertex_count() && v < 0; ++x)
    if (G.degree(x) == 2 && deficiency(remove_degree2(G, x).graph, dim).k == 0) v = x;
  if (v < 0) throw HypothesisError("no degree-2 vertex whose removal leaves a 0-dof graph");
  auto Gv = remove_degree2(G, v);
  auto inc = G.incident(v);
  auto q = realize_minimal(Gv.graph, 0, ctx);
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    Panel P = random_panel(ctx.rng, dim);
    if (!cross_nonparallel({P}, q.panels)) continue;
    PanelHingeRealization p{dim, std::vector<Panel>(G.vertex_count()), q.hinges};
    for (int x = 0; x < G.vertex_count(); ++x) p.panels[x] = x == v ? P : q.panels[Gv.vmap[x]];
    for (int id : inc) {
      const Edge& e = G.edge(id);
      p.hinges[id] = panel_intersection(p.panels[e.u], p.panels[e.v], dim).hinge;
    }
    if (same_flat(p.hinges[inc[0]], p.hinges[inc[1]], dim)) continue;
    if (realization_rank(G, p) != target_rank(G, dim, k)) continue;
    return verified(G, p, k, ctx, "attach-degree2");
  }
  throw RealizationError("attach degree-2: rank not reached within budget");
}

inline PanelHingeRealization realize_split_kpos(const Multigraph& G, int k, RealizeContext& ctx) {
  const Dimension& dim = ctx.dim;
  const int v = splittable_vertex(G);
  if (v < 0) throw HypothesisError("no degree-2 vertex to split off");
  auto inc = G.incident(v);
  const int va = inc[0], vb = inc[1];
  const int a = Multigraph::other(G.edge(va), v);
  auto S = split_off(G, v);
  auto q = realize_minimal(S.graph, k - 1, ctx);
  const Hinge& qab = q.hinges.at(S.new_edge);
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    PanelHingeRealization p{dim, std::vector<Panel>(G.vertex_count()), {}};
    for (int x = 0; x < G.vertex_count(); ++x) p.panels[x] = x == v ? q.panels[S.vmap[a]] : q.panels[S.vmap[x]];
    for (const auto& [id, h] : q.hinges)
      if (id != S.new_edge) p.hinges[id] = h;
    const Hinge L = distinct_hinge_in_panel(ctx.rng, p.panels[v], dim, {qab});
    p.hinges[va] = L;
    p.hinges[vb] = qab;
    if (realization_rank(G, p) != target_rank(G, dim, k)) continue;
    auto out = perturb_nonparallel(G, p, v, L, ctx);
    return verified(G, out, k, ctx, "split-kpos");
  }
  throw RealizationError("split k>0: rank not reached within budget");
}

// d+1 points cut out by the chain panels Pi_0 = Pi(v0), Pi_i = Pi(v_{i+1}):
// p_i on every panel but Pi_i, p_d on all of them.
inline std::optional<std::vector<Point>> chain_points(const std::vector<Panel>& panels, const Dimension& dim) {
  const int d = dim.d;
  Mat A;
  for (const auto& P : panels) A.push_back(P.c);
  auto pd = solve(A, Vec(d, 1));
  if (!pd || rank(A) < d) return std::nullopt;
  std::vector<Point> pts;
  for (int i = 0; i < d; ++i) {
    Mat B;
    for (int j = 0; j < d; ++j)
      if (j != i) B.push_back(panels[j].c);
    auto ns = nullspace(B, d);
    if (ns.size() != 1) return std::nullopt;
    pts.push_back(finite_point(added(*pd, ns[0])));
  }
  pts.push_back(finite_point(*pd));
  return pts;
}

struct CandidateSet {
  std::vector<PanelHingeRealization> candidates;
  std::vector<int> chain;
  int chosen = -1;
};

// Candidate p_i for the chain v0..vd from the realization q1 of G1 = G split
// at v1 (s maps G's vertices into G1). L is the free hinge of the candidate.
inline PanelHingeRealization build_candidate(const Multigraph& G, const std::vector<int>& chain, const Surgery& s,
                                             const PanelHingeRealization& q1, int i, const Hinge& L) {
  const Dimension& dim = q1.dim;
  auto chain_edge = [&](int j) { return edges_between(G, chain[j], chain[j + 1]).at(0); };
  PanelHingeRealization p{dim, std::vector<Panel>(G.vertex_count()), {}};
  for (int x = 0; x < G.vertex_count(); ++x)
    if (s.vmap[x] >= 0) p.panels[x] = q1.panels[s.vmap[x]];
  for (const auto& [id, h] : q1.hinges)
    if (id != s.new_edge) p.hinges[id] = h;
  const Hinge& q02 = q1.hinges.at(s.new_edge);
  if (i == 0) {
    p.panels[chain[1]] = q1.panels[s.vmap[chain[0]]];
    p.hinges[chain_edge(0)] = L;
    p.hinges[chain_edge(1)] = q02;
    return p;
  }
  for (int j = 1; j <= i; ++j) p.panels[chain[j]] = q1.panels[s.vmap[chain[j + 1]]];
  p.hinges[chain_edge(0)] = q02;
  for (int j = 2; j <= i; ++j) p.hinges[chain_edge(j - 1)] = q1.hinges.at(chain_edge(j));
  p.hinges[chain_edge(i)] = L;
  return p;
}

// Top-left D x D block: r(L_i) over the lambda-combination of the split-edge rows.
inline Mat candidate_block(const Multigraph& G, const std::vector<int>& chain, const Surgery& s,
                           const PanelHingeRealization& q1, const RedundancyCertificate& cert, int i, const Hinge& L) {
  const Dimension& dim = q1.dim;
  const int e = i <= 1 ? s.new_edge : edges_between(G, chain[i], chain[i + 1]).at(0);
  Mat M = complement_basis(hinge_extensor(L, dim).coords);
  Mat r = complement_basis(hinge_extensor(q1.hinges.at(e), dim).coords);
  Vec combo(dim.D);
  for (int j = 1; j < dim.D; ++j) {
    auto it = cert.lambdas.find({e, j});
    if (it != cert.lambdas.end()) combo = added(combo, scaled(r[j - 1], it->second));
  }
  M.push_back(combo);
  return M;
}

inline PanelHingeRealization realize_split_k0(const Multigraph& G, RealizeContext& ctx) {
  const Dimension& dim = ctx.dim;
  if (is_cycle(G) && G.vertex_count() <= dim.D) {
    auto p = generic_nonparallel_panel_hinge(G, dim, ctx.rng);
    return verified(G, p, 0, ctx, "cycle-base");
  }
  auto found = find_chain(G, dim);
  if (found.kind != ChainSearch::Kind::Chain) throw HypothesisError("no chain of length d");
  const auto& chain = found.chain;
  auto s = split_off(G, chain[1]);
  const int target = target_rank(G, dim, 0);
  for (int outer = 0; outer < kResampleBudget; ++outer) {
    auto q1 = realize_minimal(s.graph, 0, ctx);
    auto cert = redundancy_certificate(s.graph, q1, s.new_edge);
    if (ctx.trace) ctx.trace->certificates.push_back(cert);
    if (!cert.verified) continue;
    CandidateRecord rec;
    rec.chain = chain;
    rec.i_star = cert.i_star;
    rec.target = target;
    std::vector<Panel> chain_panels{q1.panels[s.vmap[chain[0]]]};
    for (int i = 1; i < dim.d; ++i) chain_panels.push_back(q1.panels[s.vmap[chain[i + 1]]]);
    auto pts = chain_points(chain_panels, dim);
    rec.extensor_basis_ok = pts && extensor_basis_check(*pts, dim);

    auto attempt_with = [&](int i, const Hinge& L) -> std::optional<PanelHingeRealization> {
      const bool nonsingular = rank(candidate_block(G, chain, s, q1, cert, i, L)) == dim.D;
      rec.block_nonsingular[i] = nonsingular;
      if (!nonsingular) return std::nullopt;
      auto p = build_candidate(G, chain, s, q1, i, L);
      if (!panel_realization_error(G, p).empty()) return std::nullopt;
      rec.ranks[i] = realization_rank(G, p);
      if (rec.ranks[i] != target) return std::nullopt;
      return p;
    };
    auto finish = [&](int i, const Hinge& L, PanelHingeRealization p) {
      rec.chosen = i;
      if (ctx.trace) ctx.trace->candidates.push_back(rec);
      const int mover = i == 0 ? chain[1] : chain[i];
      auto out = perturb_nonparallel(G, p, mover, L, ctx);
      return verified(G, out, 0, ctx, "split-k0");
    };

    for (int round = 0; round < kResampleBudget; ++round) {
      rec.block_nonsingular.assign(dim.d, false);
      rec.ranks.assign(dim.d, -1);
      for (int i = 0; i < dim.d; ++i) {
        const Panel& host = chain_panels[i];
        Hinge L = random_hinge_in_panel(ctx.rng, host, dim);
        if (auto p = attempt_with(i, L)) return finish(i, L, *p);
      }
    }
    // Flats spanned by d-1 of the chain points avoiding p_i lie in Pi_i, and
    // their extensors span the whole space, so one of them must work.
    if (pts) {
      rec.used_point_fallback = true;
      rec.block_nonsingular.assign(dim.d, false);
      rec.ranks.assign(dim.d, -1);
      for (int i = 0; i < dim.d; ++i) {
        std::vector<Point> others;
        for (int j = 0; j <= dim.d; ++j)
          if (j != i) others.push_back((*pts)[j]);
        for (const auto& sub : combinations(dim.d, dim.d - 1)) {
          Hinge L;
          for (int j : sub) L.points.push_back(others[j]);
          if (is_zero(pluecker(L.points, dim))) continue;
          if (auto p = attempt_with(i, L)) return finish(i, L, *p);
        }
      }
    }
    if (ctx.trace) ctx.trace->candidates.push_back(rec);
  }
  throw RealizationError("split k=0: no candidate reached full rank");
}

// Dispatch for a minimal k-dof graph.
inline PanelHingeRealization realize_minimal(const Multigraph& G, int k, RealizeContext& ctx) {
  const Dimension& dim = ctx.dim;
  if (G.vertex_count() <= 2) return realize_small(G, k, ctx);
  if (!is_k_edge_connected(G, 2)) return realize_cut_case(G, k, ctx);
  if (!G.is_simple()) return realize_multiedge_contraction(G, k, ctx);
  if (auto sub = maximal_proper_rigid_subgraph(G, dim)) {
    if (contract(G, sub->edges).graph.is_simple()) return realize_simple_contraction(G, k, *sub, ctx);
    return realize_attach_degree2(G, k, ctx);
  }
  check_cardinality_bounds(G, dim, k);
  if (k > 0) return realize_split_kpos(G, k, ctx);
  return realize_split_k0(G, ctx);
}

inline PanelHingeRealization realize_panel_hinge(const Multigraph& G, const Dimension& dim, Rng& rng,
                                                 RealizationTrace* trace = nullptr) {
  RealizeContext ctx{dim, rng, trace};
  const int k = deficiency(G, dim).k;
  const Multigraph H = minimize(G, dim);
  auto p = realize_minimal(H, k, ctx);
  p = perturb_nondegenerate(H, p, ctx);
  for (const auto& e : G.edges()) {
    if (H.has_edge(e.id)) continue;
    if (p.panels[e.u].c == p.panels[e.v].c) {
      std::vector<Hinge> siblings;
      for (int f : edges_between(G, e.u, e.v))
        if (p.hinges.count(f)) siblings.push_back(p.hinges.at(f));
      p.hinges[e.id] = distinct_hinge_in_panel(rng, p.panels[e.u], dim, siblings);
    } else {
      p.hinges[e.id] = panel_intersection(p.panels[e.u], p.panels[e.v], dim).hinge;
    }
  }
  // H was checked strictly inside realize_minimal.
  return verified(G, p, k, ctx, "panel-hinge", false);
}

// Text dump: header, one line per panel, one line per hinge; rationals as num/den.
inline void dump_realization(std::ostream& os, const PanelHingeRealization& p) {
  os << "realization " << p.dim.d << ' ' << p.panels.size() << ' ' << p.hinges.size() << '\n';
  for (std::size_t v = 0; v < p.panels.size(); ++v) {
    os << v << " :";
    for (const auto& x : p.panels[v].c) os << ' ' << to_string(x);
    os << '\n';
  }
  for (const auto& [id, h] : p.hinges) {
    os << id << " :";
    for (const auto& pt : h.points)
      for (const auto& x : pt) os << ' ' << to_string(x);
    os << '\n';
  }
}

inline Scalar parse_rational(const std::string& s) {
  Scalar q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline PanelHingeRealization load_realization(std::istream& is) {
  std::string word, colon;
  int d = 0;
  std::size_t n = 0, m = 0;
  if (!(is >> word >> d >> n >> m) || word != "realization") throw std::invalid_argument("bad realization header");
  PanelHingeRealization p{Dimension(d), std::vector<Panel>(n), {}};
  auto read_line = [&](std::size_t count) {
    int id = -1;
    if (!(is >> id >> colon) || colon != ":") throw std::invalid_argument("bad realization line");
    Vec xs(count);
    for (auto& x : xs) {
      if (!(is >> word)) throw std::invalid_argument("truncated realization line");
      x = parse_rational(word);
    }
    return std::make_pair(id, xs);
  };
  for (std::size_t i = 0; i < n; ++i) {
    auto [id, xs] = read_line(d);
    if (id < 0 || static_cast<std::size_t>(id) >= n) throw std::invalid_argument("panel id out of range");
    p.panels[id] = Panel{xs};
  }
  for (std::size_t i = 0; i < m; ++i) {
    auto [id, xs] = read_line(static_cast<std::size_t>((d - 1) * (d + 1)));
    Hinge h;
    for (int j = 0; j < d - 1; ++j) h.points.emplace_back(xs.begin() + j * (d + 1), xs.begin() + (j + 1) * (d + 1));
    p.hinges[id] = std::move(h);
  }
  return p;
}

}  // namespace rigidkit
