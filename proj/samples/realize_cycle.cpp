// Realizes a seven-cycle in 3-space and reports how far it is from rigid.
#include <iostream>

#include "rigidkit/rigidkit.hpp"

using namespace rigidkit;

int main() {
  const Dimension dim(3);
  Multigraph G(7);
  for (int i = 0; i < 7; ++i) G.add_edge(i, (i + 1) % 7);

  std::cout << "deficiency " << deficiency(G, dim).k << '\n';

  Rng rng(0);
  RealizationTrace trace;
  auto p = realize_panel_hinge(G, dim, rng, &trace);
  auto R = assemble(G, p);
  std::cout << "rank " << rank(R) << " of " << dim.D * (G.vertex_count() - 1) << '\n';
  std::cout << "nontrivial motions " << motion_space(R).nontrivial_dim << '\n';
  for (const auto& s : trace.steps) std::cout << "  " << s.kind << " n=" << s.n << " k=" << s.k << '\n';
  dump_realization(std::cout, p);
}
