// rigidkit command-line front end.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rigidkit/rigidkit.hpp"

using namespace rigidkit;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kParse = 2, kRealization = 3, kNotMinimal = 4, kDegree = 5 };

struct Common {
  std::string path;
  std::optional<int> dim;
  std::optional<std::uint64_t> seed;
  std::string json_out;
};

GraphFile load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphParseError(0, "cannot open " + path);
  return parse_graph(in);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RIGIDKIT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("RIGIDKIT_SEED is not an unsigned integer");
    }
  }
  return 0;
}

void emit(const Json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  f << j.dump(2) << '\n';
}

Json step_json(const ReductionStep& s) {
  Json j;
  if (s.kind == ReductionStep::Kind::Contraction) {
    j["kind"] = "contraction";
    j["vertices"] = s.contracted.vertices;
  } else {
    j["kind"] = "split-off";
    j["v"] = s.v;
    j["a"] = s.a;
    j["b"] = s.b;
  }
  j["n_after"] = s.after.graph.vertex_count();
  j["m_after"] = s.after.graph.edge_count();
  j["k_after"] = s.k_after;
  return j;
}

int cmd_analyze(const Common& c, bool witness) {
  auto g = load(c.path);
  const Dimension dim(c.dim.value_or(g.d));
  const Multigraph& G = g.graph;
  auto cls = classify(G, dim);
  Json j;
  j["schema"] = 1;
  j["d"] = dim.d;
  j["D"] = dim.D;
  j["n"] = G.vertex_count();
  j["m"] = G.edge_count();
  j["deficiency"] = cls.k;
  j["body_hinge_rigid"] = cls.k == 0;
  j["minimal"] = cls.minimal;
  j["redundant_edges"] = cls.redundant_edges;
  auto sub = find_proper_rigid_subgraph(G, dim);
  j["rigid_subgraph"] = sub ? Json(sub->vertices) : Json(nullptr);
  Json seq = nullptr;
  if (cls.k == 0 && cls.minimal && G.vertex_count() >= 2) {
    seq = Json::array();
    for (const auto& s : inductive_sequence(G, dim).steps) seq.push_back(step_json(s));
  }
  j["construction_sequence"] = seq;
  if (witness) {
    if (G.vertex_count() <= 10) {
      auto w = deficiency_bruteforce(G, dim);
      j["witness"] = w.witness ? Json(w.witness->blocks) : Json(nullptr);
    } else {
      j["witness"] = nullptr;
    }
  }
  emit(j, c.json_out);
  return kOk;
}

int cmd_realize(const Common& c, const std::string& mode, const std::string& dump, const std::string& matrix) {
  auto g = load(c.path);
  const Dimension dim(c.dim.value_or(g.d));
  const Multigraph& G = g.graph;
  const std::uint64_t seed = resolve_seed(c.seed);
  Rng rng(seed);
  const int predicted = dim.D * (G.vertex_count() - 1) - deficiency(G, dim).k;
  Json j;
  j["schema"] = 1;
  j["mode"] = mode;
  j["d"] = dim.d;
  j["n"] = G.vertex_count();
  j["m"] = G.edge_count();
  j["seed"] = seed;
  PanelHingeRealization p{dim, {}, {}};
  try {
    if (mode == "body")
      p.hinges = generic_body_hinge(G, dim, rng).hinges;
    else
      p = realize_panel_hinge(G, dim, rng);
  } catch (const RealizationError& e) {
    std::cerr << "realization failed: " << e.what() << '\n';
    j["error"] = e.what();
    emit(j, c.json_out);
    return kRealization;
  }
  const int achieved = G.edge_count() == 0 ? 0 : rank(assemble(G, p.body()));
  j["rank"] = achieved;
  j["predicted_rank"] = predicted;
  j["match"] = achieved == predicted;
  if (!dump.empty()) {
    std::ofstream f(dump);
    dump_realization(f, p);
  }
  if (!matrix.empty()) {
    std::ofstream f(matrix);
    dump_matrix(f, assemble(G, p.body()));
  }
  emit(j, c.json_out);
  return achieved == predicted ? kOk : kRealization;
}

int cmd_decompose(const Common& c) {
  auto g = load(c.path);
  const Dimension dim(c.dim.value_or(g.d));
  const Multigraph& G = g.graph;
  auto cls = classify(G, dim);
  if (!cls.minimal) {
    std::cerr << "not minimal: removing any of edges";
    for (int e : cls.redundant_edges) std::cerr << ' ' << e;
    std::cerr << " keeps deficiency " << cls.k << '\n';
    return kNotMinimal;
  }
  if (cls.k != 0 || G.vertex_count() < 2) {
    std::cerr << "not rigid: deficiency " << cls.k << '\n';
    return kNotMinimal;
  }
  auto seq = inductive_sequence(G, dim);
  int i = 0;
  for (const auto& s : seq.steps) {
    std::cout << "step " << ++i << ": ";
    if (s.kind == ReductionStep::Kind::Contraction) {
      std::cout << "contract {";
      for (std::size_t t = 0; t < s.contracted.vertices.size(); ++t)
        std::cout << (t ? " " : "") << s.contracted.vertices[t];
      std::cout << "}";
    } else {
      std::cout << "split off " << s.v << " (" << s.a << ", " << s.b << ")";
    }
    std::cout << " -> n=" << s.after.graph.vertex_count() << " m=" << s.after.graph.edge_count() << '\n';
  }
  std::cout << "terminal: n=" << seq.terminal.vertex_count() << " m=" << seq.terminal.edge_count() << '\n';
  return kOk;
}

int cmd_molecule(const Common& c, bool oracle) {
  auto g = load(c.path);
  const std::uint64_t seed = resolve_seed(c.seed);
  Rng rng(seed);
  MolecularReport r;
  try {
    r = molecular_prediction(g.graph, oracle, rng);
  } catch (const MolecularInputError& e) {
    std::cerr << e.what() << '\n';
    return kDegree;
  }
  Json j;
  j["schema"] = 1;
  j["n"] = r.n;
  j["edges_of_square"] = r.edges_of_square;
  j["deficiency"] = r.deficiency;
  j["predicted_rank"] = r.predicted_rank;
  j["oracle_rank"] = r.oracle_rank ? Json(*r.oracle_rank) : Json(nullptr);
  j["agree"] = r.agree ? Json(*r.agree) : Json(nullptr);
  emit(j, c.json_out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact body-and-hinge rigidity tools"};
  app.require_subcommand(1);

  Common c;
  bool witness = false, oracle = false;
  std::string mode = "panel", dump, matrix;

  auto add_common = [&](CLI::App* sub, bool with_dim, bool with_seed) {
    sub->add_option("path", c.path, "graph file")->required();
    if (with_dim) sub->add_option("--dim", c.dim, "dimension d (defaults to the file's)");
    if (with_seed) sub->add_option("--seed", c.seed, "random seed (default: RIGIDKIT_SEED or 0)");
    sub->add_option("--json", c.json_out, "write the JSON report here instead of stdout");
  };
  auto* analyze = app.add_subcommand("analyze", "deficiency, minimality and rigid subgraphs");
  add_common(analyze, true, false);
  analyze->add_flag("--witness", witness, "brute-force partition witness (|V| <= 10)");
  auto* realize = app.add_subcommand("realize", "exact realization and its rank");
  add_common(realize, true, true);
  realize->add_option("--mode", mode, "body or panel")->check(CLI::IsMember({"body", "panel"}));
  realize->add_option("--out", dump, "realization dump");
  realize->add_option("--matrix", matrix, "rigidity matrix dump");
  auto* decompose = app.add_subcommand("decompose", "inductive construction of a minimally rigid graph");
  add_common(decompose, true, false);
  auto* molecule = app.add_subcommand("molecule", "molecular rank prediction");
  add_common(molecule, false, true);
  molecule->add_flag("--oracle", oracle, "check against the bar-and-joint rank of the square");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*analyze) return cmd_analyze(c, witness);
    if (*realize) return cmd_realize(c, mode, dump, matrix);
    if (*decompose) return cmd_decompose(c);
    return cmd_molecule(c, oracle);
  } catch (const GraphParseError& e) {
    std::cerr << c.path << ": " << e.what() << '\n';
    return kParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return kParse;
  }
}
