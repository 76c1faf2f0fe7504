// stw: graph generation, wavelet bases, resistances, experiments and the
// invariant suite from the command line.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "stw/detect.hpp"
#include "stw/errors.hpp"
#include "stw/experiment.hpp"
#include "stw/io.hpp"
#include "stw/parallel.hpp"
#include "stw/resistance.hpp"
#include "stw/tree.hpp"
#include "stw/validate.hpp"
#include "stw/wavelet.hpp"

namespace fs = std::filesystem;
using namespace stw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + p.string() + "'");
  return out;
}

fs::path manifest_path(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

void finish_manifest(RunManifest& m, const fs::path& where, const std::vector<fs::path>& outputs) {
  for (const auto& o : outputs) m.outputs[o.string()] = file_digest(o);
  write_manifest(where, m);
}

// ------------------------------------------------------------------ gen ---

struct GenArgs {
  std::string family;
  GraphSpec spec;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string points;
  bool allow_disconnected = false;
};

int cmd_gen(const GenArgs& a) {
  GraphSpec spec = a.spec;
  spec.family = parse_family(a.family);
  const bool random = spec.family == GraphFamily::knn || spec.family == GraphFamily::epsilon;
  if (random && !a.seed) throw UsageError("gen " + a.family + " needs --seed");

  RunManifest m;
  m.command = "gen";
  m.seed = a.seed;
  m.config = {{"family", a.family}, {"side", spec.side}, {"dims", spec.dims}, {"n", spec.n},
              {"k", spec.k},        {"eps", spec.eps},   {"dim", spec.dim}};
  if (!a.out.empty()) write_manifest(manifest_path(a.out), m);

  const GeometricGraph gg = generate(spec, a.seed.value_or(0), !a.allow_disconnected);
  std::vector<fs::path> outputs;
  if (a.out.empty()) {
    write_edge_list(std::cout, gg.graph.num_vertices(), gg.graph.edges());
  } else {
    write_graph(a.out, gg.graph);
    outputs.emplace_back(a.out);
  }
  if (random) {
    std::string pts = a.points;
    if (pts.empty() && !a.out.empty()) pts = fs::path(a.out).replace_extension(".points.csv").string();
    if (!pts.empty()) {
      write_points(pts, gg.points);
      outputs.emplace_back(pts);
    }
  }
  if (!a.out.empty()) finish_manifest(m, manifest_path(a.out), outputs);
  std::cerr << "graph: n=" << gg.graph.num_vertices() << " m=" << gg.graph.num_edges()
            << " max_degree=" << gg.graph.max_degree() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- basis ---

struct BasisArgs {
  std::string graph;
  std::string tree = "ust";
  std::optional<std::uint64_t> seed;
  int root = 0;
  std::string out;
  std::string tree_out;
};

int cmd_basis(const BasisArgs& a) {
  if (a.tree == "ust" && !a.seed) throw UsageError("basis --tree ust needs --seed");
  const Graph g = read_graph(a.graph);
  require_connected(g, a.graph);

  RunManifest m;
  m.command = "basis";
  m.seed = a.seed;
  m.config = {{"graph", a.graph}, {"tree", a.tree}, {"root", a.root}};
  m.inputs[a.graph] = file_digest(a.graph);
  if (!a.out.empty()) write_manifest(manifest_path(a.out), m);

  std::optional<SpanningTree> t;
  if (a.tree == "ust") {
    Rng rng(*a.seed);
    t.emplace(sample_ust(g, rng));
  } else if (a.tree == "bfs") {
    if (a.root < 0 || a.root >= g.num_vertices()) throw UsageError("--root out of range");
    t.emplace(bfs_spanning_tree(g, a.root));
  } else {
    throw UsageError("--tree must be ust or bfs");
  }
  const WaveletBasis b = build_basis(*t);

  std::vector<fs::path> outputs;
  if (a.out.empty()) {
    write_basis_csv(std::cout, b);
  } else {
    auto out = open_out(a.out);
    write_basis_csv(out, b);
    out.close();
    outputs.emplace_back(a.out);
  }
  if (!a.tree_out.empty()) {
    write_tree(a.tree_out, *t, g);
    outputs.emplace_back(a.tree_out);
  }
  if (!a.out.empty()) finish_manifest(m, manifest_path(a.out), outputs);

  const auto act = edge_activations(b, *t);
  const int max_act = act.empty() ? 0 : *std::max_element(act.begin(), act.end());
  const int bound = activation_bound(t->max_degree(), g.num_vertices());
  const double residual = orthonormality_residual(b);
  const bool ok = residual < 1e-10 && max_act <= bound && b.size() == g.num_vertices();
  std::cerr << "basis: elements=" << b.size() << " nonzeros=" << b.nonzeros() << " tree_max_degree=" << t->max_degree()
            << '\n'
            << "orthonormality residual: " << residual << (residual < 1e-10 ? " ok" : " FAIL") << '\n'
            << "max edge activation: " << max_act << " (bound " << bound << ")" << (max_act <= bound ? " ok" : " FAIL")
            << '\n';
  return ok ? kExitOk : kExitValidation;
}

// ----------------------------------------------------------- resistance ---

struct ResistanceArgs {
  std::string graph;
  std::string out;
  bool foster = false;
  int mtt = 0;
  std::optional<std::uint64_t> seed;
};

int cmd_resistance(const ResistanceArgs& a) {
  if (a.mtt > 0 && !a.seed) throw UsageError("--validate-mtt needs --seed");
  const Graph g = read_graph(a.graph);
  require_connected(g, a.graph);

  RunManifest m;
  m.command = "resistance";
  m.seed = a.seed;
  m.config = {{"graph", a.graph}, {"validate_foster", a.foster}, {"validate_mtt", a.mtt}};
  m.inputs[a.graph] = file_digest(a.graph);
  if (!a.out.empty()) write_manifest(manifest_path(a.out), m);

  const ResistanceProfile profile = all_edge_resistances(g);
  if (a.out.empty()) {
    write_resistance_csv(std::cout, profile);
  } else {
    auto out = open_out(a.out);
    write_resistance_csv(out, profile);
    out.close();
    finish_manifest(m, manifest_path(a.out), {a.out});
  }

  bool ok = true;
  if (a.foster) {
    const double sum = profile.total();
    const double err = std::abs(sum - (g.num_vertices() - 1));
    const bool pass = err < 1e-8;
    ok = ok && pass;
    std::cerr << "foster: sum " << fixed6(sum) << " (n-1 = " << g.num_vertices() - 1 << "), |error| " << err
              << (pass ? ", pass" : ", FAIL") << '\n';
  }
  if (a.mtt > 0) {
    const auto freq = ust_edge_frequencies(g, a.mtt, *a.seed);
    auto re = profile.edge_resistances();
    auto edges = profile.edges();
    int within = 0;
    for (std::size_t e = 0; e < freq.size(); ++e) {
      const double se = std::sqrt(std::max(0.0, re[e] * (1.0 - re[e])) / a.mtt);
      within += std::abs(freq[e] - re[e]) <= 3.0 * se + 1e-12;
    }
    const double frac = freq.empty() ? 1.0 : static_cast<double>(within) / static_cast<double>(freq.size());
    const bool pass = frac >= 0.99;
    ok = ok && pass;
    std::cerr << "matrix-tree: " << a.mtt << " UST draws, " << within << "/" << freq.size()
              << " edges within 3 SE of r_e" << (pass ? ", pass" : ", FAIL") << '\n';
    const std::size_t shown = std::min<std::size_t>(freq.size(), 12);
    for (std::size_t e = 0; e < shown; ++e) {
      std::cerr << "  (" << edges[e].u << "," << edges[e].v << ") frequency " << fixed6(freq[e]) << " r_e "
                << fixed6(re[e]) << '\n';
    }
    if (shown < freq.size()) std::cerr << "  ... " << freq.size() - shown << " more edges\n";
  }
  return ok ? kExitOk : kExitValidation;
}

// ----------------------------------------------------------- experiment ---

struct ExperimentArgs {
  std::string config;
  std::string preset;
  std::string manifest;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "stw-out";
};

void write_gnuplot_power(const fs::path& p, const std::vector<PowerCell>& cells) {
  auto out = open_out(p);
  out << "# mu power type1 risk; one block per (family, graph), blocks separated by two blank lines\n";
  std::string key;
  for (const auto& c : cells) {
    if (c.status != "ok") continue;
    const std::string k = c.family + "/" + std::to_string(c.graph);
    if (k != key) {
      if (!key.empty()) out << "\n\n";
      out << "# " << c.family << " graph " << c.graph << " n=" << c.n << " rho=" << c.rho << '\n';
      key = k;
    }
    out << format_double(c.mu) << ' ' << format_double(c.power) << ' ' << format_double(c.type1) << ' '
        << format_double(c.risk) << '\n';
  }
}

void write_gnuplot_sparsity(const fs::path& p, const std::vector<SparsityPoint>& points) {
  auto out = open_out(p);
  out << "# bound sparsity; one block per family, blocks separated by two blank lines\n";
  std::string key;
  for (const auto& pt : points) {
    if (pt.family != key) {
      if (!key.empty()) out << "\n\n";
      out << "# " << pt.family << '\n';
      key = pt.family;
    }
    out << pt.bound << ' ' << pt.sparsity << '\n';
  }
}

int cmd_experiment(const ExperimentArgs& a) {
  const int sources = !a.config.empty() + !a.preset.empty() + !a.manifest.empty();
  if (sources != 1) throw UsageError("experiment needs exactly one of --config, --preset, --manifest");

  ExperimentConfig cfg;
  std::optional<RunManifest> replay;
  if (!a.preset.empty()) {
    if (!a.seed) throw UsageError("experiment --preset needs --seed");
    cfg = preset(a.preset, *a.seed);
  } else if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw InvalidInput("cannot open config '" + a.config + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
    }
    if (!a.seed && !j.contains("seed")) throw UsageError("experiment needs --seed or a seed in the config");
    cfg = parse_experiment_config(j);
    if (a.seed) cfg.seed = *a.seed;
  } else {
    replay = read_manifest(a.manifest);
    if (replay->command != "experiment") throw InvalidInput("manifest is for command '" + replay->command + "'");
    cfg = parse_experiment_config(replay->config);
    if (replay->seed) cfg.seed = *replay->seed;
  }

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  RunManifest m;
  m.command = "experiment";
  m.config = to_json(cfg);
  m.seed = cfg.seed;
  if (!a.config.empty()) m.inputs[a.config] = file_digest(a.config);
  const fs::path manifest = dir / "manifest.json";
  write_manifest(manifest, m);

  std::vector<fs::path> outputs;
  auto emit = [&](const std::string& name, auto&& writer) {
    const fs::path p = dir / name;
    auto out = open_out(p);
    writer(out);
    out.close();
    outputs.push_back(p);
  };
  emit("schema.md", [](std::ostream& o) { o << csv_schema(); });

  if (cfg.sparsity) {
    const auto res = sparsity_experiment(*cfg.sparsity, cfg.seed);
    emit("sparsity_points.csv", [&](std::ostream& o) { write_sparsity_points_csv(o, res.points); });
    emit("sparsity_fits.csv", [&](std::ostream& o) { write_sparsity_fits_csv(o, res.fits); });
    write_gnuplot_sparsity(dir / "sparsity.dat", res.points);
    outputs.push_back(dir / "sparsity.dat");
    long above = 0;
    for (const auto& p : res.points) above += !p.within_bound;
    std::cout << "sparsity: " << res.points.size() << " points, " << above << " above the bound line\n";
    for (const auto& f : res.fits) {
      std::cout << "  " << f.family << ": ";
      if (f.status == "ok")
        std::cout << "slope " << f.fit.slope << ", R^2 " << f.fit.r2 << " (" << f.fit.points << " points)\n";
      else
        std::cout << f.status << '\n';
    }
    for (const auto& s : res.infeasible) std::cout << "  skipped " << s << '\n';
  }
  if (cfg.power) {
    const auto res = power_curve(*cfg.power, cfg.seed);
    emit("power_rows.csv", [&](std::ostream& o) { write_power_rows_csv(o, res.rows); });
    emit("power_cells.csv", [&](std::ostream& o) { write_power_cells_csv(o, res.cells); });
    write_gnuplot_power(dir / "power.dat", res.cells);
    outputs.push_back(dir / "power.dat");
    std::cout << "power: " << res.cells.size() << " cells\n";
    std::string key;
    for (const auto& c : res.cells) {
      const std::string k = c.family + "/" + std::to_string(c.graph);
      if (k == key) continue;
      key = k;
      std::vector<PowerCell> curve;
      for (const auto& d : res.cells)
        if (d.family == c.family && d.graph == c.graph && d.status == "ok") curve.push_back(d);
      std::cout << "  " << c.family << " n=" << c.n << " rho=" << c.rho;
      if (curve.empty()) {
        std::cout << ": " << c.status << '\n';
        continue;
      }
      const auto mu50 = mu_at_power(curve);
      std::cout << ": type1 " << curve.front().type1 << ", mu at 50% power "
                << (mu50 ? format_double(*mu50) : std::string("not reached")) << '\n';
    }
  }
  if (cfg.concentration) {
    const auto res = concentration_experiment(*cfg.concentration, cfg.seed);
    emit("concentration.csv", [&](std::ostream& o) { write_concentration_csv(o, res); });
    for (const auto& r : res) {
      int pass = 0;
      for (const auto& row : r.rows) pass += row.pass;
      std::cout << "concentration: " << r.graph << " n=" << r.n << " |B|=" << r.subset.size() << ": " << pass << "/"
                << r.rows.size() << " slacks within bound\n";
    }
  }

  std::sort(outputs.begin(), outputs.end());
  m.outputs.clear();
  for (const auto& o : outputs) m.outputs[o.filename().string()] = file_digest(o);
  write_manifest(manifest, m);

  if (replay && !replay->outputs.empty()) {
    int mismatched = 0;
    for (const auto& [name, digest] : replay->outputs) {
      auto it = m.outputs.find(name);
      if (it == m.outputs.end() || it->second != digest) {
        std::cout << "replay mismatch: " << name << '\n';
        ++mismatched;
      }
    }
    std::cout << "replay: " << replay->outputs.size() - mismatched << "/" << replay->outputs.size()
              << " outputs identical\n";
    if (mismatched > 0) return kExitValidation;
  }
  return kExitOk;
}

// ------------------------------------------------------------- validate ---

struct ValidateArgs {
  std::optional<std::uint64_t> seed;
  bool quick = false;
  std::vector<int> only;
};

int cmd_validate(const ValidateArgs& a) {
  if (!a.seed) throw UsageError("validate needs --seed");
  ValidationOptions opts;
  opts.seed = *a.seed;
  opts.quick = a.quick;
  opts.only = a.only;
  for (int id : opts.only)
    if (id < 1 || id > kNumChecks) throw UsageError("--only ids must be in 1.." + std::to_string(kNumChecks));
  bool all = true;
  for (int id = 1; id <= kNumChecks; ++id) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
    const CheckResult r = run_check(id, opts);
    std::cout << format_result(r) << std::endl;
    all = all && r.pass;
  }
  return all ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spanning-tree wavelet detection toolkit"};
  app.set_version_flag("--version", std::string(STW_VERSION));
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: $STW_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a graph edge list");
  g->add_option("family", gen.family, "torus, complete, knn or epsilon")->required();
  g->add_option("--side", gen.spec.side, "Torus side length (>= 3)");
  g->add_option("--dims", gen.spec.dims, "Torus dimensions");
  g->add_option("--n", gen.spec.n, "Vertex count (complete, knn, epsilon)");
  g->add_option("--k", gen.spec.k, "Neighbors per point (knn)");
  g->add_option("--eps", gen.spec.eps, "Connection radius (epsilon)");
  g->add_option("--dim", gen.spec.dim, "Point dimension (knn, epsilon)");
  g->add_option("--seed", gen.seed, "Master seed (knn, epsilon)");
  g->add_option("-o,--out", gen.out, "Edge-list output path (default: stdout)");
  g->add_option("--points", gen.points, "Point CSV path (default: <out>.points.csv)");
  g->add_flag("--allow-disconnected", gen.allow_disconnected, "Keep a disconnected draw instead of redrawing");

  BasisArgs basis;
  auto* b = app.add_subcommand("basis", "Build a wavelet basis and check its invariants");
  b->add_option("graph", basis.graph, "Edge-list file")->required()->check(CLI::ExistingFile);
  b->add_option("--tree", basis.tree, "ust or bfs")->check(CLI::IsMember({"ust", "bfs"}));
  b->add_option("--seed", basis.seed, "Seed for the UST draw");
  b->add_option("--root", basis.root, "BFS root");
  b->add_option("-o,--out", basis.out, "Basis CSV path (default: stdout)");
  b->add_option("--tree-out", basis.tree_out, "Also write the spanning tree here");

  ResistanceArgs res;
  auto* r = app.add_subcommand("resistance", "Effective resistances of every edge");
  r->add_option("graph", res.graph, "Edge-list file")->required()->check(CLI::ExistingFile);
  r->add_option("-o,--out", res.out, "Resistance CSV path (default: stdout)");
  r->add_flag("--validate-foster", res.foster, "Check that resistances sum to n-1");
  r->add_option("--validate-mtt", res.mtt, "Compare with UST edge frequencies over this many draws")
      ->check(CLI::NonNegativeNumber);
  r->add_option("--seed", res.seed, "Seed for --validate-mtt");

  ExperimentArgs exp;
  auto* e = app.add_subcommand("experiment", "Run sparsity, power and concentration experiments");
  e->add_option("--config", exp.config, "JSON config file");
  e->add_option("--preset", exp.preset, "paper-fig1, paper-fig2, concentration or smoke");
  e->add_option("--manifest", exp.manifest, "Replay the run recorded in a manifest");
  e->add_option("--seed", exp.seed, "Master seed");
  e->add_option("--out-dir", exp.out_dir, "Output directory");

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Run the invariant suite");
  v->add_option("--seed", val.seed, "Master seed");
  v->add_flag("--quick", val.quick, "Smaller sample counts");
  v->add_option("--only", val.only, "Check ids to run")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForVersion& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kExitUsage;
  }

  try {
    if (threads > 0) set_thread_count(threads);
    if (g->parsed()) return cmd_gen(gen);
    if (b->parsed()) return cmd_basis(basis);
    if (r->parsed()) return cmd_resistance(res);
    if (e->parsed()) return cmd_experiment(exp);
    if (v->parsed()) return cmd_validate(val);
  } catch (const UsageError& ex) {
    std::cerr << "usage error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const InvalidInput& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}
