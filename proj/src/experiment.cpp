#include "stw/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "stw/errors.hpp"
#include "stw/parallel.hpp"
#include "stw/resistance.hpp"
#include "stw/tree.hpp"
#include "stw/wavelet.hpp"

namespace stw {

using nlohmann::json;

std::string to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::torus: return "torus";
    case GraphFamily::complete: return "complete";
    case GraphFamily::knn: return "knn";
    case GraphFamily::epsilon: return "epsilon";
  }
  return "unknown";
}

GraphFamily parse_family(const std::string& name) {
  if (name == "torus") return GraphFamily::torus;
  if (name == "complete") return GraphFamily::complete;
  if (name == "knn") return GraphFamily::knn;
  if (name == "epsilon") return GraphFamily::epsilon;
  throw InvalidInput("unknown graph family '" + name + "' (expected torus, complete, knn or epsilon)");
}

int GraphSpec::vertex_count() const {
  if (family != GraphFamily::torus) return n;
  long count = 1;
  for (int d = 0; d < dims; ++d) count *= side;
  return static_cast<int>(count);
}

GeometricGraph generate(const GraphSpec& spec, std::uint64_t seed, bool connected) {
  switch (spec.family) {
    case GraphFamily::torus: return {gen_torus(spec.side, spec.dims), {}};
    case GraphFamily::complete: return {gen_complete(spec.n), {}};
    case GraphFamily::knn:
    case GraphFamily::epsilon: break;
  }
  for (int attempt = 0; attempt < kMaxGraphAttempts; ++attempt) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
    GeometricGraph gg = spec.family == GraphFamily::knn ? gen_knn(spec.n, spec.k, spec.dim, rng)
                                                        : gen_epsilon(spec.n, spec.eps, spec.dim, rng);
    if (!connected || is_connected(gg.graph)) return gg;
  }
  throw PreconditionError("no connected " + to_string(spec.family) + " graph after " +
                          std::to_string(kMaxGraphAttempts) + " draws; raise k or eps");
}

long RhoRule::at(int n) const {
  return std::max(1L, std::lround(scale * std::pow(static_cast<double>(n), exponent)));
}

// ---------------------------------------------------------------- config ---

namespace {

json spec_to_json(const GraphSpec& s) {
  json j{{"family", to_string(s.family)}};
  switch (s.family) {
    case GraphFamily::torus: j["side"] = s.side; j["dims"] = s.dims; break;
    case GraphFamily::complete: j["n"] = s.n; break;
    case GraphFamily::knn: j["n"] = s.n; j["k"] = s.k; j["dim"] = s.dim; break;
    case GraphFamily::epsilon: j["n"] = s.n; j["eps"] = s.eps; j["dim"] = s.dim; break;
  }
  return j;
}

GraphSpec spec_from_json(const json& j) {
  GraphSpec s;
  s.family = parse_family(j.at("family").get<std::string>());
  s.side = j.value("side", s.side);
  s.dims = j.value("dims", s.dims);
  s.n = j.value("n", s.n);
  s.k = j.value("k", s.k);
  s.eps = j.value("eps", s.eps);
  s.dim = j.value("dim", s.dim);
  return s;
}

json rho_to_json(const RhoRule& r) { return {{"scale", r.scale}, {"exponent", r.exponent}}; }

RhoRule rho_from_json(const json& j, RhoRule fallback) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_object()) throw InvalidInput("rho rule must be a number or {scale, exponent}");
  return {j.value("scale", fallback.scale), j.value("exponent", fallback.exponent)};
}

json plan_to_json(const FamilyPlan& p) {
  json graphs = json::array();
  for (const auto& g : p.graphs) graphs.push_back(spec_to_json(g));
  return {{"name", p.name}, {"graphs", graphs}, {"rho", rho_to_json(p.rho)},
          {"rho_min", rho_to_json(p.rho_min)}, {"rho_max", rho_to_json(p.rho_max)}};
}

FamilyPlan plan_from_json(const json& j) {
  FamilyPlan p;
  for (const auto& g : j.at("graphs")) p.graphs.push_back(spec_from_json(g));
  if (p.graphs.empty()) throw InvalidInput("family plan has no graphs");
  p.name = j.value("name", to_string(p.graphs.front().family));
  if (j.contains("rho")) p.rho = rho_from_json(j["rho"], p.rho);
  if (j.contains("rho_min")) p.rho_min = rho_from_json(j["rho_min"], p.rho_min);
  if (j.contains("rho_max")) p.rho_max = rho_from_json(j["rho_max"], p.rho_max);
  return p;
}

std::string shape_name(SignalShape s) { return s == SignalShape::indicator ? "indicator" : "two_level"; }

SignalShape parse_shape(const std::string& s) {
  if (s == "indicator") return SignalShape::indicator;
  if (s == "two_level") return SignalShape::two_level;
  throw InvalidInput("unknown signal shape '" + s + "'");
}

std::vector<double> grid_from_json(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  const double start = j.at("start").get<double>();
  const double stop = j.at("stop").get<double>();
  const double step = j.at("step").get<double>();
  if (!(step > 0.0) || stop < start) throw InvalidInput("mu grid needs step > 0 and stop >= start");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    double v = start + static_cast<double>(i) * step;
    if (v > stop + 1e-12 * std::abs(stop)) break;
    out.push_back(v);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j) {
  try {
    ExperimentConfig cfg;
    cfg.name = j.value("name", cfg.name);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("sparsity")) {
      const json& s = j["sparsity"];
      SparsityConfig sc;
      sc.signals = s.value("signals", sc.signals);
      sc.shape = parse_shape(s.value("shape", shape_name(sc.shape)));
      for (const auto& f : s.at("families")) sc.families.push_back(plan_from_json(f));
      if (sc.signals < 2) throw InvalidInput("sparsity experiment needs at least 2 signals per graph");
      cfg.sparsity = std::move(sc);
    }
    if (j.contains("power")) {
      const json& p = j["power"];
      PowerConfig pc;
      pc.mu_grid = grid_from_json(p.at("mu_grid"));
      pc.trials = p.value("trials", pc.trials);
      pc.null_trials = p.value("null_trials", pc.null_trials);
      pc.noise_reps = p.value("noise_reps", pc.noise_reps);
      pc.delta = p.value("delta", pc.delta);
      pc.sigma = p.value("sigma", pc.sigma);
      const std::string tree = p.value("tree", std::string("ust"));
      if (tree != "ust" && tree != "bfs") throw InvalidInput("tree must be 'ust' or 'bfs'");
      pc.tree = tree == "ust" ? TreeKind::ust : TreeKind::bfs;
      pc.shape = parse_shape(p.value("shape", shape_name(pc.shape)));
      for (const auto& f : p.at("families")) pc.families.push_back(plan_from_json(f));
      if (pc.trials < 1) throw InvalidInput("power experiment needs trials >= 1");
      if (pc.noise_reps < 1) throw InvalidInput("noise_reps must be >= 1");
      if (pc.mu_grid.empty()) throw InvalidInput("empty mu grid");
      cfg.power = std::move(pc);
    }
    if (j.contains("concentration")) {
      const json& c = j["concentration"];
      ConcentrationConfig cc;
      cc.subset_size = c.value("subset_size", cc.subset_size);
      cc.samples = c.value("samples", cc.samples);
      if (c.contains("slacks")) cc.slacks = c["slacks"].get<std::vector<double>>();
      for (const auto& g : c.at("graphs")) cc.graphs.push_back(spec_from_json(g));
      cfg.concentration = std::move(cc);
    }
    return cfg;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed experiment config: ") + e.what());
  }
}

json to_json(const ExperimentConfig& cfg) {
  json j{{"name", cfg.name}, {"seed", cfg.seed}};
  auto plans = [](const std::vector<FamilyPlan>& fs) {
    json arr = json::array();
    for (const auto& f : fs) arr.push_back(plan_to_json(f));
    return arr;
  };
  if (cfg.sparsity) {
    j["sparsity"] = {{"signals", cfg.sparsity->signals},
                     {"shape", shape_name(cfg.sparsity->shape)},
                     {"families", plans(cfg.sparsity->families)}};
  }
  if (cfg.power) {
    const auto& p = *cfg.power;
    j["power"] = {{"mu_grid", p.mu_grid},     {"trials", p.trials},       {"null_trials", p.null_trials},
                  {"noise_reps", p.noise_reps}, {"delta", p.delta},         {"sigma", p.sigma},
                  {"tree", p.tree == TreeKind::ust ? "ust" : "bfs"},     {"shape", shape_name(p.shape)},
                  {"families", plans(p.families)}};
  }
  if (cfg.concentration) {
    json graphs = json::array();
    for (const auto& g : cfg.concentration->graphs) graphs.push_back(spec_to_json(g));
    j["concentration"] = {{"subset_size", cfg.concentration->subset_size},
                          {"samples", cfg.concentration->samples},
                          {"slacks", cfg.concentration->slacks},
                          {"graphs", graphs}};
  }
  return j;
}

namespace {

GraphSpec torus(int side) { return {GraphFamily::torus, side, 2, 0, 0, 0.0, 2}; }
GraphSpec complete(int n) { return {GraphFamily::complete, 0, 0, n, 0, 0.0, 2}; }
GraphSpec knn(int n, int k) { return {GraphFamily::knn, 0, 0, n, k, 0.0, 2}; }
GraphSpec epsilon(int n, double eps) { return {GraphFamily::epsilon, 0, 0, n, 0, eps, 2}; }

}  // namespace

ExperimentConfig preset(const std::string& name, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.seed = seed;
  if (name == "paper-fig1") {
    SparsityConfig sc;
    sc.signals = 150;
    sc.families = {
        {"torus", {torus(16), torus(32)}, {}, {4.0, 0.0}, {2.0, 0.5}},
        {"complete", {complete(128), complete(256)}, {}, {1.0, 1.0}, {0.25, 2.0}},
        {"knn", {knn(256, 8), knn(512, 9)}, {}, {1.0, 0.5}, {2.0, 2.0 / 3.0}},
        {"epsilon", {epsilon(256, 0.2), epsilon(512, 0.15)}, {}, {1.0, 0.5}, {2.0, 0.8}},
    };
    cfg.sparsity = std::move(sc);
  } else if (name == "paper-fig2") {
    PowerConfig pc;
    for (int i = 0; i <= 30; ++i) pc.mu_grid.push_back(1.0 * i);
    pc.trials = 400;
    pc.null_trials = 1000;
    pc.families = {
        {"torus", {torus(8), torus(16), torus(32)}, {1.0, 0.5}, {}, {}},
        {"complete", {complete(64), complete(128), complete(256)}, {1.0, 1.0}, {}, {}},
        {"knn", {knn(128, 7), knn(256, 8), knn(512, 9)}, {1.0, 2.0 / 3.0}, {}, {}},
        {"epsilon", {epsilon(128, 0.25), epsilon(256, 0.2), epsilon(512, 0.15)}, {1.0, 0.8}, {}, {}},
    };
    cfg.power = std::move(pc);
  } else if (name == "concentration") {
    ConcentrationConfig cc;
    cc.graphs = {torus(8), knn(200, 6)};
    cfg.concentration = std::move(cc);
  } else if (name == "smoke") {
    SparsityConfig sc;
    sc.signals = 12;
    sc.families = {{"torus", {torus(6)}, {}, {4.0, 0.0}, {2.0, 0.5}}};
    cfg.sparsity = std::move(sc);
    PowerConfig pc;
    pc.mu_grid = {0.0, 4.0, 8.0};
    pc.trials = 20;
    pc.null_trials = 20;
    pc.families = {{"torus", {torus(6)}, {1.0, 0.5}, {}, {}}};
    cfg.power = std::move(pc);
    ConcentrationConfig cc;
    cc.graphs = {torus(4)};
    cc.subset_size = 6;
    cc.samples = 200;
    cfg.concentration = std::move(cc);
  } else {
    throw InvalidInput("unknown preset '" + name + "' (expected paper-fig1, paper-fig2, concentration or smoke)");
  }
  return cfg;
}

// ----------------------------------------------------------------- power ---

namespace {

// Stream tags keep the experiment kinds from sharing random streams.
constexpr std::uint64_t kPowerTag = 0x706f776572;
constexpr std::uint64_t kSparsityTag = 0x7370617273;
constexpr std::uint64_t kConcentrationTag = 0x636f6e63;

template <class Body>
void for_each_index(int count, Execution exec, Body&& body) {
  ExceptionCollector errors;
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count()) if (exec == Execution::parallel)
  for (int i = 0; i < count; ++i) errors.capture([&] { body(i); });
  errors.rethrow();
}

double max_abs_combination(const std::vector<double>& a, double wa, const std::vector<double>& b, double wb) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(wa * a[i] + wb * b[i]));
  return best;
}

std::vector<double> standard_normal(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(static_cast<std::size_t>(n));
  for (double& v : z) v = normal(rng);
  return z;
}

}  // namespace

PowerResult power_curve(const PowerConfig& cfg, std::uint64_t seed, Execution exec) {
  if (cfg.trials < 1) throw InvalidInput("power curve needs at least one trial");
  PowerResult result;
  const auto n_mu = static_cast<int>(cfg.mu_grid.size());

  for (std::size_t fi = 0; fi < cfg.families.size(); ++fi) {
    const FamilyPlan& plan = cfg.families[fi];
    for (std::size_t gi = 0; gi < plan.graphs.size(); ++gi) {
      const std::uint64_t fam = fi, gr = gi;
      const Graph g = generate(plan.graphs[gi], derive_seed(seed, {kPowerTag, fam, gr, 0})).graph;
      const int n = g.num_vertices();
      const long rho = plan.rho.at(n);
      const double tau = threshold(cfg.sigma, n, cfg.delta);

      auto signal_for = [&](int s) {
        Rng rng(derive_seed(seed, {kPowerTag, fam, gr, 2, static_cast<std::uint64_t>(s)}));
        return gen_cluster_signal(g, rho, 1.0, rng, cfg.shape);
      };
      try {
        signal_for(0);
      } catch (const InfeasibleSignal& e) {
        for (double mu : cfg.mu_grid) {
          PowerCell cell;
          cell.family = plan.name;
          cell.graph = static_cast<int>(gi);
          cell.n = n;
          cell.rho = rho;
          cell.mu = mu;
          cell.tau = tau;
          cell.status = std::string("infeasible: ") + e.what();
          result.cells.push_back(cell);
        }
        continue;
      }

      std::shared_ptr<const WaveletBasis> fixed;
      if (cfg.tree == TreeKind::bfs) fixed = FixedTree::of(bfs_spanning_tree(g, 0)).basis;
      auto basis_for = [&](std::uint64_t stream) {
        if (fixed) return fixed;
        Rng rng(derive_seed(seed, {kPowerTag, fam, gr, stream}));
        return std::make_shared<const WaveletBasis>(build_basis(sample_ust(g, rng)));
      };
      auto base_row = [&](const char* kind) {
        PowerRow r;
        r.family = plan.name;
        r.graph = static_cast<int>(gi);
        r.n = n;
        r.rho = rho;
        r.kind = kind;
        r.tau = tau;
        return r;
      };

      std::vector<PowerRow> nulls(static_cast<std::size_t>(std::max(cfg.null_trials, 0)));
      for_each_index(cfg.null_trials, exec, [&](int t) {
        const std::uint64_t tt = static_cast<std::uint64_t>(t);
        auto basis = basis_for(derive_seed(4, {tt}));
        Rng noise(derive_seed(seed, {kPowerTag, fam, gr, 5, tt}));
        auto bz = apply_basis(*basis, standard_normal(n, noise));
        PowerRow r = base_row("null");
        r.trial = t;
        r.signal = -1;
        r.statistic = cfg.sigma * max_abs_combination(bz, 1.0, bz, 0.0);
        r.reject = r.statistic > tau;
        nulls[t] = r;
      });

      std::vector<PowerRow> alts(static_cast<std::size_t>(cfg.trials) * n_mu);
      for_each_index(cfg.trials, exec, [&](int t) {
        const std::uint64_t tt = static_cast<std::uint64_t>(t);
        const int s = t / cfg.noise_reps;
        auto basis = basis_for(derive_seed(1, {tt}));
        const Signal u = signal_for(s);
        Rng noise(derive_seed(seed, {kPowerTag, fam, gr, 3, tt}));
        auto bu = apply_basis(*basis, u.values);
        auto bz = apply_basis(*basis, standard_normal(n, noise));
        for (int mi = 0; mi < n_mu; ++mi) {
          PowerRow r = base_row("alt");
          r.mu = cfg.mu_grid[mi];
          r.trial = t;
          r.signal = s;
          r.statistic = max_abs_combination(bu, r.mu, bz, cfg.sigma);
          r.reject = r.statistic > tau;
          r.truth = r.mu > 0.0;
          alts[static_cast<std::size_t>(mi) * cfg.trials + t] = r;
        }
      });

      std::vector<PowerRow> rows;
      rows.reserve(nulls.size() + alts.size());
      rows.insert(rows.end(), nulls.begin(), nulls.end());
      rows.insert(rows.end(), alts.begin(), alts.end());
      for (auto& c : aggregate_power(rows)) result.cells.push_back(std::move(c));
      result.rows.insert(result.rows.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
    }
  }
  return result;
}

std::vector<PowerCell> aggregate_power(const std::vector<PowerRow>& rows) {
  struct Acc {
    PowerCell cell;
    long rejects = 0;
    std::map<int, std::pair<long, long>> per_signal;  // signal -> (misses, trials)
  };
  struct GraphAcc {
    long null_rejects = 0;
    long null_trials = 0;
    std::vector<Acc> cells;
  };
  std::vector<std::pair<std::pair<std::string, int>, GraphAcc>> graphs;
  auto graph_acc = [&](const PowerRow& r) -> GraphAcc& {
    for (auto& [key, acc] : graphs)
      if (key.first == r.family && key.second == r.graph) return acc;
    graphs.push_back({{r.family, r.graph}, {}});
    return graphs.back().second;
  };

  for (const PowerRow& r : rows) {
    GraphAcc& ga = graph_acc(r);
    if (r.kind == "null") {
      ++ga.null_trials;
      ga.null_rejects += r.reject;
      continue;
    }
    auto it = std::find_if(ga.cells.begin(), ga.cells.end(), [&](const Acc& a) { return a.cell.mu == r.mu; });
    if (it == ga.cells.end()) {
      Acc a;
      a.cell.family = r.family;
      a.cell.graph = r.graph;
      a.cell.n = r.n;
      a.cell.rho = r.rho;
      a.cell.mu = r.mu;
      a.cell.tau = r.tau;
      ga.cells.push_back(a);
      it = ga.cells.end() - 1;
    }
    ++it->cell.trials;
    it->rejects += r.reject;
    auto& [misses, count] = it->per_signal[r.signal];
    misses += !r.reject;
    ++count;
  }

  std::vector<PowerCell> out;
  for (auto& [key, ga] : graphs) {
    const double type1 = ga.null_trials > 0 ? static_cast<double>(ga.null_rejects) / ga.null_trials : 0.0;
    for (Acc& a : ga.cells) {
      PowerCell c = a.cell;
      c.type1 = type1;
      c.power = c.trials > 0 ? static_cast<double>(a.rejects) / c.trials : 0.0;
      c.risk = type1 + (1.0 - c.power);
      double worst = 0.0;
      for (const auto& [s, mc] : a.per_signal) worst = std::max(worst, static_cast<double>(mc.first) / mc.second);
      c.risk_sup = type1 + worst;
      out.push_back(std::move(c));
    }
  }
  return out;
}

int isotonic_violations(const std::vector<PowerCell>& curve, double sigmas) {
  int violations = 0;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const PowerCell& a = curve[i];
    const PowerCell& b = curve[i + 1];
    const double drop = a.power - b.power;
    if (drop <= 0.0) continue;
    const double pooled = (a.power * a.trials + b.power * b.trials) / std::max(1, a.trials + b.trials);
    const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / std::max(1, a.trials) + 1.0 / std::max(1, b.trials)));
    if (drop > sigmas * se) ++violations;
  }
  return violations;
}

std::optional<double> mu_at_power(const std::vector<PowerCell>& curve, double level) {
  double running = -1.0;
  double prev_mu = 0.0, prev_power = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    running = std::max(running, curve[i].power);
    if (running >= level) {
      if (i == 0 || running == prev_power) return curve[i].mu;
      const double frac = (level - prev_power) / (running - prev_power);
      return prev_mu + frac * (curve[i].mu - prev_mu);
    }
    prev_mu = curve[i].mu;
    prev_power = running;
  }
  return std::nullopt;
}

// -------------------------------------------------------------- sparsity ---

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidInput("fit needs paired samples");
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) throw FitUndefined("fit needs at least two points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 1e-12 * std::max(1.0, mx * mx)) throw FitUndefined("all x values are equal; slope and R² are undefined");
  LinearFit fit;
  fit.points = static_cast<int>(x.size());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_res = syy - fit.slope * sxy;
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

SparsityResult sparsity_experiment(const SparsityConfig& cfg, std::uint64_t seed, Execution exec) {
  if (cfg.signals < 2) throw InvalidInput("sparsity experiment needs at least 2 signals per graph");
  SparsityResult result;
  for (std::size_t fi = 0; fi < cfg.families.size(); ++fi) {
    const FamilyPlan& plan = cfg.families[fi];
    std::vector<double> xs, ys;
    for (std::size_t gi = 0; gi < plan.graphs.size(); ++gi) {
      const std::uint64_t fam = fi, gr = gi;
      const Graph g = generate(plan.graphs[gi], derive_seed(seed, {kSparsityTag, fam, gr, 0})).graph;
      const int n = g.num_vertices();
      long lo = plan.rho_min.at(n), hi = plan.rho_max.at(n);
      if (lo > hi) std::swap(lo, hi);

      std::vector<std::optional<SparsityPoint>> points(static_cast<std::size_t>(cfg.signals));
      for_each_index(cfg.signals, exec, [&](int s) {
        Rng rng(derive_seed(seed, {kSparsityTag, fam, gr, 1, static_cast<std::uint64_t>(s)}));
        const long rho = std::uniform_int_distribution<long>(lo, hi)(rng);
        const SpanningTree t = sample_ust(g, rng);
        Signal x;
        try {
          x = gen_cluster_signal(g, rho, 1.0, rng, cfg.shape);
        } catch (const InfeasibleSignal&) {
          return;
        }
        const WaveletBasis b = build_basis(t);
        SparsityPoint p;
        p.family = plan.name;
        p.graph = static_cast<int>(gi);
        p.n = n;
        p.signal = s;
        p.rho_target = rho;
        p.cut = cut_size(g, x.values);
        p.tree_cut = tree_cut_size(t, x.values);
        p.tree_degree = t.max_degree();
        p.bound = p.cut * activation_bound(p.tree_degree, n);
        p.sparsity = basis_sparsity(b, x.values);
        p.within_bound = p.sparsity <= p.bound + 1;
        points[s] = p;
      });
      int skipped = 0;
      for (auto& p : points) {
        if (!p) {
          ++skipped;
          continue;
        }
        xs.push_back(static_cast<double>(p->bound));
        ys.push_back(static_cast<double>(p->sparsity));
        result.points.push_back(std::move(*p));
      }
      if (skipped > 0) {
        result.infeasible.push_back(plan.name + "/" + std::to_string(gi) + ": " + std::to_string(skipped) +
                                    " signals had rho below every vertex degree");
      }
    }
    FamilyFit ff;
    ff.family = plan.name;
    try {
      ff.fit = fit_line(xs, ys);
    } catch (const FitUndefined& e) {
      ff.status = std::string("fit undefined: ") + e.what();
    }
    result.fits.push_back(ff);
  }
  return result;
}

// --------------------------------------------------------- concentration ---

std::vector<ConcentrationResult> concentration_experiment(const ConcentrationConfig& cfg, std::uint64_t seed) {
  std::vector<ConcentrationResult> out;
  for (std::size_t gi = 0; gi < cfg.graphs.size(); ++gi) {
    const GraphSpec& spec = cfg.graphs[gi];
    const std::uint64_t gr = gi;
    const Graph g = generate(spec, derive_seed(seed, {kConcentrationTag, gr, 0})).graph;

    std::vector<Edge> pool(g.edges().begin(), g.edges().end());
    const auto take = static_cast<std::size_t>(std::clamp(cfg.subset_size, 0, g.num_edges()));
    Rng rng(derive_seed(seed, {kConcentrationTag, gr, 1}));
    for (std::size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(take);
    std::sort(pool.begin(), pool.end());

    ConcentrationResult r;
    r.graph = to_string(spec.family);
    r.n = g.num_vertices();
    r.rows = ust_concentration_check(g, pool, cfg.samples, cfg.slacks, derive_seed(seed, {kConcentrationTag, gr, 2}));
    r.subset = std::move(pool);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace stw
