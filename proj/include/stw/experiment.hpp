#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stw/detect.hpp"
#include "stw/graph.hpp"

namespace stw {

enum class GraphFamily { torus, complete, knn, epsilon };

std::string to_string(GraphFamily f);
GraphFamily parse_family(const std::string& name);

/// Parameters for one generated graph. Only the fields of the chosen family
/// are read.
struct GraphSpec {
  GraphFamily family = GraphFamily::torus;
  int side = 4;       // torus
  int dims = 2;       // torus
  int n = 16;         // complete, knn, epsilon
  int k = 4;          // knn
  double eps = 0.3;   // epsilon
  int dim = 2;        // knn, epsilon point dimension

  int vertex_count() const;
};

/// Disconnected geometric draws are redrawn from the next derived stream,
/// up to this many attempts, before PreconditionError.
inline constexpr int kMaxGraphAttempts = 100;

/// Generates the graph for `spec`. Random families draw from
/// derive_seed(seed, {attempt}); with `require_connected` set, disconnected
/// draws are retried.
GeometricGraph generate(const GraphSpec& spec, std::uint64_t seed, bool require_connected = true);

/// rho(n) = max(1, round(scale * n^exponent)).
struct RhoRule {
  double scale = 1.0;
  double exponent = 0.0;

  long at(int n) const;
};

/// A named group of graphs sharing a rho rule, e.g. "torus" at three sizes.
struct FamilyPlan {
  std::string name;
  std::vector<GraphSpec> graphs;
  RhoRule rho;          // power curves
  RhoRule rho_min;      // sparsity scatter: rho drawn in [rho_min(n), rho_max(n)]
  RhoRule rho_max;
};

enum class TreeKind { ust, bfs };

struct PowerConfig {
  std::vector<FamilyPlan> families;
  std::vector<double> mu_grid;
  int trials = 200;        ///< alternative trials per (graph, mu)
  int null_trials = 1000;  ///< null trials per graph
  int noise_reps = 1;      ///< consecutive trials sharing one signal
  double delta = 0.05;
  double sigma = 1.0;
  TreeKind tree = TreeKind::ust;
  SignalShape shape = SignalShape::indicator;
};

struct SparsityConfig {
  std::vector<FamilyPlan> families;
  int signals = 100;  ///< per graph
  SignalShape shape = SignalShape::indicator;
};

struct ConcentrationConfig {
  std::vector<GraphSpec> graphs;
  int subset_size = 20;
  int samples = 20000;
  std::vector<double> slacks{0.25, 0.5, 1.0, 2.0};
};

/// Everything an `experiment` run needs; absent sections are skipped.
struct ExperimentConfig {
  std::string name = "custom";
  std::uint64_t seed = 1;
  std::optional<SparsityConfig> sparsity;
  std::optional<PowerConfig> power;
  std::optional<ConcentrationConfig> concentration;
};

/// Parses the JSON config layout documented in docs/experiment-config.md.
/// Throws InvalidInput on unknown keys' values or malformed entries.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Named presets: "paper-fig1", "paper-fig2", "concentration", "smoke".
ExperimentConfig preset(const std::string& name, std::uint64_t seed);

enum class Execution { serial, parallel };

// ---------------------------------------------------------------- power ---

struct PowerRow {
  std::string family;
  int graph = 0;
  int n = 0;
  long rho = 0;
  std::string kind;  ///< "null" or "alt"
  double mu = 0.0;
  int trial = 0;
  int signal = 0;
  double statistic = 0.0;
  double tau = 0.0;
  bool reject = false;
  bool truth = false;  ///< signal present with mu > 0
};

struct PowerCell {
  std::string family;
  int graph = 0;
  int n = 0;
  long rho = 0;
  double mu = 0.0;
  double tau = 0.0;
  int trials = 0;
  double power = 0.0;        ///< rejection rate over alternative trials
  double type1 = 0.0;        ///< rejection rate over the graph's null trials
  double risk = 0.0;         ///< type1 + (1 - power), averaged over sampled signals
  double risk_sup = 0.0;     ///< type1 + worst per-signal miss rate; a lower bound on the class sup
  std::string status = "ok"; ///< "ok" or "infeasible: ..."
};

struct PowerResult {
  std::vector<PowerRow> rows;
  std::vector<PowerCell> cells;
};

/// Power curves over a mu grid. For a given trial index the tree, signal
/// shape and noise are shared across the whole mu grid, so curves are
/// seed-coupled in mu. Infeasible graphs are recorded, not fatal.
PowerResult power_curve(const PowerConfig& cfg, std::uint64_t seed, Execution exec = Execution::parallel);

/// Recomputes cell aggregates from raw rows (same grouping as power_curve).
std::vector<PowerCell> aggregate_power(const std::vector<PowerRow>& rows);

/// Number of adjacent mu pairs where power drops by more than
/// `sigmas` pooled binomial standard errors.
int isotonic_violations(const std::vector<PowerCell>& curve, double sigmas = 2.0);

/// Smallest mu at which the isotonic (running-max) power curve reaches
/// `level`, linearly interpolated; nullopt if never reached.
std::optional<double> mu_at_power(const std::vector<PowerCell>& curve, double level = 0.5);

// ------------------------------------------------------------- sparsity ---

struct SparsityPoint {
  std::string family;
  int graph = 0;
  int n = 0;
  int signal = 0;
  long rho_target = 0;
  long cut = 0;          ///< ‖∇x‖₀ in the graph
  long tree_cut = 0;     ///< ‖∇_T x‖₀
  int tree_degree = 0;   ///< max degree of the tree
  long bound = 0;        ///< cut * ceil(log2 d) * ceil(log2 n)
  long sparsity = 0;     ///< ‖Bx‖₀
  bool within_bound = false;  ///< sparsity <= bound + 1
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Ordinary least squares y = a + b x. Throws FitUndefined with fewer than
/// two points or no spread in x.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct FamilyFit {
  std::string family;
  LinearFit fit;
  std::string status = "ok";
};

struct SparsityResult {
  std::vector<SparsityPoint> points;
  std::vector<FamilyFit> fits;
  std::vector<std::string> infeasible;  ///< "family/graph: reason"
};

SparsityResult sparsity_experiment(const SparsityConfig& cfg, std::uint64_t seed,
                                   Execution exec = Execution::parallel);

// -------------------------------------------------------- concentration ---

struct ConcentrationResult {
  std::string graph;
  int n = 0;
  std::vector<Edge> subset;
  std::vector<ConcentrationRow> rows;
};

std::vector<ConcentrationResult> concentration_experiment(const ConcentrationConfig& cfg, std::uint64_t seed);

}  // namespace stw
