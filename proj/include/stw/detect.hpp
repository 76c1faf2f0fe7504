#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "stw/graph.hpp"
#include "stw/random.hpp"
#include "stw/tree.hpp"
#include "stw/wavelet.hpp"

namespace stw {

/// Gaussian noise y = x + sigma z with a seed for the trial streams.
struct NoiseModel {
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

/// sigma * sqrt(2 ln(n / delta)). Throws InvalidInput unless 0 < delta < 1,
/// n >= 1 and sigma >= 0.
double threshold(double sigma, int n, double delta);

/// The max-coefficient test at level delta for noise level sigma.
struct DetectionTest {
  double delta = 0.05;
  double tau = 0.0;

  static DetectionTest at_level(double sigma, int n, double delta) { return {delta, threshold(sigma, n, delta)}; }
};

struct Decision {
  bool reject = false;
  double statistic = 0.0;  ///< ‖By‖_∞
  int argmax = 0;          ///< element attaining the max (first on ties)
};

/// Rejects iff ‖By‖_∞ > tau.
Decision detect(const WaveletBasis& b, std::span<const double> y, double tau);

enum class SignalShape {
  indicator,  ///< c·1_S
  two_level,  ///< a on S, −b on the complement, zero mean
};

/// Piecewise-constant signal on a BFS cluster. A seed vertex is drawn
/// uniformly among vertices of degree <= rho; the cluster grows one vertex
/// at a time in BFS order (neighbors by index) and stops just before the
/// first vertex whose addition would push the cut above rho. Two-level
/// clusters never take every vertex. The result is scaled to ‖x‖₂ = mu.
/// Throws InfeasibleSignal when no vertex can seed a cluster.
Signal gen_cluster_signal(const Graph& g, long rho, double mu, Rng& rng,
                          SignalShape shape = SignalShape::indicator);

/// p = floor(min(rho / d_max, sqrt(n))), evaluated in integers.
long prior_subset_size(long rho, int max_degree, int n);

/// Worst-case prior draw: S uniform among size-p subsets, x = mu/sqrt(p)·1_S.
/// Throws InfeasibleSignal when p < 1.
Signal gen_prior_signal(const Graph& g, long rho, double mu, Rng& rng);

/// Fresh uniform spanning tree per trial.
struct UstTrees {};
/// BFS tree from a fixed root, the same for every trial.
struct BfsTree {
  Vertex root = 0;
};
/// A caller-supplied tree, with its basis.
struct FixedTree {
  std::shared_ptr<const SpanningTree> tree;
  std::shared_ptr<const WaveletBasis> basis;

  static FixedTree of(SpanningTree t);
};
using TreeSource = std::variant<UstTrees, BfsTree, FixedTree>;

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t tree_seed = 0;   ///< stream used for the UST draw (unused for fixed trees)
  std::uint64_t noise_seed = 0;  ///< stream used for the noise draw
  double statistic = 0.0;
  int argmax = 0;
  bool reject = false;
  bool signal_present = false;
  double tau = 0.0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// One trial: draw (or reuse) the tree, build its basis, draw
/// y = x + sigma·z, test at threshold(sigma, n, delta). `x` empty means the
/// null. Streams derive from (noise.seed, trial) so a record replays exactly.
TrialRecord run_trial(const Graph& g, const TreeSource& source, std::span<const double> x,
                      const NoiseModel& noise, double delta, std::uint64_t trial);

/// Trials 0..count-1 of run_trial, OpenMP-parallel, results in trial order.
std::vector<TrialRecord> run_trials(const Graph& g, const TreeSource& source, std::span<const double> x,
                                    const NoiseModel& noise, double delta, int count);
/// Serial reference for run_trials; identical output.
std::vector<TrialRecord> run_trials_serial(const Graph& g, const TreeSource& source, std::span<const double> x,
                                           const NoiseModel& noise, double delta, int count);

/// Fraction of rejecting records.
double rejection_rate(std::span<const TrialRecord> records);

/// One-sided 3-sigma binomial slack for a rate p estimated from `trials` draws.
double binomial_slack(double p, int trials, double sigmas = 3.0);

enum class SnrMode { fixed_tree, ust };

/// sqrt(2 rho ceil(log2 d) ceil(log2 n)) (sqrt(ln(1/delta)) + sqrt(ln(n/delta))),
/// with the log factors taken from activation_bound().
double fixed_tree_snr(long rho, int d, int n, double delta);

/// sqrt(r_max log2 d) log2 n: the scale in the UST guarantee, constants unknown.
double ust_snr_scale(double r_max, int d, int n);

/// Dispatches to one of the two above; `r_max` is ignored for fixed_tree and
/// `rho`/`delta` for ust.
double snr_condition(long rho, int d, int n, double r_max, SnrMode mode, double delta = 0.05);

/// (e^s / (1+s)^(1+s))^r_B: UST upper-tail bound at slack s.
double ust_tail_bound(double slack, double r_b);

struct ConcentrationRow {
  double slack = 0.0;
  double r_b = 0.0;             ///< Σ_{e∈B} r_e
  double threshold = 0.0;       ///< (1 + slack) r_B
  double empirical_tail = 0.0;  ///< fraction of draws with |T ∩ B| >= threshold
  double bound = 0.0;
  double standard_error = 0.0;  ///< binomial SE at the bound
  bool pass = false;            ///< empirical <= bound + 3 SE
};

/// Monte Carlo check of the UST tail bound for a fixed edge subset B.
/// Throws InvalidInput if B contains a non-edge.
std::vector<ConcentrationRow> ust_concentration_check(const Graph& g, std::span<const Edge> subset, int samples,
                                                      std::span<const double> slacks, std::uint64_t seed);

}  // namespace stw
