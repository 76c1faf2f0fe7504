#include "stw/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "stw/errors.hpp"
#include "stw/parallel.hpp"
#include "stw/resistance.hpp"

namespace stw {

double threshold(double sigma, int n, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("level delta must lie in (0,1)");
  if (n < 1) throw InvalidInput("threshold needs n >= 1");
  if (!(sigma >= 0.0)) throw InvalidInput("sigma must be non-negative");
  return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n) / delta));
}

Decision detect(const WaveletBasis& b, std::span<const double> y, double tau) {
  auto coeffs = apply_basis(b, y);
  Decision d;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    double a = std::abs(coeffs[i]);
    if (a > d.statistic) {
      d.statistic = a;
      d.argmax = static_cast<int>(i);
    }
  }
  d.reject = d.statistic > tau;
  return d;
}

Signal gen_cluster_signal(const Graph& g, long rho, double mu, Rng& rng, SignalShape shape) {
  if (rho < 0) throw InvalidInput("cut budget rho must be non-negative");
  if (!(mu > 0.0)) throw InvalidInput("signal energy mu must be positive");
  const int n = g.num_vertices();
  if (shape == SignalShape::two_level && n < 2) throw InfeasibleSignal("two-level signal needs two vertices");

  std::vector<Vertex> seeds;
  for (Vertex v = 0; v < n; ++v)
    if (g.degree(v) <= rho) seeds.push_back(v);
  if (seeds.empty()) {
    throw InfeasibleSignal("no vertex has degree <= rho = " + std::to_string(rho) + "; minimum degree is " +
                           std::to_string(g.min_degree()));
  }
  std::uniform_int_distribution<std::size_t> pick(0, seeds.size() - 1);
  const Vertex seed = seeds[pick(rng)];

  const std::size_t cap = shape == SignalShape::two_level ? static_cast<std::size_t>(n - 1) : static_cast<std::size_t>(n);
  std::vector<char> inside(static_cast<std::size_t>(n), 0), queued(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> frontier{seed};
  queued[seed] = 1;
  long cut = 0;
  std::size_t members = 0;
  for (std::size_t head = 0; head < frontier.size() && members < cap; ++head) {
    const Vertex u = frontier[head];
    long in_nbrs = 0;
    for (Vertex w : g.neighbors(u)) in_nbrs += inside[w];
    const long next = cut + g.degree(u) - 2 * in_nbrs;
    if (next > rho) break;
    inside[u] = 1;
    ++members;
    cut = next;
    for (Vertex w : g.neighbors(u)) {
      if (!queued[w]) {
        queued[w] = 1;
        frontier.push_back(w);
      }
    }
  }

  Signal x;
  x.values.assign(static_cast<std::size_t>(n), 0.0);
  x.target_cut = rho;
  x.target_energy = mu;
  const double k = static_cast<double>(members);
  if (shape == SignalShape::indicator) {
    const double c = mu / std::sqrt(k);
    for (Vertex v = 0; v < n; ++v)
      if (inside[v]) x.values[v] = c;
  } else {
    const double rest = n - k;
    const double scale = mu / std::sqrt(k * rest * n);
    for (Vertex v = 0; v < n; ++v) x.values[v] = inside[v] ? rest * scale : -k * scale;
  }
  if (cut_size(g, x.values) > rho) throw std::logic_error("cluster signal exceeds its cut budget");
  return x;
}

namespace {

long isqrt(long n) {
  long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

long prior_subset_size(long rho, int max_degree, int n) {
  if (rho < 0 || n < 0) throw InvalidInput("rho and n must be non-negative");
  const long root = isqrt(n);
  if (max_degree <= 0) return root;
  return std::min(rho / max_degree, root);
}

Signal gen_prior_signal(const Graph& g, long rho, double mu, Rng& rng) {
  if (!(mu > 0.0)) throw InvalidInput("signal energy mu must be positive");
  const int n = g.num_vertices();
  const long p = prior_subset_size(rho, g.max_degree(), n);
  if (p < 1) {
    throw InfeasibleSignal("prior subset size is zero (rho = " + std::to_string(rho) +
                           " < d_max = " + std::to_string(g.max_degree()) + ")");
  }
  std::vector<Vertex> pool(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) pool[v] = v;
  for (long i = 0; i < p; ++i) {
    std::uniform_int_distribution<long> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  Signal x;
  x.values.assign(static_cast<std::size_t>(n), 0.0);
  const double c = mu / std::sqrt(static_cast<double>(p));
  for (long i = 0; i < p; ++i) x.values[pool[i]] = c;
  x.target_cut = rho;
  x.target_energy = mu;
  return x;
}

FixedTree FixedTree::of(SpanningTree t) {
  FixedTree f;
  auto tree = std::make_shared<const SpanningTree>(std::move(t));
  f.basis = std::make_shared<const WaveletBasis>(build_basis(*tree));
  f.tree = std::move(tree);
  return f;
}

namespace {

TreeSource resolve(const Graph& g, const TreeSource& source) {
  if (const auto* bfs = std::get_if<BfsTree>(&source)) return FixedTree::of(bfs_spanning_tree(g, bfs->root));
  return source;
}

}  // namespace

TrialRecord run_trial(const Graph& g, const TreeSource& source, std::span<const double> x,
                      const NoiseModel& noise, double delta, std::uint64_t trial) {
  const int n = g.num_vertices();
  if (!x.empty() && x.size() != static_cast<std::size_t>(n)) throw InvalidInput("signal length mismatch");

  TrialRecord rec;
  rec.trial = trial;
  rec.tree_seed = derive_seed(noise.seed, {trial, 1});
  rec.noise_seed = derive_seed(noise.seed, {trial, 2});
  rec.signal_present = !x.empty();
  rec.tau = threshold(noise.sigma, n, delta);

  std::shared_ptr<const WaveletBasis> basis;
  if (std::holds_alternative<UstTrees>(source)) {
    Rng tree_rng(rec.tree_seed);
    basis = std::make_shared<const WaveletBasis>(build_basis(sample_ust(g, tree_rng)));
  } else if (const auto* bfs = std::get_if<BfsTree>(&source)) {
    basis = std::make_shared<const WaveletBasis>(build_basis(bfs_spanning_tree(g, bfs->root)));
  } else {
    basis = std::get<FixedTree>(source).basis;
    if (!basis || basis->dimension() != n) throw InvalidInput("fixed tree does not match the graph");
  }

  Rng noise_rng(rec.noise_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) y[v] = (x.empty() ? 0.0 : x[v]) + noise.sigma * normal(noise_rng);

  Decision d = detect(*basis, y, rec.tau);
  rec.statistic = d.statistic;
  rec.argmax = d.argmax;
  rec.reject = d.reject;
  return rec;
}

std::vector<TrialRecord> run_trials_serial(const Graph& g, const TreeSource& source, std::span<const double> x,
                                           const NoiseModel& noise, double delta, int count) {
  if (count < 0) throw InvalidInput("trial count must be non-negative");
  const TreeSource resolved = resolve(g, source);
  std::vector<TrialRecord> out(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) out[t] = run_trial(g, resolved, x, noise, delta, static_cast<std::uint64_t>(t));
  return out;
}

std::vector<TrialRecord> run_trials(const Graph& g, const TreeSource& source, std::span<const double> x,
                                    const NoiseModel& noise, double delta, int count) {
  if (count < 0) throw InvalidInput("trial count must be non-negative");
  if (std::holds_alternative<UstTrees>(source)) require_connected(g, "run_trials");
  const TreeSource resolved = resolve(g, source);
  std::vector<TrialRecord> out(static_cast<std::size_t>(count));
  ExceptionCollector errors;
#pragma omp parallel for schedule(dynamic, 8) num_threads(thread_count())
  for (int t = 0; t < count; ++t)
    errors.capture([&] { out[t] = run_trial(g, resolved, x, noise, delta, static_cast<std::uint64_t>(t)); });
  errors.rethrow();
  return out;
}

double rejection_rate(std::span<const TrialRecord> records) {
  if (records.empty()) return 0.0;
  long rejects = 0;
  for (const auto& r : records) rejects += r.reject;
  return static_cast<double>(rejects) / static_cast<double>(records.size());
}

double binomial_slack(double p, int trials, double sigmas) {
  if (trials < 1) return 0.0;
  p = std::clamp(p, 0.0, 1.0);
  return sigmas * std::sqrt(p * (1.0 - p) / trials);
}

double fixed_tree_snr(long rho, int d, int n, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("level delta must lie in (0,1)");
  if (rho < 0 || d < 1 || n < 1) throw InvalidInput("rho, d and n must be positive");
  const double sparsity = 2.0 * static_cast<double>(rho) * activation_bound(d, n);
  return std::sqrt(sparsity) *
         (std::sqrt(std::log(1.0 / delta)) + std::sqrt(std::log(static_cast<double>(n) / delta)));
}

double ust_snr_scale(double r_max, int d, int n) {
  if (r_max < 0.0 || d < 1 || n < 1) throw InvalidInput("r_max, d and n must be positive");
  return std::sqrt(r_max * std::log2(static_cast<double>(d))) * std::log2(static_cast<double>(n));
}

double snr_condition(long rho, int d, int n, double r_max, SnrMode mode, double delta) {
  return mode == SnrMode::fixed_tree ? fixed_tree_snr(rho, d, n, delta) : ust_snr_scale(r_max, d, n);
}

double ust_tail_bound(double slack, double r_b) {
  if (slack < 0.0 || r_b < 0.0) throw InvalidInput("slack and r_B must be non-negative");
  return std::exp(r_b * (slack - (1.0 + slack) * std::log1p(slack)));
}

std::vector<ConcentrationRow> ust_concentration_check(const Graph& g, std::span<const Edge> subset, int samples,
                                                      std::span<const double> slacks, std::uint64_t seed) {
  if (samples < 1) throw InvalidInput("need at least one sample");
  std::vector<char> in_subset(static_cast<std::size_t>(g.num_edges()), 0);
  for (const Edge& e : subset) {
    auto id = g.find_edge(e.u, e.v);
    if (!id) {
      throw InvalidInput("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") is not in the graph");
    }
    if (in_subset[*id]) throw InvalidInput("edge subset lists an edge twice");
    in_subset[*id] = 1;
  }
  const ResistanceProfile profile = all_edge_resistances(g);
  double r_b = 0.0;
  for (std::size_t e = 0; e < in_subset.size(); ++e)
    if (in_subset[e]) r_b += profile.edge_resistances()[e];

  std::vector<int> overlap(static_cast<std::size_t>(samples));
  ExceptionCollector errors;
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int i = 0; i < samples; ++i) {
    errors.capture([&] {
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
      SpanningTree t = sample_ust(g, rng);
      int hits = 0;
      for (int id : t.parent_edge_ids()) hits += in_subset[id];
      overlap[i] = hits;
    });
  }
  errors.rethrow();

  std::vector<ConcentrationRow> rows;
  for (double s : slacks) {
    ConcentrationRow row;
    row.slack = s;
    row.r_b = r_b;
    row.threshold = (1.0 + s) * r_b;
    long exceed = 0;
    for (int h : overlap)
      if (h >= row.threshold) ++exceed;
    row.empirical_tail = static_cast<double>(exceed) / samples;
    row.bound = ust_tail_bound(s, r_b);
    row.standard_error = binomial_slack(std::min(row.bound, 1.0), samples, 1.0);
    row.pass = row.empirical_tail <= row.bound + 3.0 * row.standard_error;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace stw
