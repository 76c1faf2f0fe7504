#include "stw/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stw/errors.hpp"
#include "stw/parallel.hpp"
#include "stw/random.hpp"

namespace stw {

Eigen::MatrixXd laplacian(const Graph& g) {
  const int n = g.num_vertices();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    lap(e.u, e.v) = -1.0;
    lap(e.v, e.u) = -1.0;
  }
  for (Vertex v = 0; v < n; ++v) lap(v, v) = g.degree(v);
  return lap;
}

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& lap) {
  const Eigen::Index n = lap.rows();
  if (lap.cols() != n) throw InvalidInput("Laplacian must be square");
  if (n == 0) return Eigen::MatrixXd(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
  if (eig.info() != Eigen::Success) throw PreconditionError("eigendecomposition failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double cutoff = 1e-9 * std::max(lambda.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd inv(n);
  int zeros = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(lambda(i)) <= cutoff) {
      inv(i) = 0.0;
      ++zeros;
    } else {
      inv(i) = 1.0 / lambda(i);
    }
  }
  if (zeros > 1) {
    throw PreconditionError("Laplacian has " + std::to_string(zeros) +
                            " zero eigenvalues; the graph is disconnected");
  }
  const Eigen::MatrixXd& q = eig.eigenvectors();
  Eigen::MatrixXd pinv = q * inv.asDiagonal() * q.transpose();
  // Symmetrize away rounding asymmetry from the triple product.
  return 0.5 * (pinv + pinv.transpose());
}

ResistanceProfile::ResistanceProfile(std::vector<Edge> edges, Eigen::MatrixXd pinv, std::vector<double> r)
    : edges_(std::move(edges)), pinv_(std::move(pinv)), r_(std::move(r)) {
  if (edges_.size() != r_.size()) throw InvalidInput("one resistance per edge required");
}

double ResistanceProfile::total() const { return std::accumulate(r_.begin(), r_.end(), 0.0); }

double ResistanceProfile::max_resistance() const {
  return r_.empty() ? 0.0 : *std::max_element(r_.begin(), r_.end());
}

double effective_resistance(const ResistanceProfile& profile, Vertex v, Vertex w) {
  const int n = profile.num_vertices();
  if (v < 0 || v >= n || w < 0 || w >= n) throw InvalidInput("vertex out of range");
  if (v == w) throw InvalidInput("effective resistance needs two distinct vertices");
  const auto& p = profile.pinv();
  return p(v, v) + p(w, w) - 2.0 * p(v, w);
}

ResistanceProfile all_edge_resistances(const Graph& g) {
  require_connected(g, "all_edge_resistances");
  Eigen::MatrixXd pinv = pseudoinverse(laplacian(g));
  auto edges = g.edges();
  std::vector<double> r(edges.size());
  const auto m = static_cast<long>(edges.size());
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (m > 4096)
  for (long i = 0; i < m; ++i) {
    const Edge& e = edges[i];
    r[i] = pinv(e.u, e.u) + pinv(e.v, e.v) - 2.0 * pinv(e.u, e.v);
  }
  return ResistanceProfile({edges.begin(), edges.end()}, std::move(pinv), std::move(r));
}

double cut_resistance(const ResistanceProfile& profile, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(profile.num_vertices())) throw InvalidInput("signal length mismatch");
  auto edges = profile.edges();
  auto r = profile.edge_resistances();
  double total = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (std::abs(x[edges[i].u] - x[edges[i].v]) > kCutTolerance) total += r[i];
  return total;
}

namespace {

long hitting_steps(const Graph& g, Vertex from, Vertex to, Rng& rng) {
  long steps = 0;
  Vertex cur = from;
  do {
    auto nb = g.neighbors(cur);
    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
    cur = nb[pick(rng)];
    if (++steps > kMaxWalkSteps) throw PreconditionError("hitting-time walk exceeded the step cap");
  } while (cur != to);
  return steps;
}

double round_trip(const Graph& g, Vertex v, Vertex w, std::uint64_t seed, int trial) {
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(trial)}));
  const long there = hitting_steps(g, v, w, rng);
  const long back = hitting_steps(g, w, v, rng);
  return static_cast<double>(there + back) / (2.0 * g.num_edges());
}

void check_commute_args(const Graph& g, Vertex v, Vertex w, int trials) {
  if (!g.contains(v) || !g.contains(w)) throw InvalidInput("vertex out of range");
  if (v == w) throw InvalidInput("commute time needs two distinct vertices");
  if (trials < 1) throw InvalidInput("need at least one trial");
  require_connected(g, "estimate_commute_resistance");
}

CommuteEstimate summarize(const std::vector<double>& samples) {
  CommuteEstimate est;
  est.trials = static_cast<int>(samples.size());
  double sum = 0.0;
  for (double s : samples) sum += s;
  est.mean = sum / est.trials;
  if (est.trials > 1) {
    double ss = 0.0;
    for (double s : samples) ss += (s - est.mean) * (s - est.mean);
    est.standard_error = std::sqrt(ss / (est.trials - 1) / est.trials);
  }
  return est;
}

}  // namespace

CommuteEstimate estimate_commute_resistance_serial(const Graph& g, Vertex v, Vertex w, int trials,
                                                   std::uint64_t seed) {
  check_commute_args(g, v, w, trials);
  std::vector<double> samples(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) samples[i] = round_trip(g, v, w, seed, i);
  return summarize(samples);
}

CommuteEstimate estimate_commute_resistance(const Graph& g, Vertex v, Vertex w, int trials, std::uint64_t seed) {
  check_commute_args(g, v, w, trials);
  std::vector<double> samples(static_cast<std::size_t>(trials));
  ExceptionCollector errors;
#pragma omp parallel for schedule(dynamic, 32) num_threads(thread_count())
  for (int i = 0; i < trials; ++i) errors.capture([&] { samples[i] = round_trip(g, v, w, seed, i); });
  errors.rethrow();
  return summarize(samples);
}

}  // namespace stw
