#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stw/graph.hpp"

namespace stw {

/// Combinatorial Laplacian ∇ᵀ∇ = D − A as a dense matrix.
Eigen::MatrixXd laplacian(const Graph& g);

/// Moore-Penrose pseudoinverse of a connected graph's Laplacian via a
/// symmetric eigendecomposition. Eigenvalues below 1e-9·λ_max count as zero;
/// more than one zero eigenvalue throws PreconditionError.
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& laplacian);

/// Per-edge effective resistances of a connected graph, with the cached
/// pseudoinverse for arbitrary vertex-pair queries.
class ResistanceProfile {
 public:
  ResistanceProfile(std::vector<Edge> edges, Eigen::MatrixXd pinv, std::vector<double> resistances);

  int num_vertices() const { return static_cast<int>(pinv_.rows()); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const double> edge_resistances() const { return r_; }
  const Eigen::MatrixXd& pinv() const { return pinv_; }

  /// Σ_e r_e; equals n − 1 on a connected graph.
  double total() const;
  double max_resistance() const;

 private:
  std::vector<Edge> edges_;
  Eigen::MatrixXd pinv_;
  std::vector<double> r_;
};

/// (δ_v − δ_w)ᵀ Δ† (δ_v − δ_w). Throws InvalidInput when v == w.
double effective_resistance(const ResistanceProfile& profile, Vertex v, Vertex w);

/// Throws PreconditionError on a disconnected graph.
ResistanceProfile all_edge_resistances(const Graph& g);

/// Σ r_e over edges whose endpoints carry different values.
double cut_resistance(const ResistanceProfile& profile, std::span<const double> x);

struct CommuteEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int trials = 0;
};

/// Hard cap on steps per hitting-time walk.
inline constexpr long kMaxWalkSteps = 100'000'000;

/// Monte Carlo (H(v,w) + H(w,v)) / 2m from simulated round trips; trial i
/// uses the stream derive_seed(seed, {i}). OpenMP-parallel over trials.
CommuteEstimate estimate_commute_resistance(const Graph& g, Vertex v, Vertex w, int trials, std::uint64_t seed);
/// Serial reference; identical output.
CommuteEstimate estimate_commute_resistance_serial(const Graph& g, Vertex v, Vertex w, int trials,
                                                   std::uint64_t seed);

}  // namespace stw
