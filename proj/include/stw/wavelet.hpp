#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stw/graph.hpp"
#include "stw/tree.hpp"

namespace stw {

/// Coefficients below this magnitude count as zero in sparsity measurements.
inline constexpr double kCoefficientTolerance = 1e-9;

struct SparseVector {
  std::vector<Vertex> vertices;  // sorted
  std::vector<double> values;
};

/// Complete orthonormal spanning-tree wavelet basis.
///
/// Element 0 is the constant 1/sqrt(n). Every other element is a two-group
/// Haar-style vector, constant and positive on one vertex group, constant
/// and negative on another, zero elsewhere, with zero sum and unit norm.
/// Elements are stored CSR-style with sorted supports. `level(i)` is the
/// recursion level of the subtree that produced element i (0 for the
/// constant) and `subtree(i)` numbers those subtrees in depth-first order.
class WaveletBasis {
 public:
  int size() const { return static_cast<int>(level_.size()); }
  int dimension() const { return n_; }

  std::span<const Vertex> support(int i) const {
    return {vertices_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
  }
  std::span<const double> values(int i) const {
    return {values_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
  }
  int level(int i) const { return level_[i]; }
  int subtree(int i) const { return subtree_[i]; }

  /// Fingerprint of the spanning tree this basis was built from.
  std::uint64_t tree_fingerprint() const { return tree_fingerprint_; }

  /// Total stored nonzeros.
  std::size_t nonzeros() const { return values_.size(); }

  /// Appends an element; used by the builder.
  void append(const SparseVector& element, int level, int subtree);

 private:
  friend WaveletBasis build_basis(const SpanningTree& t);

  int n_ = 0;
  std::uint64_t tree_fingerprint_ = 0;
  std::vector<int> offsets_{0};
  std::vector<Vertex> vertices_;
  std::vector<double> values_;
  std::vector<int> level_;
  std::vector<int> subtree_;
};

/// The two-group element sqrt(|C1||C2|/(|C1|+|C2|)) (1_{C1}/|C1| - 1_{C2}/|C2|).
SparseVector two_group_element(std::span<const Vertex> c1, std::span<const Vertex> c2);

/// FormWavelets: Haar system over an ordered chain of disjoint components.
/// The list is halved recursively (first ceil(p/2) components against the
/// rest) and one element emitted per split, depth-first, left before right.
/// Returns p-1 elements; none when fewer than two components are given.
/// Throws InvalidInput on an empty component.
std::vector<SparseVector> form_wavelets(std::span<const std::vector<Vertex>> components);

/// Recursive construction: FindBalance splits the current subtree at a
/// balancing vertex, the balancer joins the smallest component (ties to the
/// earliest), components are ordered by smallest vertex, FormWavelets
/// contributes their Haar elements, and each component with more than one
/// vertex is processed the same way. Two-vertex subtrees contribute the
/// element (δ_a − δ_b)/sqrt(2) directly.
WaveletBasis build_basis(const SpanningTree& t);

/// Coefficients <b_i, y>. OpenMP-parallel over elements.
std::vector<double> apply_basis(const WaveletBasis& b, std::span<const double> y);
/// Serial reference for apply_basis; identical output.
std::vector<double> apply_basis_serial(const WaveletBasis& b, std::span<const double> y);

/// Adjoint: sum_i coeffs_i b_i.
std::vector<double> synthesize(const WaveletBasis& b, std::span<const double> coeffs);

/// Number of coefficients with magnitude above kCoefficientTolerance.
long basis_sparsity(const WaveletBasis& b, std::span<const double> x);

/// Per-tree-edge activation counts, parallel to t.edges().
///
/// An element activates tree edge e when removing e from the tree splits the
/// element's support into two nonempty parts, i.e. e lies on the smallest
/// subtree spanning the support. This is the notion under which <b, x> != 0
/// forces some activated edge into supp(∇_T x), and it obeys
/// activation_bound(). Throws InvalidInput if b was not built from t.
std::vector<int> edge_activations(const WaveletBasis& b, const SpanningTree& t);

/// Per-tree-edge count of elements whose tree gradient is nonzero on the
/// edge. Unlike edge_activations this also counts edges leaving an element's
/// support, so it is not bounded by activation_bound(); kept for diagnostics.
std::vector<int> gradient_activations(const WaveletBasis& b, const SpanningTree& t);

/// ceil(log2(x)) for x >= 1.
int ceil_log2(long x);

/// ceil(log2 d) * ceil(log2 n) with d and n floored at 2, so that the single
/// edge of a two-vertex tree keeps its one activation.
int activation_bound(int max_degree, int n);

Eigen::MatrixXd to_dense(const WaveletBasis& b);

/// max |B Bᵀ − I| over all entries.
double orthonormality_residual(const WaveletBasis& b);

}  // namespace stw
