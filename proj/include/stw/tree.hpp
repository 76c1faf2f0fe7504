#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stw/graph.hpp"
#include "stw/random.hpp"

namespace stw {

/// Spanning tree of a parent graph, stored as its own canonical edge list
/// and sorted adjacency together with the parent edge ids it uses.
class SpanningTree {
 public:
  SpanningTree() = default;

  /// Throws InvalidInput unless `edges` are n-1 edges of `parent` forming a
  /// connected acyclic subgraph.
  SpanningTree(const Graph& parent, std::span<const Edge> edges);

  int num_vertices() const { return tree_.num_vertices(); }
  int num_edges() const { return tree_.num_edges(); }
  std::span<const Edge> edges() const { return tree_.edges(); }
  std::span<const Vertex> neighbors(Vertex v) const { return tree_.neighbors(v); }
  int degree(Vertex v) const { return tree_.degree(v); }
  int max_degree() const { return tree_.max_degree(); }

  /// Parent-graph id of each tree edge, parallel to edges().
  std::span<const int> parent_edge_ids() const { return parent_ids_; }

  /// The tree viewed as a graph in its own right.
  const Graph& as_graph() const { return tree_; }

  /// Order-independent digest of the edge set.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  Graph tree_;
  std::vector<int> parent_ids_;
  std::uint64_t fingerprint_ = 0;
};

/// 64-bit FNV-1a digest of a canonical edge list and vertex count.
std::uint64_t edge_list_digest(int n, std::span<const Edge> edges);

struct BalanceResult {
  Vertex vertex = -1;
  int moves = 0;              ///< steps taken by the walk
  int largest_component = 0;  ///< size of the largest component left by removing `vertex`
};

/// FindBalance over the whole tree.
BalanceResult find_balance(const SpanningTree& t);

/// FindBalance restricted to `subtree`, a vertex set inducing a connected
/// subtree of t. The walk starts at the smallest vertex of the subtree,
/// moves into the largest component (ties to the smaller neighbor) while
/// that strictly decreases the largest-component size, and returns where it
/// stops. The result leaves components of at most ceil(|subtree|/2) vertices.
BalanceResult find_balance(const SpanningTree& t, std::span<const Vertex> subtree);

namespace detail {

/// Reusable scratch for repeated FindBalance/component queries on subtrees
/// of one tree; every query costs O(|subtree|).
class SubtreeWorkspace {
 public:
  explicit SubtreeWorkspace(const SpanningTree& t);

  BalanceResult balance(std::span<const Vertex> subtree);

  /// Components of subtree \ {v}, each sorted, listed by smallest vertex.
  std::vector<std::vector<Vertex>> split_at(std::span<const Vertex> subtree, Vertex v);

 private:
  void mark(std::span<const Vertex> subtree);
  void unmark(std::span<const Vertex> subtree);

  const SpanningTree* tree_;
  std::uint32_t stamp_ = 0;
  std::vector<std::uint32_t> member_;
  std::vector<Vertex> parent_;
  std::vector<int> size_;
  std::vector<int> max_child_;
  std::vector<Vertex> max_child_vertex_;
  std::vector<Vertex> order_;
};

}  // namespace detail

/// Aldous-Broder: random walk from vertex 0 until every vertex is visited;
/// the tree is the set of first-entrance edges. Throws PreconditionError on
/// a disconnected graph.
SpanningTree sample_ust(const Graph& g, Rng& rng);

/// BFS parent edges from `root`, visiting neighbors in index order.
SpanningTree bfs_spanning_tree(const Graph& g, Vertex root);

/// Number of tree edges whose endpoint values differ (tolerance kCutTolerance).
long tree_cut_size(const SpanningTree& t, std::span<const double> x);

/// Fraction of `samples` UST draws containing each parent edge. Draw i uses
/// the stream derive_seed(seed, {i}); OpenMP-parallel over draws.
std::vector<double> ust_edge_frequencies(const Graph& g, int samples, std::uint64_t seed);
/// Serial reference for ust_edge_frequencies; identical output.
std::vector<double> ust_edge_frequencies_serial(const Graph& g, int samples, std::uint64_t seed);

}  // namespace stw
