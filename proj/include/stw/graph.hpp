#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stw/random.hpp"

namespace stw {

using Vertex = std::int32_t;

/// Two signal values closer than this are treated as equal when counting cuts.
inline constexpr double kCutTolerance = 1e-9;

/// Unordered vertex pair stored canonically as (min, max).
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

constexpr Edge canonical(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Immutable undirected simple graph on vertices 0..n-1.
///
/// Edges are kept in canonical order ((min,max), lexicographic) which fixes
/// the row order and sign convention of the incidence operator. Adjacency is
/// stored CSR-style with neighbors sorted by index, each entry paired with
/// the id of the edge it comes from.
class Graph {
 public:
  Graph() = default;

  /// Validates and canonicalizes. Throws InvalidInput on out-of-range
  /// endpoints, self-loops and duplicate edges.
  Graph(int n, std::span<const Edge> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }

  int degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  int max_degree() const { return max_degree_; }
  int min_degree() const;

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], static_cast<std::size_t>(degree(v))};
  }
  /// Edge ids parallel to neighbors(v).
  std::span<const int> incident_edges(Vertex v) const {
    return {adjacency_edge_.data() + offsets_[v], static_cast<std::size_t>(degree(v))};
  }

  /// Id of edge {a,b}, or nullopt when absent.
  std::optional<int> find_edge(Vertex a, Vertex b) const;

  bool contains(Vertex v) const { return v >= 0 && v < n_; }

 private:
  int n_ = 0;
  int max_degree_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<Vertex> adjacency_;
  std::vector<int> adjacency_edge_;
};

inline Graph build_graph(int n, std::span<const Edge> edges) { return Graph(n, edges); }

/// Real vertex signal with optional record of the class parameters it was
/// generated for.
struct Signal {
  std::vector<double> values;
  std::optional<long> target_cut;
  std::optional<double> target_energy;

  std::size_t size() const { return values.size(); }
  operator std::span<const double>() const { return values; }
};

/// Row-major point coordinates retained by the geometric generators.
struct PointCloud {
  int dim = 0;
  std::vector<double> coords;

  int size() const { return dim == 0 ? 0 : static_cast<int>(coords.size()) / dim; }
  std::span<const double> point(int i) const {
    return {coords.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
  }
};

struct GeometricGraph {
  Graph graph;
  PointCloud points;
};

/// (∇x)_e = x_u − x_v for canonical edge e = (u,v), in canonical order.
std::vector<double> incidence_apply(const Graph& g, std::span<const double> x);

/// Number of edges whose endpoint values differ by more than kCutTolerance.
long cut_size(const Graph& g, std::span<const double> x);

Graph gen_torus(int side, int dims);
Graph gen_complete(int n);

/// Symmetric k-nearest-neighbor graph on n uniform points in [0,1]^dim.
/// Distance ties go to the smaller index.
GeometricGraph gen_knn(int n, int k, int dim, Rng& rng);

/// ε-graph on n uniform points in [0,1]^dim: edge iff ‖z_i − z_j‖₂ ≤ eps.
GeometricGraph gen_epsilon(int n, double eps, int dim, Rng& rng);

PointCloud uniform_points(int n, int dim, Rng& rng);

// Graph-from-points kernels. The default versions are OpenMP-parallel over
// query points; the _serial versions are the reference they are tested
// against and must produce identical graphs.
Graph knn_graph(const PointCloud& points, int k);
Graph knn_graph_serial(const PointCloud& points, int k);
Graph epsilon_graph(const PointCloud& points, double eps);
Graph epsilon_graph_serial(const PointCloud& points, double eps);

/// Components listed by smallest vertex; vertices within each sorted.
std::vector<std::vector<Vertex>> connected_components(const Graph& g);

bool is_connected(const Graph& g);

/// Throws PreconditionError naming the component sizes when g is disconnected.
void require_connected(const Graph& g, const std::string& context);

}  // namespace stw
