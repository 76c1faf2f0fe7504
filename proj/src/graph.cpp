#include "stw/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>
#include <utility>

#include "stw/errors.hpp"
#include "stw/parallel.hpp"

namespace stw {

Graph::Graph(int n, std::span<const Edge> edges) : n_(n) {
  if (n < 0) throw InvalidInput("vertex count must be non-negative");
  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (!contains(e.u) || !contains(e.v)) {
      std::ostringstream msg;
      msg << "edge (" << e.u << "," << e.v << ") has an endpoint outside 0.." << n - 1;
      throw InvalidInput(msg.str());
    }
    if (e.u == e.v) throw InvalidInput("self-loop at vertex " + std::to_string(e.u));
    edges_.push_back(canonical(e.u, e.v));
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw InvalidInput("duplicate edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
  }

  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  adjacency_.resize(2 * edges_.size());
  adjacency_edge_.resize(2 * edges_.size());
  // Lexicographic edge order delivers each vertex's lower neighbors first,
  // ascending, then its higher neighbors, ascending: lists come out sorted.
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (int id = 0; id < num_edges(); ++id) {
    const Edge& e = edges_[id];
    adjacency_[fill[e.u]] = e.v;
    adjacency_edge_[fill[e.u]++] = id;
    adjacency_[fill[e.v]] = e.u;
    adjacency_edge_[fill[e.v]++] = id;
  }
  for (int v = 0; v < n; ++v) max_degree_ = std::max(max_degree_, deg[v]);
}

int Graph::min_degree() const {
  int best = n_ == 0 ? 0 : degree(0);
  for (Vertex v = 1; v < n_; ++v) best = std::min(best, degree(v));
  return best;
}

std::optional<int> Graph::find_edge(Vertex a, Vertex b) const {
  if (!contains(a) || !contains(b) || a == b) return std::nullopt;
  auto nb = neighbors(a);
  auto it = std::lower_bound(nb.begin(), nb.end(), b);
  if (it == nb.end() || *it != b) return std::nullopt;
  return incident_edges(a)[static_cast<std::size_t>(it - nb.begin())];
}

namespace {

void check_length(const Graph& g, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(g.num_vertices())) {
    throw InvalidInput("signal length " + std::to_string(x.size()) + " does not match " +
                       std::to_string(g.num_vertices()) + " vertices");
  }
}

}  // namespace

std::vector<double> incidence_apply(const Graph& g, std::span<const double> x) {
  check_length(g, x);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(g.num_edges()));
  for (const Edge& e : g.edges()) out.push_back(x[e.u] - x[e.v]);
  return out;
}

long cut_size(const Graph& g, std::span<const double> x) {
  check_length(g, x);
  long cut = 0;
  for (const Edge& e : g.edges()) {
    if (std::abs(x[e.u] - x[e.v]) > kCutTolerance) ++cut;
  }
  return cut;
}

Graph gen_torus(int side, int dims) {
  if (side < 3) throw InvalidInput("torus side must be at least 3");
  if (dims < 1) throw InvalidInput("torus dimension must be at least 1");
  long n = 1;
  for (int d = 0; d < dims; ++d) {
    n *= side;
    if (n > (1L << 28)) throw InvalidInput("torus too large");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n * dims));
  for (long v = 0; v < n; ++v) {
    long stride = 1;
    for (int d = 0; d < dims; ++d) {
      long coord = (v / stride) % side;
      long next = v + ((coord + 1) % side - coord) * stride;
      edges.push_back(canonical(static_cast<Vertex>(v), static_cast<Vertex>(next)));
      stride *= side;
    }
  }
  return Graph(static_cast<int>(n), edges);
}

Graph gen_complete(int n) {
  if (n < 2) throw InvalidInput("complete graph needs at least 2 vertices");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph(n, edges);
}

PointCloud uniform_points(int n, int dim, Rng& rng) {
  if (n < 1) throw InvalidInput("point count must be positive");
  if (dim < 1) throw InvalidInput("point dimension must be positive");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  PointCloud pc;
  pc.dim = dim;
  pc.coords.resize(static_cast<std::size_t>(n) * dim);
  for (double& c : pc.coords) c = unif(rng);
  return pc;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// k nearest of point i, ties by index, sorted ascending.
void nearest_of(const PointCloud& pc, int i, int k, std::vector<std::pair<double, Vertex>>& buf,
                std::vector<Vertex>& out) {
  const int n = pc.size();
  buf.clear();
  for (Vertex j = 0; j < n; ++j) {
    if (j != i) buf.emplace_back(squared_distance(pc.point(i), pc.point(j)), j);
  }
  std::partial_sort(buf.begin(), buf.begin() + k, buf.end());
  out.clear();
  for (int t = 0; t < k; ++t) out.push_back(buf[t].second);
}

Graph symmetric_union(int n, const std::vector<std::vector<Vertex>>& lists) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j : lists[i]) edges.push_back(canonical(i, j));
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph(n, edges);
}

void check_knn_args(const PointCloud& pc, int k) {
  if (k < 1) throw InvalidInput("k must be at least 1");
  if (k >= pc.size()) throw InvalidInput("k must be smaller than the number of points");
}

}  // namespace

Graph knn_graph_serial(const PointCloud& pc, int k) {
  check_knn_args(pc, k);
  const int n = pc.size();
  std::vector<std::vector<Vertex>> lists(static_cast<std::size_t>(n));
  std::vector<std::pair<double, Vertex>> buf;
  for (int i = 0; i < n; ++i) nearest_of(pc, i, k, buf, lists[i]);
  return symmetric_union(n, lists);
}

Graph knn_graph(const PointCloud& pc, int k) {
  check_knn_args(pc, k);
  const int n = pc.size();
  std::vector<std::vector<Vertex>> lists(static_cast<std::size_t>(n));
#pragma omp parallel num_threads(thread_count())
  {
    std::vector<std::pair<double, Vertex>> buf;
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) nearest_of(pc, i, k, buf, lists[i]);
  }
  return symmetric_union(n, lists);
}

Graph epsilon_graph_serial(const PointCloud& pc, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("eps must be positive");
  const int n = pc.size();
  const double eps2 = eps * eps;
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (squared_distance(pc.point(i), pc.point(j)) <= eps2) edges.push_back({i, j});
  return Graph(n, edges);
}

Graph epsilon_graph(const PointCloud& pc, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("eps must be positive");
  const int n = pc.size();
  const double eps2 = eps * eps;
  std::vector<std::vector<Edge>> rows(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count())
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (squared_distance(pc.point(i), pc.point(j)) <= eps2) rows[i].push_back({i, j});
  std::vector<Edge> edges;
  for (auto& r : rows) edges.insert(edges.end(), r.begin(), r.end());
  return Graph(n, edges);
}

GeometricGraph gen_knn(int n, int k, int dim, Rng& rng) {
  if (k < 1 || k >= n) throw InvalidInput("knn requires 1 <= k < n");
  GeometricGraph out;
  out.points = uniform_points(n, dim, rng);
  out.graph = knn_graph(out.points, k);
  return out;
}

GeometricGraph gen_epsilon(int n, double eps, int dim, Rng& rng) {
  if (!(eps > 0.0)) throw InvalidInput("eps must be positive");
  GeometricGraph out;
  out.points = uniform_points(n, dim, rng);
  out.graph = epsilon_graph(out.points, eps);
  return out;
}

std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<Vertex>> comps;
  std::queue<Vertex> q;
  for (Vertex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp;
    seen[s] = 1;
    q.push(s);
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop();
      comp.push_back(v);
      for (Vertex w : g.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

bool is_connected(const Graph& g) { return connected_components(g).size() <= 1; }

void require_connected(const Graph& g, const std::string& context) {
  auto comps = connected_components(g);
  if (comps.size() <= 1) return;
  std::ostringstream msg;
  msg << context << ": graph is disconnected (" << comps.size() << " components, sizes";
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (i == 8) {
      msg << " ...";
      break;
    }
    msg << ' ' << comps[i].size();
  }
  msg << ')';
  throw PreconditionError(msg.str());
}

}  // namespace stw
