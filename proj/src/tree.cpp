#include "stw/tree.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "stw/errors.hpp"
#include "stw/parallel.hpp"

namespace stw {

std::uint64_t edge_list_digest(int n, std::span<const Edge> edges) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint32_t word) {
    for (int b = 0; b < 4; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  feed(static_cast<std::uint32_t>(n));
  for (const Edge& e : edges) {
    feed(static_cast<std::uint32_t>(e.u));
    feed(static_cast<std::uint32_t>(e.v));
  }
  return h;
}

SpanningTree::SpanningTree(const Graph& parent, std::span<const Edge> edges)
    : tree_(parent.num_vertices(), edges) {
  const int n = parent.num_vertices();
  if (n < 1) throw InvalidInput("spanning tree needs at least one vertex");
  if (tree_.num_edges() != n - 1) {
    throw InvalidInput("spanning tree on " + std::to_string(n) + " vertices needs " + std::to_string(n - 1) +
                       " edges, got " + std::to_string(tree_.num_edges()));
  }
  parent_ids_.reserve(static_cast<std::size_t>(n - 1));
  for (const Edge& e : tree_.edges()) {
    auto id = parent.find_edge(e.u, e.v);
    if (!id) {
      throw InvalidInput("tree edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") is not an edge of the parent graph");
    }
    parent_ids_.push_back(*id);
  }
  // n-1 edges plus connectivity rules out cycles.
  if (!is_connected(tree_)) throw InvalidInput("edge set is not connected, so it is not a spanning tree");
  fingerprint_ = edge_list_digest(n, tree_.edges());
}

namespace detail {

SubtreeWorkspace::SubtreeWorkspace(const SpanningTree& t) : tree_(&t) {
  const auto n = static_cast<std::size_t>(t.num_vertices());
  member_.assign(n, 0);
  parent_.assign(n, -1);
  size_.assign(n, 0);
  max_child_.assign(n, 0);
  max_child_vertex_.assign(n, -1);
  order_.reserve(n);
}

void SubtreeWorkspace::mark(std::span<const Vertex> subtree) {
  if (++stamp_ == 0) {
    std::fill(member_.begin(), member_.end(), 0);
    stamp_ = 1;
  }
  for (Vertex v : subtree) {
    if (v < 0 || v >= tree_->num_vertices()) throw InvalidInput("subtree vertex out of range");
    member_[v] = stamp_;
  }
}

void SubtreeWorkspace::unmark(std::span<const Vertex> subtree) {
  for (Vertex v : subtree) member_[v] = 0;
}

BalanceResult SubtreeWorkspace::balance(std::span<const Vertex> subtree) {
  if (subtree.empty()) throw InvalidInput("FindBalance on an empty subtree");
  mark(subtree);
  const Vertex root = *std::min_element(subtree.begin(), subtree.end());
  const int total = static_cast<int>(subtree.size());

  // Preorder from the root, then subtree sizes bottom-up.
  order_.clear();
  parent_[root] = -1;
  order_.push_back(root);
  for (std::size_t i = 0; i < order_.size(); ++i) {
    Vertex v = order_[i];
    for (Vertex w : tree_->neighbors(v)) {
      if (member_[w] == stamp_ && w != parent_[v]) {
        parent_[w] = v;
        order_.push_back(w);
      }
    }
  }
  if (static_cast<int>(order_.size()) != total) {
    unmark(subtree);
    throw InvalidInput("vertex set does not induce a connected subtree");
  }
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    Vertex v = *it;
    size_[v] = 1;
    max_child_[v] = 0;
    max_child_vertex_[v] = -1;
    for (Vertex w : tree_->neighbors(v)) {
      if (member_[w] != stamp_ || w == parent_[v]) continue;
      size_[v] += size_[w];
      if (size_[w] > max_child_[v] || (size_[w] == max_child_[v] && w < max_child_vertex_[v])) {
        max_child_[v] = size_[w];
        max_child_vertex_[v] = w;
      }
    }
  }

  auto objective = [&](Vertex u) { return std::max(total - size_[u], max_child_[u]); };

  BalanceResult res;
  Vertex v = root;
  int moves = 0;
  for (;;) {
    const int up = parent_[v] < 0 ? 0 : total - size_[v];
    const int down = max_child_[v];
    if (up == 0 && down == 0) break;
    Vertex w;
    if (up > down) {
      w = parent_[v];
    } else if (down > up) {
      w = max_child_vertex_[v];
    } else {
      w = std::min(parent_[v], max_child_vertex_[v]);
    }
    if (objective(w) >= objective(v)) break;
    v = w;
    ++moves;
  }
  res.vertex = v;
  res.moves = moves;
  res.largest_component = objective(v);
  unmark(subtree);
  return res;
}

std::vector<std::vector<Vertex>> SubtreeWorkspace::split_at(std::span<const Vertex> subtree, Vertex v) {
  mark(subtree);
  if (v < 0 || v >= tree_->num_vertices() || member_[v] != stamp_) {
    unmark(subtree);
    throw InvalidInput("split vertex is not in the subtree");
  }
  member_[v] = 0;
  std::vector<std::vector<Vertex>> comps;
  for (Vertex s : tree_->neighbors(v)) {
    if (member_[s] != stamp_) continue;
    std::vector<Vertex> comp{s};
    member_[s] = 0;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (Vertex w : tree_->neighbors(comp[i])) {
        if (member_[w] == stamp_) {
          member_[w] = 0;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  unmark(subtree);
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

}  // namespace detail

BalanceResult find_balance(const SpanningTree& t) {
  std::vector<Vertex> all(static_cast<std::size_t>(t.num_vertices()));
  for (Vertex v = 0; v < t.num_vertices(); ++v) all[v] = v;
  return find_balance(t, all);
}

BalanceResult find_balance(const SpanningTree& t, std::span<const Vertex> subtree) {
  detail::SubtreeWorkspace ws(t);
  return ws.balance(subtree);
}

namespace {

std::vector<Edge> aldous_broder_edges(const Graph& g, Rng& rng) {
  const int n = g.num_vertices();
  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  if (n == 0) return edges;
  Vertex cur = 0;
  visited[0] = 1;
  int remaining = n - 1;
  while (remaining > 0) {
    auto nb = g.neighbors(cur);
    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
    Vertex next = nb[pick(rng)];
    if (!visited[next]) {
      visited[next] = 1;
      edges.push_back(canonical(cur, next));
      --remaining;
    }
    cur = next;
  }
  return edges;
}

}  // namespace

SpanningTree sample_ust(const Graph& g, Rng& rng) {
  if (g.num_vertices() < 1) throw InvalidInput("cannot sample a spanning tree of an empty graph");
  require_connected(g, "sample_ust");
  return SpanningTree(g, aldous_broder_edges(g, rng));
}

SpanningTree bfs_spanning_tree(const Graph& g, Vertex root) {
  if (!g.contains(root)) throw InvalidInput("BFS root " + std::to_string(root) + " out of range");
  require_connected(g, "bfs_spanning_tree");
  const int n = g.num_vertices();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Edge> edges;
  std::queue<Vertex> q;
  seen[root] = 1;
  q.push(root);
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop();
    for (Vertex w : g.neighbors(v)) {
      if (seen[w]) continue;
      seen[w] = 1;
      edges.push_back(canonical(v, w));
      q.push(w);
    }
  }
  return SpanningTree(g, edges);
}

long tree_cut_size(const SpanningTree& t, std::span<const double> x) { return cut_size(t.as_graph(), x); }

namespace {

void count_draw(const Graph& g, std::uint64_t seed, int draw, std::vector<long>& counts) {
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(draw)}));
  for (const Edge& e : aldous_broder_edges(g, rng)) ++counts[static_cast<std::size_t>(*g.find_edge(e.u, e.v))];
}

std::vector<double> to_frequencies(const std::vector<long>& counts, int samples) {
  std::vector<double> f(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) f[i] = static_cast<double>(counts[i]) / samples;
  return f;
}

}  // namespace

std::vector<double> ust_edge_frequencies_serial(const Graph& g, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidInput("need at least one sample");
  require_connected(g, "ust_edge_frequencies");
  std::vector<long> counts(static_cast<std::size_t>(g.num_edges()), 0);
  for (int i = 0; i < samples; ++i) count_draw(g, seed, i, counts);
  return to_frequencies(counts, samples);
}

std::vector<double> ust_edge_frequencies(const Graph& g, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidInput("need at least one sample");
  require_connected(g, "ust_edge_frequencies");
  std::vector<long> counts(static_cast<std::size_t>(g.num_edges()), 0);
#pragma omp parallel num_threads(thread_count())
  {
    std::vector<long> local(counts.size(), 0);
#pragma omp for schedule(static)
    for (int i = 0; i < samples; ++i) count_draw(g, seed, i, local);
#pragma omp critical(stw_ust_counts)
    for (std::size_t e = 0; e < counts.size(); ++e) counts[e] += local[e];
  }
  return to_frequencies(counts, samples);
}

}  // namespace stw
