#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "oracles.hpp"
#include "stw/errors.hpp"
#include "stw/parallel.hpp"
#include "stw/tree.hpp"

using namespace stw;

namespace {

Graph path_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(n, e);
}

SpanningTree self_tree(const Graph& g) { return SpanningTree(g, g.edges()); }

}  // namespace

TEST_CASE("spanning tree validation") {
  const Graph k4 = gen_complete(4);
  CHECK_NOTHROW(SpanningTree(k4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}}));
  CHECK_THROWS_AS(SpanningTree(k4, std::vector<Edge>{{0, 1}, {1, 2}}), InvalidInput);
  CHECK_THROWS_AS(SpanningTree(k4, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}}), InvalidInput);
  const Graph p4 = path_graph(4);
  CHECK_THROWS_AS(SpanningTree(p4, std::vector<Edge>{{0, 1}, {1, 2}, {0, 3}}), InvalidInput);

  const SpanningTree a(k4, std::vector<Edge>{{2, 3}, {0, 1}, {1, 2}});
  const SpanningTree b(k4, std::vector<Edge>{{0, 1}, {1, 2}, {3, 2}});
  CHECK(a.fingerprint() == b.fingerprint());
  const SpanningTree c(k4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});
  CHECK(a.fingerprint() != c.fingerprint());
  CHECK(c.max_degree() == 3);
}

TEST_CASE("find balance examples") {
  SUBCASE("path of five") {
    const SpanningTree t = self_tree(path_graph(5));
    const auto b = find_balance(t);
    CHECK(b.vertex == 2);
    CHECK(b.largest_component == 2);
    // oracle: 2 is the unique vertex leaving components of size <= 2
    const std::vector<Edge> e(t.edges().begin(), t.edges().end());
    for (int v = 0; v < 5; ++v) CHECK((oracle::largest_component_without(5, e, v) <= 2) == (v == 2));
  }
  SUBCASE("star") {
    std::vector<Edge> e;
    for (int i = 1; i <= 6; ++i) e.push_back({0, i});
    const Graph g(7, e);
    CHECK(find_balance(self_tree(g)).vertex == 0);
    // center not at the walk start
    std::vector<Edge> e2;
    for (int i = 0; i <= 6; ++i)
      if (i != 4) e2.push_back(canonical(4, i));
    CHECK(find_balance(self_tree(Graph(7, e2))).vertex == 4);
  }
  SUBCASE("single vertex") {
    const Graph g(1, std::vector<Edge>{});
    const auto b = find_balance(self_tree(g));
    CHECK(b.vertex == 0);
    CHECK(b.moves == 0);
  }
  SUBCASE("subtree restriction") {
    const SpanningTree t = self_tree(path_graph(9));
    const std::vector<Vertex> sub{4, 5, 6, 7, 8};
    CHECK(find_balance(t, sub).vertex == 6);
  }
}

TEST_CASE("find balance against brute force on random trees") {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 60)(rng);
    std::vector<Edge> e;
    for (int i = 1; i < n; ++i) e.push_back(canonical(std::uniform_int_distribution<int>(0, i - 1)(rng), i));
    const Graph g(n, e);
    const auto b = find_balance(self_tree(g));
    const int largest = n == 1 ? 0 : oracle::largest_component_without(n, e, b.vertex);
    CHECK(largest <= (n + 1) / 2);
    CHECK(largest == b.largest_component);
    CHECK(b.moves <= n);
  }
}

TEST_CASE("bfs spanning tree") {
  const auto star = bfs_spanning_tree(gen_complete(4), 0);
  CHECK(std::ranges::equal(star.edges(), std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}}));

  const Graph p = path_graph(6);
  CHECK(std::ranges::equal(bfs_spanning_tree(p, 3).edges(), p.edges()));

  const Graph c4 = gen_torus(4, 1);
  CHECK(std::ranges::equal(bfs_spanning_tree(c4, 0).edges(), std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}}));

  CHECK_THROWS(bfs_spanning_tree(c4, 7));
  CHECK_THROWS_AS(bfs_spanning_tree(Graph(3, std::vector<Edge>{{0, 1}}), 0), PreconditionError);
}

TEST_CASE("tree cut size") {
  const Graph p = path_graph(3);
  const SpanningTree t = self_tree(p);
  CHECK(tree_cut_size(t, std::vector<double>{5, 5, 7}) == 1);
  CHECK(tree_cut_size(t, std::vector<double>{1, 1, 1}) == 0);

  const Graph g = gen_torus(5, 2);
  Rng rng(3);
  const SpanningTree u = sample_ust(g, rng);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> x(25);
    for (double& v : x) v = std::uniform_int_distribution<int>(0, 2)(rng);
    CHECK(tree_cut_size(u, x) <= cut_size(g, x));
  }
}

TEST_CASE("uniform spanning tree sampler") {
  SUBCASE("tree input returns itself") {
    const Graph p = path_graph(7);
    Rng rng(1);
    for (int i = 0; i < 5; ++i) CHECK(std::ranges::equal(sample_ust(p, rng).edges(), p.edges()));
  }
  SUBCASE("triangle trees are uniform") {
    const Graph tri = gen_complete(3);
    Rng rng(2024);
    std::map<std::vector<Edge>, int> counts;
    const int draws = 30000;
    for (int i = 0; i < draws; ++i) {
      const auto t = sample_ust(tri, rng);
      counts[std::vector<Edge>(t.edges().begin(), t.edges().end())]++;
    }
    REQUIRE(counts.size() == 3);
    const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / draws);
    for (const auto& [tree, c] : counts) CHECK(std::abs(c / double(draws) - 1.0 / 3) <= 3 * se);
  }
  SUBCASE("edge frequencies match spanning-tree enumeration") {
    // K4 minus an edge plus a pendant vertex: unequal inclusion probabilities
    const std::vector<Edge> e{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {3, 4}};
    const Graph g(5, e);
    const auto exact = oracle::edge_inclusion(5, std::vector<Edge>(g.edges().begin(), g.edges().end()));
    const int draws = 20000;
    const auto freq = ust_edge_frequencies(g, draws, 99);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      const double se = std::sqrt(exact[i] * (1 - exact[i]) / draws);
      CHECK(std::abs(freq[i] - exact[i]) <= 3 * se + 1e-12);
    }
  }
  SUBCASE("disconnected graph") {
    Rng rng(1);
    CHECK_THROWS_AS(sample_ust(Graph(4, std::vector<Edge>{{0, 1}, {2, 3}}), rng), PreconditionError);
  }
}

TEST_CASE("ust frequencies: parallel equals serial") {
  const Graph g = gen_torus(5, 2);
  set_thread_count(3);
  CHECK(ust_edge_frequencies(g, 500, 17) == ust_edge_frequencies_serial(g, 500, 17));
  set_thread_count(0);
}
