#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "stw/errors.hpp"
#include "stw/graph.hpp"
#include "stw/parallel.hpp"

using namespace stw;

TEST_CASE("graph construction and validation") {
  SUBCASE("triangle") {
    const std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}};
    Graph g(3, e);
    CHECK(g.num_edges() == 3);
    for (Vertex v = 0; v < 3; ++v) CHECK(g.degree(v) == 2);
    // stored canonically
    CHECK(g.edges()[1] == Edge{0, 2});
  }
  SUBCASE("isolated vertices") {
    Graph g(2, std::vector<Edge>{});
    CHECK(g.num_edges() == 0);
    CHECK(g.degree(0) == 0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(Graph(3, std::vector<Edge>{{0, 3}}), InvalidInput);
    CHECK_THROWS_AS(Graph(3, std::vector<Edge>{{1, 1}}), InvalidInput);
    CHECK_THROWS_AS(Graph(3, std::vector<Edge>{{0, 1}, {1, 0}}), InvalidInput);
    CHECK_THROWS_AS(Graph(3, std::vector<Edge>{{-1, 1}}), InvalidInput);
  }
  SUBCASE("reversed input is canonicalized") {
    Graph g(3, std::vector<Edge>{{2, 1}, {1, 0}});
    CHECK(g.edges()[0] == Edge{0, 1});
    CHECK(g.edges()[1] == Edge{1, 2});
    CHECK(g.find_edge(2, 1) == 1);
    CHECK_FALSE(g.find_edge(0, 2).has_value());
  }
  SUBCASE("neighbors sorted and edge ids consistent") {
    Graph g(5, std::vector<Edge>{{4, 2}, {2, 0}, {3, 2}, {1, 2}});
    auto nb = g.neighbors(2);
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    auto ids = g.incident_edges(2);
    for (std::size_t i = 0; i < nb.size(); ++i) CHECK(g.edge(ids[i]) == canonical(2, nb[i]));
  }
}

TEST_CASE("incidence operator") {
  const Graph path(3, std::vector<Edge>{{0, 1}, {1, 2}});
  const Graph tri(3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}});
  CHECK(incidence_apply(path, std::vector<double>{1, 0, 0}) == std::vector<double>{1, 0});
  CHECK(incidence_apply(tri, std::vector<double>{1, 0, 0}) == std::vector<double>{1, 1, 0});
  for (double v : incidence_apply(tri, std::vector<double>{3, 3, 3})) CHECK(v == 0.0);
  CHECK_THROWS_AS(incidence_apply(tri, std::vector<double>{1, 0}), InvalidInput);
}

TEST_CASE("cut size") {
  const Graph p4(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
  CHECK(cut_size(p4, std::vector<double>{1, 1, 0, 0}) == 1);
  CHECK(cut_size(p4, std::vector<double>{2, 2, 2, 2}) == 0);
  for (int n : {5, 9}) {
    const Graph k = gen_complete(n);
    for (int size = 0; size <= n; ++size) {
      std::vector<double> x(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < size; ++i) x[i] = 1.0;
      CHECK(cut_size(k, x) == static_cast<long>(size) * (n - size));
    }
  }
}

TEST_CASE("torus generator") {
  const Graph t4 = gen_torus(4, 2);
  CHECK(t4.num_vertices() == 16);
  CHECK(t4.num_edges() == 32);
  for (Vertex v = 0; v < 16; ++v) CHECK(t4.degree(v) == 4);

  // 1-d torus of side 3 is the triangle
  const Graph c3 = gen_torus(3, 1);
  CHECK(c3.num_edges() == 3);
  CHECK(c3.find_edge(0, 2).has_value());

  CHECK(gen_torus(5, 2).num_edges() == 50);
  CHECK(gen_torus(16, 2).num_vertices() == 256);
  const Graph t3 = gen_torus(3, 3);
  CHECK(t3.num_edges() == 27 * 3);
  CHECK(t3.min_degree() == 6);
  CHECK_THROWS_AS(gen_torus(2, 2), InvalidInput);
  CHECK_THROWS_AS(gen_torus(4, 0), InvalidInput);

  // neighbor oracle: (i,j) joined to (i±1 mod s, j) and (i, j±1 mod s)
  const int s = 6;
  const Graph t6 = gen_torus(s, 2);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      const Vertex v = i + s * j;
      CHECK(t6.find_edge(v, (i + 1) % s + s * j).has_value());
      CHECK(t6.find_edge(v, i + s * ((j + 1) % s)).has_value());
    }
}

TEST_CASE("complete generator") {
  CHECK(gen_complete(5).num_edges() == 10);
  CHECK(gen_complete(2).num_edges() == 1);
  const Graph k100 = gen_complete(100);
  CHECK(k100.min_degree() == 99);
  CHECK(k100.max_degree() == 99);
  CHECK_THROWS_AS(gen_complete(1), InvalidInput);
}

namespace {

// Brute-force symmetric kNN: j is among i's k nearest (ties to lower index) or vice versa.
std::set<Edge> knn_oracle(const PointCloud& pc, int k) {
  const int n = pc.size();
  std::set<Edge> out;
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> d;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double s = 0.0;
      for (int c = 0; c < pc.dim; ++c) s += (pc.point(i)[c] - pc.point(j)[c]) * (pc.point(i)[c] - pc.point(j)[c]);
      d.emplace_back(s, j);
    }
    std::sort(d.begin(), d.end());
    for (int r = 0; r < k && r < static_cast<int>(d.size()); ++r) out.insert(canonical(i, d[r].second));
  }
  return out;
}

}  // namespace

TEST_CASE("knn generator") {
  Rng rng(11);
  const auto gg = gen_knn(60, 5, 2, rng);
  CHECK(gg.points.size() == 60);
  CHECK(gg.graph.min_degree() >= 5);
  const auto want = knn_oracle(gg.points, 5);
  CHECK(std::set<Edge>(gg.graph.edges().begin(), gg.graph.edges().end()) == want);

  Rng a(3), b(3);
  CHECK(std::ranges::equal(gen_knn(50, 5, 2, a).graph.edges(), gen_knn(50, 5, 2, b).graph.edges()));

  Rng r3(5);
  const auto tri = gen_knn(3, 2, 2, r3);
  CHECK(tri.graph.num_edges() == 3);

  Rng bad(1);
  CHECK_THROWS_AS(gen_knn(5, 5, 2, bad), InvalidInput);
  CHECK_THROWS_AS(gen_knn(5, 0, 2, bad), InvalidInput);
}

TEST_CASE("epsilon generator") {
  Rng rng(4);
  const auto gg = gen_epsilon(80, 0.2, 2, rng);
  for (int i = 0; i < 80; ++i)
    for (int j = i + 1; j < 80; ++j) {
      double s = 0.0;
      for (int c = 0; c < 2; ++c) s += std::pow(gg.points.point(i)[c] - gg.points.point(j)[c], 2);
      CHECK(gg.graph.find_edge(i, j).has_value() == (std::sqrt(s) <= 0.2));
    }

  Rng big(9);
  const auto full = gen_epsilon(30, std::sqrt(2.0), 2, big);
  CHECK(full.graph.num_edges() == 30 * 29 / 2);

  Rng tiny(9);
  CHECK(gen_epsilon(30, 1e-12, 2, tiny).graph.num_edges() == 0);

  Rng a(8), b(8);
  CHECK(std::ranges::equal(gen_epsilon(100, 0.3, 2, a).graph.edges(), gen_epsilon(100, 0.3, 2, b).graph.edges()));
  CHECK_THROWS_AS(gen_epsilon(10, -1.0, 2, a), InvalidInput);
}

TEST_CASE("parallel point kernels match serial reference") {
  Rng rng(21);
  const PointCloud pc = uniform_points(700, 3, rng);
  set_thread_count(4);
  CHECK(std::ranges::equal(knn_graph(pc, 7).edges(), knn_graph_serial(pc, 7).edges()));
  CHECK(std::ranges::equal(epsilon_graph(pc, 0.15).edges(), epsilon_graph_serial(pc, 0.15).edges()));
  set_thread_count(0);
}

TEST_CASE("connected components") {
  const Graph tri(3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}});
  CHECK(connected_components(tri).size() == 1);
  const Graph two(4, std::vector<Edge>{{0, 2}, {1, 3}});
  const auto c = connected_components(two);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == std::vector<Vertex>{0, 2});
  CHECK(c[1] == std::vector<Vertex>{1, 3});
  CHECK(connected_components(Graph(3, std::vector<Edge>{})).size() == 3);
  CHECK_FALSE(is_connected(two));
  CHECK_THROWS_AS(require_connected(two, "test"), PreconditionError);
  try {
    require_connected(two, "test");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("2 2") != std::string::npos);
  }
}
