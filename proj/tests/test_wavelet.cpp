#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "stw/errors.hpp"
#include "stw/parallel.hpp"
#include "stw/tree.hpp"
#include "stw/wavelet.hpp"

using namespace stw;
using doctest::Approx;

namespace {

Graph path_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(n, e);
}

std::vector<double> dense_element(const WaveletBasis& b, int i) {
  std::vector<double> x(static_cast<std::size_t>(b.dimension()), 0.0);
  auto sup = b.support(i);
  auto val = b.values(i);
  for (std::size_t k = 0; k < sup.size(); ++k) x[sup[k]] = val[k];
  return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("two-group element") {
  const std::vector<Vertex> a{0}, b{1};
  const auto e = two_group_element(a, b);
  CHECK(e.values[0] == Approx(1 / std::sqrt(2.0)));
  CHECK(e.values[1] == Approx(-1 / std::sqrt(2.0)));

  const std::vector<Vertex> c{7}, d{1, 2, 3};
  const auto f = two_group_element(c, d);
  REQUIRE(f.vertices == std::vector<Vertex>{1, 2, 3, 7});
  CHECK(f.values[3] == Approx(std::sqrt(3.0) / 2));
  for (int i = 0; i < 3; ++i) CHECK(f.values[i] == Approx(-std::sqrt(3.0) / 6));
  CHECK(oracle::norm2(f.values) == Approx(1.0));

  CHECK_THROWS_AS(two_group_element(std::vector<Vertex>{}, b), InvalidInput);
  CHECK_THROWS_AS(two_group_element(a, a), InvalidInput);
}

TEST_CASE("form wavelets") {
  const std::vector<std::vector<Vertex>> blocks{{0}, {1}, {2}, {3}};
  const auto els = form_wavelets(blocks);
  REQUIRE(els.size() == 3);
  // Haar on four blocks: (1,1,-1,-1)/2, (1,-1,0,0)/√2, (0,0,1,-1)/√2
  CHECK(els[0].vertices.size() == 4);
  CHECK(els[0].values[0] == Approx(0.5));
  CHECK(els[0].values[3] == Approx(-0.5));
  CHECK(els[1].vertices == std::vector<Vertex>{0, 1});
  CHECK(els[2].vertices == std::vector<Vertex>{2, 3});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      std::vector<double> a(4, 0.0), b(4, 0.0);
      for (std::size_t k = 0; k < els[i].vertices.size(); ++k) a[els[i].vertices[k]] = els[i].values[k];
      for (std::size_t k = 0; k < els[j].vertices.size(); ++k) b[els[j].vertices[k]] = els[j].values[k];
      CHECK(dot(a, b) == Approx(i == j ? 1.0 : 0.0));
    }

  // odd count: first ceil(p/2) blocks on the positive side
  const std::vector<std::vector<Vertex>> three{{0}, {1}, {2}};
  const auto t = form_wavelets(three);
  REQUIRE(t.size() == 2);
  CHECK(t[0].values[0] > 0);
  CHECK(t[0].values[1] > 0);
  CHECK(t[0].values[2] < 0);

  CHECK(form_wavelets(std::vector<std::vector<Vertex>>{{0, 1}}).empty());
  CHECK_THROWS_AS(form_wavelets(std::vector<std::vector<Vertex>>{{0}, {}}), InvalidInput);
}

TEST_CASE("basis on tiny trees") {
  SUBCASE("n = 1") {
    const Graph g(1, std::vector<Edge>{});
    const auto b = build_basis(SpanningTree(g, g.edges()));
    REQUIRE(b.size() == 1);
    CHECK(b.values(0)[0] == 1.0);
  }
  SUBCASE("n = 2") {
    const Graph g = path_graph(2);
    const auto b = build_basis(SpanningTree(g, g.edges()));
    REQUIRE(b.size() == 2);
    CHECK(dense_element(b, 0) == std::vector<double>{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
    CHECK(dense_element(b, 1)[0] == Approx(1 / std::sqrt(2.0)));
    CHECK(dense_element(b, 1)[1] == Approx(-1 / std::sqrt(2.0)));
  }
  SUBCASE("path of four is the Haar basis") {
    const Graph g = path_graph(4);
    const auto b = build_basis(SpanningTree(g, g.edges()));
    REQUIRE(b.size() == 4);
    const double r = 1 / std::sqrt(2.0);
    const std::vector<std::vector<double>> want{{0.5, 0.5, 0.5, 0.5}, {0.5, 0.5, -0.5, -0.5}, {r, -r, 0, 0}, {0, 0, r, -r}};
    for (int i = 0; i < 4; ++i)
      for (int v = 0; v < 4; ++v) CHECK(dense_element(b, i)[v] == Approx(want[i][v]));
    CHECK(b.level(0) == 0);
    CHECK(b.level(1) == 1);
    CHECK(b.level(2) == 2);
  }
}

TEST_CASE("orthonormality and Parseval on random trees") {
  Rng rng(5);
  for (int side : {3, 5, 8}) {
    const Graph g = gen_torus(side, 2);
    for (int rep = 0; rep < 3; ++rep) {
      const auto t = sample_ust(g, rng);
      const auto b = build_basis(t);
      CHECK(b.size() == g.num_vertices());
      CHECK(orthonormality_residual(b) < 1e-10);
      for (int i = 1; i < b.size(); ++i) {
        double sum = 0.0;
        for (double v : b.values(i)) sum += v;
        CHECK(std::abs(sum) < 1e-12);
      }
      std::normal_distribution<double> normal;
      std::vector<double> y(static_cast<std::size_t>(g.num_vertices()));
      for (double& v : y) v = normal(rng);
      const auto c = apply_basis(b, y);
      CHECK(oracle::norm2(c) == Approx(oracle::norm2(y)).epsilon(1e-10));
      const auto back = synthesize(b, c);
      for (std::size_t i = 0; i < y.size(); ++i) CHECK(back[i] == Approx(y[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("coefficients of special signals") {
  Rng rng(8);
  const Graph g = gen_torus(4, 2);
  const auto b = build_basis(sample_ust(g, rng));
  const std::vector<double> ones(16, 3.0);
  const auto c = apply_basis(b, ones);
  CHECK(c[0] == Approx(3.0 * 4.0));
  for (int i = 1; i < 16; ++i) CHECK(std::abs(c[i]) < 1e-12);
  CHECK(basis_sparsity(b, ones) == 1);

  for (int k : {1, 5, 15}) {
    auto e = dense_element(b, k);
    const auto ck = apply_basis(b, e);
    for (int i = 0; i < 16; ++i) CHECK(ck[i] == Approx(i == k ? 1.0 : 0.0));
    for (double& v : e) v *= 2.5;
    CHECK(basis_sparsity(b, e) == 1);
  }
  CHECK_THROWS_AS(apply_basis(b, std::vector<double>(5)), InvalidInput);
}

TEST_CASE("apply: parallel equals serial") {
  Rng rng(12);
  const Graph g = gen_torus(40, 2);
  const auto b = build_basis(sample_ust(g, rng));
  std::vector<double> y(static_cast<std::size_t>(g.num_vertices()));
  std::normal_distribution<double> normal;
  for (double& v : y) v = normal(rng);
  set_thread_count(4);
  CHECK(apply_basis(b, y) == apply_basis_serial(b, y));
  set_thread_count(0);
}

TEST_CASE("activation counts") {
  SUBCASE("path of eight") {
    const Graph g = path_graph(8);
    const SpanningTree t(g, g.edges());
    const auto b = build_basis(t);
    const auto act = edge_activations(b, t);
    CHECK(*std::max_element(act.begin(), act.end()) <= activation_bound(2, 8));
    CHECK(activation_bound(2, 8) == 3);
    // gradient support also counts edges leaving an element's support, so it
    // can exceed the bound
    const auto grad = gradient_activations(b, t);
    CHECK(*std::max_element(grad.begin(), grad.end()) > activation_bound(2, 8));
  }
  SUBCASE("two vertices") {
    const Graph g = path_graph(2);
    const SpanningTree t(g, g.edges());
    CHECK(edge_activations(build_basis(t), t) == std::vector<int>{1});
    CHECK(activation_bound(1, 2) == 1);
  }
  SUBCASE("star K_{1,4}") {
    const Graph g(5, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    const SpanningTree t(g, g.edges());
    const auto act = edge_activations(build_basis(t), t);
    CHECK(activation_bound(4, 5) == 6);
    for (int a : act) CHECK(a <= 6);
  }
  SUBCASE("balanced binary tree, n = 15") {
    std::vector<Edge> e;
    for (int i = 1; i < 15; ++i) e.push_back({(i - 1) / 2, i});
    const Graph g(15, e);
    const SpanningTree t(g, g.edges());
    const auto act = edge_activations(build_basis(t), t);
    CHECK(activation_bound(3, 15) == 8);
    CHECK(*std::max_element(act.begin(), act.end()) <= 8);
  }
  SUBCASE("brute force on random trees") {
    Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
      const Graph g = gen_torus(6, 2);
      const SpanningTree t = sample_ust(g, rng);
      const auto b = build_basis(t);
      const auto act = edge_activations(b, t);
      // oracle: e activated by b iff both sides of the cut at e meet supp(b)
      const std::vector<Edge> te(t.edges().begin(), t.edges().end());
      for (std::size_t e = 0; e < te.size(); ++e) {
        std::vector<Edge> rest;
        for (std::size_t f = 0; f < te.size(); ++f)
          if (f != e) rest.push_back(te[f]);
        oracle::UnionFind uf(36);
        for (const auto& f : rest) uf.unite(f.u, f.v);
        int count = 0;
        for (int i = 1; i < b.size(); ++i) {
          bool side_a = false, side_b = false;
          for (Vertex v : b.support(i)) (uf.find(v) == uf.find(te[e].u) ? side_a : side_b) = true;
          count += side_a && side_b;
        }
        CHECK(act[e] == count);
        CHECK(act[e] <= activation_bound(t.max_degree(), 36));
      }
    }
  }
  SUBCASE("mismatched tree") {
    Rng rng(1);
    const Graph g = gen_torus(4, 2);
    const auto t1 = sample_ust(g, rng);
    auto t2 = sample_ust(g, rng);
    while (t2.fingerprint() == t1.fingerprint()) t2 = sample_ust(g, rng);
    CHECK_THROWS_AS(edge_activations(build_basis(t1), t2), InvalidInput);
  }
}

TEST_CASE("sparsity bound on random two-level signals") {
  Rng rng(44);
  const Graph g = gen_torus(8, 2);
  for (int rep = 0; rep < 1000; ++rep) {
    const SpanningTree t = sample_ust(g, rng);
    const WaveletBasis b = build_basis(t);
    // random subset of the tree split by cutting one or two tree edges
    std::vector<Edge> keep(t.edges().begin(), t.edges().end());
    std::shuffle(keep.begin(), keep.end(), rng);
    keep.resize(keep.size() - 1 - rep % 2);
    oracle::UnionFind uf(64);
    for (const auto& e : keep) uf.unite(e.u, e.v);
    const int root = uf.find(0);
    std::vector<double> x(64);
    for (int v = 0; v < 64; ++v) x[v] = uf.find(v) == root ? 2.0 : -1.0;
    const long c = tree_cut_size(t, x);
    CHECK(basis_sparsity(b, x) <= c * activation_bound(t.max_degree(), 64) + 1);
  }
}

TEST_CASE("log helpers") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(8) == 3);
  CHECK(ceil_log2(9) == 4);
  CHECK_THROWS_AS(ceil_log2(0), InvalidInput);
}
