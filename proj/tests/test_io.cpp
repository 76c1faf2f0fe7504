#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "stw/errors.hpp"
#include "stw/io.hpp"

using namespace stw;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "stw-io-test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("double formatting round-trips") {
  Rng rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, (i % 40) - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0) == "2");
  CHECK(std::stod(format_double(std::numeric_limits<double>::min())) == std::numeric_limits<double>::min());
  CHECK(hex64(255) == "00000000000000ff");
}

TEST_CASE("edge list text") {
  std::istringstream in("# a comment\n4 3\n3 2\n\n0 1\n# inline comment\n1 2\n");
  const EdgeList el = read_edge_list(in);
  CHECK(el.n == 4);
  CHECK(el.edges.size() == 3);
  CHECK(el.comments.size() == 2);

  const Graph g(el.n, el.edges);
  std::ostringstream out;
  write_edge_list(out, g.num_vertices(), g.edges());
  CHECK(out.str() == "4 3\n0 1\n1 2\n2 3\n");

  auto bad = [](const char* text) {
    std::istringstream s(text);
    return read_edge_list(s);
  };
  CHECK_THROWS_AS(bad(""), InvalidInput);
  CHECK_THROWS_AS(bad("3 2\n0 1\n"), InvalidInput);
  CHECK_THROWS_AS(bad("3 1\n0 5\n"), InvalidInput);
  CHECK_THROWS_AS(bad("3 1\n0 x\n"), InvalidInput);
  CHECK_THROWS_AS(bad("3 1\n0 1 2\n"), InvalidInput);
}

TEST_CASE("graph and tree files") {
  const Graph g = gen_torus(4, 2);
  const fs::path gp = scratch("g.txt");
  write_graph(gp, g);
  const Graph back = read_graph(gp);
  CHECK(std::ranges::equal(back.edges(), g.edges()));

  Rng rng(3);
  const SpanningTree t = sample_ust(g, rng);
  const fs::path tp = scratch("t.txt");
  write_tree(tp, t, g);
  CHECK(read_tree(tp, g).fingerprint() == t.fingerprint());
  std::ifstream first(tp);
  std::string line;
  std::getline(first, line);
  CHECK(line == "# tree-of: " + hex64(graph_digest(g)));

  const Graph other = gen_torus(4, 1);
  CHECK_THROWS_AS(read_tree(tp, gen_complete(16)), InvalidInput);
  CHECK_THROWS_AS(read_tree(tp, other), InvalidInput);
}

TEST_CASE("points file") {
  Rng rng(5);
  const PointCloud pc = uniform_points(20, 3, rng);
  const fs::path p = scratch("p.csv");
  write_points(p, pc);
  const PointCloud back = read_points(p);
  CHECK(back.dim == 3);
  CHECK(back.coords == pc.coords);
}

TEST_CASE("basis and resistance csv") {
  const Graph g(2, std::vector<Edge>{{0, 1}});
  const WaveletBasis b = build_basis(SpanningTree(g, g.edges()));
  std::ostringstream out;
  write_basis_csv(out, b);
  std::istringstream lines(out.str());
  std::string line;
  int rows = 0;
  std::getline(lines, line);
  CHECK(line == "element,vertex,value,depth");
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 4);

  std::ostringstream r;
  write_resistance_csv(r, all_edge_resistances(gen_complete(3)));
  CHECK(r.str().rfind("u,v,r_e\n0,1,", 0) == 0);
}

TEST_CASE("manifest") {
  RunManifest m;
  m.command = "experiment";
  m.config = {{"a", 1}};
  m.seed = 18446744073709551615ULL;
  m.inputs["x"] = "abc";
  const fs::path p = scratch("m.json");
  write_manifest(p, m);
  const RunManifest back = read_manifest(p);
  CHECK(back.command == m.command);
  CHECK(back.seed == m.seed);
  CHECK(back.config == m.config);
  CHECK(back.inputs == m.inputs);
  CHECK(back.version == STW_VERSION);

  std::ofstream(scratch("bad.json")) << "{";
  CHECK_THROWS_AS(read_manifest(scratch("bad.json")), InvalidInput);
  CHECK(file_digest(p) == file_digest(p));
}
