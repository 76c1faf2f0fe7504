#include <doctest.h>

#include <cmath>

#include "stw/errors.hpp"
#include "stw/experiment.hpp"
#include "stw/parallel.hpp"

using namespace stw;
using doctest::Approx;

TEST_CASE("graph specs and rho rules") {
  GraphSpec t;
  t.family = GraphFamily::torus;
  t.side = 5;
  t.dims = 3;
  CHECK(t.vertex_count() == 125);
  CHECK(generate(t, 1).graph.num_vertices() == 125);

  GraphSpec k;
  k.family = GraphFamily::knn;
  k.n = 80;
  k.k = 5;
  const auto a = generate(k, 42);
  const auto b = generate(k, 42);
  CHECK(std::ranges::equal(a.graph.edges(), b.graph.edges()));
  CHECK(is_connected(a.graph));

  GraphSpec sparse;
  sparse.family = GraphFamily::epsilon;
  sparse.n = 50;
  sparse.eps = 0.01;
  CHECK_THROWS_AS(generate(sparse, 1), PreconditionError);
  CHECK_NOTHROW(generate(sparse, 1, false));

  CHECK(RhoRule{1.0, 0.5}.at(256) == 16);
  CHECK(RhoRule{1.0, 2.0 / 3}.at(512) == 64);
  CHECK(RhoRule{0.1, 0.0}.at(10) == 1);
  CHECK(parse_family("epsilon") == GraphFamily::epsilon);
  CHECK_THROWS_AS(parse_family("grid"), InvalidInput);
}

TEST_CASE("config round trip and errors") {
  for (const char* name : {"paper-fig1", "paper-fig2", "concentration", "smoke"}) {
    const auto cfg = preset(name, 9);
    const auto j = to_json(cfg);
    CHECK(to_json(parse_experiment_config(j)) == j);
  }
  const auto grid = parse_experiment_config(nlohmann::json::parse(R"({
    "seed": 3,
    "power": {"mu_grid": {"start": 0, "stop": 2, "step": 0.5}, "trials": 5,
              "families": [{"graphs": [{"family": "complete", "n": 8}], "rho": 7}]}
  })"));
  REQUIRE(grid.power);
  CHECK(grid.power->mu_grid == std::vector<double>{0, 0.5, 1, 1.5, 2});
  CHECK(grid.power->families[0].name == "complete");
  CHECK(grid.power->families[0].rho.at(8) == 7);
  CHECK(grid.seed == 3);

  CHECK_THROWS_AS(parse_experiment_config(nlohmann::json::parse(R"({"power": {"mu_grid": "x"}})")), InvalidInput);
  CHECK_THROWS_AS(parse_experiment_config(nlohmann::json::parse(R"({"sparsity": {"signals": 1, "families": []}})")),
                  InvalidInput);
  CHECK_THROWS_AS(parse_experiment_config(nlohmann::json::parse(
                      R"({"power": {"mu_grid": [1], "tree": "dfs", "families": []}})")),
                  InvalidInput);
  CHECK_THROWS_AS(preset("nope", 1), InvalidInput);
}

TEST_CASE("line fit") {
  const auto f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == Approx(2.0));
  CHECK(f.intercept == Approx(1.0));
  CHECK(f.r2 == Approx(1.0));
  CHECK(f.points == 4);

  // hand-computed: x=(0,1,2), y=(0,2,1): slope 0.5, intercept 0.5, R² 0.25
  const auto g = fit_line({0, 1, 2}, {0, 2, 1});
  CHECK(g.slope == Approx(0.5));
  CHECK(g.intercept == Approx(0.5));
  CHECK(g.r2 == Approx(0.25));

  CHECK_THROWS_AS(fit_line({2, 2, 2}, {1, 2, 3}), FitUndefined);
  CHECK_THROWS_AS(fit_line({1}, {1}), FitUndefined);
  CHECK_THROWS_AS(fit_line({1, 2}, {1}), InvalidInput);
}

namespace {

std::vector<PowerCell> curve(std::vector<double> power, int trials = 100) {
  std::vector<PowerCell> out;
  for (std::size_t i = 0; i < power.size(); ++i) {
    PowerCell c;
    c.mu = static_cast<double>(i);
    c.power = power[i];
    c.trials = trials;
    out.push_back(c);
  }
  return out;
}

}  // namespace

TEST_CASE("curve summaries") {
  CHECK(mu_at_power(curve({0.0, 0.2, 0.6, 1.0})) == Approx(1.75));
  CHECK(mu_at_power(curve({0.5, 0.9})) == Approx(0.0));
  CHECK_FALSE(mu_at_power(curve({0.0, 0.1})).has_value());
  // running max flattens the dip to 0.4, then 0.4 -> 0.8 between mu 2 and 3
  CHECK(mu_at_power(curve({0.0, 0.4, 0.3, 0.8})) == Approx(2.25));

  CHECK(isotonic_violations(curve({0.0, 0.5, 1.0})) == 0);
  CHECK(isotonic_violations(curve({0.5, 0.45, 1.0})) == 0);  // within noise
  CHECK(isotonic_violations(curve({0.9, 0.3, 1.0})) == 1);
  CHECK(isotonic_violations(curve({1.0, 0.99}, 100000)) == 1);
}

TEST_CASE("power rows aggregate to cells") {
  std::vector<PowerRow> rows;
  auto row = [&](const char* kind, double mu, int signal, bool reject) {
    PowerRow r;
    r.family = "f";
    r.kind = kind;
    r.mu = mu;
    r.signal = signal;
    r.reject = reject;
    rows.push_back(r);
  };
  row("null", 0, -1, true);
  row("null", 0, -1, false);
  row("null", 0, -1, false);
  row("null", 0, -1, false);
  row("alt", 1, 0, true);
  row("alt", 1, 0, false);
  row("alt", 1, 1, false);
  row("alt", 1, 1, false);
  const auto cells = aggregate_power(rows);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].type1 == Approx(0.25));
  CHECK(cells[0].power == Approx(0.25));
  CHECK(cells[0].risk == Approx(0.25 + 0.75));
  CHECK(cells[0].risk_sup == Approx(0.25 + 1.0));
  CHECK(cells[0].trials == 4);
}

namespace {

PowerConfig small_power() {
  PowerConfig cfg = *preset("smoke", 1).power;
  cfg.mu_grid = {0, 2, 4, 6, 8};
  cfg.trials = 40;
  cfg.null_trials = 60;
  cfg.noise_reps = 4;
  return cfg;
}

}  // namespace

TEST_CASE("power curve") {
  const PowerConfig cfg = small_power();
  set_thread_count(3);
  const auto par = power_curve(cfg, 5, Execution::parallel);
  set_thread_count(0);
  const auto ser = power_curve(cfg, 5, Execution::serial);
  REQUIRE(par.rows.size() == ser.rows.size());
  for (std::size_t i = 0; i < par.rows.size(); ++i) {
    CHECK(par.rows[i].statistic == ser.rows[i].statistic);
    CHECK(par.rows[i].reject == ser.rows[i].reject);
  }
  CHECK(par.rows.size() == 60 + 40 * 5);

  // risk is recomputable from the raw rows
  const auto again = aggregate_power(par.rows);
  REQUIRE(again.size() == par.cells.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].risk == par.cells[i].risk);
    CHECK(again[i].risk == Approx(again[i].type1 + 1 - again[i].power));
  }

  // seed-coupled: the same trial shares signal and noise across mu
  for (std::size_t i = 60; i < 60 + 40; ++i) {
    CHECK(par.rows[i].trial == par.rows[i + 40].trial);
    CHECK(par.rows[i].signal == par.rows[i].trial / 4);
  }
  CHECK(isotonic_violations(par.cells) == 0);
  CHECK(par.cells.front().power <= 0.2);
  CHECK(par.cells.back().power >= 0.8);
}

TEST_CASE("infeasible power cells are recorded") {
  PowerConfig cfg = small_power();
  cfg.families[0].rho = {2.0, 0.0};  // below the torus degree of 4
  const auto res = power_curve(cfg, 1);
  CHECK(res.rows.empty());
  REQUIRE(res.cells.size() == cfg.mu_grid.size());
  for (const auto& c : res.cells) CHECK(c.status.rfind("infeasible", 0) == 0);
}

TEST_CASE("sparsity experiment") {
  SparsityConfig cfg = *preset("smoke", 1).sparsity;
  cfg.signals = 30;
  const auto par = sparsity_experiment(cfg, 2, Execution::parallel);
  const auto ser = sparsity_experiment(cfg, 2, Execution::serial);
  REQUIRE(par.points.size() == ser.points.size());
  for (std::size_t i = 0; i < par.points.size(); ++i) {
    CHECK(par.points[i].sparsity == ser.points[i].sparsity);
    CHECK(par.points[i].within_bound);
    CHECK(par.points[i].tree_cut <= par.points[i].cut);
  }
  REQUIRE(par.fits.size() == 1);
  CHECK(par.fits[0].status == "ok");

  // cycle with a two-level budget of 2: every signal cuts exactly two edges
  // of a path-shaped tree, so every point has the same bound
  SparsityConfig flat = cfg;
  flat.shape = SignalShape::two_level;
  flat.families[0].graphs[0].side = 12;
  flat.families[0].graphs[0].dims = 1;
  flat.families[0].rho_min = {2.0, 0.0};
  flat.families[0].rho_max = {2.0, 0.0};
  const auto degenerate = sparsity_experiment(flat, 1);
  CHECK(degenerate.fits[0].status.rfind("fit undefined", 0) == 0);

  SparsityConfig bad = cfg;
  bad.signals = 1;
  CHECK_THROWS_AS(sparsity_experiment(bad, 1), InvalidInput);
}

TEST_CASE("concentration experiment") {
  ConcentrationConfig cfg = *preset("smoke", 1).concentration;
  const auto res = concentration_experiment(cfg, 4);
  REQUIRE(res.size() == 1);
  CHECK(res[0].subset.size() == 6);
  CHECK(res[0].rows.size() == cfg.slacks.size());
  for (const auto& r : res[0].rows) CHECK(r.r_b == Approx(6 * 15.0 / 32));
}
