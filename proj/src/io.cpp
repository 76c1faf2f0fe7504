#include "stw/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "stw/errors.hpp"

namespace stw {

namespace fs = std::filesystem;

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::logic_error("to_chars failed");
  return {buf, end};
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, 16);
  std::string s(buf, end);
  return std::string(16 - s.size(), '0') + s;
}

std::uint64_t graph_digest(const Graph& g) { return edge_list_digest(g.num_vertices(), g.edges()); }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw InvalidInput(where + ": bad number '" + s + "'");
  return v;
}

// Joins fields with commas; doubles go through format_double.
class Row {
 public:
  explicit Row(std::ostream& out) : out_(out) {}
  ~Row() { out_ << '\n'; }

  Row& operator<<(double x) { return put(format_double(x)); }
  Row& operator<<(const std::string& s) { return put(s); }
  Row& operator<<(const char* s) { return put(s); }
  Row& operator<<(bool b) { return put(b ? "1" : "0"); }
  template <std::integral T>
  Row& operator<<(T x) {
    return put(std::to_string(x));
  }

 private:
  Row& put(const std::string& s) {
    if (!first_) out_ << ',';
    first_ = false;
    out_ << s;
    return *this;
  }
  std::ostream& out_;
  bool first_ = true;
};

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

EdgeList read_edge_list(std::istream& in) {
  EdgeList out;
  std::string line;
  bool header = false;
  long expected = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      out.comments.push_back(trim(t.substr(1)));
      continue;
    }
    std::istringstream ss(t);
    long a = 0, b = 0;
    std::string extra;
    if (!(ss >> a >> b) || (ss >> extra)) {
      throw InvalidInput("edge list line " + std::to_string(lineno) + ": expected two integers");
    }
    if (!header) {
      if (a < 0 || b < 0) throw InvalidInput("edge list header has a negative count");
      out.n = static_cast<int>(a);
      expected = b;
      header = true;
      out.edges.reserve(static_cast<std::size_t>(expected));
    } else {
      if (a < 0 || b < 0 || a >= out.n || b >= out.n) {
        throw InvalidInput("edge list line " + std::to_string(lineno) + ": vertex out of range");
      }
      out.edges.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b)});
    }
  }
  if (!header) throw InvalidInput("edge list is missing its 'n m' header");
  if (static_cast<long>(out.edges.size()) != expected) {
    throw InvalidInput("edge list header promises " + std::to_string(expected) + " edges, found " +
                       std::to_string(out.edges.size()));
  }
  return out;
}

void write_edge_list(std::ostream& out, int n, std::span<const Edge> edges, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << n << ' ' << edges.size() << '\n';
  for (const Edge& e : edges) out << e.u << ' ' << e.v << '\n';
}

Graph read_graph(const fs::path& path) {
  auto in = open_in(path);
  EdgeList el = read_edge_list(in);
  return Graph(el.n, el.edges);
}

void write_graph(const fs::path& path, const Graph& g) {
  auto out = open_out(path);
  write_edge_list(out, g.num_vertices(), g.edges());
}

void write_points(const fs::path& path, const PointCloud& points) {
  auto out = open_out(path);
  {
    Row header(out);
    header << "vertex";
    for (int d = 0; d < points.dim; ++d) header << "x" + std::to_string(d);
  }
  for (int i = 0; i < points.size(); ++i) {
    Row r(out);
    r << i;
    for (double c : points.point(i)) r << c;
  }
}

PointCloud read_points(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("points file is empty");
  const auto header = split_csv(line);
  if (header.size() < 2 || header[0] != "vertex") throw InvalidInput("points header must be vertex,x0,...");
  PointCloud pc;
  pc.dim = static_cast<int>(header.size()) - 1;
  int expected = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (static_cast<int>(f.size()) != pc.dim + 1) throw InvalidInput("points row has the wrong field count");
    if (f[0] != std::to_string(expected)) throw InvalidInput("points rows must be listed in vertex order");
    for (int d = 1; d <= pc.dim; ++d) pc.coords.push_back(parse_double(f[d], "points"));
    ++expected;
  }
  return pc;
}

void write_tree(const fs::path& path, const SpanningTree& t, const Graph& parent) {
  auto out = open_out(path);
  write_edge_list(out, t.num_vertices(), t.edges(), {"tree-of: " + hex64(graph_digest(parent))});
}

SpanningTree read_tree(const fs::path& path, const Graph& parent) {
  auto in = open_in(path);
  EdgeList el = read_edge_list(in);
  const std::string want = hex64(graph_digest(parent));
  for (const auto& c : el.comments) {
    if (c.rfind("tree-of:", 0) == 0 && trim(c.substr(8)) != want) {
      throw InvalidInput("tree file was written for graph " + trim(c.substr(8)) + ", not " + want);
    }
  }
  if (el.n != parent.num_vertices()) throw InvalidInput("tree and graph vertex counts differ");
  return SpanningTree(parent, el.edges);
}

void write_basis_csv(std::ostream& out, const WaveletBasis& b) {
  Row(out) << "element" << "vertex" << "value" << "depth";
  for (int i = 0; i < b.size(); ++i) {
    auto sup = b.support(i);
    auto val = b.values(i);
    for (std::size_t k = 0; k < sup.size(); ++k) Row(out) << i << sup[k] << val[k] << b.level(i);
  }
}

void write_resistance_csv(std::ostream& out, const ResistanceProfile& profile) {
  Row(out) << "u" << "v" << "r_e";
  auto edges = profile.edges();
  auto r = profile.edge_resistances();
  for (std::size_t e = 0; e < edges.size(); ++e) Row(out) << edges[e].u << edges[e].v << r[e];
}

void write_power_rows_csv(std::ostream& out, const std::vector<PowerRow>& rows) {
  Row(out) << "family" << "graph" << "n" << "rho" << "kind" << "mu" << "trial" << "signal" << "statistic" << "tau"
           << "reject" << "truth";
  for (const auto& r : rows) {
    Row(out) << quoted(r.family) << r.graph << r.n << r.rho << r.kind << r.mu << r.trial << r.signal << r.statistic
             << r.tau << r.reject << r.truth;
  }
}

void write_power_cells_csv(std::ostream& out, const std::vector<PowerCell>& cells) {
  Row(out) << "family" << "graph" << "n" << "rho" << "mu" << "tau" << "trials" << "power" << "type1" << "risk"
           << "risk_sup_lower" << "status";
  for (const auto& c : cells) {
    Row(out) << quoted(c.family) << c.graph << c.n << c.rho << c.mu << c.tau << c.trials << c.power << c.type1
             << c.risk << c.risk_sup << quoted(c.status);
  }
}

void write_sparsity_points_csv(std::ostream& out, const std::vector<SparsityPoint>& points) {
  Row(out) << "family" << "graph" << "n" << "signal" << "rho_target" << "cut" << "tree_cut" << "tree_degree" << "bound"
           << "sparsity" << "within_bound";
  for (const auto& p : points) {
    Row(out) << quoted(p.family) << p.graph << p.n << p.signal << p.rho_target << p.cut << p.tree_cut
             << p.tree_degree << p.bound << p.sparsity << p.within_bound;
  }
}

void write_sparsity_fits_csv(std::ostream& out, const std::vector<FamilyFit>& fits) {
  Row(out) << "family" << "points" << "slope" << "intercept" << "r2" << "status";
  for (const auto& f : fits)
    Row(out) << quoted(f.family) << f.fit.points << f.fit.slope << f.fit.intercept << f.fit.r2 << quoted(f.status);
}

void write_concentration_csv(std::ostream& out, const std::vector<ConcentrationResult>& results) {
  Row(out) << "graph" << "n" << "subset_size" << "slack" << "r_b" << "threshold" << "empirical_tail" << "bound"
           << "standard_error" << "pass";
  for (const auto& res : results) {
    for (const auto& r : res.rows) {
      Row(out) << quoted(res.graph) << res.n << res.subset.size() << r.slack << r.r_b << r.threshold
               << r.empirical_tail << r.bound << r.standard_error << r.pass;
    }
  }
}

std::string csv_schema() {
  return R"(# CSV schema

All files have a header row. Booleans are 0/1. Reals are printed with the
shortest decimal form that parses back to the same double.

## power_rows.csv
family, graph (index within family), n, rho, kind (null|alt), mu, trial,
signal (index of the sampled signal, -1 for null rows), statistic (max
absolute wavelet coefficient), tau, reject, truth (1 when an alternative with
mu > 0 was present).

## power_cells.csv
family, graph, n, rho, mu, tau, trials, power, type1 (null rejection rate for
the graph), risk (type1 + 1 - power), risk_sup_lower (type1 + worst
per-signal miss rate; a lower bound on the sup over the class), status (ok or
infeasible: reason).

## sparsity_points.csv
family, graph, n, signal, rho_target, cut (edges of the graph cut by the
signal), tree_cut, tree_degree (max degree of the sampled tree), bound
(cut * ceil(log2 d) * ceil(log2 n)), sparsity (nonzero wavelet coefficients),
within_bound (sparsity <= bound + 1).

## sparsity_fits.csv
family, points, slope, intercept, r2, status. Least squares of sparsity on
bound over all points of the family.

## concentration.csv
graph, n, subset_size, slack, r_b (sum of edge resistances over the subset),
threshold ((1 + slack) r_b), empirical_tail, bound, standard_error, pass
(empirical_tail <= bound + 3 standard_error).

## basis.csv
element, vertex, value, depth. One row per nonzero entry.

## resistance.csv
u, v, r_e in canonical edge order.
)";
}

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "' for hashing");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return hex64(h);
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j{{"command", command}, {"config", config}, {"version", version},
                   {"inputs", inputs},   {"outputs", outputs}};
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.value("config", nlohmann::json::object());
    if (j.contains("seed") && !j["seed"].is_null()) m.seed = j["seed"].get<std::uint64_t>();
    m.version = j.value("version", m.version);
    m.inputs = j.value("inputs", m.inputs);
    m.outputs = j.value("outputs", m.outputs);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed manifest: ") + e.what());
  }
}

void write_manifest(const fs::path& path, const RunManifest& m) {
  auto out = open_out(path);
  out << m.to_json().dump(2) << '\n';
}

RunManifest read_manifest(const fs::path& path) {
  auto in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("manifest is not JSON: ") + e.what());
  }
  return RunManifest::from_json(j);
}

}  // namespace stw
