#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stw/experiment.hpp"
#include "stw/graph.hpp"
#include "stw/resistance.hpp"
#include "stw/tree.hpp"
#include "stw/wavelet.hpp"

namespace stw {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

std::string hex64(std::uint64_t x);

/// Digest of a graph's canonical edge list, as written in tree files.
std::uint64_t graph_digest(const Graph& g);

struct EdgeList {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::string> comments;  ///< `#` lines, without the marker
};

/// Edge-list text: header `n m`, then m lines `u v`. Lines starting with `#`
/// are comments. Throws InvalidInput on malformed text.
EdgeList read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, int n, std::span<const Edge> edges,
                     const std::vector<std::string>& comments = {});

Graph read_graph(const std::filesystem::path& path);
void write_graph(const std::filesystem::path& path, const Graph& g);

/// CSV `vertex,x0,...,x{dim-1}`.
void write_points(const std::filesystem::path& path, const PointCloud& points);
PointCloud read_points(const std::filesystem::path& path);

/// Tree files carry a `# tree-of: <hex digest>` line naming the parent graph.
void write_tree(const std::filesystem::path& path, const SpanningTree& t, const Graph& parent);
/// Reads a tree of `parent`; a tree-of line that names another graph is an error.
SpanningTree read_tree(const std::filesystem::path& path, const Graph& parent);

/// CSV `element,vertex,value,depth`, one row per nonzero.
void write_basis_csv(std::ostream& out, const WaveletBasis& b);

/// CSV `u,v,r_e` in canonical edge order.
void write_resistance_csv(std::ostream& out, const ResistanceProfile& profile);

void write_power_rows_csv(std::ostream& out, const std::vector<PowerRow>& rows);
void write_power_cells_csv(std::ostream& out, const std::vector<PowerCell>& cells);
void write_sparsity_points_csv(std::ostream& out, const std::vector<SparsityPoint>& points);
void write_sparsity_fits_csv(std::ostream& out, const std::vector<FamilyFit>& fits);
void write_concentration_csv(std::ostream& out, const std::vector<ConcentrationResult>& results);

/// Column documentation for every CSV above.
std::string csv_schema();

/// 64-bit FNV-1a over the file bytes, as hex.
std::string file_digest(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::optional<std::uint64_t> seed;
  std::string version = STW_VERSION;
  std::map<std::string, std::string> inputs;   ///< path -> digest
  std::map<std::string, std::string> outputs;  ///< path -> digest, filled after the run

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace stw
