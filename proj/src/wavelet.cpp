#include "stw/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "stw/errors.hpp"
#include "stw/parallel.hpp"

namespace stw {

void WaveletBasis::append(const SparseVector& element, int level, int subtree) {
  vertices_.insert(vertices_.end(), element.vertices.begin(), element.vertices.end());
  values_.insert(values_.end(), element.values.begin(), element.values.end());
  offsets_.push_back(static_cast<int>(values_.size()));
  level_.push_back(level);
  subtree_.push_back(subtree);
}

SparseVector two_group_element(std::span<const Vertex> c1, std::span<const Vertex> c2) {
  if (c1.empty() || c2.empty()) throw InvalidInput("two-group element needs two nonempty groups");
  const double n1 = static_cast<double>(c1.size());
  const double n2 = static_cast<double>(c2.size());
  const double scale = std::sqrt(n1 * n2 / (n1 + n2));
  const double hi = scale / n1;
  const double lo = -scale / n2;

  std::vector<std::pair<Vertex, double>> entries;
  entries.reserve(c1.size() + c2.size());
  for (Vertex v : c1) entries.emplace_back(v, hi);
  for (Vertex v : c2) entries.emplace_back(v, lo);
  std::sort(entries.begin(), entries.end());
  SparseVector out;
  out.vertices.reserve(entries.size());
  out.values.reserve(entries.size());
  for (auto [v, val] : entries) {
    if (!out.vertices.empty() && out.vertices.back() == v) throw InvalidInput("groups overlap");
    out.vertices.push_back(v);
    out.values.push_back(val);
  }
  return out;
}

namespace {

void form_range(std::span<const std::vector<Vertex>> comps, std::vector<SparseVector>& out) {
  const std::size_t p = comps.size();
  if (p < 2) return;
  const std::size_t split = (p + 1) / 2;
  std::vector<Vertex> c1, c2;
  for (std::size_t i = 0; i < p; ++i) {
    auto& dst = i < split ? c1 : c2;
    dst.insert(dst.end(), comps[i].begin(), comps[i].end());
  }
  out.push_back(two_group_element(c1, c2));
  form_range(comps.subspan(0, split), out);
  form_range(comps.subspan(split), out);
}

class BasisBuilder {
 public:
  BasisBuilder(const SpanningTree& t, WaveletBasis& out) : ws_(t), out_(out) {}

  void process(std::vector<Vertex> subtree, int level) {
    const int id = ++subtrees_;
    if (subtree.size() < 2) return;
    if (subtree.size() == 2) {
      out_.append(two_group_element({&subtree[0], 1}, {&subtree[1], 1}), level, id);
      return;
    }
    const Vertex balancer = ws_.balance(subtree).vertex;
    auto comps = ws_.split_at(subtree, balancer);
    if (comps.size() < 2) throw std::logic_error("balancing vertex of a subtree with >2 vertices is a leaf");

    std::size_t smallest = 0;
    for (std::size_t i = 1; i < comps.size(); ++i)
      if (comps[i].size() < comps[smallest].size()) smallest = i;
    auto& host = comps[smallest];
    host.insert(std::upper_bound(host.begin(), host.end(), balancer), balancer);
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

    for (const SparseVector& e : form_wavelets(comps)) out_.append(e, level, id);
    for (auto& c : comps) process(std::move(c), level + 1);
  }

 private:
  detail::SubtreeWorkspace ws_;
  WaveletBasis& out_;
  int subtrees_ = 0;
};

void check_length(const WaveletBasis& b, std::span<const double> y) {
  if (y.size() != static_cast<std::size_t>(b.dimension())) {
    throw InvalidInput("vector length " + std::to_string(y.size()) + " does not match basis dimension " +
                       std::to_string(b.dimension()));
  }
}

double coefficient(const WaveletBasis& b, int i, std::span<const double> y) {
  auto sup = b.support(i);
  auto val = b.values(i);
  double s = 0.0;
  for (std::size_t k = 0; k < sup.size(); ++k) s += val[k] * y[sup[k]];
  return s;
}

}  // namespace

std::vector<SparseVector> form_wavelets(std::span<const std::vector<Vertex>> components) {
  for (const auto& c : components)
    if (c.empty()) throw InvalidInput("FormWavelets given an empty component");
  std::vector<SparseVector> out;
  if (components.size() >= 2) out.reserve(components.size() - 1);
  form_range(components, out);
  return out;
}

WaveletBasis build_basis(const SpanningTree& t) {
  const int n = t.num_vertices();
  WaveletBasis basis;
  basis.n_ = n;
  basis.tree_fingerprint_ = t.fingerprint();

  SparseVector constant;
  constant.vertices.resize(static_cast<std::size_t>(n));
  constant.values.assign(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  for (Vertex v = 0; v < n; ++v) constant.vertices[v] = v;
  basis.append(constant, 0, 0);

  std::vector<Vertex> all(constant.vertices);
  BasisBuilder builder(t, basis);
  builder.process(std::move(all), 1);
  return basis;
}

std::vector<double> apply_basis_serial(const WaveletBasis& b, std::span<const double> y) {
  check_length(b, y);
  std::vector<double> c(static_cast<std::size_t>(b.size()));
  for (int i = 0; i < b.size(); ++i) c[i] = coefficient(b, i, y);
  return c;
}

std::vector<double> apply_basis(const WaveletBasis& b, std::span<const double> y) {
  check_length(b, y);
  const int m = b.size();
  std::vector<double> c(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(dynamic, 64) num_threads(thread_count()) if (b.nonzeros() > 1 << 15)
  for (int i = 0; i < m; ++i) c[i] = coefficient(b, i, y);
  return c;
}

std::vector<double> synthesize(const WaveletBasis& b, std::span<const double> coeffs) {
  if (coeffs.size() != static_cast<std::size_t>(b.size())) throw InvalidInput("coefficient count mismatch");
  std::vector<double> x(static_cast<std::size_t>(b.dimension()), 0.0);
  for (int i = 0; i < b.size(); ++i) {
    auto sup = b.support(i);
    auto val = b.values(i);
    for (std::size_t k = 0; k < sup.size(); ++k) x[sup[k]] += coeffs[i] * val[k];
  }
  return x;
}

long basis_sparsity(const WaveletBasis& b, std::span<const double> x) {
  long nz = 0;
  for (double c : apply_basis(b, x))
    if (std::abs(c) > kCoefficientTolerance) ++nz;
  return nz;
}

namespace {

void check_pair(const WaveletBasis& b, const SpanningTree& t) {
  if (b.dimension() != t.num_vertices() || b.tree_fingerprint() != t.fingerprint()) {
    throw InvalidInput("basis was not built from this spanning tree");
  }
}

}  // namespace

std::vector<int> edge_activations(const WaveletBasis& b, const SpanningTree& t) {
  check_pair(b, t);
  const int n = t.num_vertices();
  std::vector<int> counts(static_cast<std::size_t>(t.num_edges()), 0);
  if (n < 2) return counts;

  // Root at 0; each non-root vertex owns the edge to its parent.
  std::vector<Vertex> order{0};
  std::vector<Vertex> parent(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Vertex w : t.neighbors(order[i])) {
      if (w != parent[order[i]]) {
        parent[w] = order[i];
        order.push_back(w);
      }
    }
  }
  std::vector<int> owned(static_cast<std::size_t>(n), -1);
  auto edges = t.edges();
  for (Vertex u = 1; u < n; ++u) {
    Edge e = canonical(u, parent[u]);
    owned[u] = static_cast<int>(std::lower_bound(edges.begin(), edges.end(), e) - edges.begin());
  }

#pragma omp parallel num_threads(thread_count())
  {
    std::vector<int> local(counts.size(), 0);
    std::vector<int> inside(static_cast<std::size_t>(n), 0);
#pragma omp for schedule(dynamic, 16)
    for (int i = 1; i < b.size(); ++i) {
      auto sup = b.support(i);
      const int total = static_cast<int>(sup.size());
      std::fill(inside.begin(), inside.end(), 0);
      for (Vertex v : sup) inside[v] = 1;
      for (auto it = order.rbegin(); it != order.rend() - 1; ++it) {
        Vertex u = *it;
        if (inside[u] > 0 && inside[u] < total) ++local[owned[u]];
        inside[parent[u]] += inside[u];
      }
    }
#pragma omp critical(stw_activation_counts)
    for (std::size_t e = 0; e < counts.size(); ++e) counts[e] += local[e];
  }
  return counts;
}

std::vector<int> gradient_activations(const WaveletBasis& b, const SpanningTree& t) {
  check_pair(b, t);
  std::vector<int> counts(static_cast<std::size_t>(t.num_edges()), 0);
  std::vector<double> dense(static_cast<std::size_t>(t.num_vertices()), 0.0);
  auto edges = t.edges();
  for (int i = 0; i < b.size(); ++i) {
    auto sup = b.support(i);
    auto val = b.values(i);
    for (std::size_t k = 0; k < sup.size(); ++k) dense[sup[k]] = val[k];
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (std::abs(dense[edges[e].u] - dense[edges[e].v]) > kCoefficientTolerance) ++counts[e];
    for (Vertex v : sup) dense[v] = 0.0;
  }
  return counts;
}

int ceil_log2(long x) {
  if (x < 1) throw InvalidInput("ceil_log2 needs a positive argument");
  int k = 0;
  while ((1L << k) < x) ++k;
  return k;
}

int activation_bound(int max_degree, int n) {
  return ceil_log2(std::max(max_degree, 2)) * ceil_log2(std::max(n, 2));
}

Eigen::MatrixXd to_dense(const WaveletBasis& b) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(b.size(), b.dimension());
  for (int i = 0; i < b.size(); ++i) {
    auto sup = b.support(i);
    auto val = b.values(i);
    for (std::size_t k = 0; k < sup.size(); ++k) m(i, sup[k]) = val[k];
  }
  return m;
}

double orthonormality_residual(const WaveletBasis& b) {
  Eigen::MatrixXd m = to_dense(b);
  Eigen::MatrixXd gram = m * m.transpose();
  gram -= Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
  return gram.cwiseAbs().maxCoeff();
}

}  // namespace stw
