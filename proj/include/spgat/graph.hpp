// Undirected graph with canonical edge storage, synthetic generators, and
// the normalized spectral operators built from it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spgat/matrix.hpp"
#include "spgat/rng.hpp"

namespace spgat {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

// Edges are stored canonically: endpoints ordered (i < j), sorted, deduplicated,
// no self loops. Immutable after construction.
struct Graph {
  std::size_t n = 0;
  std::vector<Edge> edges;

  std::size_t num_edges() const { return edges.size(); }
};

inline Graph make_graph(std::size_t n, std::vector<Edge> raw_edges) {
  for (auto& e : raw_edges) {
    if (e.first >= n || e.second >= n)
      throw std::invalid_argument("edge endpoint " +
                                  std::to_string(std::max(e.first, e.second)) +
                                  " out of range for n=" + std::to_string(n));
    if (e.first == e.second)
      throw std::invalid_argument("self loop at node " + std::to_string(e.first));
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(raw_edges.begin(), raw_edges.end());
  raw_edges.erase(std::unique(raw_edges.begin(), raw_edges.end()), raw_edges.end());
  return Graph{n, std::move(raw_edges)};
}

inline std::vector<std::vector<std::uint32_t>> adjacency_lists(const Graph& g) {
  std::vector<std::vector<std::uint32_t>> adj(g.n);
  for (const auto& [i, j] : g.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  return adj;
}

// a_hat = D^{-1/2} (A + I) D^{-1/2} with D the self-loop-augmented degrees;
// laplacian = I - a_hat. Isolated nodes get degree 1 from the self loop.
struct NormalizedOperators {
  std::size_t n = 0;
  CsrMatrix a_hat;
  CsrMatrix laplacian;
};

inline NormalizedOperators normalize(const Graph& g) {
  const std::size_t n = g.n;
  auto adj = adjacency_lists(g);
  std::vector<double> inv_sqrt_deg(n);
  for (std::size_t i = 0; i < n; ++i)
    inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(adj[i].size() + 1));

  NormalizedOperators ops;
  ops.n = n;
  auto& ah = ops.a_hat;
  auto& lp = ops.laplacian;
  ah.rows = ah.cols = lp.rows = lp.cols = n;
  ah.row_ptr.push_back(0);
  lp.row_ptr.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    // row entries sorted by column: neighbors below i, the diagonal, neighbors above
    std::vector<std::uint32_t> cols(adj[i]);
    cols.insert(std::lower_bound(cols.begin(), cols.end(), static_cast<std::uint32_t>(i)),
                static_cast<std::uint32_t>(i));
    for (std::uint32_t j : cols) {
      const double a = inv_sqrt_deg[i] * inv_sqrt_deg[j];
      ah.col_idx.push_back(j);
      ah.values.push_back(a);
      lp.col_idx.push_back(j);
      lp.values.push_back(j == i ? 1.0 - a : -a);
    }
    ah.row_ptr.push_back(static_cast<std::int64_t>(ah.values.size()));
    lp.row_ptr.push_back(static_cast<std::int64_t>(lp.values.size()));
  }
  return ops;
}

// Two k-cliques joined by a single bridge edge between node k-1 and node k.
inline Graph barbell_graph(std::size_t k) {
  if (k < 3) throw std::invalid_argument("barbell_graph: k must be >= 3, got " + std::to_string(k));
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < k; ++i)
    for (std::uint32_t j = i + 1; j < k; ++j) {
      edges.emplace_back(i, j);
      edges.emplace_back(static_cast<std::uint32_t>(k) + i, static_cast<std::uint32_t>(k) + j);
    }
  edges.emplace_back(static_cast<std::uint32_t>(k - 1), static_cast<std::uint32_t>(k));
  return make_graph(2 * k, std::move(edges));
}

struct LabeledSplit {
  std::vector<int> labels;  // class per node, in [0, num_classes)
  int num_classes = 0;
  std::vector<std::uint32_t> train, val, test;
};

// Stochastic block model with block index as label. Nodes of block b are the
// contiguous range following the blocks before it. The split takes the first
// 20% of each block for training, the next 30% for validation and the rest
// for testing.
inline std::pair<Graph, LabeledSplit> sbm_graph(const std::vector<std::size_t>& sizes,
                                                double p_in, double p_out,
                                                std::uint64_t seed) {
  if (sizes.empty()) throw std::invalid_argument("sbm_graph: no block sizes");
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0))
    throw std::invalid_argument("sbm_graph: need 0 <= p_out < p_in <= 1");

  std::size_t n = 0;
  for (std::size_t s : sizes) n += s;

  LabeledSplit split;
  split.labels.resize(n);
  split.num_classes = static_cast<int>(sizes.size());
  std::size_t off = 0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    const std::size_t sz = sizes[b];
    for (std::size_t i = 0; i < sz; ++i) split.labels[off + i] = static_cast<int>(b);
    const std::size_t ntr = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.2 * sz)));
    const std::size_t nva = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.3 * sz)));
    if (ntr + nva >= sz)
      throw std::invalid_argument("sbm_graph: block of size " + std::to_string(sz) +
                                  " too small to split");
    for (std::size_t i = 0; i < ntr; ++i) split.train.push_back(static_cast<std::uint32_t>(off + i));
    for (std::size_t i = ntr; i < ntr + nva; ++i) split.val.push_back(static_cast<std::uint32_t>(off + i));
    for (std::size_t i = ntr + nva; i < sz; ++i) split.test.push_back(static_cast<std::uint32_t>(off + i));
    off += sz;
  }

  Rng rng(mix_seed(seed, 0));
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const double p = split.labels[i] == split.labels[j] ? p_in : p_out;
      if (rng.uniform01() < p) edges.emplace_back(i, j);
    }
  return {make_graph(n, std::move(edges)), std::move(split)};
}

// Gaussian features with a unit bump on the coordinate of the node's class.
inline Matrix sbm_features(const LabeledSplit& split, std::size_t dim, double noise,
                           double signal, std::uint64_t seed) {
  const std::size_t n = split.labels.size();
  Matrix x(n, dim);
  Rng rng(mix_seed(seed, 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < dim; ++j) x(i, j) = rng.normal(0.0, noise);
  for (std::size_t i = 0; i < n; ++i)
    x(i, static_cast<std::size_t>(split.labels[i]) % dim) += signal;
  return x;
}

// L1 row normalization; zero rows are left untouched.
inline void row_normalize(Matrix& x) {
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double* r = x.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) s += std::fabs(r[j]);
    if (s > 0.0)
      for (std::size_t j = 0; j < x.cols(); ++j) r[j] /= s;
  }
}

}  // namespace spgat
