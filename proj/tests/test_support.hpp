#ifndef FOREST_TEST_SUPPORT_HPP
#define FOREST_TEST_SUPPORT_HPP

// Graph generators and independent dense references shared by the suites.

#include <forest/forest.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace forest::testing {

/// The 4-node graph with Laplacian rows (3,-1,-1,-1), (-1,2,-1,0),
/// (-1,-1,2,0), (-1,0,0,1): a triangle 0-1-2 with a pendant node 3 on 0.
inline Graph four_node_graph() {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  g.add_edge(1, 2);
  return g;
}

/// Unit cycle 0-1-...-(n-1)-0 with an extra chord (0, chord_end).
inline Graph ring_with_chord(std::size_t n, NodeId chord_end) {
  Graph g(n);
  for (NodeId i = 0; i < n; ++i)
    g.add_edge(i, (i + 1) % n);
  g.add_edge(0, chord_end);
  return g;
}

inline Graph complete_graph(std::size_t n, double w = 1.0) {
  Graph g(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      g.add_edge(i, j, w);
  return g;
}

inline Graph path_graph(std::size_t n) {
  Graph g(n);
  for (NodeId i = 0; i + 1 < n; ++i)
    g.add_edge(i, i + 1);
  return g;
}

/// Two cliques of size `side` joined by a single bridge (side-1, side).
inline Graph barbell(std::size_t side) {
  Graph g(2 * side);
  for (NodeId i = 0; i < side; ++i)
    for (NodeId j = i + 1; j < side; ++j) {
      g.add_edge(i, j);
      g.add_edge(side + i, side + j);
    }
  g.add_edge(side - 1, side);
  return g;
}

/// Random connected graph: a random spanning tree plus extra distinct edges
/// until m edges exist (m is clamped to n(n-1)/2). Weights are 1 unless
/// `weighted`, then uniform in [0.5, 3].
inline Graph random_connected_graph(std::size_t n, std::size_t m, std::mt19937_64& rng, bool weighted = false) {
  m = std::min(m, n * (n - 1) / 2);
  m = std::max(m, n - 1);
  std::uniform_real_distribution<double> wdist(0.5, 3.0);
  auto weight = [&] { return weighted ? wdist(rng) : 1.0; };
  Graph g(n);
  std::vector<NodeId> perm(n);
  for (NodeId i = 0; i < n; ++i)
    perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    g.add_edge(perm[i], perm[pick(rng)], weight());
  }
  std::uniform_int_distribution<NodeId> node(0, n - 1);
  while (g.edge_count() < m) {
    const NodeId a = node(rng), b = node(rng);
    if (a != b && !g.find_edge(a, b))
      g.add_edge(a, b, weight());
  }
  return g;
}

/// Erdos-Renyi G(n, p); may be disconnected.
inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng, bool weighted = false) {
  std::bernoulli_distribution coin(p);
  std::uniform_real_distribution<double> wdist(0.5, 3.0);
  Graph g(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (coin(rng))
        g.add_edge(i, j, weighted ? wdist(rng) : 1.0);
  return g;
}

inline Eigen::MatrixXd dense_laplacian(const Graph& g) {
  return Eigen::MatrixXd(build_laplacian(g));
}

/// Forest index from the Laplacian spectrum: n * sum_i 1 / (1 + lambda_i) - n.
inline double spectral_forest_index(const Graph& g) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_laplacian(g));
  const double n = static_cast<double>(g.node_count());
  return n * (1.0 / (1.0 + es.eigenvalues().array())).sum() - n;
}

/// Forest matrix by explicit LU inversion, independent of ForestState.
inline Eigen::MatrixXd lu_forest_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  return (Eigen::MatrixXd::Identity(n, n) + dense_laplacian(g)).fullPivLu().inverse();
}

inline double lu_forest_index(const Graph& g) {
  return static_cast<double>(g.node_count()) * (lu_forest_matrix(g).trace() - 1.0);
}

} // namespace forest::testing

#endif
