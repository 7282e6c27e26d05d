#ifndef FOREST_ORACLE_HPP
#define FOREST_ORACLE_HPP

// Brute-force references. Nothing here reuses the Cholesky / Sherman-Morrison
// or Brandes code paths it is meant to check.

#include <forest/centrality.hpp>
#include <forest/errors.hpp>
#include <forest/graph.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace forest {

namespace detail {

inline Eigen::MatrixXd dense_forest_matrix_lu(const Graph& g, const std::vector<char>& keep) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (!keep[i])
      continue;
    const Edge& e = g.edges()[i];
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    m(u, u) += e.weight;
    m(v, v) += e.weight;
    m(u, v) -= e.weight;
    m(v, u) -= e.weight;
  }
  return m.fullPivLu().inverse();
}

inline double pairwise_sum(const Eigen::MatrixXd& omega) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < omega.rows(); ++i)
    for (Eigen::Index j = i + 1; j < omega.cols(); ++j)
      total += omega(i, i) + omega(j, j) - 2.0 * omega(i, j);
  return total;
}

} // namespace detail

inline constexpr std::size_t kNaiveForestIndexLimit = 500;

/// Forest index as the explicit sum of pairwise forest distances of an
/// LU-inverted I + L.
inline double naive_forest_index(const Graph& g) {
  if (g.node_count() > kNaiveForestIndexLimit)
    throw CapacityError("naive forest index is limited to " + std::to_string(kNaiveForestIndexLimit) + " nodes");
  return detail::pairwise_sum(detail::dense_forest_matrix_lu(g, std::vector<char>(g.edge_count(), 1)));
}

struct OptimumResult {
  EdgeSet edges;
  double gain = 0.0;
  std::size_t subsets_evaluated = 0;
};

inline constexpr double kDefaultSubsetBudget = 2e6;

/// Number of k-subsets of an m-set, as a double.
inline double binomial(std::size_t m, std::size_t k) {
  if (k > m)
    return 0.0;
  k = std::min(k, m - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    r = r * static_cast<double>(m - k + i) / static_cast<double>(i);
  return std::round(r);
}

/// Exhaustive search for the k-edge set with the largest forest-index gain.
/// Ties go to the lexicographically smallest index tuple.
inline OptimumResult optimum_attack(const Graph& g, std::size_t k, double budget = kDefaultSubsetBudget) {
  const std::size_t m = g.edge_count();
  if (k > m)
    throw ValidationError("k exceeds the edge count");
  const double count = binomial(m, k);
  if (count > budget)
    throw CapacityError("optimum search needs " + std::to_string(static_cast<long double>(count)) +
                        " subsets, above the budget of " + std::to_string(static_cast<long double>(budget)));

  const double base = detail::pairwise_sum(detail::dense_forest_matrix_lu(g, std::vector<char>(m, 1)));
  OptimumResult best;
  best.gain = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i)
    idx[i] = i;
  std::vector<char> keep(m);
  while (true) {
    std::fill(keep.begin(), keep.end(), 1);
    for (auto i : idx)
      keep[i] = 0;
    const double gain = detail::pairwise_sum(detail::dense_forest_matrix_lu(g, keep)) - base;
    ++best.subsets_evaluated;
    if (best.subsets_evaluated == 1 || clearly_greater(gain, best.gain)) {
      best.gain = gain;
      best.edges.clear();
      for (auto i : idx)
        best.edges.push_back(EdgeId{i});
    }
    // Next combination in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == m - k + pos - 1)
      --pos;
    if (pos == 0)
      break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j)
      idx[j] = idx[j - 1] + 1;
  }
  if (k == 0)
    best.gain = 0.0;
  return best;
}

/// Edge betweenness by listing every shortest path of every node pair
/// explicitly. Exponential in the worst case; meant for graphs with a handful
/// of nodes.
inline EdgeScoreTable exhaustive_edge_betweenness(const Graph& g, PairCounting counting = PairCounting::ordered) {
  const std::size_t n = g.node_count();
  std::vector<double> score(g.edge_count(), 0.0);

  // All-pairs hop distances by Floyd-Warshall.
  const std::size_t inf = std::numeric_limits<std::size_t>::max() / 4;
  std::vector<std::vector<std::size_t>> dist(n, std::vector<std::size_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i)
    dist[i][i] = 0;
  for (const auto& e : g.edges())
    dist[e.u][e.v] = dist[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);

  std::vector<std::vector<EdgeId>> paths;
  std::vector<EdgeId> stack;
  auto walk = [&](auto&& self, NodeId at, NodeId target) -> void {
    if (at == target) {
      paths.push_back(stack);
      return;
    }
    for (const auto& nb : g.neighbors(at)) {
      if (dist[nb.node][target] + 1 == dist[at][target]) {
        stack.push_back(nb.edge);
        self(self, nb.node, target);
        stack.pop_back();
      }
    }
  };

  for (NodeId s = 0; s < n; ++s) {
    for (NodeId t = s + 1; t < n; ++t) {
      if (dist[s][t] >= inf)
        continue;
      paths.clear();
      walk(walk, s, t);
      const double share = 1.0 / static_cast<double>(paths.size());
      for (const auto& p : paths)
        for (auto e : p)
          score[e.index] += share;
    }
  }
  if (counting == PairCounting::ordered)
    for (auto& x : score)
      x *= 2.0;
  return {"betweenness-exhaustive", std::move(score)};
}

} // namespace forest

#endif
