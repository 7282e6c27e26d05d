#ifndef FOREST_CENTRALITY_HPP
#define FOREST_CENTRALITY_HPP

#include <forest/errors.hpp>
#include <forest/forest_state.hpp>
#include <forest/graph.hpp>
#include <forest/sketch.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace forest {

/// Edges in selection order.
using EdgeSet = std::vector<EdgeId>;

struct EdgeScoreTable {
  std::string strategy;
  std::vector<double> scores; // indexed by EdgeId::index
};

/// Relative gap below which two exact gains count as tied.
inline constexpr double kTieTolerance = 1e-12;

inline bool clearly_greater(double a, double b) {
  return a > b + kTieTolerance * std::max(std::abs(a), std::abs(b));
}

inline void check_edge_set(const Graph& g, std::span<const EdgeId> s) {
  std::unordered_set<std::size_t> seen;
  for (auto e : s) {
    if (e.index >= g.edge_count())
      throw ValidationError("edge id " + std::to_string(e.index) + " out of range");
    if (!seen.insert(e.index).second)
      throw ValidationError("edge id " + std::to_string(e.index) + " repeated in edge set");
  }
}

/// Increase of the forest index when every edge of s is deleted from the
/// state's current graph.
inline double fegc(const ForestState& base, std::span<const EdgeId> s) {
  check_edge_set(base.base_graph(), s);
  if (s.empty())
    return 0.0;
  const double before = forest_index(base);
  if (s.size() <= 3) {
    ForestState fs = base;
    for (auto e : s)
      fs.delete_edge(e);
    return forest_index(fs) - before;
  }
  std::vector<EdgeId> all = base.removed();
  all.insert(all.end(), s.begin(), s.end());
  const ForestState after(base.base_graph().without_edges(all), base.options());
  return forest_index(after) - before;
}

inline double fegc(const Graph& g, std::span<const EdgeId> s) {
  check_edge_set(g, s);
  if (s.empty())
    return 0.0;
  return fegc(ForestState(g), s);
}

enum class PairCounting {
  /// Each ordered pair (s, t), s != t, contributes; every path counts twice.
  ordered,
  /// Each unordered pair {s, t} contributes once.
  unordered
};

/// Shortest-path edge betweenness (Brandes), hop-count distances, equal-length
/// shortest paths split fractionally.
inline EdgeScoreTable edge_betweenness(const Graph& g, PairCounting counting = PairCounting::ordered) {
  const std::size_t n = g.node_count();
  std::vector<double> score(g.edge_count(), 0.0);
  std::vector<std::int64_t> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<NodeId> order;
  order.reserve(n);

  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeId x = order[head];
      for (const auto& nb : g.neighbors(x)) {
        if (dist[nb.node] < 0) {
          dist[nb.node] = dist[x] + 1;
          order.push_back(nb.node);
        }
        if (dist[nb.node] == dist[x] + 1)
          sigma[nb.node] += sigma[x];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = *it;
      for (const auto& nb : g.neighbors(w)) {
        if (dist[nb.node] == dist[w] - 1) {
          const double c = sigma[nb.node] / sigma[w] * (1.0 + delta[w]);
          score[nb.edge.index] += c;
          delta[nb.node] += c;
        }
      }
    }
  }
  // The loop above visits every unordered pair from both ends.
  if (counting == PairCounting::unordered)
    for (auto& x : score)
      x *= 0.5;
  return {counting == PairCounting::ordered ? "betweenness" : "betweenness-unordered", std::move(score)};
}

enum class DegreeMode { product, sum };

inline EdgeScoreTable degree_scores(const Graph& g, DegreeMode mode) {
  std::vector<double> score;
  score.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    const auto du = static_cast<double>(g.degree(e.u));
    const auto dv = static_cast<double>(g.degree(e.v));
    score.push_back(mode == DegreeMode::product ? du * dv : du + dv);
  }
  return {mode == DegreeMode::product ? "degprod" : "degsum", std::move(score)};
}

/// Indices of the k largest scores; ties resolved toward the lower edge id.
inline EdgeSet top_k(const EdgeScoreTable& table, std::size_t k) {
  if (k > table.scores.size())
    throw ValidationError("k = " + std::to_string(k) + " exceeds the edge count " +
                          std::to_string(table.scores.size()));
  std::vector<std::size_t> idx(table.scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return table.scores[a] > table.scores[b]; });
  EdgeSet out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    out.push_back(EdgeId{idx[i]});
  return out;
}

/// Exact single-edge gains of every edge of g.
inline EdgeScoreTable fegc_scores(const Graph& g, DenseOptions options = {}) {
  const ForestState fs(g, options);
  std::vector<double> score;
  score.reserve(g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i)
    score.push_back(single_edge_gain(fs, EdgeId{i}));
  return {"topfegc", std::move(score)};
}

/// Sketched single-edge gains. Edges whose estimate degenerates are scored by
/// a direct solve instead.
inline EdgeScoreTable approx_fegc_scores(const Graph& g, const SketchConfig& cfg) {
  const SketchState sk = build_sketches(g, cfg);
  std::vector<double> score;
  score.reserve(g.edge_count());
  SparseMatrix shifted;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    try {
      score.push_back(approx_gain(sk, EdgeId{i}));
    } catch (const NumericalError&) {
      if (shifted.rows() == 0)
        shifted = build_shifted_laplacian(g);
      score.push_back(solver_edge_gain(g, shifted, EdgeId{i}, cfg.solver));
    }
  }
  return {"topfegc-sketch", std::move(score)};
}

enum class GainScorer { exact, sketch };

/// One-shot selection of the k edges with the largest single-edge gain on the
/// original graph.
inline EdgeSet top_k_fegc(const Graph& g, std::size_t k, GainScorer scorer = GainScorer::exact,
                          const SketchConfig& sketch = {}) {
  if (k > g.edge_count())
    throw ValidationError("k exceeds the edge count");
  if (k == 0)
    return {};
  return top_k(scorer == GainScorer::exact ? fegc_scores(g) : approx_fegc_scores(g, sketch), k);
}

/// k distinct edges drawn uniformly, reproducible from the seed.
inline EdgeSet random_attack(const Graph& g, std::size_t k, std::uint64_t seed) {
  const std::size_t m = g.edge_count();
  if (k > m)
    throw ValidationError("k exceeds the edge count");
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  EdgeSet out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    // Partial Fisher-Yates with unbiased bounded draws.
    const std::uint64_t range = m - i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(idx[i], idx[i + static_cast<std::size_t>(r % range)]);
    out.push_back(EdgeId{idx[i]});
  }
  return out;
}

} // namespace forest

#endif
