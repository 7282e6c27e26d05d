#ifndef FOREST_EXACT_GREEDY_HPP
#define FOREST_EXACT_GREEDY_HPP

#include <forest/centrality.hpp>
#include <forest/errors.hpp>
#include <forest/forest_state.hpp>
#include <forest/graph.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace forest {

struct AttackStep {
  EdgeId edge;
  NodeId u = 0;
  NodeId v = 0;
  double weight = 0.0;
  /// Score that selected the edge: the exact gain for exact methods, the
  /// sketched estimate for the fast greedy.
  double marginal_gain = 0.0;
  double cumulative_gain = 0.0;
  double forest_index = 0.0;
  double elapsed_ms = 0.0;
};

/// Ordered edge deletions with their effect on the forest index.
struct AttackResult {
  std::string strategy;
  double initial_forest_index = 0.0;
  /// False when cumulative_gain / forest_index are sums of estimates rather
  /// than exact recomputations.
  bool exact = true;
  std::vector<AttackStep> steps;

  EdgeSet edges() const {
    EdgeSet out;
    out.reserve(steps.size());
    for (const auto& s : steps)
      out.push_back(s.edge);
    return out;
  }

  double total_gain() const { return steps.empty() ? 0.0 : steps.back().cumulative_gain; }
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

inline AttackStep make_step(const Graph& g, EdgeId e) {
  const Edge& ed = g.edge(e);
  AttackStep s;
  s.edge = e;
  s.u = ed.u;
  s.v = ed.v;
  s.weight = ed.weight;
  return s;
}

} // namespace detail

/// Exact per-step evaluation of a fixed deletion order.
inline AttackResult evaluate_sequence(const Graph& g, std::span<const EdgeId> order, std::string strategy,
                                      DenseOptions options = {}) {
  check_edge_set(g, order);
  ForestState fs(g, options);
  AttackResult result;
  result.strategy = std::move(strategy);
  result.initial_forest_index = forest_index(fs);
  for (auto e : order) {
    const auto t0 = std::chrono::steady_clock::now();
    AttackStep step = detail::make_step(g, e);
    step.marginal_gain = single_edge_gain(fs, e);
    fs.delete_edge(e);
    step.forest_index = forest_index(fs);
    step.cumulative_gain = step.forest_index - result.initial_forest_index;
    step.elapsed_ms = detail::elapsed_ms(t0);
    result.steps.push_back(step);
  }
  return result;
}

/// Exact increase of the forest index after deleting `edges`, by one dense
/// factorization of the remaining graph.
inline double exact_delta(const Graph& g, std::span<const EdgeId> edges, DenseOptions options = {}) {
  check_edge_set(g, edges);
  const double before = forest_index(ForestState(g, options));
  if (edges.empty())
    return 0.0;
  return forest_index(ForestState(g.without_edges(edges), options)) - before;
}

namespace detail {

struct Pick {
  EdgeId edge;
  double gain = -std::numeric_limits<double>::infinity();
};

// Scores every surviving edge against the frozen state; lowest id wins ties.
inline Pick best_exact_edge(const ForestState& fs) {
  Pick best;
  bool found = false;
  const std::size_t m = fs.base_graph().edge_count();
  for (std::size_t i = 0; i < m; ++i) {
    const EdgeId e{i};
    if (!fs.contains(e))
      continue;
    const double gain = single_edge_gain(fs, e);
    if (!found || clearly_greater(gain, best.gain)) {
      best = {e, gain};
      found = true;
    }
  }
  return best;
}

} // namespace detail

/// Greedy k-edge attack with exact gains and Sherman-Morrison updates.
inline AttackResult greedy_attack(const Graph& g, std::size_t k, DenseOptions options = {}) {
  if (k > g.edge_count())
    throw ValidationError("k = " + std::to_string(k) + " exceeds the edge count " +
                          std::to_string(g.edge_count()));
  ForestState fs(g, options);
  AttackResult result;
  result.strategy = "greedy";
  result.initial_forest_index = forest_index(fs);

  for (std::size_t round = 0; round < k; ++round) {
    const auto t0 = std::chrono::steady_clock::now();
    detail::Pick pick;
    for (int attempt = 0;; ++attempt) {
      try {
        pick = detail::best_exact_edge(fs);
        fs.delete_edge(pick.edge);
        break;
      } catch (const NumericalError& err) {
        if (attempt > 0)
          throw NumericalError("greedy round " + std::to_string(round + 1) +
                               " failed after refactorization: " + err.what());
        fs.recompute();
      }
    }
    AttackStep step = detail::make_step(g, pick.edge);
    step.marginal_gain = pick.gain;
    step.forest_index = forest_index(fs);
    step.cumulative_gain = step.forest_index - result.initial_forest_index;
    step.elapsed_ms = detail::elapsed_ms(t0);
    result.steps.push_back(step);
  }
  return result;
}

} // namespace forest

#endif
