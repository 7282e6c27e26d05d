#ifndef FOREST_FAST_GREEDY_HPP
#define FOREST_FAST_GREEDY_HPP

#include <forest/errors.hpp>
#include <forest/exact_greedy.hpp>
#include <forest/forest_state.hpp>
#include <forest/graph.hpp>
#include <forest/sketch.hpp>

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace forest {

struct FastGreedyOptions {
  /// epsilon, base seed, sketch dimension and solver settings.
  SketchConfig sketch;
  /// Recompute the exact forest index along the chosen sequence when the
  /// graph fits the dense path.
  bool exact_audit = true;
  DenseOptions dense;
  /// Receives warnings about skipped edges; nullptr silences them.
  std::ostream* warnings = &std::cerr;
};

/// Greedy attack driven by sketched gains. Every round draws fresh sketches of
/// the current graph (seed derived from the base seed and the round index) and
/// deletes the edge with the largest estimate.
inline AttackResult fast_greedy_attack(const Graph& g, std::size_t k, const FastGreedyOptions& opts = {}) {
  validate(opts.sketch);
  if (k > g.edge_count())
    throw ValidationError("k = " + std::to_string(k) + " exceeds the edge count " +
                          std::to_string(g.edge_count()));
  AttackResult result;
  result.strategy = "fast";
  EdgeSet removed;
  std::vector<double> estimates;

  for (std::size_t round = 0; round < k; ++round) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<EdgeId> kept;
    auto current = std::make_shared<const Graph>(g.without_edges(removed, &kept));
    SketchConfig cfg = opts.sketch;
    cfg.seed = derive_seed(opts.sketch.seed, round);
    const SketchState sk = build_sketches(current, cfg);

    SparseMatrix shifted;
    std::size_t best = kept.size();
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kept.size(); ++i) {
      double gain;
      try {
        gain = approx_gain(sk, EdgeId{i});
      } catch (const NumericalError&) {
        try {
          if (shifted.rows() == 0)
            shifted = build_shifted_laplacian(*current);
          gain = solver_edge_gain(*current, shifted, EdgeId{i}, cfg.solver);
        } catch (const NumericalError& err) {
          if (opts.warnings)
            *opts.warnings << "warning: skipping edge (" << g.label(g.edge(kept[i]).u) << ", "
                           << g.label(g.edge(kept[i]).v) << ") in round " << round + 1 << ": "
                           << err.what() << '\n';
          continue;
        }
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best == kept.size())
      throw NumericalError("fast greedy round " + std::to_string(round + 1) + ": no edge could be scored");

    const EdgeId chosen = kept[best];
    removed.push_back(chosen);
    AttackStep step = detail::make_step(g, chosen);
    step.marginal_gain = best_gain;
    step.elapsed_ms = detail::elapsed_ms(t0);
    result.steps.push_back(step);
  }

  if (opts.exact_audit && g.node_count() <= opts.dense.max_nodes) {
    ForestState fs(g, opts.dense);
    result.initial_forest_index = forest_index(fs);
    for (auto& step : result.steps) {
      fs.delete_edge(step.edge);
      step.forest_index = forest_index(fs);
      step.cumulative_gain = step.forest_index - result.initial_forest_index;
    }
  } else {
    result.exact = false;
    result.initial_forest_index = std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    for (auto& step : result.steps) {
      sum += step.marginal_gain;
      step.cumulative_gain = sum;
      step.forest_index = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return result;
}

} // namespace forest

#endif
