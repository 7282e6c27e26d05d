#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace forest;
using namespace forest::testing;

TEST(GreedyAttack, ZeroBudget) {
  const AttackResult r = greedy_attack(four_node_graph(), 0);
  EXPECT_TRUE(r.steps.empty());
  EXPECT_EQ(r.total_gain(), 0.0);
  EXPECT_NEAR(r.initial_forest_index, lu_forest_index(four_node_graph()), 1e-12);
}

TEST(GreedyAttack, DeletingEverythingReachesTheEmptyGraphBound) {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_connected_graph(6 + trial, 10 + 2 * trial, rng, trial % 2 == 0);
    const AttackResult r = greedy_attack(g, g.edge_count());
    const double n = static_cast<double>(g.node_count());
    EXPECT_NEAR(r.steps.back().forest_index, n * (n - 1), 1e-8 * n * n);
    EXPECT_NEAR(r.total_gain(), n * (n - 1) - lu_forest_index(g), 1e-8 * n * n);
  }
}

TEST(GreedyAttack, FirstPickIsTheBruteForceMaximum) {
  const Graph g = four_node_graph();
  const double rho = lu_forest_index(g);
  double best = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::vector<EdgeId> drop{EdgeId{i}};
    best = std::max(best, lu_forest_index(g.without_edges(drop)) - rho);
  }
  const AttackResult r = greedy_attack(g, 1);
  EXPECT_NEAR(r.steps[0].marginal_gain, best, 1e-10);
  EXPECT_NEAR(best, 2.2, 5e-5);
}

TEST(GreedyAttack, ResultInvariants) {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_connected_graph(12, 24, rng, true);
    const AttackResult r = greedy_attack(g, 8);
    ASSERT_EQ(r.steps.size(), 8u);
    double prev = 0.0, sum = 0.0;
    for (const auto& s : r.steps) {
      EXPECT_GT(s.cumulative_gain, prev);
      prev = s.cumulative_gain;
      sum += s.marginal_gain;
      EXPECT_NEAR(s.forest_index, r.initial_forest_index + s.cumulative_gain, 1e-6 * s.forest_index);
    }
    const EdgeSet chosen = r.edges();
    EXPECT_NEAR(sum, fegc(g, chosen), 1e-6 * sum);
    EXPECT_NEAR(r.total_gain(), lu_forest_index(g.without_edges(chosen)) - lu_forest_index(g), 1e-8 * sum);
  }
}

TEST(GreedyAttack, EachPickBeatsOtherEdgesByDirectRecompute) {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 8; ++trial) {
    const Graph g = random_connected_graph(10, 30, rng, true);
    const AttackResult r = greedy_attack(g, 4);
    EdgeSet removed;
    for (const auto& step : r.steps) {
      const Graph current = g.without_edges(removed);
      const double base = lu_forest_index(current);
      std::vector<EdgeId> kept;
      g.without_edges(removed, &kept);
      std::vector<EdgeId> sample = kept;
      std::shuffle(sample.begin(), sample.end(), rng);
      sample.resize(std::min<std::size_t>(20, sample.size()));
      // Gains in the current graph, with ids mapped from the original.
      auto local = [&](EdgeId original) {
        const auto it = std::find(kept.begin(), kept.end(), original);
        const std::vector<EdgeId> drop{EdgeId{static_cast<std::size_t>(it - kept.begin())}};
        return lu_forest_index(current.without_edges(drop)) - base;
      };
      const double picked = local(step.edge);
      EXPECT_NEAR(picked, step.marginal_gain, 1e-8 * picked);
      for (auto e : sample)
        EXPECT_GE(picked, local(e) - 1e-9);
      removed.push_back(step.edge);
    }
  }
}

TEST(GreedyAttack, TiesGoToTheLowestEdge) {
  // Every edge of a cycle has the same gain.
  Graph ring(7);
  for (NodeId i = 0; i < 7; ++i)
    ring.add_edge(i, (i + 1) % 7);
  EXPECT_EQ(greedy_attack(ring, 1).steps[0].edge, EdgeId{0});
}

TEST(GreedyAttack, Errors) {
  EXPECT_THROW(greedy_attack(four_node_graph(), 5), ValidationError);
  DenseOptions small;
  small.max_nodes = 3;
  EXPECT_THROW(greedy_attack(four_node_graph(), 1, small), CapacityError);
}

TEST(EvaluateSequence, MatchesExactDelta) {
  std::mt19937_64 rng(127);
  const Graph g = random_connected_graph(15, 40, rng, true);
  const EdgeSet order = random_attack(g, 10, 5);
  const AttackResult r = evaluate_sequence(g, order, "random");
  EXPECT_EQ(r.edges(), order);
  EXPECT_NEAR(r.total_gain(), exact_delta(g, order), 1e-8 * r.total_gain());
  EXPECT_EQ(exact_delta(g, EdgeSet{}), 0.0);
  const EdgeSet repeated{EdgeId{1}, EdgeId{1}};
  EXPECT_THROW(evaluate_sequence(g, repeated, "x"), ValidationError);
}

TEST(GreedyAttack, NotWorseThanBaselinesOnSmallGraphs) {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_connected_graph(9, 14, rng);
    const std::size_t k = 3;
    const OptimumResult best = optimum_attack(g, k);
    const double greedy = greedy_attack(g, k).total_gain();
    EXPECT_LE(greedy, best.gain + 1e-9);
    for (const EdgeSet& s : {top_k(edge_betweenness(g), k), top_k(degree_scores(g, DegreeMode::sum), k),
                             random_attack(g, k, 1)})
      EXPECT_LE(exact_delta(g, s), best.gain + 1e-9);
  }
}
