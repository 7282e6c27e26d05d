#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace forest;
using namespace forest::testing;

namespace {

Graph single_edge(double w = 1.0) {
  Graph g(2);
  g.add_edge(0, 1, w);
  return g;
}

double rel_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / b.norm();
}

} // namespace

TEST(ForestState, SingleEdgeForestMatrix) {
  const ForestState fs(single_edge());
  Eigen::Matrix2d expected;
  expected << 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0;
  EXPECT_TRUE(fs.omega().isApprox(expected, 1e-14));
  EXPECT_NEAR(fs.trace(), 4.0 / 3.0, 1e-14);
}

TEST(ForestState, EmptyGraphIsIdentity) {
  const ForestState fs(Graph(6));
  EXPECT_EQ(fs.omega(), Eigen::MatrixXd::Identity(6, 6));
  EXPECT_DOUBLE_EQ(forest_index(fs), 30.0);
}

TEST(ForestState, RingIsDoublyStochasticAndPositiveDefinite) {
  Graph ring(9);
  for (NodeId i = 0; i < 9; ++i)
    ring.add_edge(i, (i + 1) % 9);
  const ForestState fs(ring);
  EXPECT_LE((fs.omega().rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-8);
  EXPECT_LE((fs.omega().colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-8);
  EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(fs.omega()).info(), Eigen::Success);
}

TEST(ForestState, DenseLimitRaisesCapacityError) {
  DenseOptions small;
  small.max_nodes = 10;
  EXPECT_THROW(ForestState(Graph(11), small), CapacityError);
  EXPECT_NO_THROW(ForestState(Graph(10), small));
}

TEST(ForestDistance, Examples) {
  const ForestState fs(single_edge());
  EXPECT_EQ(forest_distance(fs, 1, 1), 0.0);
  EXPECT_NEAR(forest_distance(fs, 0, 1), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(forest_distance(fs, 1, 0), 2.0 / 3.0, 1e-14);
  const ForestState isolated(Graph(3));
  EXPECT_DOUBLE_EQ(forest_distance(isolated, 0, 2), 2.0);
}

TEST(ForestIndex, CompleteAndEmptyGraphs) {
  EXPECT_NEAR(forest_index(ForestState(complete_graph(4))), 2.4, 1e-12);
  for (std::size_t n = 2; n <= 10; ++n) {
    const double dn = static_cast<double>(n);
    EXPECT_NEAR(forest_index(ForestState(complete_graph(n))), dn * (dn - 1) / (dn + 1), 1e-10);
    EXPECT_NEAR(forest_index(ForestState(Graph(n))), dn * (dn - 1), 1e-10);
  }
  EXPECT_NEAR(forest_index(ForestState(single_edge())), 2.0 / 3.0, 1e-14);
}

TEST(ForestIndex, MatchesSpectrumAndBounds) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = random_graph(4 + trial % 15, 0.3, rng, true);
    const ForestState fs(g);
    const double rho = forest_index(fs);
    EXPECT_NEAR(rho, spectral_forest_index(g), 1e-8 * rho);
    const double n = static_cast<double>(g.node_count());
    EXPECT_GE(rho, n * (n - 1) / (n + 1) - 1e-9);
    EXPECT_LE(rho, n * (n - 1) + 1e-9);
    EXPECT_NEAR(fs.trace(), fs.omega().diagonal().sum(), 1e-10);
  }
}

TEST(ForestState, Properties) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const Graph g = random_graph(10, 0.25, rng, trial % 2 == 1);
    const ForestState fs(g);
    const auto& w = fs.omega();
    const auto n = w.rows();
    EXPECT_TRUE(w.isApprox(w.transpose()));
    EXPECT_GE(w.minCoeff(), -1e-14);
    EXPECT_LE((w.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-8);
    // omega_ij + omega_ik - omega_jk <= omega_ii
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
          EXPECT_LE(w(i, j) + w(i, k) - w(j, k), w(i, i) + 1e-12);
    // Zero exactly across components.
    const auto comp = component_labels(g);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (comp[i] != comp[j]) {
          EXPECT_LE(std::abs(w(i, j)), 1e-10);
        }
  }
}

TEST(DeleteEdgeUpdate, SingleEdgeBecomesEmpty) {
  for (double w : {1.0, 5.0}) {
    const ForestState fs(single_edge(w));
    const ForestState after = delete_edge_update(fs, EdgeId{0});
    EXPECT_TRUE(after.omega().isApprox(Eigen::Matrix2d::Identity(), 1e-12));
    EXPECT_NEAR(forest_index(after), 2.0, 1e-12);
    EXPECT_FALSE(after.contains(EdgeId{0}));
    EXPECT_TRUE(fs.contains(EdgeId{0}));
  }
}

TEST(DeleteEdgeUpdate, TriangleMatchesRecompute) {
  const Graph tri = complete_graph(3);
  const ForestState fs(tri);
  for (std::size_t i = 0; i < 3; ++i) {
    const ForestState after = delete_edge_update(fs, EdgeId{i});
    const std::vector<EdgeId> drop{EdgeId{i}};
    const ForestState fresh(tri.without_edges(drop));
    EXPECT_LE(rel_frobenius(after.omega(), fresh.omega()), 1e-10);
    EXPECT_NEAR(after.trace(), fresh.trace(), 1e-12);
  }
}

TEST(DeleteEdgeUpdate, RandomGraphsMatchRecompute) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + trial % 48;
    const Graph g = random_connected_graph(n, n + trial % 40, rng, trial % 3 == 0);
    std::uniform_int_distribution<std::size_t> pick(0, g.edge_count() - 1);
    const EdgeId e{pick(rng)};
    const ForestState after = delete_edge_update(ForestState(g), e);
    const std::vector<EdgeId> drop{e};
    const ForestState fresh(g.without_edges(drop));
    EXPECT_LE(rel_frobenius(after.omega(), fresh.omega()), 1e-8);
  }
}

TEST(DeleteEdgeUpdate, LongSequencesStayAccurate) {
  std::mt19937_64 rng(29);
  const Graph g = random_connected_graph(40, 160, rng, true);
  ForestState fs(g);
  std::vector<EdgeId> order;
  for (std::size_t i = 0; i < g.edge_count(); ++i)
    order.push_back(EdgeId{i});
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(120); // crosses two refactorizations
  for (auto e : order)
    fs.delete_edge(e);
  const ForestState fresh(g.without_edges(order));
  EXPECT_LE(rel_frobenius(fs.omega(), fresh.omega()), 1e-8);
  EXPECT_NEAR(fs.trace(), fresh.trace(), 1e-8);
  EXPECT_EQ(fs.remaining_edge_count(), g.edge_count() - 120);
}

TEST(DeleteEdgeUpdate, BridgeDisconnects) {
  const Graph g = barbell(4);
  const EdgeId bridge = *g.find_edge(3, 4);
  const ForestState after = delete_edge_update(ForestState(g), bridge);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 4; j < 8; ++j)
      EXPECT_LE(std::abs(after.omega()(i, j)), 1e-10);
}

TEST(DeleteEdgeUpdate, Errors) {
  ForestState fs(single_edge());
  fs.delete_edge(EdgeId{0});
  EXPECT_THROW(fs.delete_edge(EdgeId{0}), ValidationError);
  EXPECT_THROW(fs.delete_edge(EdgeId{4}), ValidationError);

  // A threshold above every attainable denominator forces the guard.
  DenseOptions strict;
  strict.degeneracy_threshold = 1.0;
  ForestState guarded(complete_graph(3), strict);
  const Eigen::MatrixXd before = guarded.omega();
  EXPECT_THROW(guarded.delete_edge(EdgeId{0}), NumericalError);
  EXPECT_THROW(single_edge_gain(guarded, EdgeId{0}), NumericalError);
  EXPECT_EQ(guarded.omega(), before);
  EXPECT_TRUE(guarded.contains(EdgeId{0}));
}

TEST(SingleEdgeGain, SingleEdge) {
  EXPECT_NEAR(single_edge_gain(ForestState(single_edge()), EdgeId{0}), 4.0 / 3.0, 1e-13);
}

TEST(SingleEdgeGain, FourNodeGraphHasGainTwoPointTwo) {
  const ForestState fs(four_node_graph());
  bool found = false;
  for (std::size_t i = 0; i < 4; ++i)
    found = found || std::abs(single_edge_gain(fs, EdgeId{i}) - 2.2) < 5e-5;
  EXPECT_TRUE(found);
}

TEST(SingleEdgeGain, PositiveAndEqualToForestIndexIncrease) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = random_graph(9, 0.4, rng, true);
    const ForestState fs(g);
    const double rho = forest_index(fs);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      const double gain = single_edge_gain(fs, EdgeId{i});
      EXPECT_GT(gain, 0.0);
      const std::vector<EdgeId> drop{EdgeId{i}};
      const double direct = lu_forest_index(g.without_edges(drop)) - rho;
      EXPECT_NEAR(gain, direct, 1e-9 * std::max(1.0, direct));
    }
  }
}
