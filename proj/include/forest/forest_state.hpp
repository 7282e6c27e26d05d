#ifndef FOREST_FOREST_STATE_HPP
#define FOREST_FOREST_STATE_HPP

#include <forest/errors.hpp>
#include <forest/graph.hpp>

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace forest {

inline constexpr std::size_t kDefaultDenseLimit = 20000;

struct DenseOptions {
  /// Largest node count accepted by the dense path.
  std::size_t max_nodes = kDefaultDenseLimit;
  /// Rank-1 updates applied before the forest matrix is refactorized.
  std::size_t recompute_interval = 50;
  /// Smallest admissible Sherman-Morrison denominator 1 - w_e * rho_e.
  double degeneracy_threshold = 1e-12;
};

/// Dense forest matrix (I + L)^{-1} of the CURRENT graph, which is a base
/// graph minus the edges deleted so far. Edge ids always refer to the base
/// graph.
class ForestState {
public:
  explicit ForestState(const Graph& g, DenseOptions options = {})
      : ForestState(std::make_shared<const Graph>(g), options) {}

  explicit ForestState(std::shared_ptr<const Graph> g, DenseOptions options = {})
      : graph_(std::move(g)), options_(options), alive_(graph_->edge_count(), 1) {
    if (graph_->node_count() > options_.max_nodes)
      throw CapacityError("graph has " + std::to_string(graph_->node_count()) +
                          " nodes, above the dense limit of " + std::to_string(options_.max_nodes) +
                          "; use the sketch-based path");
    recompute();
  }

  const Eigen::MatrixXd& omega() const noexcept { return omega_; }
  double trace() const noexcept { return trace_; }
  std::size_t node_count() const noexcept { return graph_->node_count(); }

  const Graph& base_graph() const noexcept { return *graph_; }
  std::shared_ptr<const Graph> base_graph_ptr() const noexcept { return graph_; }
  const DenseOptions& options() const noexcept { return options_; }

  bool contains(EdgeId e) const { return alive_.at(e.index) != 0; }
  const std::vector<EdgeId>& removed() const noexcept { return removed_; }
  std::size_t remaining_edge_count() const noexcept { return graph_->edge_count() - removed_.size(); }

  /// Ids of surviving edges, ascending.
  std::vector<EdgeId> remaining_edges() const {
    std::vector<EdgeId> out;
    out.reserve(remaining_edge_count());
    for (std::size_t i = 0; i < alive_.size(); ++i)
      if (alive_[i])
        out.push_back(EdgeId{i});
    return out;
  }

  /// The current graph as a standalone object (edge ids are renumbered).
  Graph current_graph() const { return graph_->without_edges(removed_); }

  /// Omega * b_e for the edge's fixed orientation.
  Eigen::VectorXd omega_times_incidence(EdgeId e) const {
    const Edge& ed = graph_->edge(e);
    return omega_.col(static_cast<Eigen::Index>(ed.u)) - omega_.col(static_cast<Eigen::Index>(ed.v));
  }

  /// Deletes a surviving edge via the Sherman-Morrison rank-1 correction.
  /// Throws NumericalError if the denominator has collapsed; the state is left
  /// unchanged in that case.
  void delete_edge(EdgeId e) {
    require_alive(e);
    const Edge& ed = graph_->edge(e);
    const Eigen::VectorXd z = omega_times_incidence(e);
    const double rho = z(static_cast<Eigen::Index>(ed.u)) - z(static_cast<Eigen::Index>(ed.v));
    const double denom = 1.0 - ed.weight * rho;
    if (!(denom > options_.degeneracy_threshold))
      throw NumericalError("Sherman-Morrison denominator " + std::to_string(denom) +
                           " for edge (" + graph_->label(ed.u) + ", " + graph_->label(ed.v) +
                           "); recompute the forest matrix");
    const double scale = ed.weight / denom;
    omega_.noalias() += scale * z * z.transpose();
    trace_ += scale * z.squaredNorm();
    alive_[e.index] = 0;
    removed_.push_back(e);
    if (++updates_since_factorization_ >= options_.recompute_interval)
      recompute();
  }

  /// Value-semantics variant of delete_edge().
  ForestState without_edge(EdgeId e) const {
    ForestState next = *this;
    next.delete_edge(e);
    return next;
  }

  /// Refactorizes I + L of the current graph from scratch.
  void recompute() {
    const auto n = static_cast<Eigen::Index>(graph_->node_count());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < alive_.size(); ++i) {
      if (!alive_[i])
        continue;
      const Edge& e = graph_->edges()[i];
      const auto u = static_cast<Eigen::Index>(e.u);
      const auto v = static_cast<Eigen::Index>(e.v);
      m(u, u) += e.weight;
      m(v, v) += e.weight;
      m(u, v) -= e.weight;
      m(v, u) -= e.weight;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
      throw NumericalError("Cholesky factorization of I + L failed");
    omega_ = llt.solve(Eigen::MatrixXd::Identity(n, n));
    omega_ = 0.5 * (omega_ + omega_.transpose()).eval();
    trace_ = omega_.trace();
    updates_since_factorization_ = 0;
  }

private:
  void require_alive(EdgeId e) const {
    if (e.index >= alive_.size())
      throw ValidationError("edge id " + std::to_string(e.index) + " out of range");
    if (!alive_[e.index])
      throw ValidationError("edge id " + std::to_string(e.index) + " already deleted");
  }

  std::shared_ptr<const Graph> graph_;
  DenseOptions options_;
  std::vector<char> alive_;
  std::vector<EdgeId> removed_;
  Eigen::MatrixXd omega_;
  double trace_ = 0.0;
  std::size_t updates_since_factorization_ = 0;
};

inline ForestState compute_forest_state(const Graph& g, DenseOptions options = {}) {
  return ForestState(g, options);
}

inline ForestState delete_edge_update(const ForestState& fs, EdgeId e) {
  return fs.without_edge(e);
}

/// rho_ij = omega_ii + omega_jj - 2 omega_ij.
inline double forest_distance(const ForestState& fs, NodeId i, NodeId j) {
  if (i >= fs.node_count() || j >= fs.node_count())
    throw ValidationError("node id out of range");
  if (i == j)
    return 0.0;
  const auto& w = fs.omega();
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  return w(a, a) + w(b, b) - 2.0 * w(a, b);
}

/// Sum of forest distances over unordered node pairs, n tr(Omega) - n.
inline double forest_index(const ForestState& fs) {
  const auto n = static_cast<double>(fs.node_count());
  return n * fs.trace() - n;
}

/// Exact forest-index increase from deleting one surviving edge:
/// n w ||Omega b||^2 / (1 - w rho_e).
inline double single_edge_gain(const ForestState& fs, EdgeId e) {
  if (!fs.contains(e))
    throw ValidationError("edge id " + std::to_string(e.index) + " already deleted");
  const Edge& ed = fs.base_graph().edge(e);
  const auto u = static_cast<Eigen::Index>(ed.u);
  const auto v = static_cast<Eigen::Index>(ed.v);
  const auto& w = fs.omega();
  const double rho = w(u, u) + w(v, v) - 2.0 * w(u, v);
  const double denom = 1.0 - ed.weight * rho;
  if (!(denom > fs.options().degeneracy_threshold))
    throw NumericalError("Sherman-Morrison denominator " + std::to_string(denom) +
                         " while scoring edge (" + fs.base_graph().label(ed.u) + ", " +
                         fs.base_graph().label(ed.v) + ")");
  const double numer = (w.col(u) - w.col(v)).squaredNorm();
  return static_cast<double>(fs.node_count()) * ed.weight * numer / denom;
}

} // namespace forest

#endif
