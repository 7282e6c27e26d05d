#ifndef FOREST_SKETCH_HPP
#define FOREST_SKETCH_HPP

#include <forest/errors.hpp>
#include <forest/graph.hpp>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>

namespace forest {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Preconditioner { none, diagonal, incomplete_factor };

struct SolverConfig {
  /// Target relative residual ||(I+L) y - b|| / ||b||.
  double rel_tolerance = 1e-8;
  std::size_t max_iterations = 10000;
  Preconditioner preconditioner = Preconditioner::diagonal;
  /// Right-hand sides iterated together in one sparse-times-dense sweep.
  std::size_t block_size = 64;
};

inline void validate(const SolverConfig& cfg) {
  if (!(cfg.rel_tolerance > 0.0 && cfg.rel_tolerance < 1.0))
    throw ValidationError("solver tolerance must lie in (0, 1)");
  if (cfg.max_iterations < 1)
    throw ValidationError("solver needs at least one iteration");
  if (cfg.block_size < 1)
    throw ValidationError("solver block size must be positive");
}

struct SolveReport {
  std::size_t iterations = 0;
  double max_relative_residual = 0.0;
};

namespace detail {

// Applies z = M^{-1} r column by column for the configured preconditioner.
class PreconditionerOp {
public:
  PreconditionerOp(const SparseMatrix& a, Preconditioner kind) : kind_(kind) {
    if (kind_ == Preconditioner::diagonal) {
      inv_diag_ = a.diagonal().cwiseInverse();
    } else if (kind_ == Preconditioner::incomplete_factor) {
      ichol_.compute(a);
      if (ichol_.info() != Eigen::Success)
        throw NumericalError("incomplete Cholesky factorization failed");
    }
  }

  void apply(const Eigen::MatrixXd& r, Eigen::MatrixXd& z) const {
    switch (kind_) {
    case Preconditioner::none:
      z = r;
      break;
    case Preconditioner::diagonal:
      z = inv_diag_.asDiagonal() * r;
      break;
    case Preconditioner::incomplete_factor:
      z.resize(r.rows(), r.cols());
      for (Eigen::Index c = 0; c < r.cols(); ++c)
        z.col(c) = ichol_.solve(r.col(c));
      break;
    }
  }

private:
  Preconditioner kind_;
  Eigen::VectorXd inv_diag_;
  Eigen::IncompleteCholesky<double> ichol_;
};

inline Eigen::ArrayXd relative_residuals(const SparseMatrix& a, const Eigen::MatrixXd& b,
                                         const Eigen::MatrixXd& x, const Eigen::ArrayXd& bnorm) {
  const Eigen::MatrixXd r = b - a * x;
  Eigen::ArrayXd out(b.cols());
  for (Eigen::Index c = 0; c < b.cols(); ++c)
    out(c) = bnorm(c) > 0.0 ? r.col(c).norm() / bnorm(c) : r.col(c).norm();
  return out;
}

// Preconditioned CG on every column of b at once. Columns run independent
// recurrences; a converged column is frozen by zeroing its step length.
inline Eigen::MatrixXd pcg_block(const SparseMatrix& a, const Eigen::MatrixXd& b,
                                 const PreconditionerOp& precond, const SolverConfig& cfg,
                                 SolveReport& report) {
  const Eigen::Index cols = b.cols();
  const Eigen::ArrayXd bnorm = b.colwise().norm().transpose().array();
  const Eigen::ArrayXd target = cfg.rel_tolerance * bnorm;

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(b.rows(), cols);
  Eigen::MatrixXd r = b;
  Eigen::MatrixXd z, d, ad;
  std::size_t used = 0;

  // Restart from the true residual if recursive residuals drift below target.
  for (int restart = 0; restart < 3; ++restart) {
    precond.apply(r, z);
    d = z;
    Eigen::ArrayXd rz = (r.cwiseProduct(z)).colwise().sum().transpose().array();

    while (used < cfg.max_iterations) {
      const Eigen::ArrayXd rnorm = r.colwise().norm().transpose().array();
      if ((rnorm <= target).all())
        break;
      ad.noalias() = a * d;
      const Eigen::ArrayXd dad = (d.cwiseProduct(ad)).colwise().sum().transpose().array();
      Eigen::ArrayXd alpha = Eigen::ArrayXd::Zero(cols);
      for (Eigen::Index c = 0; c < cols; ++c)
        if (rnorm(c) > target(c) && dad(c) > 0.0)
          alpha(c) = rz(c) / dad(c);
      x.noalias() += d * alpha.matrix().asDiagonal();
      r.noalias() -= ad * alpha.matrix().asDiagonal();
      precond.apply(r, z);
      const Eigen::ArrayXd rz_next = (r.cwiseProduct(z)).colwise().sum().transpose().array();
      Eigen::ArrayXd beta = Eigen::ArrayXd::Zero(cols);
      for (Eigen::Index c = 0; c < cols; ++c)
        if (rz(c) > 0.0)
          beta(c) = rz_next(c) / rz(c);
      d = z + d * beta.matrix().asDiagonal();
      rz = rz_next;
      ++used;
    }

    const Eigen::ArrayXd rel = relative_residuals(a, b, x, bnorm);
    report.iterations = std::max(report.iterations, used);
    report.max_relative_residual = std::max(report.max_relative_residual, rel.size() ? rel.maxCoeff() : 0.0);
    if ((rel <= cfg.rel_tolerance).all())
      return x;
    if (used >= cfg.max_iterations)
      break;
    r = b - a * x;
    report.max_relative_residual = 0.0;
  }
  throw SolverError("conjugate gradient did not reach relative residual " +
                        std::to_string(cfg.rel_tolerance) + " (final " +
                        std::to_string(report.max_relative_residual) + ")",
                    report.max_relative_residual);
}

} // namespace detail

/// Solves (I + L) Y = B column by column with preconditioned conjugate
/// gradients. Every returned column satisfies the relative residual target or
/// SolverError is thrown.
inline Eigen::MatrixXd sddm_solve_many(const SparseMatrix& a, const Eigen::MatrixXd& b,
                                       const SolverConfig& cfg = {}, SolveReport* report = nullptr) {
  validate(cfg);
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw ValidationError("dimension mismatch in sddm_solve");
  const detail::PreconditionerOp precond(a, cfg.preconditioner);
  SolveReport total;
  Eigen::MatrixXd x(b.rows(), b.cols());
  const auto block = static_cast<Eigen::Index>(cfg.block_size);
  for (Eigen::Index c0 = 0; c0 < b.cols(); c0 += block) {
    const Eigen::Index w = std::min(block, b.cols() - c0);
    SolveReport part;
    x.middleCols(c0, w) = detail::pcg_block(a, b.middleCols(c0, w), precond, cfg, part);
    total.iterations = std::max(total.iterations, part.iterations);
    total.max_relative_residual = std::max(total.max_relative_residual, part.max_relative_residual);
  }
  if (report)
    *report = total;
  return x;
}

inline Eigen::VectorXd sddm_solve(const SparseMatrix& a, const Eigen::VectorXd& b,
                                  const SolverConfig& cfg = {}, SolveReport* report = nullptr) {
  return sddm_solve_many(a, Eigen::MatrixXd(b), cfg, report).col(0);
}

enum class SketchDimension { practical, theoretical, fixed };
enum class ProjectionKind { rademacher, gaussian };

struct SketchConfig {
  double epsilon = 0.3;
  std::uint64_t seed = 0;
  SketchDimension dimension = SketchDimension::practical;
  /// Used when dimension == fixed.
  std::size_t fixed_dimension = 0;
  /// Practical mode: p = ceil(c log2(n) / eps^2), capped by `practical_cap`.
  double practical_constant = 4.0;
  std::size_t practical_cap = 2000;
  ProjectionKind projection = ProjectionKind::rademacher;
  /// Keep the random projection matrices in the resulting state.
  bool retain_projections = false;
  SolverConfig solver;
};

inline void validate(const SketchConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5))
    throw ValidationError("epsilon must lie in (0, 1/2)");
  if (cfg.dimension == SketchDimension::fixed && cfg.fixed_dimension < 1)
    throw ValidationError("fixed sketch dimension must be positive");
  validate(cfg.solver);
}

/// Number of random projections p for a graph with n nodes and m edges.
inline std::size_t sketch_dimension(std::size_t n, std::size_t /*m*/, const SketchConfig& cfg) {
  const double logn = n > 1 ? static_cast<double>(n) : 1.0;
  switch (cfg.dimension) {
  case SketchDimension::fixed:
    return cfg.fixed_dimension;
  case SketchDimension::theoretical: {
    const double e = cfg.epsilon / 12.0;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(24.0 * std::log(logn) / (e * e))));
  }
  case SketchDimension::practical:
  default: {
    const auto raw = static_cast<std::size_t>(
        std::ceil(cfg.practical_constant * std::log2(logn) / (cfg.epsilon * cfg.epsilon)));
    return std::max<std::size_t>(1, std::min(raw, cfg.practical_cap));
  }
  }
}

/// Mixes a base seed with a round index into an independent stream seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t round) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (round + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Random sketches of the forest matrix for one graph.
///
/// Row u of `edge_sketch` is column u of X~ (the solved rows of Q W^{1/2} B),
/// row u of `node_sketch` is column u of Y~ (the solved rows of P), so
/// ||X~ b_e||^2 is the squared distance between two rows.
struct SketchState {
  std::shared_ptr<const Graph> graph;
  std::size_t dimension = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  RowMatrix edge_sketch;     // n x p
  RowMatrix node_sketch;     // n x p
  RowMatrix edge_projection; // m x p, Q transposed; empty unless retained
  RowMatrix node_projection; // n x p, P transposed; empty unless retained
  SolveReport edge_solve;
  SolveReport node_solve;
};

namespace detail {

class ProjectionStream {
public:
  ProjectionStream(std::uint64_t seed, std::size_t dim, ProjectionKind kind)
      : rng_(seed), dim_(dim), kind_(kind), scale_(1.0 / std::sqrt(static_cast<double>(dim))) {}

  // Fills one row of p entries.
  template <class Row> void next(Row&& row) {
    if (kind_ == ProjectionKind::gaussian) {
      for (std::size_t i = 0; i < dim_; ++i)
        row(static_cast<Eigen::Index>(i)) = scale_ * normal_(rng_);
      return;
    }
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (i % 64 == 0)
        bits = rng_();
      row(static_cast<Eigen::Index>(i)) = (bits & 1U) ? scale_ : -scale_;
      bits >>= 1U;
    }
  }

private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  std::size_t dim_;
  ProjectionKind kind_;
  double scale_;
};

} // namespace detail

/// Draws P (p x n) and Q (p x m), forms Q W^{1/2} B, and solves the 2p
/// systems with I + L.
inline SketchState build_sketches(std::shared_ptr<const Graph> g, const SketchConfig& cfg) {
  validate(cfg);
  const std::size_t n = g->node_count();
  const std::size_t m = g->edge_count();
  if (n == 0)
    throw ValidationError("cannot sketch an empty node set");
  const std::size_t p = sketch_dimension(n, m, cfg);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(p);

  SketchState sk;
  sk.graph = g;
  sk.dimension = p;
  sk.epsilon = cfg.epsilon;
  sk.seed = cfg.seed;

  detail::ProjectionStream stream(cfg.seed, p, cfg.projection);
  Eigen::MatrixXd node_rhs(rows, cols);
  for (Eigen::Index u = 0; u < rows; ++u)
    stream.next(node_rhs.row(u));

  Eigen::MatrixXd edge_rhs = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::RowVectorXd q(cols);
  if (cfg.retain_projections)
    sk.edge_projection.resize(static_cast<Eigen::Index>(m), cols);
  for (std::size_t i = 0; i < m; ++i) {
    stream.next(q);
    if (cfg.retain_projections)
      sk.edge_projection.row(static_cast<Eigen::Index>(i)) = q;
    const Edge& e = g->edges()[i];
    const double sw = std::sqrt(e.weight);
    edge_rhs.row(static_cast<Eigen::Index>(e.u)) += sw * q;
    edge_rhs.row(static_cast<Eigen::Index>(e.v)) -= sw * q;
  }
  if (cfg.retain_projections)
    sk.node_projection = node_rhs;

  const SparseMatrix a = build_shifted_laplacian(*g);
  sk.edge_sketch = sddm_solve_many(a, edge_rhs, cfg.solver, &sk.edge_solve);
  sk.node_sketch = sddm_solve_many(a, node_rhs, cfg.solver, &sk.node_solve);
  return sk;
}

inline SketchState build_sketches(const Graph& g, const SketchConfig& cfg) {
  return build_sketches(std::make_shared<const Graph>(g), cfg);
}

/// Sketched estimates of the two quadratic forms in an edge's gain.
struct EdgeEstimate {
  double edge_part = 0.0;  // ||X~ b_e||^2 ~ ||W^{1/2} B Omega b_e||^2
  double node_part = 0.0;  // ||Y~ b_e||^2 ~ ||Omega b_e||^2
  double forest_distance() const { return edge_part + node_part; }
};

inline EdgeEstimate estimate_edge(const SketchState& sk, EdgeId e) {
  const Edge& ed = sk.graph->edge(e);
  const auto u = static_cast<Eigen::Index>(ed.u);
  const auto v = static_cast<Eigen::Index>(ed.v);
  return {(sk.edge_sketch.row(u) - sk.edge_sketch.row(v)).squaredNorm(),
          (sk.node_sketch.row(u) - sk.node_sketch.row(v)).squaredNorm()};
}

inline constexpr double kSketchDegeneracyThreshold = 1e-9;

/// Estimated forest-index gain of deleting e from the sketched graph.
/// Throws NumericalError when the estimated denominator is not safely positive.
inline double approx_gain(const SketchState& sk, EdgeId e) {
  const Edge& ed = sk.graph->edge(e);
  const EdgeEstimate est = estimate_edge(sk, e);
  const double denom = 1.0 - ed.weight * est.forest_distance();
  if (!(denom > kSketchDegeneracyThreshold))
    throw NumericalError("sketched denominator " + std::to_string(denom) + " for edge (" +
                         sk.graph->label(ed.u) + ", " + sk.graph->label(ed.v) + ")");
  return static_cast<double>(sk.graph->node_count()) * ed.weight * est.node_part / denom;
}

/// Gain of one edge from a single linear solve Omega b_e; no sketching.
inline double solver_edge_gain(const Graph& g, const SparseMatrix& shifted, EdgeId e,
                               SolverConfig cfg = {}) {
  const Edge& ed = g.edge(e);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.node_count()));
  b(static_cast<Eigen::Index>(ed.u)) = 1.0;
  b(static_cast<Eigen::Index>(ed.v)) = -1.0;
  cfg.rel_tolerance = std::min(cfg.rel_tolerance, 1e-12);
  const Eigen::VectorXd z = sddm_solve(shifted, b, cfg);
  const double rho = z(static_cast<Eigen::Index>(ed.u)) - z(static_cast<Eigen::Index>(ed.v));
  const double denom = 1.0 - ed.weight * rho;
  if (!(denom > 0.0))
    throw NumericalError("non-positive denominator in solver-based gain");
  return static_cast<double>(g.node_count()) * ed.weight * z.squaredNorm() / denom;
}

struct SolverTolerances {
  double edge_sketch = 0.0; // delta_1
  double node_sketch = 0.0; // delta_2
};

/// Worst-case solver accuracies under which the sketched estimates keep their
/// eps/3 guarantee. Reported for audit; far below double precision for large n.
inline SolverTolerances theoretical_deltas(const Graph& g, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw ValidationError("epsilon must lie in (0, 1/2)");
  const double n = static_cast<double>(g.node_count());
  const double wmax = g.edge_count() ? g.max_weight() : 1.0;
  const double wmin = g.edge_count() ? g.min_weight() : 1.0;
  const double lo = 1.0 - epsilon / 12.0;
  const double hi = 1.0 + epsilon / 12.0;
  const double spread = n * wmax + 1.0;
  SolverTolerances t;
  t.edge_sketch = epsilon * wmin * std::sqrt(2.0 * lo * wmin) /
                  (64.0 * wmax * n * (n + 1.0) * std::sqrt(hi * spread * n));
  t.node_sketch = epsilon * std::sqrt(2.0 * lo * wmin) / (32.0 * spread * std::sqrt(hi * spread));
  return t;
}

} // namespace forest

#endif
