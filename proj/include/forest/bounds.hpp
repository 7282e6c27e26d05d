#ifndef FOREST_BOUNDS_HPP
#define FOREST_BOUNDS_HPP

#include <forest/errors.hpp>
#include <forest/forest_state.hpp>
#include <forest/graph.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace forest {

/// Spectral guarantees for the greedy attack.
struct GuaranteeBounds {
  double gamma_lower = 1.0;   // lower bound on the submodularity ratio
  double alpha_upper = 0.0;   // upper bound on the curvature
  double ratio_lower = 1.0;   // (1/alpha)(1 - exp(-alpha gamma))
  double lambda_max_estimate = 0.0;
  bool power_iteration_converged = true;
};

struct PowerIterationOptions {
  double rel_tolerance = 1e-6;
  std::size_t max_iterations = 100000;
  std::uint64_t seed = 0x5eedULL;
};

/// Largest Laplacian eigenvalue by power iteration. Stops when the residual
/// ||L x - theta x|| falls below rel_tolerance * theta; on failure returns the
/// bound n * w_max and sets `converged` to false.
inline double laplacian_lambda_max(const Graph& g, const PowerIterationOptions& opts = {},
                                   bool* converged = nullptr) {
  if (converged)
    *converged = true;
  if (g.edge_count() == 0)
    return 0.0;
  const double fallback = static_cast<double>(g.node_count()) * g.max_weight();
  const SparseMatrix L = build_laplacian(g);
  const auto n = L.rows();

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i)
    x(i) = unif(rng);
  x.array() -= x.mean();
  x.normalize();

  Eigen::VectorXd y(n);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    y.noalias() = L * x;
    const double theta = x.dot(y);
    const double resid = (y - theta * x).norm();
    if (theta > 0.0 && resid <= opts.rel_tolerance * theta)
      return std::min(theta, fallback);
    const double ny = y.norm();
    if (!(ny > 0.0))
      break;
    x = y / ny;
  }
  if (converged)
    *converged = false;
  return fallback;
}

/// (1/alpha)(1 - exp(-alpha gamma)), with the alpha -> 0 limit gamma.
inline double greedy_ratio(double alpha, double gamma) {
  if (alpha < 1e-9)
    return gamma * (1.0 - 0.5 * alpha * gamma);
  return -std::expm1(-alpha * gamma) / alpha;
}

inline GuaranteeBounds compute_bounds(const Graph& g, const PowerIterationOptions& opts = {}) {
  if (g.node_count() == 0)
    throw ValidationError("bounds need a nonempty graph");
  GuaranteeBounds b;
  b.lambda_max_estimate = laplacian_lambda_max(g, opts, &b.power_iteration_converged);
  const double s = 1.0 / (1.0 + b.lambda_max_estimate);
  b.gamma_lower = s * s;
  b.alpha_upper = 1.0 - b.gamma_lower;
  b.ratio_lower = greedy_ratio(b.alpha_upper, b.gamma_lower);
  return b;
}

struct SubmodularityScan {
  double min_gamma_observed = 1.0;
  double max_alpha_observed = 0.0;
  std::size_t pairs_checked = 0;
};

inline constexpr std::size_t kScanMaxEdges = 12;
inline constexpr std::size_t kScanExhaustiveEdges = 8;

/// Observed extremes of the submodularity-ratio and curvature inequalities for
/// the forest-index gain C(S), over subset pairs (S, T). Exhaustive when
/// m <= 8, otherwise `trials` random pairs. Every C value comes from a fresh
/// dense factorization.
inline SubmodularityScan empirical_submodularity_scan(const Graph& g, std::size_t trials, std::uint64_t seed) {
  const std::size_t m = g.edge_count();
  if (m > kScanMaxEdges)
    throw CapacityError("submodularity scan supports at most " + std::to_string(kScanMaxEdges) + " edges");
  const std::size_t subsets = std::size_t{1} << m;

  // gain[mask] = C(mask) for every subset of edges.
  std::vector<double> gain(subsets);
  const double base = forest_index(ForestState(g));
  std::vector<EdgeId> drop;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    drop.clear();
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1U)
        drop.push_back(EdgeId{i});
    gain[mask] = mask == 0 ? 0.0 : forest_index(ForestState(g.without_edges(drop))) - base;
  }

  SubmodularityScan out;
  auto visit = [&](std::size_t S, std::size_t T) {
    // Submodularity ratio: sum_{i in S\T} Theta_i(T) >= gamma Theta_S(T).
    const std::size_t diff = S & ~T;
    if (diff) {
      const double joint = gain[S | T] - gain[T];
      double singles = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        if (diff >> i & 1U)
          singles += gain[T | (std::size_t{1} << i)] - gain[T];
      if (joint > 0.0)
        out.min_gamma_observed = std::min(out.min_gamma_observed, singles / joint);
      ++out.pairs_checked;
    }
    // Curvature: Theta_j(T\j u S) >= (1 - alpha) Theta_j(T\j) for j in T\S.
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t bit = std::size_t{1} << j;
      if (!(T & bit) || (S & bit))
        continue;
      const std::size_t rest = T & ~bit;
      const double with_s = gain[T | S] - gain[rest | S];
      const double alone = gain[T] - gain[rest];
      if (alone > 0.0)
        out.max_alpha_observed = std::max(out.max_alpha_observed, 1.0 - with_s / alone);
      ++out.pairs_checked;
    }
  };

  if (m <= kScanExhaustiveEdges) {
    for (std::size_t S = 0; S < subsets; ++S)
      for (std::size_t T = 0; T < subsets; ++T)
        visit(S, T);
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
      const std::size_t S = rng() & (subsets - 1);
      const std::size_t T = rng() & (subsets - 1);
      visit(S, T);
    }
  }
  return out;
}

} // namespace forest

#endif
