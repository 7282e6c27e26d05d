// Command-line driver: run one edge-attack strategy or compare several.
//
//   forest_attack attack  --input g.txt --k 5 --method greedy
//   forest_attack compare --input g.txt --methods greedy,fast,random --k-max 6

#include <forest/forest.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace forest;

enum ExitCode { kOk = 0, kInvalid = 1, kCapacity = 2, kNumerical = 3 };

struct RunOptions {
  std::size_t k = 0;
  double epsilon = 0.3;
  std::uint64_t seed = 0;
  double solver_tol = 1e-8;
  std::string sketch_dim = "auto";
  std::size_t dense_limit = kDefaultDenseLimit;
  double budget = kDefaultSubsetBudget;
};

const std::vector<std::string> kMethods = {"greedy",      "fast",    "optimum", "random",
                                           "betweenness", "degprod", "degsum",  "topfegc"};

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open input file " + path);
  return parse_edge_list(in);
}

SketchConfig sketch_config(const RunOptions& o) {
  SketchConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.seed = o.seed;
  cfg.solver.rel_tolerance = o.solver_tol;
  if (o.sketch_dim == "auto") {
    cfg.dimension = SketchDimension::practical;
  } else if (o.sketch_dim == "theory") {
    cfg.dimension = SketchDimension::theoretical;
  } else {
    std::size_t used = 0;
    long long p = 0;
    try {
      p = std::stoll(o.sketch_dim, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != o.sketch_dim.size() || p < 1)
      throw ValidationError("--sketch-dim must be auto, theory or a positive integer");
    cfg.dimension = SketchDimension::fixed;
    cfg.fixed_dimension = static_cast<std::size_t>(p);
  }
  return cfg;
}

AttackResult run_method(const Graph& g, const std::string& method, const RunOptions& o) {
  DenseOptions dense;
  dense.max_nodes = o.dense_limit;
  if (o.k > g.edge_count())
    throw ValidationError("--k " + std::to_string(o.k) + " exceeds the edge count " +
                          std::to_string(g.edge_count()));
  if (method == "greedy")
    return greedy_attack(g, o.k, dense);
  if (method == "fast") {
    FastGreedyOptions fo;
    fo.sketch = sketch_config(o);
    fo.dense = dense;
    return fast_greedy_attack(g, o.k, fo);
  }
  if (method == "optimum") {
    const auto best = optimum_attack(g, o.k, o.budget);
    return evaluate_sequence(g, best.edges, method, dense);
  }
  if (method == "random")
    return evaluate_sequence(g, random_attack(g, o.k, o.seed), method, dense);
  if (method == "betweenness")
    return evaluate_sequence(g, top_k(edge_betweenness(g), o.k), method, dense);
  if (method == "degprod")
    return evaluate_sequence(g, top_k(degree_scores(g, DegreeMode::product), o.k), method, dense);
  if (method == "degsum")
    return evaluate_sequence(g, top_k(degree_scores(g, DegreeMode::sum), o.k), method, dense);
  if (method == "topfegc")
    return evaluate_sequence(g, top_k_fegc(g, o.k), method, dense);
  throw ValidationError("unknown method " + method);
}

std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& file) {
  if (path.empty() || path == "-")
    return std::cout;
  file = std::make_unique<std::ofstream>(path);
  if (!*file)
    throw ValidationError("cannot open output file " + path);
  return *file;
}

int run_attack(const std::string& input, const std::string& method, const std::string& format,
               const std::string& output, bool timing, const RunOptions& o) {
  const Graph g = load_graph(input);
  const AttackResult r = run_method(g, method, o);
  std::unique_ptr<std::ofstream> file;
  std::ostream& out = open_output(output, file);
  if (format == "json")
    out << attack_to_json(g, r, timing).dump(2) << '\n';
  else
    write_attack_csv(out, g, r, timing);
  return kOk;
}

std::vector<std::string> split_methods(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty())
      continue;
    bool known = false;
    for (const auto& m : kMethods)
      known = known || m == tok;
    if (!known)
      throw ValidationError("unknown method " + tok);
    out.push_back(tok);
  }
  if (out.empty())
    throw ValidationError("--methods is empty");
  return out;
}

// Long-format table: exact forest-index increase of each method's k-set.
int run_comparison(const std::string& input, const std::string& methods, std::size_t k_max,
                   std::size_t random_trials, const std::string& output, const RunOptions& base) {
  const Graph g = load_graph(input);
  if (k_max > g.edge_count())
    throw ValidationError("--k-max exceeds the edge count");
  if (random_trials < 1)
    throw ValidationError("--random-trials must be positive");

  std::map<std::string, std::vector<double>> rows; // method -> delta per k (1-based)
  std::vector<std::string> order;
  for (const auto& method : split_methods(methods)) {
    std::vector<double> delta(k_max, 0.0);
    RunOptions o = base;
    o.k = k_max;
    if (method == "optimum") {
      for (std::size_t k = 1; k <= k_max; ++k) {
        if (binomial(g.edge_count(), k) > base.budget) {
          std::cerr << "note: optimum skipped for k >= " << k << " (subset budget)\n";
          delta.resize(k - 1);
          break;
        }
        delta[k - 1] = optimum_attack(g, k, base.budget).gain;
      }
    } else if (method == "random") {
      for (std::size_t t = 0; t < random_trials; ++t) {
        o.seed = base.seed + t;
        const AttackResult r = run_method(g, method, o);
        for (std::size_t k = 0; k < k_max; ++k)
          delta[k] += r.steps[k].cumulative_gain / static_cast<double>(random_trials);
      }
    } else {
      const AttackResult r = run_method(g, method, o);
      if (!r.exact)
        std::cerr << "note: " << method << " values are estimates (graph above the dense limit)\n";
      for (std::size_t k = 0; k < k_max; ++k)
        delta[k] = r.steps[k].cumulative_gain;
    }
    rows[method] = std::move(delta);
    order.push_back(method);
  }

  std::unique_ptr<std::ofstream> file;
  std::ostream& out = open_output(output, file);
  out << "method,k,delta_rho\n";
  for (const auto& method : order)
    for (std::size_t k = 0; k < rows[method].size(); ++k)
      out << method << ',' << k + 1 << ',' << format_real(rows[method][k]) << '\n';
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forest-index edge attacks on weighted graphs"};
  app.require_subcommand(1);

  RunOptions opts;
  std::string input, output, format = "csv", method = "greedy", methods = "greedy,fast,random";
  std::size_t k_max = 0, random_trials = 1;
  bool timing = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", input, "Edge-list file (u v [w] per line)")->required();
    sub->add_option("--epsilon", opts.epsilon, "Sketch error parameter for the fast greedy")->capture_default_str();
    sub->add_option("--seed", opts.seed, "Seed for randomized methods")->capture_default_str();
    sub->add_option("--output", output, "Output path (default: stdout)");
    sub->add_option("--solver-tol", opts.solver_tol, "Relative residual target of the CG solver")
        ->capture_default_str();
    sub->add_option("--sketch-dim", opts.sketch_dim, "Sketch dimension: auto, theory or an integer")
        ->capture_default_str();
    sub->add_option("--dense-limit", opts.dense_limit, "Largest node count for dense exact methods")
        ->capture_default_str();
    sub->add_option("--budget", opts.budget, "Largest number of subsets the optimum search may visit")
        ->capture_default_str();
  };

  auto* attack = app.add_subcommand("attack", "Run one strategy and report every deletion step");
  add_common(attack);
  attack->add_option("--k", opts.k, "Number of edges to delete")->required();
  attack->add_option("--method", method, "Strategy")->check(CLI::IsMember(kMethods))->capture_default_str();
  attack->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  attack->add_flag("--timing", timing, "Record per-step wall time (output is no longer reproducible)");

  auto* compare = app.add_subcommand("compare", "Exact forest-index increase per method and k");
  add_common(compare);
  compare->add_option("--methods", methods, "Comma-separated strategies")->capture_default_str();
  compare->add_option("--k-max", k_max, "Largest k")->required();
  compare->add_option("--random-trials", random_trials, "Seeds averaged for the random strategy")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*attack)
      return run_attack(input, method, format, output, timing, opts);
    return run_comparison(input, methods, k_max, random_trials, output, opts);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCapacity;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}
