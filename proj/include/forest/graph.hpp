#ifndef FOREST_GRAPH_HPP
#define FOREST_GRAPH_HPP

#include <forest/errors.hpp>

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace forest {

using NodeId = std::size_t;

/// Position of an edge in a graph's edge list. Stable for the graph's lifetime.
struct EdgeId {
  std::size_t index = 0;

  friend bool operator==(EdgeId, EdgeId) = default;
  friend auto operator<=>(EdgeId, EdgeId) = default;
};

/// Undirected weighted edge, stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 1.0;
};

struct Neighbor {
  NodeId node;
  EdgeId edge;
};

/// Simple undirected graph with strictly positive edge weights.
///
/// Nodes are 0..n-1; each node carries a label (the id used in the input file).
/// Edges are oriented u < v, which fixes the incidence vector b_e = e_u - e_v.
/// Disconnected graphs and isolated nodes are allowed.
class Graph {
public:
  Graph() = default;

  explicit Graph(std::size_t node_count) : adjacency_(node_count) {
    labels_.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i)
      labels_.push_back(std::to_string(i));
  }

  Graph(std::size_t node_count, std::span<const Edge> edges) : Graph(node_count) {
    for (const auto& e : edges)
      add_edge(e.u, e.v, e.weight);
  }

  EdgeId add_edge(NodeId a, NodeId b, double weight = 1.0) {
    if (a >= node_count() || b >= node_count())
      throw ValidationError("edge endpoint out of range: (" + std::to_string(a) + ", " +
                            std::to_string(b) + ") with n = " + std::to_string(node_count()));
    if (a == b)
      throw ValidationError("self-loop on node " + labels_[a]);
    if (!(weight > 0.0) || !std::isfinite(weight))
      throw ValidationError("edge (" + labels_[a] + ", " + labels_[b] +
                            ") has non-positive or non-finite weight");
    if (a > b)
      std::swap(a, b);
    if (find_edge(a, b))
      throw ValidationError("duplicate edge (" + labels_[a] + ", " + labels_[b] + ")");

    const EdgeId id{edges_.size()};
    edges_.push_back({a, b, weight});
    adjacency_[a].push_back({b, id});
    adjacency_[b].push_back({a, id});
    return id;
  }

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e.index); }

  std::span<const Neighbor> neighbors(NodeId u) const { return adjacency_.at(u); }
  std::size_t degree(NodeId u) const { return adjacency_.at(u).size(); }

  double weighted_degree(NodeId u) const {
    double d = 0.0;
    for (const auto& nb : adjacency_.at(u))
      d += edges_[nb.edge.index].weight;
    return d;
  }

  std::optional<EdgeId> find_edge(NodeId a, NodeId b) const {
    if (a >= node_count() || b >= node_count())
      return std::nullopt;
    const auto& shorter = adjacency_[a].size() <= adjacency_[b].size() ? adjacency_[a] : adjacency_[b];
    const NodeId other = adjacency_[a].size() <= adjacency_[b].size() ? b : a;
    for (const auto& nb : shorter)
      if (nb.node == other)
        return nb.edge;
    return std::nullopt;
  }

  double max_weight() const {
    double w = 0.0;
    for (const auto& e : edges_)
      w = std::max(w, e.weight);
    return w;
  }

  double min_weight() const {
    if (edges_.empty())
      return 0.0;
    double w = std::numeric_limits<double>::infinity();
    for (const auto& e : edges_)
      w = std::min(w, e.weight);
    return w;
  }

  const std::string& label(NodeId u) const { return labels_.at(u); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  void set_labels(std::vector<std::string> labels) {
    if (labels.size() != node_count())
      throw ValidationError("label count does not match node count");
    labels_ = std::move(labels);
  }

  /// Copy of this graph with the given edges removed. Surviving edges keep
  /// their relative order; `kept`, when provided, receives the original id of
  /// each surviving edge.
  Graph without_edges(std::span<const EdgeId> removed, std::vector<EdgeId>* kept = nullptr) const {
    std::vector<char> drop(edge_count(), 0);
    for (auto e : removed)
      drop.at(e.index) = 1;
    Graph g(node_count());
    g.labels_ = labels_;
    if (kept)
      kept->clear();
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (drop[i])
        continue;
      g.add_edge(edges_[i].u, edges_[i].v, edges_[i].weight);
      if (kept)
        kept->push_back(EdgeId{i});
    }
    return g;
  }

private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::string> labels_;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Weighted Laplacian L = D - A in compressed column form.
inline SparseMatrix build_laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(4 * g.edge_count());
  for (const auto& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    t.emplace_back(u, u, e.weight);
    t.emplace_back(v, v, e.weight);
    t.emplace_back(u, v, -e.weight);
    t.emplace_back(v, u, -e.weight);
  }
  SparseMatrix L(n, n);
  L.setFromTriplets(t.begin(), t.end());
  return L;
}

/// I + L, the SDDM matrix whose inverse is the forest matrix.
inline SparseMatrix build_shifted_laplacian(const Graph& g) {
  SparseMatrix M = build_laplacian(g);
  const auto n = static_cast<Eigen::Index>(g.node_count());
  SparseMatrix I(n, n);
  I.setIdentity();
  M += I;
  M.makeCompressed();
  return M;
}

/// Connected components as lists of nodes; components are ordered by their
/// smallest node and nodes within a component ascend.
inline std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> comp(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::vector<NodeId>> parts;
  std::vector<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != std::numeric_limits<std::size_t>::max())
      continue;
    const std::size_t c = parts.size();
    parts.emplace_back();
    queue.assign(1, s);
    comp[s] = c;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId x = queue[head];
      parts[c].push_back(x);
      for (const auto& nb : g.neighbors(x)) {
        if (comp[nb.node] == std::numeric_limits<std::size_t>::max()) {
          comp[nb.node] = c;
          queue.push_back(nb.node);
        }
      }
    }
    std::sort(parts[c].begin(), parts[c].end());
  }
  return parts;
}

/// Component index of every node, consistent with connected_components().
inline std::vector<std::size_t> component_labels(const Graph& g) {
  std::vector<std::size_t> label(g.node_count());
  const auto parts = connected_components(g);
  for (std::size_t c = 0; c < parts.size(); ++c)
    for (auto u : parts[c])
      label[u] = c;
  return label;
}

/// Reads a whitespace-separated edge list: one "u v [w]" per line, '#' and '%'
/// start comment lines, blank lines are skipped. Ids are arbitrary tokens and
/// are compacted to 0..n-1 in order of first appearance.
inline Graph parse_edge_list(std::istream& in) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  struct Raw {
    NodeId u, v;
    double w;
    std::size_t line;
  };
  std::vector<Raw> raw;

  auto intern = [&](const std::string& token) {
    auto [it, inserted] = ids.emplace(token, labels.size());
    if (inserted)
      labels.push_back(token);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string a, b, w, extra;
    if (!(ss >> a))
      continue;
    if (a.front() == '#' || a.front() == '%')
      continue;
    if (!(ss >> b))
      throw ParseError(lineno, "expected two node ids, got \"" + line + "\"");
    double weight = 1.0;
    if (ss >> w) {
      std::size_t used = 0;
      try {
        weight = std::stod(w, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != w.size())
        throw ParseError(lineno, "weight \"" + w + "\" is not a number");
      // Optional timestamp column.
      if (ss >> extra && extra.front() != '#' && extra.front() != '%') {
        std::size_t pos = 0;
        try {
          (void)std::stod(extra, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (pos != extra.size())
          throw ParseError(lineno, "unexpected trailing token \"" + extra + "\"");
      }
    }
    if (!(weight > 0.0) || !std::isfinite(weight))
      throw ValidationError("line " + std::to_string(lineno) + ": non-positive weight " + w);
    if (a == b)
      throw ValidationError("line " + std::to_string(lineno) + ": self-loop on node " + a);
    const NodeId u = intern(a);
    const NodeId v = intern(b);
    raw.push_back({u, v, weight, lineno});
  }

  Graph g(labels.size());
  g.set_labels(std::move(labels));
  for (const auto& r : raw) {
    if (g.find_edge(r.u, r.v))
      throw ValidationError("line " + std::to_string(r.line) + ": duplicate edge (" +
                            g.label(r.u) + ", " + g.label(r.v) + ")");
    g.add_edge(r.u, r.v, r.w);
  }
  return g;
}

inline Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

/// Writes the graph in the format accepted by parse_edge_list, using node
/// labels. Isolated nodes cannot be expressed and are dropped.
inline void write_edge_list(std::ostream& out, const Graph& g) {
  const auto old = out.precision(17);
  for (const auto& e : g.edges())
    out << g.label(e.u) << ' ' << g.label(e.v) << ' ' << e.weight << '\n';
  out.precision(old);
}

} // namespace forest

#endif
