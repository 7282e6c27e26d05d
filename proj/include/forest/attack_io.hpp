#ifndef FOREST_ATTACK_IO_HPP
#define FOREST_ATTACK_IO_HPP

#include <forest/errors.hpp>
#include <forest/exact_greedy.hpp>
#include <forest/graph.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace forest {

inline constexpr const char* kAttackCsvHeader =
    "step,edge_u,edge_v,weight,marginal_gain,cumulative_gain,forest_index,elapsed_ms";

/// Shortest decimal text that parses back to the same double.
inline std::string format_real(double x) {
  if (std::isnan(x))
    return "nan";
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x)
      break;
  }
  return buf;
}

/// One CSV row per step. Node columns carry the input labels. When
/// `with_timing` is false the elapsed column is written as 0 so that seeded
/// runs produce identical files.
inline void write_attack_csv(std::ostream& out, const Graph& g, const AttackResult& r, bool with_timing = false) {
  out << kAttackCsvHeader << '\n';
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const auto& s = r.steps[i];
    out << i + 1 << ',' << g.label(s.u) << ',' << g.label(s.v) << ',' << format_real(s.weight) << ','
        << format_real(s.marginal_gain) << ',' << format_real(s.cumulative_gain) << ','
        << format_real(s.forest_index) << ',' << (with_timing ? format_real(s.elapsed_ms) : "0") << '\n';
  }
}

/// Parses a file written by write_attack_csv against the graph it refers to.
inline AttackResult read_attack_csv(std::istream& in, const Graph& g) {
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId u = 0; u < g.node_count(); ++u)
    ids.emplace(g.label(u), u);

  auto number = [](const std::string& tok, std::size_t line) {
    if (tok == "nan")
      return std::nan("");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty())
      throw ParseError(line, "bad number \"" + tok + "\"");
    return v;
  };

  AttackResult r;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || line != kAttackCsvHeader)
    throw ParseError(1, "missing attack CSV header");
  ++lineno;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ','))
      cols.push_back(tok);
    if (cols.size() != 8)
      throw ParseError(lineno, "expected 8 columns");
    const auto u = ids.find(cols[1]);
    const auto v = ids.find(cols[2]);
    if (u == ids.end() || v == ids.end())
      throw ParseError(lineno, "unknown node label");
    const auto e = g.find_edge(u->second, v->second);
    if (!e)
      throw ParseError(lineno, "no such edge (" + cols[1] + ", " + cols[2] + ")");
    AttackStep s = detail::make_step(g, *e);
    s.marginal_gain = number(cols[4], lineno);
    s.cumulative_gain = number(cols[5], lineno);
    s.forest_index = number(cols[6], lineno);
    s.elapsed_ms = number(cols[7], lineno);
    r.steps.push_back(s);
  }
  if (!r.steps.empty()) {
    r.initial_forest_index = r.steps.front().forest_index - r.steps.front().cumulative_gain;
    r.exact = !std::isnan(r.steps.front().forest_index);
  }
  return r;
}

inline nlohmann::json attack_to_json(const Graph& g, const AttackResult& r, bool with_timing = false) {
  auto real = [](double x) { return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x); };
  nlohmann::json j;
  j["strategy"] = r.strategy;
  j["exact"] = r.exact;
  j["initial_forest_index"] = real(r.initial_forest_index);
  j["steps"] = nlohmann::json::array();
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const auto& s = r.steps[i];
    j["steps"].push_back({{"step", i + 1},
                          {"edge_u", g.label(s.u)},
                          {"edge_v", g.label(s.v)},
                          {"weight", s.weight},
                          {"marginal_gain", real(s.marginal_gain)},
                          {"cumulative_gain", real(s.cumulative_gain)},
                          {"forest_index", real(s.forest_index)},
                          {"elapsed_ms", with_timing ? s.elapsed_ms : 0.0}});
  }
  return j;
}

} // namespace forest

#endif
