#pragma once

// Generalised safety/reachability games on finite graphs: leaves carry an
// integer payoff and absorb the play through a mandatory self-loop; every
// other infinite play pays 0.

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gsr {

using VertexId = std::uint32_t;
using Payoff = std::int64_t;

enum class Player { Protagonist, Antagonist };

constexpr Player opponent(Player p) {
  return p == Player::Protagonist ? Player::Antagonist : Player::Protagonist;
}

struct parse_error : std::runtime_error {
  int line;
  parse_error(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what),
        line(line_) {}
};

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite arena. Vertices are indexed in declaration order; that order is
/// also the tie-break order for every deterministic choice made downstream.
struct GameGraph {
  std::vector<std::string> names;
  std::vector<Player> owner;
  std::vector<std::vector<VertexId>> succ;
  std::vector<std::optional<Payoff>> leaf;
  VertexId init = 0;

  std::size_t size() const { return names.size(); }
  bool is_leaf(VertexId v) const { return leaf[v].has_value(); }
  Payoff leaf_payoff(VertexId v) const { return *leaf[v]; }
  bool operator==(const GameGraph&) const = default;

  std::optional<VertexId> find(std::string_view name) const {
    for (VertexId v = 0; v < names.size(); ++v)
      if (names[v] == name)
        return v;
    return std::nullopt;
  }
};

inline const std::vector<VertexId>& successors(const GameGraph& g, VertexId v) {
  return g.succ.at(v);
}

/// Ultimately periodic play: prefix followed by the cycle repeated forever.
struct Lasso {
  std::vector<VertexId> prefix;
  std::vector<VertexId> cycle;  // nonempty
};

namespace detail {

inline bool has_edge(const GameGraph& g, VertexId a, VertexId b) {
  for (VertexId w : g.succ[a])
    if (w == b)
      return true;
  return false;
}

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#')
      break;
    out.push_back(tok);
  }
  return out;
}

// Splits "key=value"; returns empty value when '=' is absent.
inline std::pair<std::string, std::string> split_kv(const std::string& tok) {
  auto eq = tok.find('=');
  if (eq == std::string::npos)
    return {tok, ""};
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

inline Payoff parse_payoff(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    Payoff n = std::stoll(s, &pos);
    if (pos != s.size())
      throw std::invalid_argument(s);
    return n;
  } catch (const std::exception&) {
    throw parse_error(line, "bad integer payoff '" + s + "'");
  }
}

}  // namespace detail

inline void validate_game(const GameGraph& g) {
  if (g.size() == 0)
    throw validation_error("game has no vertices");
  if (g.init >= g.size())
    throw validation_error("init vertex out of range");
  for (VertexId v = 0; v < g.size(); ++v) {
    const auto& row = g.succ[v];
    if (row.empty())
      throw validation_error("vertex '" + g.names[v] + "' has no successor");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] >= g.size())
        throw validation_error("dangling edge from '" + g.names[v] + "'");
      for (std::size_t j = i + 1; j < row.size(); ++j)
        if (row[i] == row[j])
          throw validation_error("duplicate edge from '" + g.names[v] + "'");
    }
    if (g.is_leaf(v)) {
      if (row.size() != 1 || row[0] != v)
        throw validation_error("leaf '" + g.names[v] +
                               "' must have exactly its self-loop");
    }
  }
}

/// Parses the line-based game format:
///   vertex <name> owner=<P|A> [leaf=<int>]
///   edge <from> <to>
///   init <name>
/// '#' starts a comment. Leaf self-loops must be declared explicitly.
inline GameGraph parse_game(const std::string& text) {
  GameGraph g;
  std::unordered_map<std::string, VertexId> index;
  struct PendingEdge {
    std::string from, to;
    int line;
  };
  std::vector<PendingEdge> edges;
  std::optional<std::string> init_name;
  int init_line = 0;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::tokenize(line);
    if (toks.empty())
      continue;
    if (toks[0] == "vertex") {
      if (toks.size() < 3)
        throw parse_error(lineno, "vertex needs a name and owner=<P|A>");
      const std::string& name = toks[1];
      if (index.count(name))
        throw parse_error(lineno, "vertex '" + name + "' declared twice");
      std::optional<Player> owner;
      std::optional<Payoff> leaf;
      for (std::size_t i = 2; i < toks.size(); ++i) {
        auto [key, val] = detail::split_kv(toks[i]);
        if (key == "owner") {
          if (val == "P")
            owner = Player::Protagonist;
          else if (val == "A")
            owner = Player::Antagonist;
          else
            throw parse_error(lineno, "owner must be P or A");
        } else if (key == "leaf") {
          leaf = detail::parse_payoff(val, lineno);
        } else {
          throw parse_error(lineno, "unknown attribute '" + key + "'");
        }
      }
      if (!owner)
        throw parse_error(lineno, "vertex '" + name + "' lacks owner");
      index.emplace(name, static_cast<VertexId>(g.size()));
      g.names.push_back(name);
      g.owner.push_back(*owner);
      g.leaf.push_back(leaf);
      g.succ.emplace_back();
    } else if (toks[0] == "edge") {
      if (toks.size() != 3)
        throw parse_error(lineno, "edge needs exactly <from> <to>");
      edges.push_back({toks[1], toks[2], lineno});
    } else if (toks[0] == "init") {
      if (toks.size() != 2)
        throw parse_error(lineno, "init needs exactly one vertex name");
      init_name = toks[1];
      init_line = lineno;
    } else {
      throw parse_error(lineno, "unknown directive '" + toks[0] + "'");
    }
  }

  for (const auto& e : edges) {
    auto from = index.find(e.from);
    if (from == index.end())
      throw validation_error("edge from undeclared vertex '" + e.from + "'");
    auto to = index.find(e.to);
    if (to == index.end())
      throw validation_error("edge to undeclared vertex '" + e.to + "'");
    g.succ[from->second].push_back(to->second);
  }
  if (!init_name)
    throw validation_error("missing init declaration");
  auto it = index.find(*init_name);
  if (it == index.end())
    throw parse_error(init_line, "init names undeclared vertex '" + *init_name + "'");
  g.init = it->second;

  validate_game(g);
  return g;
}

/// Canonical renderer; parse_game(render_game(g)) reproduces g.
inline std::string render_game(const GameGraph& g) {
  std::ostringstream out;
  for (VertexId v = 0; v < g.size(); ++v) {
    out << "vertex " << g.names[v] << " owner="
        << (g.owner[v] == Player::Protagonist ? 'P' : 'A');
    if (g.is_leaf(v))
      out << " leaf=" << g.leaf_payoff(v);
    out << '\n';
  }
  for (VertexId v = 0; v < g.size(); ++v)
    for (VertexId w : g.succ[v])
      out << "edge " << g.names[v] << ' ' << g.names[w] << '\n';
  out << "init " << g.names[g.init] << '\n';
  return out.str();
}

inline void validate_lasso(const GameGraph& g, const Lasso& play) {
  if (play.cycle.empty())
    throw validation_error("lasso cycle must be nonempty");
  for (VertexId v : play.prefix)
    if (v >= g.size())
      throw validation_error("lasso vertex out of range");
  for (VertexId v : play.cycle)
    if (v >= g.size())
      throw validation_error("lasso vertex out of range");
  for (std::size_t i = 0; i + 1 < play.prefix.size(); ++i)
    if (!detail::has_edge(g, play.prefix[i], play.prefix[i + 1]))
      throw validation_error("lasso prefix is not a path");
  if (!play.prefix.empty() &&
      !detail::has_edge(g, play.prefix.back(), play.cycle.front()))
    throw validation_error("lasso prefix does not connect to the cycle");
  for (std::size_t i = 0; i + 1 < play.cycle.size(); ++i)
    if (!detail::has_edge(g, play.cycle[i], play.cycle[i + 1]))
      throw validation_error("lasso cycle is not a path");
  if (!detail::has_edge(g, play.cycle.back(), play.cycle.front()))
    throw validation_error("lasso cycle does not close");
}

/// Payoff of the ultimately periodic play: the payoff of the leaf its cycle
/// sits on, 0 when the cycle avoids leaves.
inline Payoff payoff_of_lasso(const GameGraph& g, const Lasso& play) {
  validate_lasso(g, play);
  for (VertexId v : play.cycle)
    if (g.is_leaf(v))
      return g.leaf_payoff(v);
  return 0;
}

}  // namespace gsr
