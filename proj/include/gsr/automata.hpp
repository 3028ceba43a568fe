#pragma once

// Mealy strategies, counter-parameterized automata, their instantiations and
// the product constructions every decision procedure runs on.

#include <cstdint>
#include <limits>
#include <deque>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gsr/game.hpp"
#include "gsr/values.hpp"

namespace gsr {

constexpr VertexId kNoMove = std::numeric_limits<VertexId>::max();

/// Deterministic finite-memory strategy: update is total on states x
/// vertices, move is defined exactly at protagonist vertices and always
/// picks a successor.
struct MealyStrategy {
  std::vector<std::string> state_names;
  int init = 0;
  std::vector<std::vector<int>> update;       // [state][vertex]
  std::vector<std::vector<VertexId>> move;    // [state][vertex], kNoMove at antagonist vertices

  std::size_t size() const { return state_names.size(); }
  bool operator==(const MealyStrategy&) const = default;
};

/// Mealy machine with one decrement-only counter. Per (state, vertex) pair
/// there is either a single black rule, or a green rule (counter > 0, taken
/// while decrementing) paired with a red rule (counter = 0).
struct ParamAutomaton {
  struct Rule {
    int next = 0;
    VertexId move = kNoMove;
    bool operator==(const Rule&) const = default;
  };
  std::vector<std::string> state_names;
  int init = 0;
  std::vector<std::vector<char>> is_test;     // [state][vertex]
  std::vector<std::vector<Rule>> black, green, red;

  std::size_t size() const { return state_names.size(); }
  bool operator==(const ParamAutomaton&) const = default;
};

enum class EdgeColor { Black, Green, Red };

/// Product of a parameterized automaton with the game graph; edges inherit
/// the color of the generating rule.
struct ColoredProduct {
  struct State {
    int mem;
    VertexId v;
  };
  struct Edge {
    int from;
    int to;
    EdgeColor color;
  };
  std::vector<State> states;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> out;          // edge indices per state
  int initial = 0;
};

/// Synchronized product of two strategies over the same game. States where
/// both strategies are defined and have agreed so far; protagonist states
/// where the prescribed moves differ are divergence states and terminal.
struct SyncProduct {
  struct State {
    int mem1;
    VertexId v;
    int mem2;
  };
  std::vector<State> states;
  std::vector<std::vector<int>> succ;
  std::vector<char> divergent;
  int initial = 0;
};

namespace detail {

struct AutomatonLines {
  struct Trans {
    std::string state, vertex, next, move, color;
    int line;
  };
  std::vector<std::string> state_names;
  int init = -1;
  std::vector<Trans> trans;
};

inline AutomatonLines scan_automaton(const std::string& text, bool colored) {
  AutomatonLines out;
  std::unordered_map<std::string, int> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty())
      continue;
    if (toks[0] == "state") {
      if (toks.size() < 2 || toks.size() > 3)
        throw parse_error(lineno, "state needs a name and optional 'init'");
      if (seen.count(toks[1]))
        throw parse_error(lineno, "state '" + toks[1] + "' declared twice");
      seen.emplace(toks[1], static_cast<int>(out.state_names.size()));
      if (toks.size() == 3) {
        if (toks[2] != "init")
          throw parse_error(lineno, "unknown state attribute '" + toks[2] + "'");
        if (out.init >= 0)
          throw parse_error(lineno, "two init states");
        out.init = static_cast<int>(out.state_names.size());
      }
      out.state_names.push_back(toks[1]);
    } else if (toks[0] == "trans") {
      // trans <state> <vertex> -> <state> [move=<v>] [color=<c>]
      if (toks.size() < 5 || toks[3] != "->")
        throw parse_error(lineno, "trans needs <state> <vertex> -> <state>");
      AutomatonLines::Trans t;
      t.state = toks[1];
      t.vertex = toks[2];
      t.next = toks[4];
      t.line = lineno;
      for (std::size_t i = 5; i < toks.size(); ++i) {
        auto [key, val] = split_kv(toks[i]);
        if (key == "move")
          t.move = val;
        else if (key == "color" && colored)
          t.color = val;
        else
          throw parse_error(lineno, "unknown trans attribute '" + key + "'");
      }
      if (colored && t.color.empty())
        throw parse_error(lineno, "trans needs color=<black|green|red>");
      out.trans.push_back(std::move(t));
    } else {
      throw parse_error(lineno, "unknown directive '" + toks[0] + "'");
    }
  }
  if (out.state_names.empty())
    throw validation_error("automaton has no states");
  if (out.init < 0)
    throw validation_error("automaton has no init state");
  return out;
}

inline int lookup_state(const AutomatonLines& lines, const std::string& name,
                        int lineno) {
  for (std::size_t i = 0; i < lines.state_names.size(); ++i)
    if (lines.state_names[i] == name)
      return static_cast<int>(i);
  throw parse_error(lineno, "unknown state '" + name + "'");
}

inline VertexId lookup_vertex(const GameGraph& g, const std::string& name,
                              int lineno) {
  if (auto v = g.find(name))
    return *v;
  throw parse_error(lineno, "unknown vertex '" + name + "'");
}

inline VertexId check_move(const GameGraph& g, VertexId v,
                           const std::string& move, int lineno) {
  if (g.owner[v] == Player::Protagonist) {
    if (move.empty())
      throw validation_error("missing move at protagonist vertex '" +
                             g.names[v] + "' (line " + std::to_string(lineno) + ")");
    VertexId target = lookup_vertex(g, move, lineno);
    if (!has_edge(g, v, target))
      throw validation_error("move '" + move + "' is not an edge from '" +
                             g.names[v] + "' (line " + std::to_string(lineno) + ")");
    return target;
  }
  if (!move.empty())
    throw validation_error("move given at antagonist vertex '" + g.names[v] +
                           "' (line " + std::to_string(lineno) + ")");
  return kNoMove;
}

}  // namespace detail

inline void validate_mealy(const MealyStrategy& m, const GameGraph& g) {
  if (m.state_names.empty())
    throw validation_error("strategy has no states");
  if (m.init < 0 || m.init >= static_cast<int>(m.size()))
    throw validation_error("strategy init state out of range");
  if (m.update.size() != m.size() || m.move.size() != m.size())
    throw validation_error("strategy tables have wrong shape");
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (m.update[s].size() != g.size() || m.move[s].size() != g.size())
      throw validation_error("strategy tables have wrong shape");
    for (VertexId v = 0; v < g.size(); ++v) {
      if (m.update[s][v] < 0 || m.update[s][v] >= static_cast<int>(m.size()))
        throw validation_error("strategy update out of range");
      if (g.owner[v] == Player::Protagonist) {
        if (m.move[s][v] == kNoMove || !detail::has_edge(g, v, m.move[s][v]))
          throw validation_error("strategy move at '" + g.names[v] +
                                 "' is not an edge");
      } else if (m.move[s][v] != kNoMove) {
        throw validation_error("strategy move at antagonist vertex '" +
                               g.names[v] + "'");
      }
    }
  }
}

inline void validate_param(const ParamAutomaton& p, const GameGraph& g) {
  if (p.state_names.empty())
    throw validation_error("automaton has no states");
  if (p.init < 0 || p.init >= static_cast<int>(p.size()))
    throw validation_error("automaton init state out of range");
  auto check_rule = [&](const ParamAutomaton::Rule& r, VertexId v) {
    if (r.next < 0 || r.next >= static_cast<int>(p.size()))
      throw validation_error("automaton rule target out of range");
    if (g.owner[v] == Player::Protagonist) {
      if (r.move == kNoMove || !detail::has_edge(g, v, r.move))
        throw validation_error("automaton move at '" + g.names[v] +
                               "' is not an edge");
    } else if (r.move != kNoMove) {
      throw validation_error("automaton move at antagonist vertex '" +
                             g.names[v] + "'");
    }
  };
  for (std::size_t s = 0; s < p.size(); ++s) {
    for (VertexId v = 0; v < g.size(); ++v) {
      if (p.is_test[s][v]) {
        check_rule(p.green[s][v], v);
        check_rule(p.red[s][v], v);
      } else {
        check_rule(p.black[s][v], v);
      }
    }
  }
}

/// Parses the Mealy strategy format, bound to g's vertex alphabet:
///   state <name> [init]
///   trans <state> <vertex> -> <state> [move=<vertex>]
inline MealyStrategy parse_mealy(const std::string& text, const GameGraph& g) {
  auto lines = detail::scan_automaton(text, false);
  MealyStrategy m;
  m.state_names = lines.state_names;
  m.init = lines.init;
  m.update.assign(m.size(), std::vector<int>(g.size(), -1));
  m.move.assign(m.size(), std::vector<VertexId>(g.size(), kNoMove));
  for (const auto& t : lines.trans) {
    int s = detail::lookup_state(lines, t.state, t.line);
    VertexId v = detail::lookup_vertex(g, t.vertex, t.line);
    if (!t.color.empty())
      throw parse_error(t.line, "color attribute is not part of the Mealy format");
    if (m.update[s][v] >= 0)
      throw validation_error("duplicate trans for state '" + t.state +
                             "' and vertex '" + t.vertex + "'");
    m.update[s][v] = detail::lookup_state(lines, t.next, t.line);
    m.move[s][v] = detail::check_move(g, v, t.move, t.line);
  }
  for (std::size_t s = 0; s < m.size(); ++s)
    for (VertexId v = 0; v < g.size(); ++v)
      if (m.update[s][v] < 0)
        throw validation_error("missing trans for state '" + m.state_names[s] +
                               "' and vertex '" + g.names[v] + "'");
  validate_mealy(m, g);
  return m;
}

/// Parses the parameterized-automaton format: the Mealy format with a
/// mandatory color per transition. Each (state, vertex) pair carries either
/// one black rule or one green plus one red rule.
inline ParamAutomaton parse_param(const std::string& text, const GameGraph& g) {
  auto lines = detail::scan_automaton(text, true);
  ParamAutomaton p;
  p.state_names = lines.state_names;
  p.init = lines.init;
  const ParamAutomaton::Rule unset{-1, kNoMove};
  p.is_test.assign(p.size(), std::vector<char>(g.size(), 0));
  p.black.assign(p.size(), std::vector<ParamAutomaton::Rule>(g.size(), unset));
  p.green.assign(p.size(), std::vector<ParamAutomaton::Rule>(g.size(), unset));
  p.red.assign(p.size(), std::vector<ParamAutomaton::Rule>(g.size(), unset));
  for (const auto& t : lines.trans) {
    int s = detail::lookup_state(lines, t.state, t.line);
    VertexId v = detail::lookup_vertex(g, t.vertex, t.line);
    ParamAutomaton::Rule rule;
    rule.next = detail::lookup_state(lines, t.next, t.line);
    rule.move = detail::check_move(g, v, t.move, t.line);
    auto install = [&](std::vector<std::vector<ParamAutomaton::Rule>>& table) {
      if (table[s][v].next >= 0)
        throw validation_error("duplicate " + t.color + " trans for state '" +
                               t.state + "' and vertex '" + t.vertex + "'");
      table[s][v] = rule;
    };
    if (t.color == "black")
      install(p.black);
    else if (t.color == "green")
      install(p.green);
    else if (t.color == "red")
      install(p.red);
    else
      throw parse_error(t.line, "color must be black, green or red");
  }
  for (std::size_t s = 0; s < p.size(); ++s)
    for (VertexId v = 0; v < g.size(); ++v) {
      bool b = p.black[s][v].next >= 0;
      bool gr = p.green[s][v].next >= 0;
      bool rd = p.red[s][v].next >= 0;
      if (b && (gr || rd))
        throw validation_error("state '" + p.state_names[s] + "', vertex '" +
                               g.names[v] + "': black rule mixed with colored rules");
      if (!b && !(gr && rd))
        throw validation_error("state '" + p.state_names[s] + "', vertex '" +
                               g.names[v] +
                               "': needs one black rule or a green/red pair");
      p.is_test[s][v] = !b;
    }
  validate_param(p, g);
  return p;
}

inline std::string render_mealy(const MealyStrategy& m, const GameGraph& g) {
  std::ostringstream out;
  for (std::size_t s = 0; s < m.size(); ++s) {
    out << "state " << m.state_names[s];
    if (static_cast<int>(s) == m.init)
      out << " init";
    out << '\n';
  }
  for (std::size_t s = 0; s < m.size(); ++s)
    for (VertexId v = 0; v < g.size(); ++v) {
      out << "trans " << m.state_names[s] << ' ' << g.names[v] << " -> "
          << m.state_names[m.update[s][v]];
      if (m.move[s][v] != kNoMove)
        out << " move=" << g.names[m.move[s][v]];
      out << '\n';
    }
  return out.str();
}

inline std::string render_param(const ParamAutomaton& p, const GameGraph& g) {
  std::ostringstream out;
  for (std::size_t s = 0; s < p.size(); ++s) {
    out << "state " << p.state_names[s];
    if (static_cast<int>(s) == p.init)
      out << " init";
    out << '\n';
  }
  auto rule_line = [&](std::size_t s, VertexId v, const ParamAutomaton::Rule& r,
                       const char* color) {
    out << "trans " << p.state_names[s] << ' ' << g.names[v] << " -> "
        << p.state_names[r.next];
    if (r.move != kNoMove)
      out << " move=" << g.names[r.move];
    out << " color=" << color << '\n';
  };
  for (std::size_t s = 0; s < p.size(); ++s)
    for (VertexId v = 0; v < g.size(); ++v) {
      if (p.is_test[s][v]) {
        rule_line(s, v, p.green[s][v], "green");
        rule_line(s, v, p.red[s][v], "red");
      } else {
        rule_line(s, v, p.black[s][v], "black");
      }
    }
  return out.str();
}

/// States reachable from init in the update graph, over every vertex input.
inline std::vector<int> reachable_states(const MealyStrategy& m) {
  std::vector<char> seen(m.size(), 0);
  std::vector<int> order;
  std::deque<int> queue{m.init};
  seen[m.init] = 1;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    order.push_back(s);
    for (int t : m.update[s])
      if (!seen[t]) {
        seen[t] = 1;
        queue.push_back(t);
      }
  }
  return order;
}

inline std::vector<int> reachable_states(const ParamAutomaton& p) {
  std::vector<char> seen(p.size(), 0);
  std::vector<int> order;
  std::deque<int> queue{p.init};
  seen[p.init] = 1;
  auto visit = [&](int t) {
    if (t >= 0 && !seen[t]) {
      seen[t] = 1;
      queue.push_back(t);
    }
  };
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    order.push_back(s);
    for (std::size_t v = 0; v < p.black[s].size(); ++v) {
      if (p.is_test[s][v]) {
        visit(p.green[s][v].next);
        visit(p.red[s][v].next);
      } else {
        visit(p.black[s][v].next);
      }
    }
  }
  return order;
}

/// The Mealy strategy realized by p when the counter starts at n. States are
/// reachable (state, counter) pairs; green rules decrement, red rules fire
/// at zero, black rules ignore the counter.
inline MealyStrategy instantiate(const ParamAutomaton& p, long long n,
                                 const GameGraph& g) {
  if (n < 0)
    throw validation_error("counter value must be nonnegative");
  struct Key {
    long long c;
    int s;
    bool operator==(const Key& o) const { return c == o.c && s == o.s; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<long long>()(k.c * 1315423911LL + k.s);
    }
  };
  std::unordered_map<Key, int, KeyHash> index;
  std::vector<Key> keys;
  std::deque<Key> queue;
  auto intern = [&](Key k) {
    auto it = index.find(k);
    if (it != index.end())
      return it->second;
    int id = static_cast<int>(keys.size());
    index.emplace(k, id);
    keys.push_back(k);
    queue.push_back(k);
    return id;
  };
  intern({n, p.init});
  MealyStrategy m;
  m.init = 0;
  while (!queue.empty()) {
    Key k = queue.front();
    queue.pop_front();
    m.state_names.push_back(p.state_names[k.s] + "#" + std::to_string(k.c));
    m.update.emplace_back(g.size(), -1);
    m.move.emplace_back(g.size(), kNoMove);
    auto& upd = m.update.back();
    auto& mov = m.move.back();
    for (VertexId v = 0; v < g.size(); ++v) {
      ParamAutomaton::Rule rule;
      long long next_c;
      if (!p.is_test[k.s][v]) {
        rule = p.black[k.s][v];
        next_c = k.c;
      } else if (k.c > 0) {
        rule = p.green[k.s][v];
        next_c = k.c - 1;
      } else {
        rule = p.red[k.s][v];
        next_c = 0;
      }
      upd[v] = intern({next_c, rule.next});
      mov[v] = rule.move;
    }
  }
  return m;
}

/// Product of strategy and game from (m.init, start). Protagonist branching
/// is resolved by the strategy; antagonist vertices branch per game edge.
inline OnePlayerProduct one_player_product(const MealyStrategy& m,
                                           const GameGraph& g,
                                           VertexId start) {
  OnePlayerProduct prod;
  std::unordered_map<std::uint64_t, int> index;
  auto key = [&](int mem, VertexId v) {
    return static_cast<std::uint64_t>(mem) * g.size() + v;
  };
  std::deque<int> queue;
  auto intern = [&](int mem, VertexId v) {
    auto it = index.find(key(mem, v));
    if (it != index.end())
      return it->second;
    int id = static_cast<int>(prod.states.size());
    index.emplace(key(mem, v), id);
    prod.states.push_back({mem, v});
    prod.leaf.push_back(g.leaf[v]);
    queue.push_back(id);
    return id;
  };
  intern(m.init, start);
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    auto [mem, v] = prod.states[id];
    int next_mem = m.update[mem][v];
    std::vector<int> row;
    if (g.owner[v] == Player::Protagonist)
      row.push_back(intern(next_mem, m.move[mem][v]));
    else
      for (VertexId w : g.succ[v])
        row.push_back(intern(next_mem, w));
    if (static_cast<int>(prod.succ.size()) <= id)
      prod.succ.resize(id + 1);
    prod.succ[id] = std::move(row);
  }
  prod.succ.resize(prod.states.size());
  return prod;
}

inline OnePlayerProduct one_player_product(const MealyStrategy& m,
                                           const GameGraph& g) {
  return one_player_product(m, g, g.init);
}

/// Synchronized product of two strategies from the game's initial vertex.
inline SyncProduct sync_product(const MealyStrategy& s1, const GameGraph& g,
                                const MealyStrategy& s2) {
  SyncProduct prod;
  std::unordered_map<std::uint64_t, int> index;
  auto key = [&](int m1, VertexId v, int m2) {
    return (static_cast<std::uint64_t>(m1) * g.size() + v) * s2.size() + m2;
  };
  std::deque<int> queue;
  auto intern = [&](int m1, VertexId v, int m2) {
    auto it = index.find(key(m1, v, m2));
    if (it != index.end())
      return it->second;
    int id = static_cast<int>(prod.states.size());
    index.emplace(key(m1, v, m2), id);
    prod.states.push_back({m1, v, m2});
    queue.push_back(id);
    return id;
  };
  intern(s1.init, g.init, s2.init);
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    auto [m1, v, m2] = prod.states[id];
    std::vector<int> row;
    bool diverges = false;
    int u1 = s1.update[m1][v];
    int u2 = s2.update[m2][v];
    if (g.owner[v] == Player::Protagonist) {
      VertexId w1 = s1.move[m1][v];
      VertexId w2 = s2.move[m2][v];
      if (w1 != w2)
        diverges = true;
      else
        row.push_back(intern(u1, w1, u2));
    } else {
      for (VertexId w : g.succ[v])
        row.push_back(intern(u1, w, u2));
    }
    if (static_cast<int>(prod.succ.size()) <= id)
      prod.succ.resize(id + 1);
    if (static_cast<int>(prod.divergent.size()) <= id)
      prod.divergent.resize(id + 1, 0);
    prod.succ[id] = std::move(row);
    prod.divergent[id] = diverges;
  }
  prod.succ.resize(prod.states.size());
  prod.divergent.resize(prod.states.size(), 0);
  return prod;
}

/// Product of a parameterized automaton with the game, edges colored by the
/// rule that generated them.
inline ColoredProduct colored_product(const ParamAutomaton& p,
                                      const GameGraph& g) {
  ColoredProduct prod;
  std::unordered_map<std::uint64_t, int> index;
  auto key = [&](int mem, VertexId v) {
    return static_cast<std::uint64_t>(mem) * g.size() + v;
  };
  std::deque<int> queue;
  auto intern = [&](int mem, VertexId v) {
    auto it = index.find(key(mem, v));
    if (it != index.end())
      return it->second;
    int id = static_cast<int>(prod.states.size());
    index.emplace(key(mem, v), id);
    prod.states.push_back({mem, v});
    prod.out.emplace_back();
    queue.push_back(id);
    return id;
  };
  intern(p.init, g.init);
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    auto [mem, v] = prod.states[id];
    auto emit = [&](const ParamAutomaton::Rule& rule, EdgeColor color) {
      if (g.owner[v] == Player::Protagonist) {
        int to = intern(rule.next, rule.move);
        prod.out[id].push_back(static_cast<int>(prod.edges.size()));
        prod.edges.push_back({id, to, color});
      } else {
        for (VertexId w : g.succ[v]) {
          int to = intern(rule.next, w);
          prod.out[id].push_back(static_cast<int>(prod.edges.size()));
          prod.edges.push_back({id, to, color});
        }
      }
    };
    if (p.is_test[mem][v]) {
      emit(p.green[mem][v], EdgeColor::Green);
      emit(p.red[mem][v], EdgeColor::Red);
    } else {
      emit(p.black[mem][v], EdgeColor::Black);
    }
  }
  return prod;
}

struct PathJudgement {
  bool valid = false;
  long long greens = 0;
  long long reds = 0;
};

/// Validity of a color sequence: finitely many greens (automatic for finite
/// paths) and no green after a red.
inline PathJudgement judge_colors(const std::vector<EdgeColor>& colors) {
  PathJudgement j;
  j.valid = true;
  bool red_seen = false;
  for (EdgeColor c : colors) {
    if (c == EdgeColor::Green) {
      ++j.greens;
      if (red_seen)
        j.valid = false;
    } else if (c == EdgeColor::Red) {
      ++j.reds;
      red_seen = true;
    }
  }
  return j;
}

/// Judges a path of the colored product given as consecutive edge indices.
inline PathJudgement is_valid_path(const ColoredProduct& prod,
                                   const std::vector<int>& edge_indices) {
  std::vector<EdgeColor> colors;
  for (std::size_t i = 0; i < edge_indices.size(); ++i) {
    int e = edge_indices[i];
    if (e < 0 || e >= static_cast<int>(prod.edges.size()))
      throw validation_error("edge index out of range");
    if (i > 0 && prod.edges[edge_indices[i - 1]].to != prod.edges[e].from)
      throw validation_error("edge sequence is not a path");
    colors.push_back(prod.edges[e].color);
  }
  return judge_colors(colors);
}

/// Compatibility of a history with the strategy instantiated at counter k,
/// from the green/red counts of its valid product path: with no red the
/// counter only needs to be large enough, after a red it must have hit zero
/// exactly when the greens ran out.
inline bool compatible(long long reds, long long greens, long long k) {
  return (reds == 0 && k >= greens) || (reds > 0 && k == greens);
}

/// Two strategies are behaviorally equal when their synchronized product has
/// no reachable divergence: they prescribe the same move after every common
/// history.
inline bool behaviorally_equal(const MealyStrategy& s1, const GameGraph& g,
                               const MealyStrategy& s2) {
  auto sp = sync_product(s1, g, s2);
  for (std::size_t s = 0; s < sp.states.size(); ++s)
    if (sp.divergent[s])
      return false;
  return true;
}

}  // namespace gsr
