#pragma once

// Strategy construction: worst-case optimal and worst-case cooperative
// optimal strategies, the preadmissibilization loop, and the improvement of
// a strategy into an admissible strategy or a uniform chain dominating it.

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "gsr/automata.hpp"
#include "gsr/dominance.hpp"
#include "gsr/values.hpp"

namespace gsr {

namespace detail {

inline std::string fresh_name(std::unordered_set<std::string>& taken,
                              const std::string& base) {
  std::string name = base;
  for (int i = 2; taken.count(name); ++i)
    name = base + "_" + std::to_string(i);
  taken.insert(name);
  return name;
}

// Uniform positional choice realizing aVal everywhere: at positive values
// follow the attractor ranks toward the good-enough leaves, otherwise any
// aVal-non-decreasing successor keeps the guarantee.
inline std::vector<VertexId> positional_choices(const GameGraph& g) {
  auto aval = antag_table(g);
  std::vector<VertexId> choice(g.size(), kNoMove);
  std::map<Payoff, AttractorResult> attractors;
  for (VertexId u = 0; u < g.size(); ++u) {
    if (g.owner[u] != Player::Protagonist)
      continue;
    Payoff t = aval[u];
    if (t > 0) {
      auto it = attractors.find(t);
      if (it == attractors.end()) {
        std::vector<char> target(g.size(), 0);
        for (VertexId w = 0; w < g.size(); ++w)
          target[w] = g.is_leaf(w) && g.leaf_payoff(w) >= t;
        it = attractors.emplace(t, attractor_mask(g, Player::Protagonist, target))
                 .first;
      }
      const auto& att = it->second;
      assert(att.in[u]);
      VertexId best = kNoMove;
      for (VertexId w : g.succ[u])
        if (att.in[w] && (best == kNoMove || att.rank[w] < att.rank[best]))
          best = w;
      assert(best != kNoMove);
      choice[u] = best;
    } else {
      for (VertexId w : g.succ[u])
        if (aval[w] >= t) {
          choice[u] = w;
          break;
        }
      assert(choice[u] != kNoMove);
    }
  }
  return choice;
}

// Lexicographically-first shortest path from `from` to the first vertex
// satisfying `goal`, restricted to `allowed` vertices. Empty when none.
template <typename Goal>
inline std::vector<VertexId> bfs_path(const GameGraph& g, VertexId from,
                                      const std::vector<char>& allowed,
                                      Goal goal) {
  std::vector<int> parent(g.size(), -2);
  if (!allowed[from])
    return {};
  parent[from] = -1;
  std::vector<VertexId> queue{from};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    VertexId u = queue[head];
    if (goal(u)) {
      std::vector<VertexId> path;
      for (int cur = static_cast<int>(u); cur != -1; cur = parent[cur])
        path.push_back(static_cast<VertexId>(cur));
      std::reverse(path.begin(), path.end());
      return path;
    }
    if (g.is_leaf(u))
      continue;  // absorbing
    for (VertexId w : g.succ[u])
      if (allowed[w] && parent[w] == -2) {
        parent[w] = static_cast<int>(u);
        queue.push_back(w);
      }
  }
  return {};
}

// Shortest lasso from `from` into a cycle lying inside `interior`; returns
// the expected vertex sequence and the index the sequence loops back to.
// False when no cycle is reachable.
inline bool find_cycle_lasso(const GameGraph& g, VertexId from,
                             const std::vector<char>& interior,
                             std::vector<VertexId>& path,
                             std::size_t& loop_from) {
  auto on_cycle = [&](VertexId u) {
    std::vector<char> seen(g.size(), 0);
    std::vector<VertexId> queue;
    for (VertexId w : g.succ[u])
      if (interior[w] && !seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      if (queue[head] == u)
        return true;
      for (VertexId w : g.succ[queue[head]])
        if (interior[w] && !seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
    }
    return false;
  };
  auto stem = bfs_path(g, from, interior, on_cycle);
  if (stem.empty())
    return false;
  VertexId anchor = stem.back();
  std::vector<int> parent(g.size(), -2);
  std::vector<VertexId> queue;
  std::vector<VertexId> cycle;
  for (VertexId w : g.succ[anchor])
    if (interior[w] && parent[w] == -2) {
      parent[w] = -1;
      queue.push_back(w);
    }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    VertexId u = queue[head];
    if (u == anchor) {
      for (int cur = static_cast<int>(u); cur != -1; cur = parent[cur])
        cycle.push_back(static_cast<VertexId>(cur));
      std::reverse(cycle.begin(), cycle.end());
      break;
    }
    for (VertexId w : g.succ[u])
      if (interior[w] && parent[w] == -2) {
        parent[w] = static_cast<int>(u);
        queue.push_back(w);
      }
  }
  if (cycle.empty())
    return false;
  loop_from = stem.size() - 1;
  path = std::move(stem);
  for (std::size_t i = 0; i + 1 < cycle.size(); ++i)
    path.push_back(cycle[i]);
  return true;
}

// One-state strategy from a full positional choice table.
inline MealyStrategy positional_strategy(const GameGraph& g,
                                         const std::vector<VertexId>& choice) {
  MealyStrategy m;
  m.state_names = {"pos"};
  m.init = 0;
  m.update.assign(1, std::vector<int>(g.size(), 0));
  m.move.assign(1, std::vector<VertexId>(g.size(), kNoMove));
  for (VertexId v = 0; v < g.size(); ++v)
    if (g.owner[v] == Player::Protagonist)
      m.move[0][v] = g.is_leaf(v) ? v : choice[v];
  return m;
}

// Follows `expected` (wrapping back to `loop_from` at the end); any deviation
// switches to the positional fallback for good.
inline MealyStrategy path_follower(const GameGraph& g,
                                   const std::vector<VertexId>& expected,
                                   std::size_t loop_from,
                                   const std::vector<VertexId>& fallback,
                                   const std::string& prefix) {
  const std::size_t len = expected.size();
  MealyStrategy m;
  m.init = 0;
  const int dev = static_cast<int>(len);
  for (std::size_t i = 0; i < len; ++i)
    m.state_names.push_back(prefix + "_" + std::to_string(i));
  m.state_names.push_back(prefix + "_dev");
  m.update.assign(len + 1, std::vector<int>(g.size(), dev));
  m.move.assign(len + 1, std::vector<VertexId>(g.size(), kNoMove));

  auto fallback_move = [&](VertexId v) {
    return g.is_leaf(v) ? v : fallback[v];
  };
  for (std::size_t i = 0; i <= len; ++i)
    for (VertexId v = 0; v < g.size(); ++v)
      if (g.owner[v] == Player::Protagonist)
        m.move[i][v] = fallback_move(v);
  for (std::size_t i = 0; i < len; ++i) {
    VertexId v = expected[i];
    std::size_t next = i + 1 < len ? i + 1 : loop_from;
    m.update[i][v] = static_cast<int>(next);
    if (g.owner[v] == Player::Protagonist)
      m.move[i][v] = expected[next];
  }
  return m;
}

}  // namespace detail

/// Positional strategy that is worst-case optimal from every vertex at once:
/// aVal((m0,u), sigma) = aVal(u) for all u reachable under it from v.
inline MealyStrategy synth_worst_case_optimal(const GameGraph& g, VertexId v) {
  if (v >= g.size())
    throw validation_error("vertex out of range");
  return detail::positional_strategy(g, detail::positional_choices(g));
}

/// Worst-case cooperative optimal strategy for v: follows a best cooperative
/// witness play inside the region where aVal stays at least aVal(v), and
/// punishes any deviation with the worst-case optimal fallback. Product
/// values from (init, v) are exactly (aVal(v), acVal(v)).
inline MealyStrategy synth_wco(const GameGraph& g, VertexId v) {
  if (v >= g.size())
    throw validation_error("vertex out of range");
  auto aval = detail::antag_table(g);
  auto acval = detail::antag_coop_table(g, aval);
  Payoff threshold = aval[v];
  Payoff goal = acval[v];

  std::vector<char> region(g.size(), 0);
  for (VertexId u = 0; u < g.size(); ++u)
    region[u] = aval[u] >= threshold;

  auto path = detail::bfs_path(g, v, region, [&](VertexId u) {
    return g.is_leaf(u) && g.leaf_payoff(u) == goal;
  });
  std::size_t loop_from;
  if (!path.empty()) {
    loop_from = path.size() - 1;  // the leaf self-loop
  } else {
    // acVal realized only by a leaf-free play; loop forever on a reachable
    // cycle inside the region.
    assert(threshold <= 0 && goal == 0);
    std::vector<char> interior(region);
    for (VertexId u = 0; u < g.size(); ++u)
      if (g.is_leaf(u))
        interior[u] = 0;
    if (!detail::find_cycle_lasso(g, v, interior, path, loop_from))
      throw std::logic_error("no acVal witness found");
  }
  return detail::path_follower(g, path, loop_from, detail::positional_choices(g),
                               "w" + g.names[v]);
}

/// Strategy whose product from (init, v) realizes cVal(v); the cooperative
/// half of well-formedness.
inline MealyStrategy synth_cooperative_optimal(const GameGraph& g, VertexId v) {
  if (v >= g.size())
    throw validation_error("vertex out of range");
  auto cval = detail::coop_table(g);
  Payoff goal = cval[v];
  std::vector<char> all(g.size(), 1);
  auto path = detail::bfs_path(g, v, all, [&](VertexId u) {
    return g.is_leaf(u) && g.leaf_payoff(u) == goal;
  });
  std::size_t loop_from;
  if (!path.empty()) {
    loop_from = path.size() - 1;
  } else {
    assert(goal == 0);
    std::vector<char> interior(g.size(), 1);
    for (VertexId u = 0; u < g.size(); ++u)
      if (g.is_leaf(u))
        interior[u] = 0;
    if (!detail::find_cycle_lasso(g, v, interior, path, loop_from))
      throw std::logic_error("no cVal witness found");
  }
  return detail::path_follower(g, path, loop_from, detail::positional_choices(g),
                               "c" + g.names[v]);
}

/// Drops states unreachable in the update graph, keeping BFS order.
inline MealyStrategy prune_unreachable(const MealyStrategy& m) {
  auto order = reachable_states(m);
  std::vector<int> remap(m.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i)
    remap[order[i]] = static_cast<int>(i);
  MealyStrategy out;
  out.init = remap[m.init];
  for (int old : order) {
    out.state_names.push_back(m.state_names[old]);
    out.update.push_back(m.update[old]);
    for (int& t : out.update.back())
      t = remap[t];
    out.move.push_back(m.move[old]);
  }
  return out;
}

/// Rewires every witness state that violates preadmissibility into the
/// worst-case cooperative optimal strategy of its vertex, repeating until no
/// violation is left. The result is preadmissible and weakly dominates the
/// input; a preadmissible input comes back unchanged.
inline MealyStrategy preadmissibilize(const MealyStrategy& s, const GameGraph& g) {
  MealyStrategy cur = s;
  for (std::size_t round = 0; round <= g.size(); ++round) {
    auto analysis = analyze_admissibility(cur, g);
    if (analysis.problematic.empty())
      return cur;
    if (round == g.size())
      throw std::logic_error("preadmissibilize did not converge");

    std::vector<VertexId> vertices;
    for (int w : analysis.problematic) {
      VertexId v = analysis.product.states[w].v;
      if (std::find(vertices.begin(), vertices.end(), v) == vertices.end())
        vertices.push_back(v);
    }
    std::unordered_set<std::string> taken(cur.state_names.begin(),
                                          cur.state_names.end());
    MealyStrategy next = cur;
    std::vector<int> entry(g.size(), -1);  // init state of tau^v, per vertex
    for (VertexId v : vertices) {
      MealyStrategy tau = synth_wco(g, v);
      int offset = static_cast<int>(next.size());
      entry[v] = offset + tau.init;
      for (std::size_t i = 0; i < tau.size(); ++i) {
        next.state_names.push_back(detail::fresh_name(taken, tau.state_names[i]));
        next.update.push_back(tau.update[i]);
        for (int& t : next.update.back())
          t += offset;
        next.move.push_back(tau.move[i]);
      }
    }
    for (int w : analysis.problematic) {
      auto [mem, v] = analysis.product.states[w];
      int tau_init = entry[v];
      // Jump into tau^v exactly as it would behave when reading v itself.
      next.update[mem][v] = next.update[tau_init][v];
      next.move[mem][v] = next.move[tau_init][v];
    }
    cur = prune_unreachable(next);
  }
  return cur;  // unreachable
}

/// Result of improving a strategy: either a single admissible strategy or a
/// parameterized automaton realizing a maximal uniform chain above it.
struct ImprovementResult {
  enum class Kind { SingleStrategy, UniformChain };
  Kind kind = Kind::SingleStrategy;
  MealyStrategy single;
  ParamAutomaton chain;
  std::vector<std::pair<std::string, std::string>> rewired;  // (state, vertex)
};

/// Improvement construction: preadmissibilize, then for every witness pair
/// copy the behavior of the recorded value-realizing prior visit of the
/// same vertex; at positive aVal the copy goes behind a green rule with the
/// original behavior as the red rule, yielding a uniform chain.
inline ImprovementResult improve_to_maximal(const MealyStrategy& s,
                                            const GameGraph& g) {
  MealyStrategy base = preadmissibilize(s, g);
  auto analysis = analyze_admissibility(base, g);
  ImprovementResult result;
  if (analysis.witnesses.empty()) {
    result.kind = ImprovementResult::Kind::SingleStrategy;
    result.single = base;
    return result;
  }

  GameValues gvals = compute_values(g);
  // Witness pairs and value-realizing ("good") pairs of the base product.
  std::vector<std::vector<char>> witness_pair(base.size(),
                                              std::vector<char>(g.size(), 0));
  std::vector<std::vector<char>> good_pair(base.size(),
                                           std::vector<char>(g.size(), 0));
  for (int w : analysis.witnesses)
    witness_pair[analysis.product.states[w].mem][analysis.product.states[w].v] = 1;
  for (std::size_t st = 0; st < analysis.product.states.size(); ++st)
    if (analysis.realizes_values(static_cast<int>(st)))
      good_pair[analysis.product.states[st].mem][analysis.product.states[st].v] = 1;

  std::vector<VertexId> tracked;  // witness vertices, ascending
  for (VertexId v = 0; v < g.size(); ++v)
    for (int w : analysis.witnesses)
      if (analysis.product.states[w].v == v) {
        tracked.push_back(v);
        break;
      }
  std::vector<int> slot(g.size(), -1);
  for (std::size_t i = 0; i < tracked.size(); ++i)
    slot[tracked[i]] = static_cast<int>(i);

  // Expanded states remember, per witness vertex, the base state of the
  // first value-realizing visit; that visit is the canonic prior.
  struct Expanded {
    int mem;
    std::vector<int> prior;  // per tracked vertex, -1 while unseen
    bool operator==(const Expanded& o) const {
      return mem == o.mem && prior == o.prior;
    }
  };
  struct ExpandedHash {
    std::size_t operator()(const Expanded& e) const {
      std::size_t h = std::hash<int>()(e.mem);
      for (int p : e.prior)
        h = h * 1000003u + static_cast<std::size_t>(p + 1);
      return h;
    }
  };

  std::unordered_map<Expanded, int, ExpandedHash> index;
  std::vector<Expanded> states;
  std::deque<int> queue;
  auto intern = [&](const Expanded& e) {
    auto it = index.find(e);
    if (it != index.end())
      return it->second;
    int id = static_cast<int>(states.size());
    index.emplace(e, id);
    states.push_back(e);
    queue.push_back(id);
    return id;
  };
  intern({base.init, std::vector<int>(tracked.size(), -1)});

  ParamAutomaton out;
  out.init = 0;
  bool any_colored = false;
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    Expanded e = states[id];
    {
      std::string name = base.state_names[e.mem];
      for (std::size_t i = 0; i < tracked.size(); ++i)
        if (e.prior[i] >= 0)
          name += "@" + g.names[tracked[i]] + ":" +
                  base.state_names[e.prior[i]];
      out.state_names.push_back(name);
    }
    out.is_test.emplace_back(g.size(), 0);
    out.black.emplace_back(g.size(), ParamAutomaton::Rule{});
    out.green.emplace_back(g.size(), ParamAutomaton::Rule{});
    out.red.emplace_back(g.size(), ParamAutomaton::Rule{});
    for (VertexId v = 0; v < g.size(); ++v) {
      Expanded next = e;
      if (slot[v] >= 0 && next.prior[slot[v]] < 0 && good_pair[e.mem][v])
        next.prior[slot[v]] = e.mem;

      auto base_rule = [&](int from_mem) {
        ParamAutomaton::Rule r;
        Expanded target = next;
        target.mem = base.update[from_mem][v];
        r.next = intern(target);
        r.move = base.move[from_mem][v];
        return r;
      };

      if (witness_pair[e.mem][v] && next.prior[slot[v]] >= 0) {
        // A missing prior can only happen on rows the game can never feed to
        // this state: preadmissibility guarantees a value-realizing visit on
        // every real path into a witness. Such rows keep the base behavior.
        int prior = next.prior[slot[v]];
        if (gvals[v].aval <= 0) {
          out.black.back()[v] = base_rule(prior);
          result.rewired.emplace_back(out.state_names[id], g.names[v]);
        } else {
          out.is_test.back()[v] = 1;
          out.green.back()[v] = base_rule(prior);
          out.red.back()[v] = base_rule(e.mem);
          any_colored = true;
          result.rewired.emplace_back(out.state_names[id], g.names[v]);
        }
      } else {
        out.black.back()[v] = base_rule(e.mem);
      }
    }
    if (states.size() > 200000)
      throw std::logic_error("improvement blow-up");
  }

  if (!any_colored) {
    // All rewires were plain copies; the automaton is counterless and the
    // realized strategy is a single admissible one.
    result.kind = ImprovementResult::Kind::SingleStrategy;
    result.single = instantiate(out, 0, g);
    return result;
  }
  validate_param(out, g);
  result.kind = ImprovementResult::Kind::UniformChain;
  result.chain = out;
  return result;
}

}  // namespace gsr
