#pragma once

// Weak/strict dominance between finite-memory strategies, admissibility and
// preadmissibility. Everything reduces to value comparisons on product
// states: by prefix independence, a history's values depend only on the
// memory/vertex pair it reaches.

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gsr/automata.hpp"
#include "gsr/values.hpp"

namespace gsr {

struct DominanceVerdict {
  struct Witness {
    SyncProduct::State state;                  // reachable divergence state
    std::vector<SyncProduct::State> path;      // initial state up to and including it
    Payoff cval1 = 0;                          // cVal of the dominated candidate there
    Payoff aval2 = 0;                          // aVal of the dominating candidate there
  };
  bool holds = false;
  std::optional<Witness> witness;              // present iff holds is false
};

namespace detail {

inline std::unordered_map<std::uint64_t, int> product_index(
    const OnePlayerProduct& prod, std::size_t num_vertices) {
  std::unordered_map<std::uint64_t, int> index;
  index.reserve(prod.states.size());
  for (std::size_t i = 0; i < prod.states.size(); ++i)
    index.emplace(static_cast<std::uint64_t>(prod.states[i].mem) * num_vertices +
                      prod.states[i].v,
                  static_cast<int>(i));
  return index;
}

// Parent-pointer BFS; exploring successors in order yields, for every state,
// the lexicographically-first shortest access path.
inline std::vector<int> bfs_parents(const std::vector<std::vector<int>>& succ,
                                    int initial) {
  std::vector<int> parent(succ.size(), -2);
  parent[initial] = -1;
  std::vector<int> queue{initial};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int s = queue[head];
    for (int t : succ[s])
      if (parent[t] == -2) {
        parent[t] = s;
        queue.push_back(t);
      }
  }
  return parent;
}

}  // namespace detail

/// Decides sigma1 <= sigma2 (weak dominance at the initial vertex). The
/// verdict is negative exactly when some reachable divergence state lets
/// sigma1 cooperate above what sigma2 can force; that state plus its access
/// path is the returned witness.
inline DominanceVerdict weakly_dominated(const MealyStrategy& s1,
                                         const MealyStrategy& s2,
                                         const GameGraph& g) {
  validate_mealy(s1, g);
  validate_mealy(s2, g);
  SyncProduct sp = sync_product(s1, g, s2);

  auto prod1 = one_player_product(s1, g);
  auto prod2 = one_player_product(s2, g);
  auto vals1 = product_value_table(prod1);
  auto vals2 = product_value_table(prod2);
  auto idx1 = detail::product_index(prod1, g.size());
  auto idx2 = detail::product_index(prod2, g.size());

  // BFS order so the first witness found carries the shortest, successor-
  // order-first access path.
  auto parent = detail::bfs_parents(sp.succ, sp.initial);
  std::vector<int> order{sp.initial};
  for (std::size_t head = 0; head < order.size(); ++head)
    for (int t : sp.succ[order[head]])
      if (parent[t] == order[head])
        order.push_back(t);

  for (int s : order) {
    if (!sp.divergent[s])
      continue;
    auto [m1, v, m2] = sp.states[s];
    // Divergence states are reached while both strategies follow the same
    // play, so both product states exist.
    Payoff c1 = vals1.cval[idx1.at(static_cast<std::uint64_t>(m1) * g.size() + v)];
    Payoff a2 = vals2.aval[idx2.at(static_cast<std::uint64_t>(m2) * g.size() + v)];
    if (c1 > a2) {
      DominanceVerdict verdict;
      verdict.holds = false;
      DominanceVerdict::Witness w;
      w.state = sp.states[s];
      w.cval1 = c1;
      w.aval2 = a2;
      std::vector<int> rev;
      for (int cur = s; cur != -1; cur = parent[cur])
        rev.push_back(cur);
      for (auto it = rev.rbegin(); it != rev.rend(); ++it)
        w.path.push_back(sp.states[*it]);
      verdict.witness = std::move(w);
      return verdict;
    }
  }
  return {true, std::nullopt};
}

/// Decides sigma1 < sigma2: weakly dominated one way but not the other.
/// Mutual weak dominance forces equal payoffs against every antagonist, so
/// the asymmetry is exactly strict dominance.
inline bool strictly_dominated(const MealyStrategy& s1, const MealyStrategy& s2,
                               const GameGraph& g) {
  return weakly_dominated(s1, s2, g).holds && !weakly_dominated(s2, s1, g).holds;
}

/// Admissibility analysis of one strategy over its game product.
struct AdmissibilityAnalysis {
  OnePlayerProduct product;
  ProductValues values;        // per product state
  GameValues game_values;      // per vertex
  std::vector<int> witnesses;  // product states witnessing non-admissibility
  std::vector<int> problematic;  // witnesses reachable without a prior
                                 // value-realizing visit of their vertex

  bool admissible() const { return witnesses.empty(); }
  bool preadmissible() const { return problematic.empty(); }

  // A state realizes its vertex's values when the strategy still forces
  // aVal(v) and can still cooperate up to acVal(v) from it.
  bool realizes_values(int state) const {
    VertexId v = product.states[state].v;
    return values.aval[state] == game_values[v].aval &&
           values.cval[state] == game_values[v].acval;
  }
};

inline AdmissibilityAnalysis analyze_admissibility(const MealyStrategy& m,
                                                   const GameGraph& g) {
  validate_mealy(m, g);
  AdmissibilityAnalysis a;
  a.product = one_player_product(m, g);
  a.values = product_value_table(a.product);
  a.game_values = compute_values(g);

  const std::size_t n = a.product.states.size();
  for (std::size_t s = 0; s < n; ++s) {
    VertexId v = a.product.states[s].v;
    Payoff av_s = a.values.aval[s];
    Payoff cv_s = a.values.cval[s];
    Payoff av = a.game_values[v].aval;
    Payoff acv = a.game_values[v].acval;
    if (cv_s <= av && (av_s < cv_s || cv_s < av || av < acv))
      a.witnesses.push_back(static_cast<int>(s));
  }

  // A witness violates preadmissibility when it can be reached while
  // avoiding every value-realizing state of the same vertex. One reachability
  // pass per distinct witness vertex suffices.
  std::vector<char> witness_vertex(g.size(), 0);
  for (int w : a.witnesses)
    witness_vertex[a.product.states[w].v] = 1;
  for (VertexId v = 0; v < g.size(); ++v) {
    if (!witness_vertex[v])
      continue;
    std::vector<char> blocked(n, 0);
    for (std::size_t s = 0; s < n; ++s)
      if (a.product.states[s].v == v && a.realizes_values(static_cast<int>(s)))
        blocked[s] = 1;
    std::vector<char> seen(n, 0);
    std::vector<int> queue;
    if (!blocked[a.product.initial]) {
      seen[a.product.initial] = 1;
      queue.push_back(a.product.initial);
    }
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (int t : a.product.succ[queue[head]])
        if (!seen[t] && !blocked[t]) {
          seen[t] = 1;
          queue.push_back(t);
        }
    for (int w : a.witnesses)
      if (a.product.states[w].v == v && seen[w])
        a.problematic.push_back(w);
  }
  std::sort(a.problematic.begin(), a.problematic.end());
  return a;
}

/// Reachable product states witnessing non-admissibility; empty iff the
/// strategy is admissible.
inline std::vector<OnePlayerProduct::State> non_admissibility_witnesses(
    const MealyStrategy& m, const GameGraph& g) {
  auto a = analyze_admissibility(m, g);
  std::vector<OnePlayerProduct::State> out;
  for (int s : a.witnesses)
    out.push_back(a.product.states[s]);
  return out;
}

inline bool is_admissible(const MealyStrategy& m, const GameGraph& g) {
  return analyze_admissibility(m, g).admissible();
}

/// True when every non-admissibility witness is preceded, at the same game
/// vertex, by a visit that still realizes aVal and acVal of that vertex.
inline bool is_preadmissible(const MealyStrategy& m, const GameGraph& g) {
  return analyze_admissibility(m, g).preadmissible();
}

struct AdmissibilityVerdict {
  bool admissible = false;
  std::vector<OnePlayerProduct::State> witnesses;
  bool preadmissible = false;
};

inline AdmissibilityVerdict check_admissibility(const MealyStrategy& m,
                                                const GameGraph& g) {
  auto a = analyze_admissibility(m, g);
  AdmissibilityVerdict v;
  v.admissible = a.admissible();
  v.preadmissible = a.preadmissible();
  for (int s : a.witnesses)
    v.witnesses.push_back(a.product.states[s]);
  return v;
}

}  // namespace gsr
