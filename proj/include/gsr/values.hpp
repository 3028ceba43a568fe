#pragma once

// Game values aVal/cVal/acVal per vertex, attractor computation, and the
// min/max strategy values on one-player products.
//
// Every play of a generalised safety/reachability game pays either some leaf
// payoff or 0, so each value is the best element of an "achievable payoff
// set": the payoffs of reachable leaves plus 0 whenever a leaf-free cycle is
// reachable. All computations below reduce to that set, evaluated per SCC.

#include <algorithm>
#include <cassert>
#include <limits>
#include <queue>
#include <vector>

#include "gsr/game.hpp"

namespace gsr {

struct ValueTriple {
  Payoff aval = 0;
  Payoff cval = 0;
  Payoff acval = 0;
};

enum class ValueMode { Min, Max };

namespace detail {

// What a play starting at a node can end up with: the span of reachable
// absorbing payoffs, and whether a leaf-free cycle is reachable.
struct ReachSummary {
  bool any_leaf = false;
  Payoff min_leaf = 0;
  Payoff max_leaf = 0;
  bool cycle = false;

  void absorb(const ReachSummary& o) {
    if (o.any_leaf) {
      if (!any_leaf) {
        any_leaf = true;
        min_leaf = o.min_leaf;
        max_leaf = o.max_leaf;
      } else {
        min_leaf = std::min(min_leaf, o.min_leaf);
        max_leaf = std::max(max_leaf, o.max_leaf);
      }
    }
    cycle = cycle || o.cycle;
  }
};

// Iterative Tarjan. Emits SCCs children-first, which is exactly the order
// needed to propagate reach summaries.
class SccRunner {
 public:
  explicit SccRunner(const std::vector<std::vector<int>>& succ)
      : succ_(succ),
        index_(succ.size(), -1),
        low_(succ.size(), 0),
        on_stack_(succ.size(), 0) {}

  // scc_of[node] = SCC id; SCC ids are assigned in children-first order.
  std::vector<int> run(std::vector<std::vector<int>>* members = nullptr) {
    std::vector<int> scc_of(succ_.size(), -1);
    for (int root = 0; root < static_cast<int>(succ_.size()); ++root) {
      if (index_[root] >= 0)
        continue;
      frames_.push_back({root, 0});
      index_[root] = low_[root] = next_index_++;
      stack_.push_back(root);
      on_stack_[root] = 1;
      while (!frames_.empty()) {
        auto& fr = frames_.back();
        int v = fr.node;
        if (fr.edge < succ_[v].size()) {
          int w = succ_[v][fr.edge++];
          if (index_[w] < 0) {
            index_[w] = low_[w] = next_index_++;
            stack_.push_back(w);
            on_stack_[w] = 1;
            frames_.push_back({w, 0});
          } else if (on_stack_[w]) {
            low_[v] = std::min(low_[v], index_[w]);
          }
        } else {
          frames_.pop_back();
          if (!frames_.empty())
            low_[frames_.back().node] = std::min(low_[frames_.back().node], low_[v]);
          if (low_[v] == index_[v]) {
            int id = next_scc_++;
            if (members)
              members->emplace_back();
            int w;
            do {
              w = stack_.back();
              stack_.pop_back();
              on_stack_[w] = 0;
              scc_of[w] = id;
              if (members)
                members->back().push_back(w);
            } while (w != v);
          }
        }
      }
    }
    return scc_of;
  }

 private:
  struct Frame {
    int node;
    std::size_t edge;
  };
  const std::vector<std::vector<int>>& succ_;
  std::vector<int> index_, low_;
  std::vector<char> on_stack_;
  std::vector<Frame> frames_;
  std::vector<int> stack_;
  int next_index_ = 0;
  int next_scc_ = 0;
};

// Per-node reach summary of a graph whose nodes may carry an absorbing
// payoff. Absorbing nodes keep exactly their own payoff; their outgoing
// edges are ignored (the play's payoff is already settled there).
inline std::vector<ReachSummary> reach_summaries(
    const std::vector<std::vector<int>>& succ,
    const std::vector<std::optional<Payoff>>& leaf) {
  const int n = static_cast<int>(succ.size());
  std::vector<std::vector<int>> members;
  std::vector<int> scc_of = SccRunner(succ).run(&members);

  std::vector<ReachSummary> scc_sum(members.size());
  std::vector<ReachSummary> out(n);
  // SCC ids come out children-first, so id order is already safe.
  for (int id = 0; id < static_cast<int>(members.size()); ++id) {
    ReachSummary s;
    std::size_t nonleaf_members = 0;
    for (int v : members[id])
      if (!leaf[v])
        ++nonleaf_members;
    // An SCC with two or more non-absorbing members always contains a cycle;
    // singletons only via a self-loop.
    if (nonleaf_members >= 2)
      s.cycle = true;
    for (int v : members[id]) {
      if (leaf[v]) {
        ReachSummary self;
        self.any_leaf = true;
        self.min_leaf = self.max_leaf = *leaf[v];
        out[v] = self;
        s.absorb(self);  // arriving at this SCC settles the payoff
        continue;
      }
      for (int w : succ[v]) {
        if (w == v)
          s.cycle = true;
        if (scc_of[w] == id) {
          if (leaf[w]) {
            ReachSummary lf;
            lf.any_leaf = true;
            lf.min_leaf = lf.max_leaf = *leaf[w];
            s.absorb(lf);
          }
          continue;
        }
        s.absorb(scc_sum[scc_of[w]]);
      }
    }
    scc_sum[id] = s;
    for (int v : members[id])
      if (!leaf[v])
        out[v] = s;
  }
  return out;
}

inline std::vector<std::vector<int>> game_adjacency(const GameGraph& g) {
  std::vector<std::vector<int>> succ(g.size());
  for (VertexId v = 0; v < g.size(); ++v)
    for (VertexId w : g.succ[v])
      succ[v].push_back(static_cast<int>(w));
  return succ;
}

struct AttractorResult {
  std::vector<char> in;
  std::vector<unsigned> rank;  // UINT_MAX outside, 0 on the target
};

inline AttractorResult attractor_mask(const GameGraph& g, Player player,
                                      const std::vector<char>& target) {
  const auto n = g.size();
  constexpr unsigned kOut = std::numeric_limits<unsigned>::max();
  AttractorResult res{std::vector<char>(n, 0), std::vector<unsigned>(n, kOut)};

  std::vector<std::vector<VertexId>> pred(n);
  std::vector<unsigned> pending(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    pending[v] = static_cast<unsigned>(g.succ[v].size());
    for (VertexId w : g.succ[v])
      pred[w].push_back(v);
  }

  std::queue<VertexId> queue;
  for (VertexId v = 0; v < n; ++v)
    if (target[v]) {
      res.in[v] = 1;
      res.rank[v] = 0;
      queue.push(v);
    }
  while (!queue.empty()) {
    VertexId w = queue.front();
    queue.pop();
    for (VertexId v : pred[w]) {
      if (res.in[v])
        continue;
      bool add = false;
      if (g.owner[v] == player) {
        add = true;
      } else {
        if (--pending[v] == 0)
          add = true;
      }
      if (add) {
        res.in[v] = 1;
        res.rank[v] = res.rank[w] + 1;
        queue.push(v);
      }
    }
  }
  return res;
}

// Descending candidate thresholds: every possible payoff, 0 included.
inline std::vector<Payoff> payoff_candidates(const GameGraph& g) {
  std::vector<Payoff> cand{0};
  for (VertexId v = 0; v < g.size(); ++v)
    if (g.is_leaf(v))
      cand.push_back(g.leaf_payoff(v));
  std::sort(cand.begin(), cand.end(), std::greater<>());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  return cand;
}

// Winning region of the protagonist for "payoff >= t". For positive t this
// is the attractor to the good-enough leaves; otherwise it is the safety
// region avoiding the too-bad leaves.
inline std::vector<char> threshold_region(const GameGraph& g, Payoff t) {
  const auto n = g.size();
  std::vector<char> region(n, 0);
  if (t > 0) {
    std::vector<char> good(n, 0);
    for (VertexId v = 0; v < n; ++v)
      good[v] = g.is_leaf(v) && g.leaf_payoff(v) >= t;
    region = attractor_mask(g, Player::Protagonist, good).in;
  } else {
    std::vector<char> bad(n, 0);
    for (VertexId v = 0; v < n; ++v)
      bad[v] = g.is_leaf(v) && g.leaf_payoff(v) < t;
    auto reach = attractor_mask(g, Player::Antagonist, bad).in;
    for (VertexId v = 0; v < n; ++v)
      region[v] = !reach[v];
  }
  return region;
}

inline std::vector<Payoff> antag_table(const GameGraph& g) {
  const auto n = g.size();
  std::vector<Payoff> aval(n, 0);
  std::vector<char> assigned(n, 0);
  for (Payoff t : payoff_candidates(g)) {
    auto region = threshold_region(g, t);
    for (VertexId v = 0; v < n; ++v)
      if (!assigned[v] && region[v]) {
        assigned[v] = 1;
        aval[v] = t;
      }
  }
  assert(std::all_of(assigned.begin(), assigned.end(), [](char c) { return c; }));
  return aval;
}

inline std::vector<Payoff> coop_table(const GameGraph& g) {
  auto sums = reach_summaries(game_adjacency(g), g.leaf);
  std::vector<Payoff> cval(g.size(), 0);
  for (VertexId v = 0; v < g.size(); ++v) {
    const auto& s = sums[v];
    assert(s.any_leaf || s.cycle);
    if (s.any_leaf)
      cval[v] = s.cycle ? std::max<Payoff>(s.max_leaf, 0) : s.max_leaf;
    else
      cval[v] = 0;
  }
  return cval;
}

// acVal via restriction to R = {u : aVal(u) >= aVal(v)}: within R the
// antagonist cannot leave, so the best witness play toward a leaf (or, when
// aVal(v) <= 0, toward a leaf-free cycle) stays in R and can be guarded by a
// worst-case optimal fallback.
inline std::vector<Payoff> antag_coop_table(const GameGraph& g,
                                            const std::vector<Payoff>& aval) {
  const auto n = g.size();
  std::vector<Payoff> acval(n, 0);
  std::vector<Payoff> levels(aval);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (Payoff t : levels) {
    std::vector<std::vector<int>> succ(n);
    for (VertexId v = 0; v < n; ++v) {
      if (aval[v] < t)
        continue;
      for (VertexId w : g.succ[v])
        if (aval[w] >= t)
          succ[v].push_back(static_cast<int>(w));
    }
    auto sums = reach_summaries(succ, g.leaf);
    for (VertexId v = 0; v < n; ++v) {
      if (aval[v] != t)
        continue;
      const auto& s = sums[v];
      bool zero_opt = t <= 0 && s.cycle;
      assert(s.any_leaf || zero_opt);
      if (s.any_leaf)
        acval[v] = zero_opt ? std::max<Payoff>(s.max_leaf, 0) : s.max_leaf;
      else
        acval[v] = 0;
      assert(acval[v] >= aval[v]);
    }
  }
  return acval;
}

}  // namespace detail

/// Least set of vertices from which `player` can force the play into
/// `target`; fixed point of the controlled-predecessor operator.
inline std::vector<VertexId> attractor(const GameGraph& g, Player player,
                                       const std::vector<VertexId>& target) {
  std::vector<char> mask(g.size(), 0);
  for (VertexId v : target) {
    if (v >= g.size())
      throw validation_error("attractor target vertex out of range");
    mask[v] = 1;
  }
  auto res = detail::attractor_mask(g, player, mask);
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.size(); ++v)
    if (res.in[v])
      out.push_back(v);
  return out;
}

/// All three values for every vertex, computed once. Immutable afterwards,
/// safe to share across threads.
struct GameValues {
  std::vector<ValueTriple> table;

  const ValueTriple& operator[](VertexId v) const { return table[v]; }
};

inline GameValues compute_values(const GameGraph& g) {
  GameValues vals;
  auto aval = detail::antag_table(g);
  auto cval = detail::coop_table(g);
  auto acval = detail::antag_coop_table(g, aval);
  vals.table.resize(g.size());
  for (VertexId v = 0; v < g.size(); ++v) {
    vals.table[v] = {aval[v], cval[v], acval[v]};
    assert(aval[v] <= acval[v] && acval[v] <= cval[v]);
  }
  return vals;
}

/// Best payoff reachable from v with full cooperation.
inline Payoff coop_value(const GameGraph& g, VertexId v) {
  return detail::coop_table(g)[v];
}

/// Best payoff the protagonist can force from v.
inline Payoff antag_value(const GameGraph& g, VertexId v) {
  return detail::antag_table(g)[v];
}

/// Best cooperative payoff among strategies that still force aVal(v).
inline Payoff antag_coop_value(const GameGraph& g, VertexId v) {
  auto aval = detail::antag_table(g);
  return detail::antag_coop_table(g, aval)[v];
}

/// Product of a Mealy strategy with the game: protagonist branching is
/// resolved by the strategy, so only the antagonist branches. States whose
/// vertex is a leaf absorb the play with that leaf's payoff.
struct OnePlayerProduct {
  struct State {
    int mem;
    VertexId v;
  };
  std::vector<State> states;              // BFS order from the initial state
  std::vector<std::vector<int>> succ;
  std::vector<std::optional<Payoff>> leaf;
  int initial = 0;
};

struct ProductValues {
  std::vector<Payoff> aval, cval;
};

inline ProductValues product_value_table(const OnePlayerProduct& p) {
  auto sums = detail::reach_summaries(p.succ, p.leaf);
  ProductValues out;
  out.aval.resize(p.states.size());
  out.cval.resize(p.states.size());
  for (std::size_t s = 0; s < p.states.size(); ++s) {
    const auto& r = sums[s];
    assert(r.any_leaf || r.cycle);
    Payoff lo, hi;
    if (!r.any_leaf) {
      lo = hi = 0;
    } else {
      lo = r.cycle ? std::min<Payoff>(r.min_leaf, 0) : r.min_leaf;
      hi = r.cycle ? std::max<Payoff>(r.max_leaf, 0) : r.max_leaf;
    }
    out.aval[s] = lo;
    out.cval[s] = hi;
  }
  return out;
}

/// aVal (Min) or cVal (Max) of the strategy from a product state.
inline Payoff product_value(const OnePlayerProduct& p, int state, ValueMode mode) {
  auto table = product_value_table(p);
  return mode == ValueMode::Min ? table.aval.at(state) : table.cval.at(state);
}

}  // namespace gsr
