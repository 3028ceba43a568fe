#pragma once

// Brute-force reference implementations and random-instance generators.
// Everything here recomputes from the definitions: positional enumeration
// for aVal/cVal, bounded Mealy enumeration for acVal, and explicit product
// unrolling for dominance. Only the data types are shared with the library;
// value search, reachability and witness checks are written from scratch.

#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gsr/automata.hpp"
#include "gsr/dominance.hpp"
#include "gsr/game.hpp"
#include "gsr/values.hpp"

namespace gsr {

struct GenConfig {
  std::uint64_t seed = 1;
  int vertex_count = 5;
  int leaf_count = 2;
  int payoff_range = 2;      // payoffs drawn from [-payoff_range, payoff_range]
  int max_out_degree = 2;
  int mealy_states = 2;
  int param_states = 2;
};

namespace oracle_detail {

// Bounded draws straight off the engine; distribution objects are not
// bit-stable across standard library implementations.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  long long below(long long n) {
    return static_cast<long long>(eng() % static_cast<std::uint64_t>(n));
  }
};

constexpr int kMaxBruteVertices = 7;

// Payoff of the positional play from v: walk long enough to either absorb in
// a leaf or certify a leaf-free cycle.
inline Payoff play_payoff(const GameGraph& g, const std::vector<VertexId>& choice,
                          VertexId v) {
  VertexId cur = v;
  for (std::size_t step = 0; step <= 2 * g.size() + 2; ++step) {
    if (g.is_leaf(cur))
      return g.leaf_payoff(cur);
    cur = choice[cur];
  }
  return 0;
}

// Enumerates every positional choice vector for the vertices owned by
// `player` (identity elsewhere is irrelevant; all non-leaf vertices of that
// player get a concrete successor pick).
template <typename Fn>
inline void for_each_positional(const GameGraph& g, Player player,
                                std::vector<VertexId>& choice, VertexId v,
                                Fn&& fn) {
  while (v < g.size() && (g.owner[v] != player || g.is_leaf(v)))
    ++v;
  if (v == g.size()) {
    fn();
    return;
  }
  for (VertexId w : g.succ[v]) {
    choice[v] = w;
    for_each_positional(g, player, choice, v + 1, fn);
  }
}

// Min and max payoff achievable against a fixed protagonist machine given by
// callbacks, from memory `mem` at vertex `v`. Independent recomputation:
// explicit reachable-pair collection plus a self-reachability cycle test.
struct MinMax {
  Payoff lo = 0, hi = 0;
};

inline MinMax machine_min_max(
    const GameGraph& g, int mem, VertexId v, int num_mems,
    const std::function<int(int, VertexId)>& update,
    const std::function<VertexId(int, VertexId)>& move) {
  const int n = static_cast<int>(g.size());
  auto id = [&](int m, VertexId u) { return m * n + static_cast<int>(u); };
  std::vector<char> seen(num_mems * n, 0);
  std::vector<std::pair<int, VertexId>> stack{{mem, v}}, reached;
  seen[id(mem, v)] = 1;
  while (!stack.empty()) {
    auto [m, u] = stack.back();
    stack.pop_back();
    reached.push_back({m, u});
    if (g.is_leaf(u))
      continue;
    int m2 = update(m, u);
    if (g.owner[u] == Player::Protagonist) {
      VertexId w = move(m, u);
      if (!seen[id(m2, w)]) {
        seen[id(m2, w)] = 1;
        stack.push_back({m2, w});
      }
    } else {
      for (VertexId w : g.succ[u])
        if (!seen[id(m2, w)]) {
          seen[id(m2, w)] = 1;
          stack.push_back({m2, w});
        }
    }
  }
  bool any_leaf = false;
  Payoff lo = 0, hi = 0;
  for (auto [m, u] : reached)
    if (g.is_leaf(u)) {
      Payoff p = g.leaf_payoff(u);
      if (!any_leaf) {
        lo = hi = p;
        any_leaf = true;
      } else {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
      }
    }
  // A leaf-free cycle among the reached pairs adds payoff 0 to the pot.
  bool cycle = false;
  for (auto [m, u] : reached) {
    if (cycle)
      break;
    if (g.is_leaf(u))
      continue;
    // Can (m, u) reach itself in one or more steps through non-leaf pairs?
    std::vector<char> mark(num_mems * n, 0);
    std::vector<std::pair<int, VertexId>> work;
    auto push_succs = [&](int mm, VertexId uu) {
      int m2 = update(mm, uu);
      if (g.owner[uu] == Player::Protagonist) {
        VertexId w = move(mm, uu);
        if (!g.is_leaf(w) && !mark[id(m2, w)]) {
          mark[id(m2, w)] = 1;
          work.push_back({m2, w});
        }
      } else {
        for (VertexId w : g.succ[uu])
          if (!g.is_leaf(w) && !mark[id(m2, w)]) {
            mark[id(m2, w)] = 1;
            work.push_back({m2, w});
          }
      }
    };
    push_succs(m, u);
    while (!work.empty()) {
      auto [mm, uu] = work.back();
      work.pop_back();
      if (mm == m && uu == u) {
        cycle = true;
        break;
      }
      push_succs(mm, uu);
    }
  }
  MinMax out;
  if (!any_leaf) {
    out.lo = out.hi = 0;
  } else {
    out.lo = cycle ? std::min<Payoff>(lo, 0) : lo;
    out.hi = cycle ? std::max<Payoff>(hi, 0) : hi;
  }
  return out;
}

// Enumerates protagonist Mealy machines with at most `mems` memory states,
// branching only on (memory, vertex) pairs actually reached from (0, start).
// Calls fn once per completed behavior with the decision tables.
template <typename Fn>
inline void enumerate_machines(const GameGraph& g, int mems, VertexId start,
                               std::vector<int>& update,
                               std::vector<int>& move_idx, Fn&& fn) {
  const int n = static_cast<int>(g.size());
  auto id = [&](int m, VertexId u) { return m * n + static_cast<int>(u); };
  // Find one reachable undecided pair, if any.
  std::vector<char> seen(mems * n, 0);
  std::vector<std::pair<int, VertexId>> stack{{0, start}};
  seen[id(0, start)] = 1;
  int pick = -1;
  while (!stack.empty() && pick < 0) {
    auto [m, u] = stack.back();
    stack.pop_back();
    if (g.is_leaf(u))
      continue;
    if (update[id(m, u)] < 0 ||
        (g.owner[u] == Player::Protagonist && move_idx[id(m, u)] < 0)) {
      pick = id(m, u);
      break;
    }
    int m2 = update[id(m, u)];
    if (g.owner[u] == Player::Protagonist) {
      VertexId w = g.succ[u][move_idx[id(m, u)]];
      if (!seen[id(m2, w)]) {
        seen[id(m2, w)] = 1;
        stack.push_back({m2, w});
      }
    } else {
      for (VertexId w : g.succ[u])
        if (!seen[id(m2, w)]) {
          seen[id(m2, w)] = 1;
          stack.push_back({m2, w});
        }
    }
  }
  if (pick < 0) {
    fn();
    return;
  }
  int m = pick / n;
  VertexId u = static_cast<VertexId>(pick % n);
  std::size_t moves =
      g.owner[u] == Player::Protagonist ? g.succ[u].size() : 1;
  for (std::size_t mi = 0; mi < moves; ++mi) {
    if (g.owner[u] == Player::Protagonist)
      move_idx[pick] = static_cast<int>(mi);
    for (int m2 = 0; m2 < mems; ++m2) {
      update[pick] = m2;
      enumerate_machines(g, mems, start, update, move_idx, fn);
    }
    update[pick] = -1;
    if (g.owner[u] == Player::Protagonist)
      move_idx[pick] = -1;
  }
  (void)m;
}

}  // namespace oracle_detail

/// Brute-force value triple at v. aVal and cVal come from exhaustive
/// positional enumeration on both sides; acVal from exhaustive enumeration
/// of protagonist Mealy machines up to `memory_bound` states, keeping the
/// best cooperative value among the worst-case optimal ones.
inline ValueTriple brute_values(const GameGraph& g, VertexId v,
                                int memory_bound = 2) {
  if (g.size() > oracle_detail::kMaxBruteVertices)
    throw validation_error("instance too large for the brute-force oracle");
  if (memory_bound < 1 || memory_bound > 2)
    throw validation_error("acVal oracle memory bound must be 1 or 2");

  ValueTriple out;
  bool first_sigma = true;
  std::vector<VertexId> choice(g.size(), 0);
  oracle_detail::for_each_positional(
      g, Player::Protagonist, choice, 0, [&]() {
        Payoff worst = 0, best = 0;
        bool first_tau = true;
        oracle_detail::for_each_positional(
            g, Player::Antagonist, choice, 0, [&]() {
              Payoff p = oracle_detail::play_payoff(g, choice, v);
              if (first_tau) {
                worst = best = p;
                first_tau = false;
              } else {
                worst = std::min(worst, p);
                best = std::max(best, p);
              }
            });
        if (first_sigma) {
          out.aval = worst;
          out.cval = best;
          first_sigma = false;
        } else {
          out.aval = std::max(out.aval, worst);
          out.cval = std::max(out.cval, best);
        }
      });

  const int n = static_cast<int>(g.size());
  bool have = false;
  std::vector<int> update(memory_bound * n, -1);
  std::vector<int> move_idx(memory_bound * n, -1);
  oracle_detail::enumerate_machines(
      g, memory_bound, v, update, move_idx, [&]() {
        auto mm = oracle_detail::machine_min_max(
            g, 0, v, memory_bound,
            [&](int m, VertexId u) { return update[m * n + static_cast<int>(u)]; },
            [&](int m, VertexId u) {
              return g.succ[u][move_idx[m * n + static_cast<int>(u)]];
            });
        if (mm.lo >= out.aval && (!have || mm.hi > out.acval)) {
          out.acval = mm.hi;
          have = true;
        }
      });
  if (!have)
    throw std::logic_error("acVal oracle found no worst-case optimal machine");
  return out;
}

/// Brute-force weak dominance: unrolls the joint behavior of both strategies
/// explicitly and checks every disagreeing protagonist pair by separate DFS
/// evaluation of the two strategies' achievable payoffs.
inline bool brute_dominance(const MealyStrategy& s1, const MealyStrategy& s2,
                            const GameGraph& g) {
  if (g.size() > oracle_detail::kMaxBruteVertices)
    throw validation_error("instance too large for the brute-force oracle");
  if (s1.size() > 32 || s2.size() > 32)
    throw validation_error("strategies too large for the brute-force oracle");

  const int n = static_cast<int>(g.size());
  auto eval1 = [&](int mem, VertexId v) {
    return oracle_detail::machine_min_max(
        g, mem, v, static_cast<int>(s1.size()),
        [&](int m, VertexId u) { return s1.update[m][u]; },
        [&](int m, VertexId u) { return s1.move[m][u]; });
  };
  auto eval2 = [&](int mem, VertexId v) {
    return oracle_detail::machine_min_max(
        g, mem, v, static_cast<int>(s2.size()),
        [&](int m, VertexId u) { return s2.update[m][u]; },
        [&](int m, VertexId u) { return s2.move[m][u]; });
  };

  auto id = [&](int m1, VertexId v, int m2) {
    return (static_cast<std::size_t>(m1) * g.size() + v) * s2.size() + m2;
  };
  std::vector<char> seen(s1.size() * g.size() * s2.size(), 0);
  std::vector<std::tuple<int, VertexId, int>> stack{{s1.init, g.init, s2.init}};
  seen[id(s1.init, g.init, s2.init)] = 1;
  while (!stack.empty()) {
    auto [m1, v, m2] = stack.back();
    stack.pop_back();
    if (g.owner[v] == Player::Protagonist && s1.move[m1][v] != s2.move[m2][v]) {
      // Histories reaching this pair witness non-dominance iff sigma1 can
      // still cooperate above what sigma2 forces.
      if (eval1(m1, v).hi > eval2(m2, v).lo)
        return false;
      continue;  // strategies separate here; no common continuation
    }
    int u1 = s1.update[m1][v];
    int u2 = s2.update[m2][v];
    if (g.owner[v] == Player::Protagonist) {
      VertexId w = s1.move[m1][v];
      if (!seen[id(u1, w, u2)]) {
        seen[id(u1, w, u2)] = 1;
        stack.push_back({u1, w, u2});
      }
    } else {
      for (VertexId w : g.succ[v])
        if (!seen[id(u1, w, u2)]) {
          seen[id(u1, w, u2)] = 1;
          stack.push_back({u1, w, u2});
        }
    }
  }
  (void)n;
  return true;
}

/// Seed-reproducible random game: leaves last, init first, successor lists
/// deduplicated, every invariant of the type enforced by construction.
inline GameGraph gen_random_game(const GenConfig& cfg) {
  if (cfg.vertex_count < 1 || cfg.leaf_count < 1 ||
      cfg.leaf_count > cfg.vertex_count || cfg.max_out_degree < 1 ||
      cfg.payoff_range < 0)
    throw validation_error("unsatisfiable generator config");
  oracle_detail::Rng rng(cfg.seed);
  GameGraph g;
  const int n = cfg.vertex_count;
  const int leaves_from = n - cfg.leaf_count;
  for (int i = 0; i < n; ++i) {
    bool leaf = i >= leaves_from;
    g.names.push_back((leaf ? "l" : "v") + std::to_string(i));
    g.owner.push_back(rng.below(2) == 0 ? Player::Protagonist
                                        : Player::Antagonist);
    if (leaf)
      g.leaf.push_back(rng.below(2 * cfg.payoff_range + 1) - cfg.payoff_range);
    else
      g.leaf.push_back(std::nullopt);
    g.succ.emplace_back();
  }
  for (int i = 0; i < n; ++i) {
    if (g.leaf[i]) {
      g.succ[i].push_back(static_cast<VertexId>(i));
      continue;
    }
    long long degree = 1 + rng.below(std::min(cfg.max_out_degree, n));
    std::vector<VertexId> pool(n);
    for (int j = 0; j < n; ++j)
      pool[j] = static_cast<VertexId>(j);
    for (long long d = 0; d < degree; ++d) {
      long long pick = d + rng.below(n - d);
      std::swap(pool[d], pool[pick]);
      g.succ[i].push_back(pool[d]);
    }
  }
  g.init = 0;
  validate_game(g);
  return g;
}

/// Seed-reproducible random Mealy strategy bound to g.
inline MealyStrategy gen_random_mealy(const GenConfig& cfg, const GameGraph& g) {
  if (cfg.mealy_states < 1)
    throw validation_error("unsatisfiable generator config");
  oracle_detail::Rng rng(cfg.seed);
  MealyStrategy m;
  m.init = 0;
  for (int s = 0; s < cfg.mealy_states; ++s) {
    m.state_names.push_back("m" + std::to_string(s));
    m.update.emplace_back();
    m.move.emplace_back();
    for (VertexId v = 0; v < g.size(); ++v) {
      m.update.back().push_back(static_cast<int>(rng.below(cfg.mealy_states)));
      m.move.back().push_back(
          g.owner[v] == Player::Protagonist
              ? g.succ[v][rng.below(static_cast<long long>(g.succ[v].size()))]
              : kNoMove);
    }
  }
  validate_mealy(m, g);
  return m;
}

struct OracleCheckOptions {
  std::uint64_t seed = 1;
  int count = 100;
  int max_vertices = 6;
  int max_leaves = 2;
  int max_degree = 3;
  int max_mealy_states = 3;
  int payoff_range = 2;
  bool check_acval = true;
};

struct OracleCheckReport {
  int games = 0;
  long long value_checks = 0;
  long long dominance_checks = 0;
  int mismatches = 0;
  std::string first_counterexample;

  bool pass() const { return mismatches == 0; }
};

/// Seeded corpus run: every instance is checked for values-vs-brute and
/// dominance-vs-brute agreement. The first counterexample comes back
/// serialized in the game/automaton file formats.
inline OracleCheckReport oracle_check(const OracleCheckOptions& opt);

/// Seed-reproducible random parameterized automaton; roughly a quarter of
/// the (state, vertex) pairs become counter tests.
inline ParamAutomaton gen_random_param(const GenConfig& cfg, const GameGraph& g) {
  if (cfg.param_states < 1)
    throw validation_error("unsatisfiable generator config");
  oracle_detail::Rng rng(cfg.seed);
  ParamAutomaton p;
  p.init = 0;
  auto rule = [&](VertexId v) {
    ParamAutomaton::Rule r;
    r.next = static_cast<int>(rng.below(cfg.param_states));
    r.move = g.owner[v] == Player::Protagonist
                 ? g.succ[v][rng.below(static_cast<long long>(g.succ[v].size()))]
                 : kNoMove;
    return r;
  };
  for (int s = 0; s < cfg.param_states; ++s) {
    p.state_names.push_back("p" + std::to_string(s));
    p.is_test.emplace_back(g.size(), 0);
    p.black.emplace_back(g.size(), ParamAutomaton::Rule{});
    p.green.emplace_back(g.size(), ParamAutomaton::Rule{});
    p.red.emplace_back(g.size(), ParamAutomaton::Rule{});
    for (VertexId v = 0; v < g.size(); ++v) {
      if (rng.below(4) == 0) {
        p.is_test.back()[v] = 1;
        p.green.back()[v] = rule(v);
        p.red.back()[v] = rule(v);
      } else {
        p.black.back()[v] = rule(v);
      }
    }
  }
  validate_param(p, g);
  return p;
}

inline OracleCheckReport oracle_check(const OracleCheckOptions& opt) {
  if (opt.count < 1 || opt.max_vertices < 2 ||
      opt.max_vertices > oracle_detail::kMaxBruteVertices ||
      opt.max_leaves < 1 || opt.max_degree < 1 || opt.max_mealy_states < 1 ||
      opt.payoff_range < 0)
    throw validation_error("oracle-check options out of range");
  OracleCheckReport report;
  auto record = [&](const std::string& what, const GameGraph& g,
                    const MealyStrategy* m1, const MealyStrategy* m2) {
    ++report.mismatches;
    if (!report.first_counterexample.empty())
      return;
    std::ostringstream out;
    out << "# mismatch: " << what << "\n" << render_game(g);
    if (m1)
      out << "# strategy 1\n" << render_mealy(*m1, g);
    if (m2)
      out << "# strategy 2\n" << render_mealy(*m2, g);
    report.first_counterexample = out.str();
  };

  for (int i = 0; i < opt.count; ++i) {
    oracle_detail::Rng shape(opt.seed * 0x9e3779b97f4a7c15ULL + i);
    GenConfig cfg;
    cfg.vertex_count = 2 + static_cast<int>(shape.below(opt.max_vertices - 1));
    cfg.leaf_count =
        1 + static_cast<int>(shape.below(
                std::min(opt.max_leaves, cfg.vertex_count)));
    cfg.max_out_degree = 1 + static_cast<int>(shape.below(opt.max_degree));
    cfg.payoff_range = opt.payoff_range;
    cfg.mealy_states = 1 + static_cast<int>(shape.below(opt.max_mealy_states));
    cfg.seed = shape.eng();

    GameGraph g = gen_random_game(cfg);
    ++report.games;

    GameValues vals = compute_values(g);
    for (VertexId v = 0; v < g.size(); ++v) {
      ValueTriple expect = brute_values(g, v);
      ++report.value_checks;
      bool ok = vals[v].aval == expect.aval && vals[v].cval == expect.cval &&
                (!opt.check_acval || vals[v].acval == expect.acval);
      if (!ok)
        record("values at vertex " + g.names[v], g, nullptr, nullptr);
    }

    GenConfig c1 = cfg, c2 = cfg;
    c1.seed = shape.eng();
    c2.seed = shape.eng();
    MealyStrategy m1 = gen_random_mealy(c1, g);
    MealyStrategy m2 = gen_random_mealy(c2, g);
    for (auto [a, b] : {std::pair{&m1, &m2}, std::pair{&m2, &m1}}) {
      ++report.dominance_checks;
      if (weakly_dominated(*a, *b, g).holds != brute_dominance(*a, *b, g))
        record("weak dominance", g, a, b);
    }
  }
  return report;
}

}  // namespace gsr
