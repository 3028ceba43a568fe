#pragma once

// Decision procedures on uniform chains: chain-hood, strict chain-hood,
// strategy-below-chain and chain-below-chain, each reduced to finitely many
// pairwise dominance checks through the index bounds
//   N_weak     = |G||S|
//   N_strict   = |G||S| + (|G||S|)!
//   N_strategy = |G||T|(|M|+1) + 1
//   N_chain    = |G||S|(2|T|+1)
// where automaton sizes count reachable states only.

#include <limits>
#include <optional>

#include "gsr/automata.hpp"
#include "gsr/dominance.hpp"

namespace gsr {

namespace detail {

inline long long saturating_mul(long long a, long long b) {
  if (a == 0 || b == 0)
    return 0;
  if (a > std::numeric_limits<long long>::max() / b)
    return std::numeric_limits<long long>::max();
  return a * b;
}

inline long long saturating_add(long long a, long long b) {
  if (a > std::numeric_limits<long long>::max() - b)
    return std::numeric_limits<long long>::max();
  return a + b;
}

inline long long factorial_saturated(long long x) {
  long long r = 1;
  for (long long i = 2; i <= x; ++i) {
    r = saturating_mul(r, i);
    if (r == std::numeric_limits<long long>::max())
      return r;
  }
  return r;
}

}  // namespace detail

struct ChainBounds {
  long long n_weak = 1;
  long long n_strict = 1;
  long long n_strategy = 1;
  long long n_chain = 1;
};

/// Bounds for a pair of parameterized automata (S, T) and a Mealy machine M
/// over g; sizes are reachable-state counts.
inline ChainBounds chain_bounds(const GameGraph& g, long long s_states,
                                long long t_states, long long m_states) {
  ChainBounds b;
  long long gs = static_cast<long long>(g.size()) * s_states;
  b.n_weak = gs;
  b.n_strict = detail::saturating_add(gs, detail::factorial_saturated(gs));
  b.n_strategy =
      detail::saturating_add(detail::saturating_mul(
                                 static_cast<long long>(g.size()) * t_states,
                                 m_states + 1),
                             1);
  b.n_chain = detail::saturating_mul(gs, 2 * t_states + 1);
  return b;
}

inline long long n_weak_bound(const GameGraph& g, const ParamAutomaton& p) {
  return static_cast<long long>(g.size()) *
         static_cast<long long>(reachable_states(p).size());
}

inline long long n_strict_bound(const GameGraph& g, const ParamAutomaton& p) {
  long long gs = n_weak_bound(g, p);
  return detail::saturating_add(gs, detail::factorial_saturated(gs));
}

inline long long n_strategy_bound(const GameGraph& g, const ParamAutomaton& t,
                                  long long mealy_states) {
  return static_cast<long long>(g.size()) *
             static_cast<long long>(reachable_states(t).size()) *
             (mealy_states + 1) +
         1;
}

inline long long n_chain_bound(const GameGraph& g, const ParamAutomaton& s,
                               const ParamAutomaton& t) {
  return static_cast<long long>(g.size()) *
         static_cast<long long>(reachable_states(s).size()) *
         (2 * static_cast<long long>(reachable_states(t).size()) + 1);
}

/// Whether p realizes a (weakly increasing) chain: the instantiations at
/// consecutive counter values up to N_weak must be ordered by weak
/// dominance; beyond that bound a failure would already have shown up.
inline bool is_chain(const ParamAutomaton& p, const GameGraph& g) {
  validate_param(p, g);
  long long bound = n_weak_bound(g, p);
  MealyStrategy prev = instantiate(p, 0, g);
  for (long long i = 0; i <= bound; ++i) {
    MealyStrategy next = instantiate(p, i + 1, g);
    if (!weakly_dominated(prev, next, g).holds)
      return false;
    prev = std::move(next);
  }
  return true;
}

enum class ChainVerdict { Yes, No, BoundExceeded };

struct IncreasingChainResult {
  ChainVerdict verdict = ChainVerdict::No;
  long long required = 0;   // N_strict; what a conclusive Yes needs
  long long checked = 0;    // highest index pair actually verified
};

/// Whether p realizes a strictly increasing chain. N_strict contains a
/// factorial, so the check takes a cap: when the cap cuts the sweep short and
/// every checked pair was strict, the verdict is BoundExceeded: sound for
/// No, inconclusive for Yes.
inline IncreasingChainResult is_increasing_chain(
    const ParamAutomaton& p, const GameGraph& g,
    std::optional<long long> cap = std::nullopt) {
  validate_param(p, g);
  IncreasingChainResult res;
  res.required = n_strict_bound(g, p);
  long long limit = cap ? std::min(*cap, res.required) : res.required;
  MealyStrategy prev = instantiate(p, 0, g);
  for (long long i = 0; i <= limit; ++i) {
    MealyStrategy next = instantiate(p, i + 1, g);
    if (!strictly_dominated(prev, next, g)) {
      res.verdict = ChainVerdict::No;
      res.checked = i;
      return res;
    }
    prev = std::move(next);
    res.checked = i;
  }
  res.verdict = limit >= res.required ? ChainVerdict::Yes : ChainVerdict::BoundExceeded;
  return res;
}

/// Whether the strategy m is weakly dominated by some element of the chain
/// realized by p; by the index bound it suffices to compare against the
/// single element N_strategy.
inline bool strategy_below_chain(const MealyStrategy& m, const ParamAutomaton& p,
                                 const GameGraph& g) {
  validate_mealy(m, g);
  if (!is_chain(p, g))
    throw validation_error("automaton does not realize a chain");
  long long nt = n_strategy_bound(
      g, p, static_cast<long long>(reachable_states(m).size()));
  return weakly_dominated(m, instantiate(p, nt, g), g).holds;
}

/// Whether every element of the chain realized by pS is weakly dominated by
/// some element of the chain realized by pT: the element of pS at N_chain
/// decides the whole comparison.
inline bool chain_below_chain(const ParamAutomaton& pS, const ParamAutomaton& pT,
                              const GameGraph& g) {
  if (!is_chain(pS, g))
    throw validation_error("first automaton does not realize a chain");
  long long ns = n_chain_bound(g, pS, pT);
  MealyStrategy witness = instantiate(pS, ns, g);
  return strategy_below_chain(witness, pT, g);
}

}  // namespace gsr
