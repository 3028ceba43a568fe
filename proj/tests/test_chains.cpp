#include <catch2/catch_amalgamated.hpp>

#include "gsr/chains.hpp"
#include "gsr/oracle.hpp"
#include "test_util.hpp"

using namespace gsr;
using testutil::load_game;
using testutil::load_mealy;
using testutil::load_param;

namespace {

GameGraph small_game(std::uint64_t seed) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.vertex_count = 3 + static_cast<int>(seed % 3);  // 3..5
  cfg.leaf_count = 1 + static_cast<int>((seed / 5) % 2);
  cfg.max_out_degree = 2;
  return gen_random_game(cfg);
}

ParamAutomaton small_param(std::uint64_t seed, const GameGraph& g) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.param_states = 1 + static_cast<int>(seed % 2);  // 1..2
  return gen_random_param(cfg, g);
}

}  // namespace

TEST_CASE("bounds on the helpme chain") {
  GameGraph g = load_game("helpme.game");
  auto sk = load_param("sk.param", g);
  CHECK(n_weak_bound(g, sk) == 4);
  CHECK(n_strict_bound(g, sk) == 28);  // 4 + 4!
  CHECK(n_strategy_bound(g, sk, 1) == 9);
  CHECK(n_chain_bound(g, sk, sk) == 12);

  auto b = chain_bounds(g, 1, 1, 1);
  CHECK(b.n_weak == 4);
  CHECK(b.n_strict == 28);
  CHECK(b.n_strategy == 9);
  CHECK(b.n_chain == 12);
  CHECK(b.n_strict >= b.n_weak);
}

TEST_CASE("factorial bound saturates instead of overflowing") {
  GameGraph g = load_game("helpme.game");
  ParamAutomaton big = load_param("sk.param", g);
  // 25 states would make (|G||S|)! overflow 64 bits.
  auto b = chain_bounds(g, 25, 1, 1);
  CHECK(b.n_strict == std::numeric_limits<long long>::max());
  CHECK(b.n_strict >= b.n_weak);
  (void)big;
}

TEST_CASE("is_chain on the fixtures") {
  GameGraph g = load_game("helpme.game");
  CHECK(is_chain(load_param("sk.param", g), g));
  CHECK_FALSE(is_chain(load_param("sk_swapped.param", g), g));
  CHECK(is_chain(load_param("allblack.param", g), g));
  CHECK(is_chain(load_param("sk_shifted.param", g), g));
}

TEST_CASE("is_increasing_chain on the fixtures") {
  GameGraph g = load_game("helpme.game");
  auto sk = load_param("sk.param", g);

  auto yes = is_increasing_chain(sk, g);
  CHECK(yes.verdict == ChainVerdict::Yes);
  CHECK(yes.required == 28);

  auto no = is_increasing_chain(load_param("allblack.param", g), g);
  CHECK(no.verdict == ChainVerdict::No);
  CHECK(no.checked == 0);

  auto capped = is_increasing_chain(sk, g, 2);
  CHECK(capped.verdict == ChainVerdict::BoundExceeded);
  CHECK(capped.required == 28);
}

TEST_CASE("strategy below chain") {
  GameGraph g = load_game("helpme.game");
  auto sk = load_param("sk.param", g);
  CHECK(strategy_below_chain(load_mealy("s0.mealy", g), sk, g));
  CHECK_FALSE(strategy_below_chain(load_mealy("somega.mealy", g), sk, g));
  CHECK(strategy_below_chain(instantiate(sk, 2, g), sk, g));

  SECTION("non-chains are rejected") {
    CHECK_THROWS_AS(strategy_below_chain(load_mealy("s0.mealy", g),
                                         load_param("sk_swapped.param", g), g),
                    validation_error);
  }
}

TEST_CASE("chain below chain") {
  GameGraph g = load_game("helpme.game");
  auto sk = load_param("sk.param", g);
  auto shifted = load_param("sk_shifted.param", g);
  auto constant = load_param("allblack.param", g);

  CHECK(chain_below_chain(sk, sk, g));
  CHECK(chain_below_chain(shifted, sk, g));
  CHECK(chain_below_chain(sk, shifted, g));
  CHECK_FALSE(chain_below_chain(constant, sk, g));

  SECTION("non-chains are rejected") {
    auto swapped = load_param("sk_swapped.param", g);
    CHECK_THROWS_AS(chain_below_chain(swapped, sk, g), validation_error);
    CHECK_THROWS_AS(chain_below_chain(sk, swapped, g), validation_error);
  }
}

namespace {

// Helpme where hoping hurts: looping risks the worthless l2 instead of the
// safe l1, so higher counter values are worse and (s_k) is not a chain.
GameGraph impatient_helpme() {
  return parse_game(
      "vertex v0 owner=P\nvertex v1 owner=A\n"
      "vertex l1 owner=A leaf=1\nvertex l2 owner=A leaf=0\n"
      "edge v0 v1\nedge v0 l1\nedge v1 v0\nedge v1 l2\n"
      "edge l1 l1\nedge l2 l2\ninit v0\n");
}

}  // namespace

TEST_CASE("the weak-chain reduction is sound at desk scale") {
  struct Instance {
    GameGraph game;
    ParamAutomaton automaton;
  };
  std::vector<Instance> corpus;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GameGraph g = small_game(seed);
    auto p = small_param(seed * 13 + 1, g);
    corpus.push_back({std::move(g), std::move(p)});
  }
  {
    GameGraph g = load_game("helpme.game");
    corpus.push_back({g, load_param("sk.param", g)});
    corpus.push_back({g, load_param("sk_swapped.param", g)});
    GameGraph gi = impatient_helpme();
    corpus.push_back({gi, load_param("sk.param", gi)});
  }

  int chains_seen = 0, nonchains_seen = 0;
  for (const auto& [g, p] : corpus) {
    bool reduced = is_chain(p, g);
    bool exhaustive = true;
    long long upper = 3 * n_weak_bound(g, p);
    MealyStrategy prev = instantiate(p, 0, g);
    for (long long i = 0; i <= upper && exhaustive; ++i) {
      MealyStrategy next = instantiate(p, i + 1, g);
      exhaustive = weakly_dominated(prev, next, g).holds;
      prev = std::move(next);
    }
    REQUIRE(reduced == exhaustive);
    (reduced ? chains_seen : nonchains_seen)++;
  }
  // The corpus must exercise both verdicts to mean anything.
  CHECK(chains_seen > 0);
  CHECK(nonchains_seen > 0);
}

TEST_CASE("non-dominance repeats with a small period") {
  // Iteration lemma, test form: a non-dominance pair above |G||S| recurs
  // when both indices are shifted by some period k <= |G||S|.
  struct Instance {
    GameGraph game;
    ParamAutomaton automaton;
  };
  std::vector<Instance> corpus;
  {
    GameGraph gi = impatient_helpme();
    corpus.push_back({gi, load_param("sk.param", gi)});
  }
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    GameGraph g = small_game(seed);
    auto p = small_param(seed * 29 + 5, g);
    corpus.push_back({std::move(g), std::move(p)});
  }

  int exercised = 0;
  for (const auto& [g, p] : corpus) {
    if (exercised >= 6)
      break;
    long long gs = n_weak_bound(g, p);
    for (long long n1 = gs + 1; n1 <= gs + 3; ++n1)
      for (long long n2 = gs + 1; n2 <= gs + 3; ++n2) {
        if (weakly_dominated(instantiate(p, n1, g), instantiate(p, n2, g), g)
                .holds)
          continue;
        bool some_period = false;
        for (long long k = 1; k <= gs && !some_period; ++k) {
          bool all = true;
          for (long long i = 1; i <= 3 && all; ++i)
            all = !weakly_dominated(instantiate(p, n1 + i * k, g),
                                    instantiate(p, n2 + i * k, g), g)
                       .holds;
          some_period = all;
        }
        REQUIRE(some_period);
        ++exercised;
      }
  }
  CHECK(exercised > 0);
}

TEST_CASE("strategy_below_chain is monotone in the strategy") {
  GameGraph g = load_game("helpme.game");
  auto sk = load_param("sk.param", g);
  for (long long j = 0; j <= 3; ++j) {
    auto lower = instantiate(sk, j, g);
    auto higher = instantiate(sk, j + 2, g);
    REQUIRE(weakly_dominated(lower, higher, g).holds);
    if (strategy_below_chain(higher, sk, g))
      CHECK(strategy_below_chain(lower, sk, g));
  }
}

TEST_CASE("distinct hopeful paths give incomparable maximal chains") {
  GameGraph g = load_game("two_paths.game");
  auto a = load_param("apath.param", g);
  auto b = load_param("bpath.param", g);
  REQUIRE(is_chain(a, g));
  REQUIRE(is_chain(b, g));
  CHECK_FALSE(chain_below_chain(a, b, g));
  CHECK_FALSE(chain_below_chain(b, a, g));
  CHECK(chain_below_chain(a, a, g));
  CHECK(chain_below_chain(b, b, g));
}

TEST_CASE("chain dominance is reflexive and transitive on random chains") {
  std::vector<std::pair<GameGraph, std::vector<ParamAutomaton>>> corpora;
  for (std::uint64_t seed = 200; seed <= 215; ++seed) {
    GameGraph g = small_game(seed);
    std::vector<ParamAutomaton> chains;
    for (std::uint64_t s2 = 0; s2 < 8 && chains.size() < 3; ++s2) {
      auto p = small_param(seed * 101 + s2, g);
      if (is_chain(p, g))
        chains.push_back(p);
    }
    if (chains.size() >= 2)
      corpora.emplace_back(std::move(g), std::move(chains));
  }
  REQUIRE_FALSE(corpora.empty());
  for (auto& [g, chains] : corpora) {
    for (const auto& c : chains)
      CHECK(chain_below_chain(c, c, g));
    for (const auto& a : chains)
      for (const auto& b : chains)
        for (const auto& c : chains)
          if (chain_below_chain(a, b, g) && chain_below_chain(b, c, g))
            CHECK(chain_below_chain(a, c, g));
  }
}
