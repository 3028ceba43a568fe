#include <catch2/catch_amalgamated.hpp>

#include "gsr/game.hpp"
#include "test_util.hpp"

using namespace gsr;
using testutil::load_game;
using testutil::vid;

TEST_CASE("helpme fixture parses to the expected arena") {
  GameGraph g = load_game("helpme.game");
  REQUIRE(g.size() == 4);
  CHECK(g.names == std::vector<std::string>{"v0", "v1", "l1", "l2"});
  CHECK(g.owner[vid(g, "v0")] == Player::Protagonist);
  CHECK(g.owner[vid(g, "v1")] == Player::Antagonist);
  CHECK(g.is_leaf(vid(g, "l1")));
  CHECK(g.leaf_payoff(vid(g, "l1")) == 1);
  CHECK(g.leaf_payoff(vid(g, "l2")) == 2);
  CHECK_FALSE(g.is_leaf(vid(g, "v0")));
  CHECK(g.init == vid(g, "v0"));
}

TEST_CASE("successor lists keep declaration order") {
  GameGraph g = load_game("helpme.game");
  CHECK(successors(g, vid(g, "v0")) ==
        std::vector<VertexId>{vid(g, "v1"), vid(g, "l1")});
  CHECK(successors(g, vid(g, "v1")) ==
        std::vector<VertexId>{vid(g, "v0"), vid(g, "l2")});
  CHECK(successors(g, vid(g, "l1")) == std::vector<VertexId>{vid(g, "l1")});
}

TEST_CASE("minimal one-vertex game is valid") {
  GameGraph g = parse_game("vertex v owner=A leaf=0\nedge v v\ninit v\n");
  REQUIRE(g.size() == 1);
  CHECK(g.is_leaf(0));
  CHECK(g.init == 0);
}

TEST_CASE("parser rejects malformed input") {
  SECTION("dangling edge") {
    CHECK_THROWS_AS(
        parse_game("vertex v0 owner=P\nedge v0 vX\nedge v0 v0\ninit v0\n"),
        validation_error);
  }
  SECTION("vertex without successor") {
    CHECK_THROWS_AS(parse_game("vertex v0 owner=P\ninit v0\n"),
                    validation_error);
  }
  SECTION("leaf with an extra edge") {
    CHECK_THROWS_AS(parse_game("vertex a owner=P\nvertex l owner=A leaf=1\n"
                               "edge a l\nedge a a\nedge l l\nedge l a\ninit a\n"),
                    validation_error);
  }
  SECTION("leaf missing its self-loop") {
    CHECK_THROWS_AS(parse_game("vertex a owner=P\nvertex l owner=A leaf=1\n"
                               "edge a l\nedge a a\nedge l a\ninit a\n"),
                    validation_error);
  }
  SECTION("missing init") {
    CHECK_THROWS_AS(parse_game("vertex v owner=A leaf=0\nedge v v\n"),
                    validation_error);
  }
  SECTION("duplicate edge") {
    CHECK_THROWS_AS(
        parse_game("vertex v owner=P\nedge v v\nedge v v\ninit v\n"),
        validation_error);
  }
  SECTION("bad owner") {
    CHECK_THROWS_AS(parse_game("vertex v owner=X\nedge v v\ninit v\n"),
                    parse_error);
  }
  SECTION("duplicate vertex") {
    CHECK_THROWS_AS(
        parse_game("vertex v owner=P\nvertex v owner=A\nedge v v\ninit v\n"),
        parse_error);
  }
  SECTION("syntax errors carry the line number") {
    try {
      parse_game("vertex v owner=P\nbogus line here\n");
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line == 2);
    }
  }
}

TEST_CASE("lasso payoffs on helpme") {
  GameGraph g = load_game("helpme.game");
  VertexId v0 = vid(g, "v0"), v1 = vid(g, "v1");
  VertexId l1 = vid(g, "l1"), l2 = vid(g, "l2");
  CHECK(payoff_of_lasso(g, {{v0}, {l1}}) == 1);
  CHECK(payoff_of_lasso(g, {{}, {v0, v1}}) == 0);
  CHECK(payoff_of_lasso(g, {{v0, v1}, {l2}}) == 2);
}

TEST_CASE("lasso validation rejects non-paths") {
  GameGraph g = load_game("helpme.game");
  VertexId v0 = vid(g, "v0"), l1 = vid(g, "l1"), l2 = vid(g, "l2");
  CHECK_THROWS_AS(payoff_of_lasso(g, {{v0}, {l2}}), validation_error);
  CHECK_THROWS_AS(payoff_of_lasso(g, {{l1}, {}}), validation_error);
  CHECK_THROWS_AS(payoff_of_lasso(g, {{}, {v0, v0}}), validation_error);
}

TEST_CASE("payoff is invariant under unrolling the cycle") {
  GameGraph g = load_game("helpme.game");
  VertexId v0 = vid(g, "v0"), v1 = vid(g, "v1");
  // Absorb one period into the prefix and rotate the cycle.
  Lasso a{{}, {v0, v1}};
  Lasso b{{v0}, {v1, v0}};
  Lasso c{{v0, v1}, {v0, v1}};
  CHECK(payoff_of_lasso(g, a) == payoff_of_lasso(g, b));
  CHECK(payoff_of_lasso(g, a) == payoff_of_lasso(g, c));
}

TEST_CASE("every leaf lasso pays its own payoff") {
  GameGraph g = load_game("helpme.game");
  for (VertexId v = 0; v < g.size(); ++v)
    if (g.is_leaf(v))
      CHECK(payoff_of_lasso(g, {{}, {v}}) == g.leaf_payoff(v));
}

TEST_CASE("parse of render round-trips") {
  for (const char* name : {"helpme.game", "helpme_bool.game", "loop_variant.game"}) {
    GameGraph g = load_game(name);
    CHECK(parse_game(render_game(g)) == g);
  }
}
