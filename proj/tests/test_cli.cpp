#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "gsr/automata.hpp"
#include "gsr/chains.hpp"
#include "test_util.hpp"

using json = nlohmann::json;
using namespace gsr;
using testutil::fixture_path;
using testutil::load_game;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
};

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "gsr_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args) {
  static int serial = 0;
  auto out_file = scratch_dir() / ("out" + std::to_string(serial++) + ".txt");
  std::string cmd = std::string(GSR_CLI_PATH) + " " + args + " > " +
                    out_file.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  res.out = ss.str();
  return res;
}

std::string first_line(const std::string& text) {
  auto pos = text.find('\n');
  return pos == std::string::npos ? text : text.substr(0, pos);
}

}  // namespace

TEST_CASE("values subcommand prints the golden table") {
  auto res = run_cli("values " + fixture_path("helpme.game"));
  CHECK(res.exit_code == 0);
  CHECK(res.out == "v0\t1\t2\t2\nv1\t1\t2\t2\nl1\t1\t1\t1\nl2\t2\t2\t2\n");
}

TEST_CASE("exit codes match the stdout verdicts on the golden suite") {
  const std::string helpme = fixture_path("helpme.game");
  struct Case {
    std::string args;
    std::string verdict;
    int code;
  };
  std::vector<Case> cases = {
      {"dominates " + helpme + " " + fixture_path("s0.mealy") + " " +
           fixture_path("s1.mealy"),
       "yes", 0},
      {"dominates " + helpme + " " + fixture_path("somega.mealy") + " " +
           fixture_path("s0.mealy"),
       "no", 1},
      {"dominates --strict " + helpme + " " + fixture_path("s0.mealy") + " " +
           fixture_path("s1.mealy"),
       "yes", 0},
      {"admissible " + helpme + " " + fixture_path("somega.mealy"), "yes", 0},
      {"admissible " + helpme + " " + fixture_path("s0.mealy"), "no", 1},
      {"preadmissible " + helpme + " " + fixture_path("s1.mealy"), "yes", 0},
      {"preadmissible " + helpme + " " + fixture_path("s0.mealy"), "no", 1},
      {"is-chain " + helpme + " " + fixture_path("sk.param"), "yes", 0},
      {"is-chain " + helpme + " " + fixture_path("sk_swapped.param"), "no", 1},
      {"is-increasing-chain " + helpme + " " + fixture_path("sk.param"), "yes",
       0},
      {"is-increasing-chain --cap 2 " + helpme + " " + fixture_path("sk.param"),
       "inconclusive", 2},
      {"below-chain " + helpme + " " + fixture_path("s0.mealy") + " " +
           fixture_path("sk.param"),
       "yes", 0},
      {"below-chain " + helpme + " " + fixture_path("somega.mealy") + " " +
           fixture_path("sk.param"),
       "no", 1},
      {"chain-dominates " + helpme + " " + fixture_path("sk.param") + " " +
           fixture_path("sk.param"),
       "yes", 0},
      {"chain-dominates " + helpme + " " + fixture_path("allblack.param") +
           " " + fixture_path("sk.param"),
       "no", 1},
  };
  for (const auto& c : cases) {
    auto res = run_cli(c.args);
    INFO(c.args);
    CHECK(res.exit_code == c.code);
    CHECK(first_line(res.out).substr(0, c.verdict.size()) == c.verdict);
  }
}

TEST_CASE("json verdicts re-parse and witness paths replay") {
  const std::string helpme = fixture_path("helpme.game");
  auto res = run_cli("--json dominates " + helpme + " " +
                     fixture_path("somega.mealy") + " " +
                     fixture_path("s0.mealy"));
  CHECK(res.exit_code == 1);
  json obj = json::parse(res.out);
  CHECK(obj["verdict"] == "no");
  REQUIRE(obj.contains("witness"));

  // Replay the witness path on a freshly built sync product.
  GameGraph g = load_game("helpme.game");
  auto s1 = testutil::load_mealy("somega.mealy", g);
  auto s2 = testutil::load_mealy("s0.mealy", g);
  auto sp = sync_product(s1, g, s2);
  auto state_of = [&](const json& j) {
    for (std::size_t s = 0; s < sp.states.size(); ++s) {
      const auto& st = sp.states[s];
      if (s1.state_names[st.mem1] == j["mem1"] && g.names[st.v] == j["vertex"] &&
          s2.state_names[st.mem2] == j["mem2"])
        return static_cast<int>(s);
    }
    return -1;
  };
  const auto& path = obj["witness"]["path"];
  REQUIRE_FALSE(path.empty());
  int prev = -1;
  for (const auto& step : path) {
    int cur = state_of(step);
    REQUIRE(cur >= 0);
    if (prev >= 0) {
      bool edge = false;
      for (int t : sp.succ[prev])
        edge = edge || t == cur;
      REQUIRE(edge);
    }
    prev = cur;
  }
  int final_state = state_of(obj["witness"]["state"]);
  CHECK(final_state == prev);
  CHECK(sp.divergent[final_state] == 1);
}

TEST_CASE("json values round-trip") {
  auto res = run_cli("--json values " + fixture_path("helpme.game"));
  REQUIRE(res.exit_code == 0);
  json obj = json::parse(res.out);
  CHECK(obj["verdict"] == "ok");
  GameGraph g = load_game("helpme.game");
  auto vals = compute_values(g);
  REQUIRE(obj["values"].size() == g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(obj["values"][i]["vertex"] == g.names[i]);
    CHECK(obj["values"][i]["aval"] == vals[i].aval);
    CHECK(obj["values"][i]["cval"] == vals[i].cval);
    CHECK(obj["values"][i]["acval"] == vals[i].acval);
  }
}

TEST_CASE("chain bounds appear with chain verdicts") {
  auto res = run_cli("--json is-chain " + fixture_path("helpme.game") + " " +
                     fixture_path("sk.param"));
  json obj = json::parse(res.out);
  CHECK(obj["bounds"]["n_weak"] == 4);
  CHECK(obj["bounds"]["n_strict"] == 28);
}

TEST_CASE("improve writes a loadable automaton") {
  auto out = (scratch_dir() / "improved.param").string();
  auto res = run_cli("improve " + fixture_path("helpme.game") + " " +
                     fixture_path("s0.mealy") + " -o " + out);
  REQUIRE(res.exit_code == 0);
  CHECK(first_line(res.out) == "chain");
  GameGraph g = load_game("helpme.game");
  std::ifstream in(out);
  std::ostringstream ss;
  ss << in.rdbuf();
  auto p = parse_param(ss.str(), g);
  CHECK(is_chain(p, g));
}

TEST_CASE("instantiate writes the realized strategy") {
  auto out = (scratch_dir() / "inst.mealy").string();
  auto res = run_cli("instantiate " + fixture_path("helpme.game") + " " +
                     fixture_path("sk.param") + " -n 2 -o " + out);
  REQUIRE(res.exit_code == 0);
  GameGraph g = load_game("helpme.game");
  std::ifstream in(out);
  std::ostringstream ss;
  ss << in.rdbuf();
  auto m = parse_mealy(ss.str(), g);
  auto sk = testutil::load_param("sk.param", g);
  CHECK(behaviorally_equal(m, g, instantiate(sk, 2, g)));
}

TEST_CASE("gen emits round-tripping artifacts") {
  auto game_file = (scratch_dir() / "random.game").string();
  auto res = run_cli("gen game --seed 5 --vertices 5 --leaves 2 -o " + game_file);
  REQUIRE(res.exit_code == 0);
  std::ifstream in(game_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  GameGraph g = parse_game(ss.str());
  CHECK(parse_game(render_game(g)) == g);

  auto mres = run_cli("gen mealy --seed 7 --states 2 --game " + game_file);
  REQUIRE(mres.exit_code == 0);
  CHECK_NOTHROW(parse_mealy(mres.out, g));

  auto pres = run_cli("gen param --seed 7 --states 2 --game " + game_file);
  REQUIRE(pres.exit_code == 0);
  CHECK_NOTHROW(parse_param(pres.out, g));
}

TEST_CASE("oracle-check passes on a small corpus") {
  auto res = run_cli("oracle-check --seed 11 --count 25");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("pass") != std::string::npos);
}

TEST_CASE("dot export writes a digraph with colored edges") {
  auto dot = (scratch_dir() / "product.dot").string();
  auto res = run_cli("is-chain --dot " + dot + " " + fixture_path("helpme.game") +
                     " " + fixture_path("sk.param"));
  REQUIRE(res.exit_code == 0);
  std::ifstream in(dot);
  std::ostringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().rfind("digraph", 0) == 0);
  CHECK(ss.str().find("[color=green]") != std::string::npos);
  CHECK(ss.str().find("[color=red]") != std::string::npos);
}

TEST_CASE("errors exit with code 2") {
  CHECK(run_cli("values /nonexistent.game").exit_code == 2);
  auto bad = (scratch_dir() / "bad.game").string();
  std::ofstream(bad) << "vertex v owner=P\n";  // no successor, no init
  CHECK(run_cli("values " + bad).exit_code == 2);
  CHECK(run_cli("below-chain " + fixture_path("helpme.game") + " " +
                fixture_path("s0.mealy") + " " + fixture_path("sk_swapped.param"))
            .exit_code == 2);
  CHECK(run_cli("nonsense-subcommand").exit_code == 2);
}
