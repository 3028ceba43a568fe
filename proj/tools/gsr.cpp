// Command-line front end: one subcommand per library operation, verdicts on
// stdout, exit codes 0 = yes/success, 1 = no, 2 = inconclusive or error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsr/chains.hpp"
#include "gsr/dot.hpp"
#include "gsr/dominance.hpp"
#include "gsr/oracle.hpp"
#include "gsr/synthesis.hpp"

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

gsr::GameGraph load_game(const std::string& path) {
  return gsr::parse_game(read_file(path));
}

json sync_state_json(const gsr::MealyStrategy& s1, const gsr::GameGraph& g,
                     const gsr::MealyStrategy& s2,
                     const gsr::SyncProduct::State& st) {
  return json{{"mem1", s1.state_names[st.mem1]},
              {"vertex", g.names[st.v]},
              {"mem2", s2.state_names[st.mem2]}};
}

void print_witness(const gsr::DominanceVerdict::Witness& w,
                   const gsr::MealyStrategy& s1, const gsr::GameGraph& g,
                   const gsr::MealyStrategy& s2) {
  std::cout << "witness state: (" << s1.state_names[w.state.mem1] << ", "
            << g.names[w.state.v] << ", " << s2.state_names[w.state.mem2]
            << ")\n";
  std::cout << "witness path:";
  for (const auto& st : w.path)
    std::cout << ' ' << g.names[st.v];
  std::cout << '\n';
  std::cout << "cval(first)=" << w.cval1 << " aval(second)=" << w.aval2 << '\n';
}

json witness_json(const gsr::DominanceVerdict::Witness& w,
                  const gsr::MealyStrategy& s1, const gsr::GameGraph& g,
                  const gsr::MealyStrategy& s2) {
  json path = json::array();
  for (const auto& st : w.path)
    path.push_back(sync_state_json(s1, g, s2, st));
  return json{{"state", sync_state_json(s1, g, s2, w.state)},
              {"path", path},
              {"cval1", w.cval1},
              {"aval2", w.aval2}};
}

int emit_verdict(bool as_json, bool yes, json extra = {}) {
  if (as_json) {
    json obj = std::move(extra);
    obj["verdict"] = yes ? "yes" : "no";
    std::cout << obj.dump() << '\n';
  } else {
    std::cout << (yes ? "yes" : "no") << '\n';
  }
  return yes ? 0 : 1;
}

void print_bounds(const json& bounds) {
  std::cout << "bounds:";
  for (auto it = bounds.begin(); it != bounds.end(); ++it)
    std::cout << ' ' << it.key() << '=' << it.value();
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver for generalised safety/reachability games: strategy "
               "values, dominance, admissibility, uniform chains"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "emit a single JSON object on stdout");

  int exit_code = 0;

  // values <game>
  {
    auto* cmd = app.add_subcommand("values", "aVal/cVal/acVal per vertex");
    auto game_path = std::make_shared<std::string>();
    cmd->add_option("game", *game_path, "game file")->required();
    cmd->callback([&, game_path]() {
      auto g = load_game(*game_path);
      auto vals = gsr::compute_values(g);
      if (as_json) {
        json rows = json::array();
        for (gsr::VertexId v = 0; v < g.size(); ++v)
          rows.push_back(json{{"vertex", g.names[v]},
                              {"aval", vals[v].aval},
                              {"cval", vals[v].cval},
                              {"acval", vals[v].acval}});
        std::cout << json{{"verdict", "ok"}, {"values", rows}}.dump() << '\n';
      } else {
        for (gsr::VertexId v = 0; v < g.size(); ++v)
          std::cout << g.names[v] << '\t' << vals[v].aval << '\t'
                    << vals[v].cval << '\t' << vals[v].acval << '\n';
      }
    });
  }

  // dominates <game> <mealy1> <mealy2> [--strict]
  {
    auto* cmd = app.add_subcommand(
        "dominates", "is the first strategy weakly dominated by the second");
    auto game_path = std::make_shared<std::string>();
    auto m1_path = std::make_shared<std::string>();
    auto m2_path = std::make_shared<std::string>();
    auto strict = std::make_shared<bool>(false);
    cmd->add_option("game", *game_path)->required();
    cmd->add_option("mealy1", *m1_path)->required();
    cmd->add_option("mealy2", *m2_path)->required();
    cmd->add_flag("--strict", *strict, "decide strict dominance");
    cmd->callback([&, game_path, m1_path, m2_path, strict]() {
      auto g = load_game(*game_path);
      auto s1 = gsr::parse_mealy(read_file(*m1_path), g);
      auto s2 = gsr::parse_mealy(read_file(*m2_path), g);
      auto forward = gsr::weakly_dominated(s1, s2, g);
      bool yes = forward.holds;
      if (*strict && yes)
        yes = !gsr::weakly_dominated(s2, s1, g).holds;
      json extra;
      if (!forward.holds) {
        if (as_json)
          extra["witness"] = witness_json(*forward.witness, s1, g, s2);
      }
      exit_code = emit_verdict(as_json, yes, extra);
      if (!as_json && !forward.holds)
        print_witness(*forward.witness, s1, g, s2);
      else if (!as_json && !yes)
        std::cout << "mutual weak dominance\n";
    });
  }

  // admissible <game> <mealy> / preadmissible <game> <mealy>
  for (bool pre : {false, true}) {
    auto* cmd = app.add_subcommand(
        pre ? "preadmissible" : "admissible",
        pre ? "is the strategy preadmissible" : "is the strategy admissible");
    auto game_path = std::make_shared<std::string>();
    auto m_path = std::make_shared<std::string>();
    cmd->add_option("game", *game_path)->required();
    cmd->add_option("mealy", *m_path)->required();
    cmd->callback([&, game_path, m_path, pre]() {
      auto g = load_game(*game_path);
      auto m = gsr::parse_mealy(read_file(*m_path), g);
      auto verdict = gsr::check_admissibility(m, g);
      bool yes = pre ? verdict.preadmissible : verdict.admissible;
      json extra;
      if (as_json && !verdict.admissible) {
        json ws = json::array();
        for (const auto& st : verdict.witnesses)
          ws.push_back(json{{"mem", m.state_names[st.mem]},
                            {"vertex", g.names[st.v]}});
        extra["witness"] = ws;
      }
      exit_code = emit_verdict(as_json, yes, extra);
      if (!as_json && !yes) {
        std::cout << "witness states:";
        for (const auto& st : verdict.witnesses)
          std::cout << " (" << m.state_names[st.mem] << ", " << g.names[st.v]
                    << ")";
        std::cout << '\n';
      }
    });
  }

  // improve <game> <mealy> -o <out>
  {
    auto* cmd = app.add_subcommand(
        "improve",
        "dominating admissible strategy or maximal uniform chain");
    auto game_path = std::make_shared<std::string>();
    auto m_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("game", *game_path)->required();
    cmd->add_option("mealy", *m_path)->required();
    cmd->add_option("-o,--output", *out_path, "output automaton file")
        ->required();
    cmd->callback([&, game_path, m_path, out_path]() {
      auto g = load_game(*game_path);
      auto m = gsr::parse_mealy(read_file(*m_path), g);
      auto res = gsr::improve_to_maximal(m, g);
      bool chain = res.kind == gsr::ImprovementResult::Kind::UniformChain;
      write_file(*out_path, chain ? gsr::render_param(res.chain, g)
                                  : gsr::render_mealy(res.single, g));
      if (as_json) {
        json rew = json::array();
        for (const auto& [state, vertex] : res.rewired)
          rew.push_back(json{{"state", state}, {"vertex", vertex}});
        std::cout << json{{"verdict", chain ? "chain" : "single"},
                          {"rewired", rew}}
                         .dump()
                  << '\n';
      } else {
        std::cout << (chain ? "chain" : "single") << '\n';
        for (const auto& [state, vertex] : res.rewired)
          std::cout << "rewired: (" << state << ", " << vertex << ")\n";
      }
    });
  }

  // instantiate <game> <param> -n <counter> -o <out>
  {
    auto* cmd = app.add_subcommand(
        "instantiate", "Mealy strategy realized at one counter value");
    auto game_path = std::make_shared<std::string>();
    auto p_path = std::make_shared<std::string>();
    auto counter = std::make_shared<long long>(0);
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("game", *game_path)->required();
    cmd->add_option("param", *p_path)->required();
    cmd->add_option("-n,--counter", *counter, "initial counter value")
        ->required();
    cmd->add_option("-o,--output", *out_path, "output Mealy file")->required();
    cmd->callback([&, game_path, p_path, counter, out_path]() {
      auto g = load_game(*game_path);
      auto p = gsr::parse_param(read_file(*p_path), g);
      auto m = gsr::instantiate(p, *counter, g);
      write_file(*out_path, gsr::render_mealy(m, g));
      if (as_json)
        std::cout << json{{"verdict", "ok"}, {"states", m.size()}}.dump()
                  << '\n';
      else
        std::cout << "states: " << m.size() << '\n';
    });
  }

  // is-chain <game> <param> [--dot <file>]
  {
    auto* cmd = app.add_subcommand(
        "is-chain", "does the automaton realize a weakly increasing chain");
    auto game_path = std::make_shared<std::string>();
    auto p_path = std::make_shared<std::string>();
    auto dot_path = std::make_shared<std::string>();
    cmd->add_option("game", *game_path)->required();
    cmd->add_option("param", *p_path)->required();
    cmd->add_option("--dot", *dot_path, "export the colored product as DOT");
    cmd->callback([&, game_path, p_path, dot_path]() {
      auto g = load_game(*game_path);
      auto p = gsr::parse_param(read_file(*p_path), g);
      if (!dot_path->empty())
        write_file(*dot_path,
                   gsr::render_colored_product_dot(gsr::colored_product(p, g), p, g));
      bool yes = gsr::is_chain(p, g);
      json bounds{{"n_weak", gsr::n_weak_bound(g, p)},
                  {"n_strict", gsr::n_strict_bound(g, p)}};
      exit_code = emit_verdict(as_json, yes, json{{"bounds", bounds}});
      if (!as_json)
        print_bounds(bounds);
    });
  }

  // is-increasing-chain <game> <param> [--cap K]
  {
    auto* cmd = app.add_subcommand(
        "is-increasing-chain",
        "does the automaton realize a strictly increasing chain");
    auto game_path = std::make_shared<std::string>();
    auto p_path = std::make_shared<std::string>();
    auto cap = std::make_shared<long long>(-1);
    cmd->add_option("game", *game_path)->required();
    cmd->add_option("param", *p_path)->required();
    cmd->add_option("--cap", *cap, "check at most this many index pairs");
    cmd->callback([&, game_path, p_path, cap]() {
      auto g = load_game(*game_path);
      auto p = gsr::parse_param(read_file(*p_path), g);
      std::optional<long long> bound;
      if (*cap >= 0)
        bound = *cap;
      auto res = gsr::is_increasing_chain(p, g, bound);
      json bounds{{"n_weak", gsr::n_weak_bound(g, p)},
                  {"n_strict", res.required}};
      const char* verdict = res.verdict == gsr::ChainVerdict::Yes  ? "yes"
                            : res.verdict == gsr::ChainVerdict::No ? "no"
                                                                   : "inconclusive";
      if (as_json) {
        std::cout << json{{"verdict", verdict},
                          {"bounds", bounds},
                          {"checked", res.checked}}
                         .dump()
                  << '\n';
      } else {
        std::cout << verdict;
        if (res.verdict == gsr::ChainVerdict::BoundExceeded)
          std::cout << " (cap below N_strict=" << res.required << ")";
        std::cout << '\n';
        print_bounds(bounds);
      }
      exit_code = res.verdict == gsr::ChainVerdict::Yes  ? 0
                  : res.verdict == gsr::ChainVerdict::No ? 1
                                                         : 2;
    });
  }

  // below-chain <game> <mealy> <param>
  {
    auto* cmd = app.add_subcommand(
        "below-chain", "is the strategy dominated by the uniform chain");
    auto game_path = std::make_shared<std::string>();
    auto m_path = std::make_shared<std::string>();
    auto p_path = std::make_shared<std::string>();
    cmd->add_option("game", *game_path)->required();
    cmd->add_option("mealy", *m_path)->required();
    cmd->add_option("param", *p_path)->required();
    cmd->callback([&, game_path, m_path, p_path]() {
      auto g = load_game(*game_path);
      auto m = gsr::parse_mealy(read_file(*m_path), g);
      auto p = gsr::parse_param(read_file(*p_path), g);
      long long nt = gsr::n_strategy_bound(
          g, p, static_cast<long long>(gsr::reachable_states(m).size()));
      bool yes = gsr::strategy_below_chain(m, p, g);
      json bounds{{"n_weak", gsr::n_weak_bound(g, p)}, {"n_strategy", nt}};
      exit_code = emit_verdict(as_json, yes, json{{"bounds", bounds}});
      if (!as_json)
        print_bounds(bounds);
    });
  }

  // chain-dominates <game> <paramS> <paramT>
  {
    auto* cmd = app.add_subcommand(
        "chain-dominates",
        "is the first uniform chain dominated by the second");
    auto game_path = std::make_shared<std::string>();
    auto ps_path = std::make_shared<std::string>();
    auto pt_path = std::make_shared<std::string>();
    cmd->add_option("game", *game_path)->required();
    cmd->add_option("paramS", *ps_path)->required();
    cmd->add_option("paramT", *pt_path)->required();
    cmd->callback([&, game_path, ps_path, pt_path]() {
      auto g = load_game(*game_path);
      auto ps = gsr::parse_param(read_file(*ps_path), g);
      auto pt = gsr::parse_param(read_file(*pt_path), g);
      long long ns = gsr::n_chain_bound(g, ps, pt);
      bool yes = gsr::chain_below_chain(ps, pt, g);
      json bounds{{"n_weak_s", gsr::n_weak_bound(g, ps)},
                  {"n_weak_t", gsr::n_weak_bound(g, pt)},
                  {"n_chain", ns}};
      exit_code = emit_verdict(as_json, yes, json{{"bounds", bounds}});
      if (!as_json)
        print_bounds(bounds);
    });
  }

  // oracle-check --seed S --count N [...]
  {
    auto* cmd = app.add_subcommand(
        "oracle-check", "compare solver against the brute-force oracle");
    auto opt = std::make_shared<gsr::OracleCheckOptions>();
    cmd->add_option("--seed", opt->seed, "base seed");
    cmd->add_option("--count", opt->count, "number of instances");
    cmd->add_option("--max-vertices", opt->max_vertices, "guard: vertices");
    cmd->add_option("--max-leaves", opt->max_leaves, "guard: leaves");
    cmd->add_option("--max-degree", opt->max_degree, "guard: out-degree");
    cmd->add_option("--mealy-states", opt->max_mealy_states, "guard: states");
    cmd->add_option("--payoff-range", opt->payoff_range, "payoff magnitude");
    auto skip_acval = std::make_shared<bool>(false);
    cmd->add_flag("--skip-acval", *skip_acval, "skip the acVal comparison");
    cmd->callback([&, opt, skip_acval]() {
      opt->check_acval = !*skip_acval;
      auto report = gsr::oracle_check(*opt);
      if (as_json) {
        std::cout << json{{"verdict", report.pass() ? "pass" : "fail"},
                          {"games", report.games},
                          {"value_checks", report.value_checks},
                          {"dominance_checks", report.dominance_checks},
                          {"mismatches", report.mismatches}}
                         .dump()
                  << '\n';
      } else {
        std::cout << "games: " << report.games
                  << "\nvalue checks: " << report.value_checks
                  << "\ndominance checks: " << report.dominance_checks
                  << "\nmismatches: " << report.mismatches << '\n'
                  << (report.pass() ? "pass" : "fail") << '\n';
        if (!report.pass())
          std::cout << report.first_counterexample;
      }
      exit_code = report.pass() ? 0 : 1;
    });
  }

  // gen <game|mealy|param> --seed S [...]
  {
    auto* cmd = app.add_subcommand("gen", "generate a random instance");
    auto kind = std::make_shared<std::string>();
    auto cfg = std::make_shared<gsr::GenConfig>();
    auto game_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("kind", *kind, "game, mealy or param")
        ->required()
        ->check(CLI::IsMember({"game", "mealy", "param"}));
    cmd->add_option("--seed", cfg->seed, "seed");
    cmd->add_option("--vertices", cfg->vertex_count, "vertex count");
    cmd->add_option("--leaves", cfg->leaf_count, "leaf count");
    cmd->add_option("--degree", cfg->max_out_degree, "max out-degree");
    cmd->add_option("--payoffs", cfg->payoff_range, "payoff magnitude");
    cmd->add_option("--states", cfg->mealy_states, "automaton states");
    cmd->add_option("--game", *game_path, "game file (for mealy/param)");
    cmd->add_option("-o,--output", *out_path, "output file (stdout otherwise)");
    cmd->callback([&, kind, cfg, game_path, out_path]() {
      std::string rendered;
      if (*kind == "game") {
        rendered = gsr::render_game(gsr::gen_random_game(*cfg));
      } else {
        if (game_path->empty())
          throw std::runtime_error("gen " + *kind + " needs --game");
        auto g = load_game(*game_path);
        if (*kind == "mealy") {
          rendered = gsr::render_mealy(gsr::gen_random_mealy(*cfg, g), g);
        } else {
          cfg->param_states = cfg->mealy_states;
          rendered = gsr::render_param(gsr::gen_random_param(*cfg, g), g);
        }
      }
      if (out_path->empty())
        std::cout << rendered;
      else
        write_file(*out_path, rendered);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const gsr::parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const gsr::validation_error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}
