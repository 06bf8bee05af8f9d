// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end; all computation goes through the shared-library
// C interface.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "semicoarse.h"

using nlohmann::json;

namespace {

int status_to_exit(sce_status st) {
  switch (st) {
    case SCE_OK: return 0;
    case SCE_ERR_USAGE: return 1;
    case SCE_ERR_INFEASIBLE: return 2;
    case SCE_ERR_UNBOUNDED: return 3;
    case SCE_ERR_PRECONDITION: return 4;
    case SCE_ERR_STALL: return 5;
    default: return 1;
  }
}

std::string fingerprint(const std::string& config) {
  // FNV-1a, hex
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : config) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  out << text << '\n';
}

std::string out_dir_prefix() {
  const char* dir = std::getenv("SCE_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return "";
  std::string p = dir;
  if (p.back() != '/') p += '/';
  return p;
}

[[noreturn]] void fail(sce_status st) {
  std::cerr << "error: " << sce_last_error() << '\n';
  std::exit(status_to_exit(st));
}

// run a C-API call returning JSON text, stamp the config fingerprint, emit
int emit(sce_status st, char* result, const std::string& config, const std::string& out_path) {
  if (st != SCE_OK) fail(st);
  json j = json::parse(result);
  sce_string_free(result);
  j["config_fingerprint"] = fingerprint(config);
  write_text(out_path, j.dump(2));
  return 0;
}

sce_game* load_game(const std::string& path) {
  sce_game* g = nullptr;
  const sce_status st = sce_game_from_json(read_text(path).c_str(), &g);
  if (st != SCE_OK) fail(st);
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semicoarse correlated equilibrium toolkit"};
  app.require_subcommand(1);

  // --- gen -------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a game as JSON");
  std::string gen_kind, gen_demand = "inelastic", gen_gauge = "uniform", gen_out;
  int gen_n = 10, gen_players = 2, gen_actions = 3;
  unsigned gen_seed = 0;
  std::vector<int> gen_costs, gen_values, gen_action_counts;
  gen->add_option("kind", gen_kind, "bertrand | firstprice | badgame | rps | random")
      ->required();
  gen->add_option("--n", gen_n, "grid size");
  gen->add_option("--costs", gen_costs, "integer cost indices")->delimiter(',');
  gen->add_option("--values", gen_values, "integer value indices")->delimiter(',');
  gen->add_option("--demand", gen_demand, "inelastic | linear");
  gen->add_option("--gauge", gen_gauge, "uniform | square");
  gen->add_option("--players", gen_players, "player count (random)");
  gen->add_option("--actions", gen_action_counts, "actions per player (random)")->delimiter(',');
  gen->add_option("--rps-actions", gen_actions, "actions per player (rps)");
  gen->add_option("--seed", gen_seed, "seed (random)");
  gen->add_option("-o,--out", gen_out, "output path (default stdout)");

  // --- solve -----------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "solve an equilibrium LP");
  std::string solve_game, solve_concept = "semicoarse-ext", solve_obj = "not-nash", solve_out;
  std::vector<double> solve_target, solve_dense;
  std::vector<int> solve_weights;
  int solve_cycle_len = 0;
  bool solve_exact = false, solve_export_lp = false;
  solve->add_option("--game", solve_game, "game JSON path or - for stdin")->required();
  solve->add_option("--concept", solve_concept,
                    "cce | ce | semicoarse-ext | semicoarse-enum | lyapunov | weighted");
  solve->add_option("--objective", solve_obj, "not-nash | sum-sq-value | sq-dist | dense");
  solve->add_option("--target", solve_target, "target point for sq-dist")->delimiter(',');
  solve->add_option("--objective-values", solve_dense, "dense objective values")->delimiter(',');
  solve->add_option("--weights", solve_weights,
                    "action weights, all players concatenated (weighted concept)")
      ->delimiter(',');
  solve->add_option("--max-cycle-len", solve_cycle_len, "cycle length cap (0 = full)");
  solve->add_flag("--exact", solve_exact, "exact rational pivoting");
  solve->add_flag("--export-lp", solve_export_lp, "include the LP in textual form");
  solve->add_option("-o,--out", solve_out, "output path (default stdout)");

  // --- dynamics ----------------------------------------------------------
  auto* dyn = app.add_subcommand("dynamics", "projected gradient ascent runs");
  std::string dyn_game, dyn_kind = "pga", dyn_out, dyn_init = "uniform";
  long dyn_T = 10000;
  double dyn_C = 1.0, dyn_alpha = 0.5, dyn_tol = 1e-6, dyn_eps = 0.1;
  unsigned dyn_seed = 0;
  bool dyn_verify = false, dyn_traj = false, dyn_meanbased = false;
  int dyn_actions = 2, dyn_cycle_len = 0;
  std::vector<int> dyn_weights, dyn_perm;
  dyn->add_option("--game", dyn_game, "game JSON path or - for stdin");
  dyn->add_option("--kind", dyn_kind, "pga | scaled | meanbased | rps");
  dyn->add_option("--T", dyn_T, "rounds");
  dyn->add_option("--C", dyn_C, "step size scale");
  dyn->add_option("--alpha", dyn_alpha, "step size exponent (eta_t = C t^-alpha)");
  dyn->add_option("--seed", dyn_seed, "seed for random init");
  dyn->add_option("--init", dyn_init, "uniform | random");
  dyn->add_option("--weights", dyn_weights, "action weights, all players concatenated (scaled)")
      ->delimiter(',');
  dyn->add_flag("--verify", dyn_verify, "verify averaged play against the canonical family");
  dyn->add_option("--verify-tol", dyn_tol, "verification tolerance");
  dyn->add_option("--max-cycle-len", dyn_cycle_len, "cycle length cap for verification");
  dyn->add_flag("--trajectory", dyn_traj, "include trajectory CSV in output");
  dyn->add_flag("--meanbased-demo", dyn_meanbased, "run the two-action mean-based scenario");
  dyn->add_option("--actions", dyn_actions, "action count (meanbased/rps)");
  dyn->add_option("--eps", dyn_eps, "cycle radius (rps)");
  dyn->add_option("--perm", dyn_perm, "permutation images (rps)")->delimiter(',');
  dyn->add_option("-o,--out", dyn_out, "output path (default stdout)");

  // --- certify -----------------------------------------------------------
  auto* cert = app.add_subcommand("certify", "Bertrand dual certificate");
  std::string cert_demand = "inelastic", cert_out;
  int cert_n = 10;
  std::vector<int> cert_costs;
  cert->add_option("--n", cert_n, "grid size")->required();
  cert->add_option("--costs", cert_costs, "integer cost indices")->required()->delimiter(',');
  cert->add_option("--demand", cert_demand, "inelastic | linear");
  cert->add_option("-o,--out", cert_out, "output path (default stdout)");

  // --- experiment ----------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "reproduce the pricing/auction studies");
  std::vector<std::string> exp_names;
  int exp_n = 10, exp_jobs = 1;
  std::string exp_out;
  exp->add_option("--name", exp_names, "fig1 | fig2 (repeatable)")->required();
  exp->add_option("--n", exp_n, "grid size");
  exp->add_option("--jobs", exp_jobs, "parallel instances");
  exp->add_option("-o,--out", exp_out, "output path prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      json spec{{"kind", gen_kind}};
      if (gen_kind == "bertrand") {
        spec["n"] = gen_n;
        spec["costs"] = gen_costs;
        spec["demand"] = gen_demand;
      } else if (gen_kind == "firstprice") {
        spec["n"] = gen_n;
        spec["values"] = gen_values;
        spec["gauge"] = gen_gauge;
      } else if (gen_kind == "rps") {
        spec["actions"] = gen_actions;
      } else if (gen_kind == "random") {
        spec["players"] = gen_players;
        spec["actions"] = gen_action_counts;
        spec["seed"] = gen_seed;
      }
      sce_game* g = nullptr;
      sce_status st = sce_game_generate(spec.dump().c_str(), &g);
      if (st != SCE_OK) fail(st);
      char* text = nullptr;
      st = sce_game_to_json(g, &text);
      sce_game_free(g);
      if (st != SCE_OK) fail(st);
      write_text(gen_out, text);
      sce_string_free(text);
      return 0;
    }

    if (solve->parsed()) {
      json obj{{"kind", solve_obj}};
      if (!solve_target.empty()) obj["target"] = solve_target;
      if (!solve_dense.empty()) obj["values"] = solve_dense;
      json opts{{"concept", solve_concept},
                {"objective", obj},
                {"max_cycle_len", solve_cycle_len},
                {"exact", solve_exact},
                {"export_lp", solve_export_lp}};
      sce_game* g = load_game(solve_game);
      if (solve_concept == "weighted") {
        // split the flat weight list by each player's action count
        json gj;
        char* text = nullptr;
        if (sce_game_to_json(g, &text) != SCE_OK) fail(SCE_ERR_INTERNAL);
        gj = json::parse(text);
        sce_string_free(text);
        json weights = json::array();
        std::size_t pos = 0;
        for (const auto& acts : gj.at("actions")) {
          json row = json::array();
          for (std::size_t k = 0; k < acts.size(); ++k) {
            if (pos >= solve_weights.size())
              throw CLI::ValidationError("--weights needs one entry per action");
            row.push_back(solve_weights[pos++]);
          }
          weights.push_back(row);
        }
        if (pos != solve_weights.size())
          throw CLI::ValidationError("--weights needs one entry per action");
        opts["weights"] = weights;
      }
      const std::string config = opts.dump();
      char* result = nullptr;
      const sce_status st = sce_solve(g, config.c_str(), &result);
      sce_game_free(g);
      return emit(st, result, config, solve_out);
    }

    if (dyn->parsed()) {
      json opts{{"kind", dyn_meanbased ? "meanbased" : dyn_kind},
                {"T", dyn_T},
                {"schedule", {{"C", dyn_C}, {"alpha", dyn_alpha}}},
                {"seed", dyn_seed},
                {"init", dyn_init},
                {"verify", dyn_verify},
                {"verify_tol", dyn_tol},
                {"max_cycle_len", dyn_cycle_len},
                {"trajectory", dyn_traj}};
      if (dyn_meanbased || dyn_kind == "meanbased") {
        opts["actions"] = dyn_actions;
        opts["C"] = dyn_C;
        opts["alpha"] = dyn_alpha;
        if (dyn_meanbased && dyn_T == 10000) opts["T"] = 40000L;
      }
      if (dyn_kind == "rps") {
        opts["eps"] = dyn_eps;
        opts["actions"] = dyn_actions;
        if (!dyn_perm.empty()) opts["perm"] = dyn_perm;
      }
      sce_game* g = nullptr;
      if (!dyn_game.empty()) g = load_game(dyn_game);
      if (g != nullptr && dyn_kind == "scaled") {
        char* text = nullptr;
        if (sce_game_to_json(g, &text) != SCE_OK) fail(SCE_ERR_INTERNAL);
        json gj = json::parse(text);
        sce_string_free(text);
        json weights = json::array();
        std::size_t pos = 0;
        for (const auto& acts : gj.at("actions")) {
          json row = json::array();
          for (std::size_t k = 0; k < acts.size(); ++k) {
            if (pos >= dyn_weights.size())
              throw CLI::ValidationError("--weights needs one entry per action");
            row.push_back(dyn_weights[pos++]);
          }
          weights.push_back(row);
        }
        opts["weights"] = weights;
      }
      const std::string config = opts.dump();
      char* result = nullptr;
      const sce_status st = sce_dynamics(g, config.c_str(), &result);
      if (g != nullptr) sce_game_free(g);
      if (st == SCE_OK && (dyn_meanbased || dyn_kind == "meanbased")) {
        json j = json::parse(result);
        std::cerr.precision(17);
        std::cerr << "final x(a*) = " << j.at("final_mass_astar").get<double>() << '\n';
      }
      return emit(st, result, config, dyn_out);
    }

    if (cert->parsed()) {
      json opts{{"n", cert_n}, {"costs", cert_costs}, {"demand", cert_demand}, {"verify", true}};
      const std::string config = opts.dump();
      char* result = nullptr;
      const sce_status st = sce_certify(config.c_str(), &result);
      return emit(st, result, config, cert_out);
    }

    if (exp->parsed()) {
      const std::string prefix = out_dir_prefix();
      const std::size_t count = exp_names.size();
      std::vector<sce_status> sts(count, SCE_OK);
      std::vector<char*> results(count, nullptr);
      std::vector<std::string> configs(count);
      for (std::size_t i = 0; i < count; ++i)
        configs[i] = json{{"name", exp_names[i]}, {"n", exp_n}}.dump();

      const std::size_t workers =
          std::min<std::size_t>(std::max(exp_jobs, 1), count);
      std::vector<std::string> errs(count);
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            sts[i] = sce_experiment(configs[i].c_str(), &results[i]);
            if (sts[i] != SCE_OK) errs[i] = sce_last_error();  // thread-local
          }
        });
      for (auto& t : pool) t.join();

      int rc = 0;
      for (std::size_t i = 0; i < count; ++i) {
        if (sts[i] != SCE_OK) {
          std::cerr << "error: " << errs[i] << '\n';
          return status_to_exit(sts[i]);
        }
        std::string out = exp_out;
        if (!out.empty() && out != "-") out = prefix + out + "." + exp_names[i] + ".json";
        rc = emit(sts[i], results[i], configs[i], out);
        if (rc != 0) break;
      }
      return rc;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
