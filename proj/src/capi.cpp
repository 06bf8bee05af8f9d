// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#include "semicoarse.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>

#include "json.hpp"
#include "sce/bertrand.hpp"
#include "sce/dynamics.hpp"
#include "sce/equilibria.hpp"
#include "sce/game.hpp"
#include "sce/lp.hpp"
#include "sce/transforms.hpp"

using nlohmann::json;

struct sce_game {
  sce::NormalFormGame g;
};

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
sce_status guarded(Fn&& fn) {
  try {
    fn();
    return SCE_OK;
  } catch (const json::exception& e) {
    t_last_error = e.what();
    return SCE_ERR_USAGE;
  } catch (const sce::PreconditionError& e) {
    t_last_error = e.what();
    return SCE_ERR_PRECONDITION;
  } catch (const sce::SolverStallError& e) {
    t_last_error = e.what();
    return SCE_ERR_STALL;
  } catch (const std::invalid_argument& e) {
    t_last_error = e.what();
    return SCE_ERR_USAGE;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return SCE_ERR_INTERNAL;
  }
}

std::vector<double> parse_demand(const json& j, int n) {
  if (j.is_string()) {
    const std::string kind = j.get<std::string>();
    if (kind == "inelastic") return sce::inelastic_demand(n);
    if (kind == "linear") return sce::linear_demand(n);
    throw std::invalid_argument("unknown demand kind: " + kind);
  }
  return j.get<std::vector<double>>();
}

sce::NormalFormGame generate_game(const json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "bertrand") {
    const int n = spec.at("n").get<int>();
    return sce::make_bertrand(n, spec.at("costs").get<std::vector<int>>(),
                              parse_demand(spec.value("demand", json("inelastic")), n));
  }
  if (kind == "firstprice") {
    const int n = spec.at("n").get<int>();
    const std::string gauge = spec.value("gauge", "uniform");
    std::vector<double> grid;
    if (gauge == "square")
      grid = sce::squared_grid(n);
    else if (gauge != "uniform")
      throw std::invalid_argument("unknown gauge: " + gauge);
    return sce::make_first_price(n, spec.at("values").get<std::vector<int>>(), grid);
  }
  if (kind == "badgame") return sce::make_bad_game();
  if (kind == "rps") {
    const int actions = spec.value("actions", 3);
    std::vector<int> players = spec.value("players", std::vector<int>{0, 1});
    if (players.size() != 2) throw std::invalid_argument("rps needs two player indices");
    const int np = spec.value("num_players", 2);
    std::vector<int> counts(np, actions);
    std::vector<int> triplet = spec.value("triplet", std::vector<int>{0, 1, 2});
    return sce::make_rps_embedded(counts, players[0], players[1], triplet, triplet);
  }
  if (kind == "random") {
    const int players = spec.value("players", 2);
    std::vector<int> actions = spec.at("actions").get<std::vector<int>>();
    if (static_cast<int>(actions.size()) != players)
      throw std::invalid_argument("actions list must have one entry per player");
    std::mt19937 rng(spec.value("seed", 0u));
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    sce::NormalFormGame g;
    g.action_labels.resize(players);
    std::size_t outcomes = 1;
    for (int i = 0; i < players; ++i) {
      for (int k = 0; k < actions[i]; ++k) g.action_labels[i].push_back("a" + std::to_string(k));
      outcomes *= static_cast<std::size_t>(actions[i]);
    }
    g.utilities.assign(players, std::vector<double>(outcomes));
    for (auto& u : g.utilities)
      for (auto& v : u) v = unif(rng);
    g.validate();
    return g;
  }
  throw std::invalid_argument("unknown generator kind: " + kind);
}

sce::Objective parse_objective(const sce::NormalFormGame& g, const json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "not-nash") return sce::d_not_nash(g);
  if (kind == "sum-sq-value") return sce::d_sum_sq_value(g);
  if (kind == "sq-dist") return sce::d_sq_dist_to(g, spec.at("target").get<std::vector<double>>());
  if (kind == "dense") {
    auto d = spec.at("values").get<std::vector<double>>();
    if (d.size() != g.num_outcomes()) throw std::invalid_argument("objective size mismatch");
    return d;
  }
  throw std::invalid_argument("unknown objective kind: " + kind);
}

json solution_json(const sce::EquilibriumSolution& sol) {
  json j;
  switch (sol.status) {
    case sce::LpStatus::Optimal: j["status"] = "optimal"; break;
    case sce::LpStatus::Infeasible: j["status"] = "infeasible"; break;
    case sce::LpStatus::Unbounded: j["status"] = "unbounded"; break;
  }
  j["value"] = sol.value;
  if (!sol.sigma.empty()) j["sigma"] = sol.sigma;
  j["pivots"] = sol.raw.pivots;
  return j;
}

json generator_json(const sce::GeneratorPair& p) {
  return json::parse(sce::generator_to_json(p));
}

void maybe_raise_lp_status(const sce::EquilibriumSolution& sol) {
  if (sol.status == sce::LpStatus::Infeasible) throw std::runtime_error("LP infeasible");
  if (sol.status == sce::LpStatus::Unbounded) throw std::runtime_error("LP unbounded");
}

json run_solve(const sce::NormalFormGame& g, const json& opts) {
  const std::string concept_name = opts.at("concept").get<std::string>();
  const sce::Objective d = parse_objective(g, opts.at("objective"));
  sce::SolveOptions sopts;
  sopts.exact_rational = opts.value("exact", false);
  const int max_cycle_len = opts.value("max_cycle_len", 0);

  sce::EquilibriumLpBundle bundle;
  if (concept_name == "cce") {
    bundle = sce::build_cce_lp(g, d);
  } else if (concept_name == "ce") {
    bundle = sce::build_ce_lp(g, d);
  } else if (concept_name == "semicoarse-ext") {
    bundle = sce::build_semicoarse_extension_lp(g, d);
  } else if (concept_name == "semicoarse-enum") {
    bundle = sce::build_semicoarse_enumerated_lp(g, d, sce::canonical_families(g, max_cycle_len));
  } else if (concept_name == "lyapunov") {
    bundle = sce::build_dual_lyapunov_lp(g, d);
  } else if (concept_name == "weighted") {
    bundle = sce::build_weighted_semicoarse_lp(
        g, opts.at("weights").get<std::vector<std::vector<int>>>(), d, max_cycle_len);
  } else {
    throw std::invalid_argument("unknown concept: " + concept_name);
  }

  auto sol = sce::solve_bundle(bundle, sopts);
  json out = solution_json(sol);
  out["concept"] = concept_name;
  if (opts.value("export_lp", false)) out["lp_text"] = sce::export_lp_text(bundle.lp);
  if (concept_name == "lyapunov" && sol.status == sce::LpStatus::Optimal) {
    auto cert = sce::extract_certificate(bundle, sol);
    json pairs = json::array();
    for (const auto& p : cert.pairs) pairs.push_back(generator_json(p));
    out["certificate"] = json{{"gamma", cert.gamma}, {"pairs", pairs}};
  }
  if (sol.status != sce::LpStatus::Optimal) {
    // report the status in-band; the caller maps it to an exit code
    maybe_raise_lp_status(sol);
  }
  return out;
}

json run_dynamics(const sce::NormalFormGame* gp, const json& opts) {
  const std::string kind = opts.value("kind", "pga");
  json out;
  if (kind == "meanbased") {
    auto rep = sce::mean_based_counterexample(opts.value("actions", 2), opts.value("C", 1.0),
                                              opts.value("alpha", 0.5), opts.at("T").get<long>());
    out = {{"kind", "meanbased"},
           {"T", rep.T},
           {"K", rep.K},
           {"final_mass_astar", rep.final_mass_astar},
           {"mean_gap", rep.mean_gap},
           {"mean_based_violated", rep.mean_based_violated},
           {"min_growth_ratio", rep.min_growth_ratio}};
    return out;
  }
  if (kind == "rps") {
    const int actions = opts.value("actions", 3);
    auto perm = opts.value("perm", std::vector<int>{1, 2, 0});
    if (static_cast<int>(perm.size()) != actions)
      throw std::invalid_argument("perm must list an image for every action");
    sce::TransformMatrix P;
    P.P = sce::Mat(actions);
    for (int a = 0; a < actions; ++a) P.P(perm[a], a) = 1.0;
    P.name = "perm";
    auto cr = sce::rps_cycle_regret(opts.value("eps", 0.1), P, opts.value("quadrature", 256));
    out = {{"kind", "rps"}, {"numeric", cr.numeric}, {"closed_form", cr.closed_form}};
    return out;
  }

  if (gp == nullptr) throw std::invalid_argument("dynamics requires a game");
  const sce::NormalFormGame& g = *gp;
  const long T = opts.at("T").get<long>();
  std::vector<sce::StepSchedule> schedules;
  if (opts.contains("schedules")) {
    for (const auto& s : opts.at("schedules"))
      schedules.push_back({s.value("C", 1.0), s.value("alpha", 0.5)});
  } else {
    const auto& s = opts.at("schedule");
    schedules.assign(g.action_labels.size(), {s.value("C", 1.0), s.value("alpha", 0.5)});
  }

  sce::Trajectory traj;
  if (kind == "pga") {
    sce::MixedProfile init = opts.value("init", "uniform") == std::string("random")
                                 ? sce::random_interior_profile(g, opts.value("seed", 0u))
                                 : sce::uniform_profile(g);
    traj = sce::pga_run(g, init, schedules, T);
  } else if (kind == "scaled") {
    traj = sce::scaled_pga_run(g, opts.at("weights").get<std::vector<std::vector<int>>>(),
                               schedules, T);
  } else {
    throw std::invalid_argument("unknown dynamics kind: " + kind);
  }

  auto sigma = sce::time_avg_outcome_distribution(g, traj.profiles);
  out["kind"] = kind;
  out["T"] = T;
  out["sigma"] = sigma;
  if (opts.value("trajectory", false)) out["trajectory_csv"] = sce::trajectory_to_csv(traj);

  // external regret (singleton subset transforms) and canonical-family report
  const int players = static_cast<int>(g.action_labels.size());
  double max_external = 0.0;
  for (int i = 0; i < players; ++i) {
    const int mi = static_cast<int>(g.action_labels[i].size());
    for (int a = 0; a < mi; ++a) {
      sce::TransformMatrix t;
      t.P = sce::Mat(mi);
      for (int col = 0; col < mi; ++col) t.P(a, col) = 1.0;
      t.name = "const";
      max_external = std::max(max_external, sce::regret_vs_transform(g, traj, i, t));
    }
  }
  out["external_regret"] = max_external;

  // canonical-family regret; full cycle enumeration is factorial in the
  // action count, so without an explicit cap skip oversized families
  const int cap = opts.value("max_cycle_len", 0);
  long long family_size = 0;
  for (int i = 0; i < players; ++i)
    family_size += sce::count_canonical(static_cast<int>(g.action_labels[i].size()), cap);
  if (cap > 0 || family_size <= 100000) {
    auto families = sce::canonical_families(g, cap);
    auto rep = sce::verify_distribution(g, sigma, families, opts.value("verify_tol", 1e-6));
    double max_canonical = 0.0;
    for (const auto& item : rep.items) max_canonical = std::max(max_canonical, item.slack);
    out["max_canonical_regret"] = max_canonical;
    if (opts.value("verify", false))
      out["verify"] = json{{"pass", rep.pass}, {"max_slack", rep.max_slack}};
  } else {
    out["canonical_regret_skipped"] = true;
    if (opts.value("verify", false))
      throw sce::PreconditionError("canonical family too large; set max_cycle_len");
  }
  return out;
}

json run_certify(const json& opts) {
  const int n = opts.at("n").get<int>();
  const auto costs = opts.at("costs").get<std::vector<int>>();
  const auto demand = parse_demand(opts.value("demand", json("inelastic")), n);
  auto cert = sce::build_dual_certificate(n, costs, demand);
  json out = json::parse(sce::certificate_to_json(cert));
  if (opts.value("verify", true)) {
    auto bg = sce::make_bertrand_game(n, costs, demand);
    auto rep = sce::verify_pointwise(bg, cert);
    out["verify"] = json{{"min_slack", rep.min_slack},
                         {"argmin", rep.argmin},
                         {"outcomes", rep.outcomes_checked},
                         {"pass", rep.pass}};
    if (!rep.pass) throw sce::PreconditionError("certificate failed pointwise verification");
  }
  return out;
}

json run_experiment(const json& opts) {
  const std::string name = opts.at("name").get<std::string>();
  const int n = opts.value("n", 10);
  if (n > 15) throw sce::PreconditionError("experiment grid capped at n = 15");
  if (name == "fig1") {
    auto r = sce::fig1_experiment(n);
    sce::NormalFormGame g = sce::make_bertrand(n, {0, 0}, sce::linear_demand(n));
    return {{"name", "fig1"},
            {"n", n},
            {"cce_value", r.cce_value},
            {"semicoarse_value", r.semicoarse_value},
            {"cce_heatmap_csv", sce::sigma_heatmap_csv(g, r.cce_sigma)},
            {"semicoarse_heatmap_csv", sce::sigma_heatmap_csv(g, r.semicoarse_sigma)}};
  }
  if (name == "fig2") {
    auto r = sce::fig2_experiment(n);
    sce::NormalFormGame g1 = sce::make_first_price(n, {n, n});
    sce::NormalFormGame g2 = sce::make_first_price(n, {n, n}, sce::squared_grid(n));
    return {{"name", "fig2"},
            {"n", n},
            {"value_uniform", r.value_uniform},
            {"value_squared", r.value_squared},
            {"uniform_heatmap_csv", sce::sigma_heatmap_csv(g1, r.sigma_uniform)},
            {"squared_heatmap_csv", sce::sigma_heatmap_csv(g2, r.sigma_squared)}};
  }
  throw std::invalid_argument("unknown experiment: " + name);
}

sce_status lp_failure_status(const std::string& what) {
  if (what.find("infeasible") != std::string::npos) return SCE_ERR_INFEASIBLE;
  if (what.find("unbounded") != std::string::npos) return SCE_ERR_UNBOUNDED;
  return SCE_ERR_INTERNAL;
}

}  // namespace

extern "C" {

const char* sce_last_error(void) { return t_last_error.c_str(); }

void sce_string_free(char* s) { std::free(s); }

void sce_game_free(sce_game* g) { delete g; }

sce_status sce_game_generate(const char* spec_json, sce_game** out) {
  if (spec_json == nullptr || out == nullptr) {
    t_last_error = "null argument";
    return SCE_ERR_USAGE;
  }
  return guarded([&] { *out = new sce_game{generate_game(json::parse(spec_json))}; });
}

sce_status sce_game_from_json(const char* text, sce_game** out) {
  if (text == nullptr || out == nullptr) {
    t_last_error = "null argument";
    return SCE_ERR_USAGE;
  }
  return guarded([&] { *out = new sce_game{sce::game_from_json(text)}; });
}

sce_status sce_game_to_json(const sce_game* g, char** out) {
  if (g == nullptr || out == nullptr) {
    t_last_error = "null argument";
    return SCE_ERR_USAGE;
  }
  return guarded([&] { *out = dup_string(sce::game_to_json(g->g)); });
}

sce_status sce_solve(const sce_game* g, const char* options_json, char** result_json) {
  if (g == nullptr || options_json == nullptr || result_json == nullptr) {
    t_last_error = "null argument";
    return SCE_ERR_USAGE;
  }
  const sce_status st =
      guarded([&] { *result_json = dup_string(run_solve(g->g, json::parse(options_json)).dump(2)); });
  if (st == SCE_ERR_INTERNAL) return lp_failure_status(t_last_error);
  return st;
}

sce_status sce_dynamics(const sce_game* g, const char* options_json, char** result_json) {
  if (options_json == nullptr || result_json == nullptr) {
    t_last_error = "null argument";
    return SCE_ERR_USAGE;
  }
  return guarded([&] {
    *result_json =
        dup_string(run_dynamics(g ? &g->g : nullptr, json::parse(options_json)).dump(2));
  });
}

sce_status sce_certify(const char* options_json, char** result_json) {
  if (options_json == nullptr || result_json == nullptr) {
    t_last_error = "null argument";
    return SCE_ERR_USAGE;
  }
  return guarded(
      [&] { *result_json = dup_string(run_certify(json::parse(options_json)).dump(2)); });
}

sce_status sce_experiment(const char* options_json, char** result_json) {
  if (options_json == nullptr || result_json == nullptr) {
    t_last_error = "null argument";
    return SCE_ERR_USAGE;
  }
  return guarded(
      [&] { *result_json = dup_string(run_experiment(json::parse(options_json)).dump(2)); });
}

}  // extern "C"
