// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "sce/equilibria.hpp"

using namespace sce;

namespace {

NormalFormGame random_game(int players, const std::vector<int>& actions, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  NormalFormGame g;
  g.action_labels.resize(players);
  std::size_t total = 1;
  for (int i = 0; i < players; ++i) {
    for (int k = 0; k < actions[i]; ++k) g.action_labels[i].push_back("a" + std::to_string(k));
    total *= actions[i];
  }
  g.utilities.assign(players, std::vector<double>(total));
  for (auto& u : g.utilities)
    for (auto& v : u) v = unif(rng);
  g.validate();
  return g;
}

Objective random_objective(const NormalFormGame& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Objective d(g.num_outcomes());
  for (auto& v : d) v = unif(rng);
  return d;
}

// mass on the middle column of the bad game
Objective bad_game_mass_on_M(const NormalFormGame& g) {
  Objective d(g.num_outcomes(), 0.0);
  d[g.outcome_index({0, 1})] = 1.0;
  d[g.outcome_index({1, 1})] = 1.0;
  return d;
}

// expansion oracle: duplicate each action w times; a w-semicoarse optimum of
// the base game equals the canonical semicoarse optimum of the expansion
double expansion_oracle_value(const NormalFormGame& g,
                              const std::vector<std::vector<int>>& weights, const Objective& d) {
  const int players = g.num_players();
  NormalFormGame big;
  big.action_labels.resize(players);
  std::vector<std::vector<int>> rep;  // expanded action -> base action
  for (int i = 0; i < players; ++i) {
    std::vector<int> map;
    for (int a = 0; a < g.num_actions(i); ++a)
      for (int c = 0; c < weights[i][a]; ++c) {
        big.action_labels[i].push_back("a" + std::to_string(a) + "c" + std::to_string(c));
        map.push_back(a);
      }
    rep.push_back(map);
  }
  std::size_t total = 1;
  for (int i = 0; i < players; ++i) total *= big.action_labels[i].size();
  big.utilities.assign(players, std::vector<double>(total));
  Objective dbig(total);
  std::vector<int> a(players, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<int> base(players);
    for (int i = 0; i < players; ++i) base[i] = rep[i][a[i]];
    const std::size_t bidx = g.outcome_index(base);
    for (int i = 0; i < players; ++i) big.utilities[i][idx] = g.utilities[i][bidx];
    dbig[idx] = d[bidx];
    for (int i = players - 1; i >= 0; --i) {
      if (++a[i] < static_cast<int>(big.action_labels[i].size())) break;
      a[i] = 0;
    }
  }
  big.validate();
  auto sol = solve_bundle(build_semicoarse_extension_lp(big, dbig));
  REQUIRE(sol.status == LpStatus::Optimal);
  return sol.value;
}

}  // namespace

TEST_CASE("bad game: CCE keeps mass on M, semicoarse removes it") {
  auto g = make_bad_game();
  auto d = bad_game_mass_on_M(g);

  auto cce = solve_bundle(build_cce_lp(g, d));
  REQUIRE(cce.status == LpStatus::Optimal);
  CHECK(cce.value >= 0.1);

  auto ext = solve_bundle(build_semicoarse_extension_lp(g, d));
  REQUIRE(ext.status == LpStatus::Optimal);
  CHECK(std::abs(ext.value) <= 1e-8);

  auto enumd = solve_bundle(build_semicoarse_enumerated_lp(g, d, canonical_families(g)));
  REQUIRE(enumd.status == LpStatus::Optimal);
  CHECK(std::abs(enumd.value) <= 1e-8);

  auto dual = solve_bundle(build_dual_lyapunov_lp(g, d));
  REQUIRE(dual.status == LpStatus::Optimal);
  CHECK(std::abs(dual.value) <= 1e-8);
}

TEST_CASE("extension LP size matches the closed form") {
  auto g = make_bad_game();
  auto bundle = build_semicoarse_extension_lp(g, bad_game_mass_on_M(g));
  // |A| + sum_i (3/2)|A_i|(|A_i|-1) variables; 1 + sum_i |A_i|^2 rows
  CHECK(bundle.lp.num_vars == 6 + 3 + 9);
  CHECK(bundle.lp.rows.size() == 1 + 4 + 9);
}

TEST_CASE("enumerated, extension, and Lyapunov dual values coincide") {
  std::mt19937 seeds(101);
  for (int inst = 0; inst < 8; ++inst) {
    auto g = random_game(2, {2 + inst % 3, 2 + (inst + 1) % 3}, seeds());
    for (int k = 0; k < 2; ++k) {
      auto d = random_objective(g, seeds());
      auto enumd = solve_bundle(build_semicoarse_enumerated_lp(g, d, canonical_families(g)));
      auto ext = solve_bundle(build_semicoarse_extension_lp(g, d));
      auto dual = solve_bundle(build_dual_lyapunov_lp(g, d));
      REQUIRE(enumd.status == LpStatus::Optimal);
      REQUIRE(ext.status == LpStatus::Optimal);
      REQUIRE(dual.status == LpStatus::Optimal);
      CHECK(std::abs(enumd.value - ext.value) <= 1e-6);
      CHECK(std::abs(dual.value - ext.value) <= 1e-6);
    }
  }
}

TEST_CASE("nesting: CE <= semicoarse <= CCE") {
  std::mt19937 seeds(202);
  for (int inst = 0; inst < 6; ++inst) {
    auto g = random_game(2, {3, 3}, seeds());
    auto d = random_objective(g, seeds());
    auto ce = solve_bundle(build_ce_lp(g, d));
    auto semi = solve_bundle(build_semicoarse_extension_lp(g, d));
    auto cce = solve_bundle(build_cce_lp(g, d));
    REQUIRE(ce.status == LpStatus::Optimal);
    REQUIRE(semi.status == LpStatus::Optimal);
    REQUIRE(cce.status == LpStatus::Optimal);
    CHECK(ce.value <= semi.value + 1e-7);
    CHECK(semi.value <= cce.value + 1e-7);
  }
}

TEST_CASE("optimal sigma verifies against the full canonical family") {
  auto g = random_game(2, {3, 4}, 777);
  auto d = random_objective(g, 778);
  auto sol = solve_bundle(build_semicoarse_extension_lp(g, d));
  REQUIRE(sol.status == LpStatus::Optimal);
  REQUIRE(sol.sigma.size() == g.num_outcomes());
  validate_distribution(g, sol.sigma);
  auto rep = verify_distribution(g, sol.sigma, canonical_families(g), 1e-7);
  CHECK(rep.pass);
  CHECK(rep.max_slack <= 1e-7);

  // CCE optimum need not satisfy semicoarse constraints on the bad game
  auto gb = make_bad_game();
  auto cce = solve_bundle(build_cce_lp(gb, bad_game_mass_on_M(gb)));
  auto repb = verify_distribution(gb, cce.sigma, canonical_families(gb), 1e-7);
  CHECK_FALSE(repb.pass);
}

TEST_CASE("Lyapunov certificate on the bad game is dual-feasible with gamma 0") {
  auto g = make_bad_game();
  auto d = bad_game_mass_on_M(g);
  auto bundle = build_dual_lyapunov_lp(g, d);
  auto sol = solve_bundle(bundle);
  REQUIRE(sol.status == LpStatus::Optimal);
  auto cert = extract_certificate(bundle, sol);
  CHECK(std::abs(cert.gamma) <= 1e-8);
  REQUIRE(cert.pairs.size() == 2);
  for (const auto& pair : cert.pairs) CHECK(validate_generator(pair).pass);

  // pointwise domination: gamma + sum_i field_i(a) >= d(a)
  for (std::size_t idx = 0; idx < g.num_outcomes(); ++idx) {
    auto a = g.outcome_profile(idx);
    double lhs = cert.gamma;
    for (int i = 0; i < 2; ++i) {
      const auto& gp = cert.pairs[i];
      std::vector<int> b = a;
      for (int ap = 0; ap < g.num_actions(i); ++ap) {
        b[i] = ap;
        lhs += (gp.Q(ap, a[i]) + gp.q[ap]) * g.utility(i, b);
      }
    }
    CHECK(lhs >= d[idx] - 1e-7);
  }

  // the field for player 2 must vanish at the Nash outcomes e_L, e_R and
  // dominate the indicator at e_M; player 1 has no useful deviations
  auto field = [&](const GeneratorPair& gp, const std::vector<int>& a) {
    double v = 0.0;
    std::vector<int> b = a;
    for (int ap = 0; ap < 3; ++ap) {
      b[1] = ap;
      v += (gp.Q(ap, a[1]) + gp.q[ap]) * g.utility(1, b);
    }
    return v;
  };
  for (int row : {0, 1}) {
    CHECK(std::abs(field(cert.pairs[1], {row, 0})) <= 1e-7);
    CHECK(std::abs(field(cert.pairs[1], {row, 2})) <= 1e-7);
    CHECK(field(cert.pairs[1], {row, 1}) >= 1.0 - 1e-7);
  }
}

TEST_CASE("weighted LP with unit weights equals the canonical value") {
  auto g = random_game(2, {3, 2}, 404);
  auto d = random_objective(g, 405);
  std::vector<std::vector<int>> w{{1, 1, 1}, {1, 1}};
  auto wsol = solve_bundle(build_weighted_semicoarse_lp(g, w, d));
  auto csol = solve_bundle(build_semicoarse_enumerated_lp(g, d, canonical_families(g)));
  REQUIRE(wsol.status == LpStatus::Optimal);
  REQUIRE(csol.status == LpStatus::Optimal);
  CHECK(std::abs(wsol.value - csol.value) <= 1e-9);
}

TEST_CASE("weighted LP equals the expansion oracle") {
  std::mt19937 seeds(909);
  const std::vector<std::vector<std::vector<int>>> weight_sets{
      {{2, 1}, {1, 2}},
      {{1, 2, 3}, {2, 2}},
      {{3, 1}, {1, 1, 2}},
  };
  for (const auto& w : weight_sets) {
    std::vector<int> actions;
    for (const auto& wi : w) actions.push_back(static_cast<int>(wi.size()));
    auto g = random_game(2, actions, seeds());
    auto d = random_objective(g, seeds());
    auto wsol = solve_bundle(build_weighted_semicoarse_lp(g, w, d));
    REQUIRE(wsol.status == LpStatus::Optimal);
    const double oracle = expansion_oracle_value(g, w, d);
    CHECK(std::abs(wsol.value - oracle) <= 1e-6);
  }
}

TEST_CASE("scaled constraints replicate weighted transform slacks") {
  auto g = random_game(2, {3, 3}, 606);
  auto d = random_objective(g, 607);
  auto sol = solve_bundle(build_cce_lp(g, d));
  REQUIRE(sol.status == LpStatus::Optimal);
  const std::vector<int> w{1, 2, 3};
  Mat Z(3);
  for (int a = 0; a < 3; ++a) Z(a, a) = w[a];
  const auto fams = weighted_families(g, {w, w});
  for (const auto& t : fams[0]) {
    auto pair = scaled_pair_from_weighted_transform(t, w);
    const double via_scaled = verify_scaled_constraint(g, sol.sigma, 0, Z, pair);
    const double via_transform = transform_slack(g, sol.sigma, 0, t);
    CHECK(via_scaled == doctest::Approx(via_transform).epsilon(1e-9));
  }
}

TEST_CASE("objective helpers") {
  auto g = make_bertrand(4, {0, 0}, {1, 1, 1, 1, 1});
  auto dn = d_not_nash(g);
  CHECK(dn == not_nash_indicator(g, 1e-12));

  auto ds = d_sum_sq_value(g);
  CHECK(ds[g.outcome_index({2, 3})] == doctest::Approx(0.25 + 0.5625));

  auto dd = d_sq_dist_to(g, {1.0, 1.0});
  CHECK(dd[g.outcome_index({4, 4})] == doctest::Approx(0.0));
  CHECK(dd[g.outcome_index({0, 4})] == doctest::Approx(1.0));

  // constant objective pins every LP at that constant
  Objective one(g.num_outcomes(), 1.0);
  auto sol = solve_bundle(build_cce_lp(g, one));
  CHECK(sol.value == doctest::Approx(1.0));
}

TEST_CASE("exact rational option reproduces the double solve on the bad game") {
  auto g = make_bad_game();
  auto d = bad_game_mass_on_M(g);
  SolveOptions exact;
  exact.exact_rational = true;
  auto a = solve_bundle(build_semicoarse_extension_lp(g, d), exact);
  auto b = solve_bundle(build_semicoarse_extension_lp(g, d));
  REQUIRE(a.status == LpStatus::Optimal);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
}
