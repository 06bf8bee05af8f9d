// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "sce/bertrand.hpp"

using namespace sce;

TEST_CASE("monopoly index matches brute force") {
  for (int n : {4, 8, 12})
    for (const auto& D : {inelastic_demand(n), linear_demand(n)})
      for (int c = 0; c + 2 <= n; ++c) {
        int best = -1;
        double best_val = -1.0;
        for (int k = 0; k <= n; ++k) {
          const double v = (k - c) / static_cast<double>(n) * D[k];
          if (v > best_val + 1e-15) {
            best_val = v;
            best = k;
          }
        }
        CHECK(monopoly_index(D, c, n) == best);
      }
  // inelastic: the grid top; linear: the interior vertex
  CHECK(monopoly_index(inelastic_demand(10), 0, 10) == 10);
  CHECK(monopoly_index(linear_demand(10), 0, 10) == 5);
}

TEST_CASE("inelastic certificate, three symmetric firms on an 8-grid") {
  // closed form for m = 3 inelastic: partial sums S_l = n*N*(l+2)(l+3)/12
  auto cert = build_dual_certificate(8, {0, 0, 0}, inelastic_demand(8));
  CHECK(cert.m == 3);
  CHECK(cert.c == 0);
  CHECK(cert.ell_star == 8);
  CHECK(cert.scale == 1.0);
  REQUIRE(cert.epsilon.size() == 8);
  const double expect[8] = {24, 16, 20, 24, 28, 32, 36, 0};
  double partial = 0.0;
  for (int l = 1; l <= 8; ++l) {
    CHECK(cert.epsilon[l - 1] == doctest::Approx(expect[l - 1]).epsilon(1e-10));
    partial += cert.epsilon[l - 1];
    if (l <= 7) CHECK(partial == doctest::Approx(2.0 * (l + 2) * (l + 3)).epsilon(1e-10));
  }
  for (double d : cert.delta) CHECK(d == 0.0);

  auto bg = make_bertrand_game(8, {0, 0, 0}, inelastic_demand(8));
  auto rep = verify_pointwise(bg, cert);
  CHECK(rep.pass);
  CHECK(rep.outcomes_checked == 9 * 9 * 9);
  CHECK(rep.min_slack >= -1e-9);
}

TEST_CASE("linear-demand certificate, two symmetric firms on a 10-grid") {
  auto cert = build_dual_certificate(10, {0, 0}, linear_demand(10));
  CHECK(cert.m == 2);
  CHECK(cert.ell_star == 5);
  CHECK(cert.epsilon[0] == doctest::Approx(50.0).epsilon(1e-10));
  CHECK(cert.epsilon[1] == doctest::Approx(62.5).epsilon(1e-10));
  // zero at and past the monopoly index
  for (int l = 5; l <= 10; ++l) CHECK(cert.epsilon[l - 1] == 0.0);

  auto bg = make_bertrand_game(10, {0, 0}, linear_demand(10));
  auto rep = verify_pointwise(bg, cert);
  CHECK(rep.pass);
}

TEST_CASE("asymmetric costs: high-cost firm multiplier") {
  // delta_i = n*N / D((c_i - 1)/n); inelastic => n*N
  auto cert = build_dual_certificate(8, {0, 0, 0, 4}, inelastic_demand(8));
  CHECK(cert.m == 3);
  CHECK(cert.delta[3] == doctest::Approx(32.0).epsilon(1e-10));
  CHECK(cert.delta[0] == 0.0);
  CHECK(cert.epsilon[0] == doctest::Approx(32.0).epsilon(1e-10));  // n*N

  auto bg = make_bertrand_game(8, {0, 0, 0, 4}, inelastic_demand(8));
  auto rep = verify_pointwise(bg, cert);
  CHECK(rep.pass);
}

TEST_CASE("two inelastic firms: construction unavailable") {
  CHECK_THROWS_AS(build_dual_certificate(10, {0, 0}, inelastic_demand(10)),
                  PreconditionError);
  CHECK_THROWS_AS(build_dual_certificate(6, {2, 2}, inelastic_demand(6)),
                  PreconditionError);
}

TEST_CASE("pure-Nash classification matches enumeration") {
  struct Case {
    int n;
    std::vector<int> costs;
    std::vector<double> demand;
  };
  for (const auto& tc : {Case{6, {0, 0}, linear_demand(6)}, Case{6, {0, 0}, inelastic_demand(6)},
                         Case{8, {0, 0, 0}, inelastic_demand(8)},
                         Case{8, {1, 1, 3}, linear_demand(8)}}) {
    auto bg = make_bertrand_game(tc.n, tc.costs, tc.demand);
    auto classified = classify_bertrand_pure_nash(bg);
    auto nash = enumerate_pure_nash(bg.game, 1e-12);
    REQUIRE(classified.size() == nash.size());
    std::set<std::vector<int>> a, b;
    for (const auto& x : classified) {
      a.insert(x.outcome);
      CHECK(x.type != NashType::Unclassified);
    }
    for (const auto& x : nash) b.insert(x);
    CHECK(a == b);
  }

  // the weak-tie class appears exactly for two inelastic firms
  auto bg = make_bertrand_game(6, {0, 0}, inelastic_demand(6));
  bool saw_weak = false;
  for (const auto& x : classify_bertrand_pure_nash(bg))
    if (x.type == NashType::WeakPairAtPlus2) {
      saw_weak = true;
      CHECK(x.outcome == std::vector<int>{2, 2});
    }
  CHECK(saw_weak);
}

TEST_CASE("time-average bound: scaling laws") {
  auto cert = build_dual_certificate(8, {0, 0, 0}, inelastic_demand(8));
  std::vector<StepSchedule> sched(3, StepSchedule::inverse_sqrt(1.0));

  auto b1 = time_avg_bound(cert, sched, 40000, 1.0);
  // linear in the certificate multipliers
  auto doubled = cert;
  for (auto& e : doubled.epsilon) e *= 2.0;
  auto b2 = time_avg_bound(doubled, sched, 40000, 1.0);
  CHECK(b2.bound == doctest::Approx(2.0 * b1.bound).epsilon(1e-12));

  // eta ~ 1/sqrt(t): quadrupling the horizon roughly halves the bound
  auto b4 = time_avg_bound(cert, sched, 160000, 1.0);
  CHECK(b4.bound / b1.bound == doctest::Approx(0.5).epsilon(0.02));

  CHECK_THROWS_AS(time_avg_bound(cert, {StepSchedule::constant(1.0)}, 100, 1.0),
                  PreconditionError);
}

TEST_CASE("time-average bound: closed-form cap for constant-per-horizon steps") {
  // symmetric inelastic firms, eta = 1/sqrt(T): bound <= (3/sqrt(T)) m N n^5
  const int n = 21, N = 3;
  std::vector<int> costs(N, 0);
  auto cert = build_dual_certificate(n, costs, inelastic_demand(n));
  for (long T : {10000L, 1000000L}) {
    std::vector<StepSchedule> sched(N, StepSchedule::constant(1.0 / std::sqrt((double)T)));
    auto b = time_avg_bound(cert, sched, T, 2.0);
    const double cap = 3.0 / std::sqrt((double)T) * cert.m * N * std::pow((double)n, 5);
    CHECK(b.bound <= cap);
    CHECK(b.bound > 0.0);
  }
}

TEST_CASE("finite-iterate bound") {
  const int n = 6, N = 3, m = 3;
  const double eps = 1e-3;
  auto sched = StepSchedule::inverse_sqrt(1.0);
  auto b = finite_iterate_bound(n, N, m, inelastic_demand(n), eps, sched);
  CHECK(b.T == std::ceil(9.0 * m * m * N * N * std::pow((double)n, 10) / (eps * eps)));
  CHECK(b.K_illustrative == std::ceil(std::pow(4.0 * N * eps, 2)));  // D(1/n) = 1
  CHECK(b.K >= 1.0);

  // halving the target quadruples the horizon
  auto bh = finite_iterate_bound(n, N, m, inelastic_demand(n), eps / 2.0, sched);
  CHECK(bh.T == doctest::Approx(4.0 * b.T).epsilon(1e-12));

  // tail-sum condition: with eta_t = C/sqrt(t), K must cover theta
  const double theta = 4.0 * N * eps;
  CHECK(2.0 * (std::sqrt(b.T + b.K) - std::sqrt(b.T)) >= theta - 1e-9);

  CHECK_THROWS_AS(finite_iterate_bound(n, N, m, inelastic_demand(n), 0.3, sched),
                  PreconditionError);
  CHECK_THROWS_AS(finite_iterate_bound(n, N, m, inelastic_demand(n), -1.0, sched),
                  PreconditionError);
  CHECK_THROWS_AS(
      finite_iterate_bound(n, N, m, inelastic_demand(n), eps, StepSchedule::power(1.0, 1.0)),
      PreconditionError);
}

TEST_CASE("duopoly price-competition experiment") {
  for (int n : {4, 6, 8}) {
    auto r = fig1_experiment(n);
    // semicoarse set collapses to the Nash point (1/n, 1/n)
    CHECK(r.semicoarse_value == doctest::Approx(2.0 / (n * n)).epsilon(1e-7));
    const auto g = make_bertrand(n, {0, 0}, linear_demand(n));
    const auto idx = g.outcome_index({1, 1});
    CHECK(r.semicoarse_sigma[idx] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r.cce_value >= r.semicoarse_value - 1e-9);
  }
  // on finer grids correlation sustains supra-competitive prices under CCE
  auto r8 = fig1_experiment(8);
  CHECK(r8.cce_value > 10.0 * r8.semicoarse_value);
}

TEST_CASE("first-price auction experiment: gauge sensitivity") {
  for (int n : {4, 6}) {
    auto r = fig2_experiment(n);
    const double q = 1.0 - (1.0 - 1.0 / n) * (1.0 - 1.0 / n);
    CHECK(r.value_squared <= 2.0 * q * q + 1e-9);
    // on the uniform grid the distance-2 outcome (both bid 0) stays reachable
    CHECK(r.value_uniform > r.value_squared + 1e-9);
  }
}

TEST_CASE("certificate implies LP-level collapse to pure Nash") {
  // existence of the explicit dual certificate forces the primal optimum of
  // max E_sigma[1(not Nash)] over the semicoarse set down to zero
  auto bg = make_bertrand_game(5, {0, 0, 0}, inelastic_demand(5));
  CHECK_NOTHROW(build_dual_certificate(5, {0, 0, 0}, inelastic_demand(5)));
  auto sol = solve_bundle(build_semicoarse_extension_lp(bg.game, d_not_nash(bg.game)));
  CHECK(sol.status == LpStatus::Optimal);
  CHECK(std::abs(sol.value) <= 1e-7);
}

TEST_CASE("certificate transforms are valid canonical shapes") {
  auto cert = build_dual_certificate(8, {0, 0, 0, 4}, inelastic_demand(8));
  for (int k = 1; k <= cert.n - cert.c; ++k) {
    auto t = certificate_subset_transform(cert, k);
    validate_transform(t);
    // phi_k fixes the B^k block: columns c+1..c+k map into themselves
    for (int col = cert.c + 1; col <= cert.c + k; ++col)
      for (int row = 0; row <= cert.n; ++row)
        if (row < cert.c + 1 || row > cert.c + k) CHECK(t.P(row, col) == 0.0);
  }
  auto f = certificate_firm_transform(cert, 3);
  validate_transform(f);
  // a high-cost firm's transform only rewrites prices below its cost
  for (int col = cert.costs[3]; col <= cert.n; ++col) CHECK(f.P(col, col) == 1.0);
}

TEST_CASE("serialization shapes") {
  auto cert = build_dual_certificate(8, {0, 0, 0}, inelastic_demand(8));
  auto js = certificate_to_json(cert);
  CHECK(js.find("\"epsilon\"") != std::string::npos);
  CHECK(js.find("\"monopoly_index\"") != std::string::npos);

  auto g = make_bertrand(3, {0, 0}, linear_demand(3));
  OutcomeDistribution sigma(g.num_outcomes(), 1.0 / g.num_outcomes());
  auto csv = sigma_heatmap_csv(g, sigma);
  CHECK(csv.find("v1,v2,sigma\n") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);  // header + 16 cells
}
