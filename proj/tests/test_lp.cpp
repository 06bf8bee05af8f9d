// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "sce/lp.hpp"

using namespace sce;

namespace {

LinearProgram knapsack_like() {
  LinearProgram lp;
  int x = lp.add_var("x", 3.0);
  int y = lp.add_var("y", 2.0);
  lp.add_row({{{x, 1.0}, {y, 1.0}}, Relation::LessEq, 4.0, "cap"});
  lp.add_row({{{x, 1.0}}, Relation::LessEq, 2.0, "xcap"});
  return lp;
}

}  // namespace

TEST_CASE("basic maximization with inequality rows") {
  auto lp = knapsack_like();
  auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(10.0));  // x=2, y=2
  CHECK(sol.primal[0] == doctest::Approx(2.0));
  CHECK(sol.primal[1] == doctest::Approx(2.0));
  auto chk = check_solution(lp, sol);
  CHECK(chk.primal_residual <= 1e-9);
  CHECK(chk.dual_residual <= 1e-9);
  CHECK(chk.gap <= 1e-9);
}

TEST_CASE("equality rows and free variables") {
  LinearProgram lp;
  int x = lp.add_var("x", 1.0);
  int z = lp.add_var("z", -1.0, /*free=*/true);
  lp.add_row({{{x, 1.0}, {z, 1.0}}, Relation::Equal, 1.0, "sum"});
  lp.add_row({{{x, 1.0}, {z, -1.0}}, Relation::LessEq, 5.0, "gap"});
  auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  // maximize x - z subject to x + z = 1, x - z <= 5  =>  x = 3, z = -2
  CHECK(sol.value == doctest::Approx(5.0));
  CHECK(sol.primal[0] == doctest::Approx(3.0));
  CHECK(sol.primal[1] == doctest::Approx(-2.0));
}

TEST_CASE("infeasible and unbounded detection") {
  LinearProgram bad;
  int x = bad.add_var("x", 1.0);
  bad.add_row({{{x, 1.0}}, Relation::LessEq, -1.0, "neg"});
  CHECK(solve(bad).status == LpStatus::Infeasible);

  LinearProgram inf2;
  int a = inf2.add_var("a", 0.0);
  inf2.add_row({{{a, 1.0}}, Relation::Equal, 1.0, "one"});
  inf2.add_row({{{a, 1.0}}, Relation::Equal, 2.0, "two"});
  CHECK(solve(inf2).status == LpStatus::Infeasible);

  LinearProgram unb;
  int u = unb.add_var("u", 1.0);
  int v = unb.add_var("v", 0.0);
  unb.add_row({{{u, 1.0}, {v, -1.0}}, Relation::LessEq, 1.0, "loose"});
  CHECK(solve(unb).status == LpStatus::Unbounded);
}

TEST_CASE("duals certify optimality (shadow prices)") {
  auto lp = knapsack_like();
  auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  // both rows bind: y = (2, 1): 2*1 + 1*1 = 3 = c_x, 2*1 = 2 = c_y
  CHECK(sol.dual[0] == doctest::Approx(2.0));
  CHECK(sol.dual[1] == doctest::Approx(1.0));
  // dual value equals primal value
  CHECK(4.0 * sol.dual[0] + 2.0 * sol.dual[1] == doctest::Approx(sol.value));
}

TEST_CASE("Beale's cycling example terminates under Bland's rule") {
  // classic degenerate instance that cycles under most-negative pivoting
  LinearProgram lp;
  int x1 = lp.add_var("x1", 0.75);
  int x2 = lp.add_var("x2", -150.0);
  int x3 = lp.add_var("x3", 0.02);
  int x4 = lp.add_var("x4", -6.0);
  lp.add_row({{{x1, 0.25}, {x2, -60.0}, {x3, -1.0 / 25.0}, {x4, 9.0}}, Relation::LessEq, 0.0, "r1"});
  lp.add_row({{{x1, 0.5}, {x2, -90.0}, {x3, -1.0 / 50.0}, {x4, 3.0}}, Relation::LessEq, 0.0, "r2"});
  lp.add_row({{{x3, 1.0}}, Relation::LessEq, 1.0, "r3"});
  auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(0.05));
  CHECK(sol.pivots < 100);
}

TEST_CASE("random degenerate instances: double vs exact rational agree") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> coef(-3, 3);
  int optimal_seen = 0;
  for (int inst = 0; inst < 20; ++inst) {
    LinearProgram lp;
    const int n = 4;
    for (int j = 0; j < n; ++j) lp.add_var("x" + std::to_string(j), coef(rng));
    for (int r = 0; r < 5; ++r) {
      LinearProgram::Row row;
      for (int j = 0; j < n; ++j) {
        int c = coef(rng);
        if (c != 0) row.coeffs.push_back({j, static_cast<double>(c)});
      }
      row.rel = r % 3 == 0 ? Relation::Equal : Relation::LessEq;
      row.rhs = (r % 2 == 0) ? 0.0 : std::abs(coef(rng));  // rhs 0 forces degeneracy
      row.name = "r" + std::to_string(r);
      lp.add_row(row);
    }
    auto sol_d = solve(lp);
    SolveOptions exact;
    exact.exact_rational = true;
    auto sol_q = solve(lp, exact);
    CHECK(sol_d.status == sol_q.status);
    if (sol_d.status == LpStatus::Optimal) {
      ++optimal_seen;
      CHECK(sol_d.value == doctest::Approx(sol_q.value).epsilon(1e-9));
      auto chk = check_solution(lp, sol_q);
      CHECK(chk.primal_residual <= 1e-12);
      CHECK(chk.gap <= 1e-12);
    }
  }
  CHECK(optimal_seen >= 5);  // the family is not vacuously infeasible
}

TEST_CASE("export/parse round trip preserves the optimum") {
  LinearProgram lp;
  int x = lp.add_var("x", 1.5);
  int y = lp.add_var("y", 1.0);
  int z = lp.add_var("z", 0.25, /*free=*/true);
  lp.add_row({{{x, 2.0}, {y, 1.0}}, Relation::LessEq, 3.0, "c1"});
  lp.add_row({{{y, 1.0}, {z, 1.0}}, Relation::Equal, 1.0, "c2"});
  lp.add_row({{{x, 1.0}, {z, -1.0}}, Relation::LessEq, 2.0, "c3"});

  auto text = export_lp_text(lp);
  auto lp2 = parse_lp_text(text);
  REQUIRE(lp2.num_vars == lp.num_vars);
  REQUIRE(lp2.rows.size() == lp.rows.size());

  auto s1 = solve(lp);
  auto s2 = solve(lp2);
  REQUIRE(s1.status == LpStatus::Optimal);
  REQUIRE(s2.status == LpStatus::Optimal);
  CHECK(s1.value == doctest::Approx(s2.value).epsilon(1e-12));
  // textual form survives a second round trip verbatim
  CHECK(export_lp_text(lp2) == text);
}

TEST_CASE("solution JSON carries status and value") {
  auto sol = solve(knapsack_like());
  auto j = solution_to_json(sol);
  CHECK(j.find("\"status\"") != std::string::npos);
  CHECK(j.find("10") != std::string::npos);
}

TEST_CASE("validate rejects malformed programs") {
  LinearProgram lp;
  lp.add_var("x", 1.0);
  lp.add_row({{{2, 1.0}}, Relation::LessEq, 1.0, "oor"});
  CHECK_THROWS(lp.validate());
}
