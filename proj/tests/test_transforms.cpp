// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "sce/transforms.hpp"

using namespace sce;

namespace {

void check_column_stochastic(const Mat& P) {
  for (int c = 0; c < P.m; ++c) {
    double col = 0.0;
    for (int r = 0; r < P.m; ++r) {
      CHECK(P(r, c) >= -1e-12);
      col += P(r, c);
    }
    CHECK(col == doctest::Approx(1.0).epsilon(1e-12));
  }
}

// nonnegative combination of canonical generators (the cone is convex)
GeneratorPair random_cone_point(int m, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  GeneratorPair acc;
  acc.Q = Mat(m);
  acc.q.assign(m, 0.0);
  for (const auto& t : enumerate_canonical(m, 0)) {
    const double lam = unif(rng);
    auto gp = generator_from_transform(t);
    for (int r = 0; r < m; ++r) {
      acc.q[r] += lam * gp.q[r];
      for (int c = 0; c < m; ++c) acc.Q(r, c) += lam * gp.Q(r, c);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("subset transform maps S to uniform on its complement") {
  auto t = subset_transform(4, {1, 3});
  validate_transform(t);
  check_column_stochastic(t.P);
  // columns in S: uniform over {0, 2}
  for (int a : {1, 3}) {
    CHECK(t.P(0, a) == doctest::Approx(0.5));
    CHECK(t.P(2, a) == doctest::Approx(0.5));
    CHECK(t.P(a, a) == 0.0);
  }
  // columns outside S: identity
  CHECK(t.P(0, 0) == 1.0);
  CHECK(t.P(2, 2) == 1.0);
  CHECK(is_semicoarse_transform(t).ok);
}

TEST_CASE("cycle transform splits mass between the two cyclic neighbors") {
  auto t = cycle_transform(5, {0, 2, 4});
  validate_transform(t);
  check_column_stochastic(t.P);
  CHECK(t.P(2, 0) == doctest::Approx(0.5));
  CHECK(t.P(4, 0) == doctest::Approx(0.5));
  CHECK(t.P(0, 2) == doctest::Approx(0.5));
  CHECK(t.P(4, 2) == doctest::Approx(0.5));
  CHECK(t.P(1, 1) == 1.0);
  CHECK(t.P(3, 3) == 1.0);
  CHECK(is_semicoarse_transform(t).ok);

  // a 2-cycle is the swap-to-each-other map
  auto swap = cycle_transform(3, {0, 2});
  CHECK(swap.P(2, 0) == doctest::Approx(1.0));
  CHECK(swap.P(0, 2) == doctest::Approx(1.0));
  CHECK(is_semicoarse_transform(swap).ok);
}

TEST_CASE("a directed 3-cycle permutation is not semicoarse") {
  TransformMatrix t;
  t.P = Mat(3);
  t.P(1, 0) = t.P(2, 1) = t.P(0, 2) = 1.0;
  t.name = "perm";
  validate_transform(t);
  auto chk = is_semicoarse_transform(t);
  CHECK_FALSE(chk.ok);
  CHECK(std::abs(chk.defect) == doctest::Approx(3.0));
}

TEST_CASE("canonical family counts") {
  // subsets 2^m - 2; cycles: C(m,2) + sum_{k>=3} C(m,k) (k-1)!/2
  CHECK(count_canonical(2, 0) == 3);        // 2 + 1
  CHECK(count_canonical(3, 0) == 10);       // 6 + 3 + 1
  CHECK(count_canonical(4, 0) == 27);       // 14 + 6 + 4 + 3
  CHECK(count_canonical(4, 2) == 20);       // subsets + 2-cycles only
  CHECK(count_canonical(5, 0) == 30 + 10 + 10 + 15 + 12);

  for (int m : {2, 3, 4, 5}) {
    auto fam = enumerate_canonical(m, 0);
    CHECK(fam.size() == count_canonical(m, 0));
    std::set<std::string> names;
    for (const auto& t : fam) {
      names.insert(t.name);
      validate_transform(t);
      CHECK(is_semicoarse_transform(t).ok);
      check_column_stochastic(t.P);
    }
    CHECK(names.size() == fam.size());
  }
}

TEST_CASE("generator validation and the stochastic conversion") {
  for (unsigned seed : {11u, 12u, 13u}) {
    auto gp = random_cone_point(4, seed);
    auto rep = validate_generator(gp);
    CHECK(rep.pass);

    auto [t, delta] = to_stochastic(gp);
    CHECK(delta > 0.0);
    validate_transform(t);
    check_column_stochastic(t.P);
    CHECK(is_semicoarse_transform(t).ok);

    // P - 1 = delta (Q + q 1^T)
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        const double want = delta * (gp.Q(r, c) + gp.q[r]) + (r == c ? 1.0 : 0.0);
        CHECK(t.P(r, c) == doctest::Approx(want).epsilon(1e-10));
      }
  }

  // zero generator maps to the identity with delta = 1
  GeneratorPair zero;
  zero.Q = Mat(3);
  zero.q.assign(3, 0.0);
  auto [tz, dz] = to_stochastic(zero);
  CHECK(dz == 1.0);
  for (int r = 0; r < 3; ++r) CHECK(tz.P(r, r) == 1.0);
}

TEST_CASE("generator_from_transform inverts to_stochastic up to scaling") {
  for (const auto& t : enumerate_canonical(4, 0)) {
    auto gp = generator_from_transform(t);
    CHECK(validate_generator(gp).pass);
    auto [t2, delta] = to_stochastic(gp);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) CHECK(t2.P(r, c) == doctest::Approx(t.P(r, c)).epsilon(1e-9));
  }
  // round trip from a strict cone point
  auto gp = random_cone_point(3, 99);
  auto [t, delta] = to_stochastic(gp);
  auto gp2 = generator_from_transform(t);
  auto [t2, delta2] = to_stochastic(gp2);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(t2.P(r, c) == doctest::Approx(t.P(r, c)).epsilon(1e-9));
}

TEST_CASE("weighted subset transform sends S to the w-proportional complement") {
  const std::vector<int> w{1, 2, 3};
  auto t = weighted_subset_transform(3, {0}, w);
  validate_transform(t);
  check_column_stochastic(t.P);
  CHECK(t.P(1, 0) == doctest::Approx(2.0 / 5.0));
  CHECK(t.P(2, 0) == doctest::Approx(3.0 / 5.0));
  CHECK(t.P(1, 1) == 1.0);

  // unit weights reduce to the canonical subset transform
  auto tu = weighted_subset_transform(3, {0}, {1, 1, 1});
  auto tc = subset_transform(3, {0});
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(tu.P(r, c) == doctest::Approx(tc.P(r, c)));
}

TEST_CASE("weighted cycle transform: self mass 1 - delta/w, neighbors delta/2w") {
  const std::vector<int> w{2, 1, 4};
  auto t = weighted_cycle_transform(3, {0, 1, 2}, w);
  validate_transform(t);
  check_column_stochastic(t.P);
  const double delta = 1.0;  // min weight
  CHECK(t.P(0, 0) == doctest::Approx(1.0 - delta / w[0]));
  CHECK(t.P(1, 0) == doctest::Approx(delta / (2.0 * w[0])));
  CHECK(t.P(2, 0) == doctest::Approx(delta / (2.0 * w[0])));
  CHECK(t.P(1, 1) == doctest::Approx(0.0));
  CHECK(t.P(2, 2) == doctest::Approx(1.0 - delta / w[2]));

  auto tu = weighted_cycle_transform(4, {0, 1, 3}, {1, 1, 1, 1});
  auto tc = cycle_transform(4, {0, 1, 3});
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) CHECK(tu.P(r, c) == doctest::Approx(tc.P(r, c)));
}

TEST_CASE("transform apply is the matrix action on distributions") {
  auto t = subset_transform(3, {0});
  std::vector<double> x{0.5, 0.25, 0.25};
  auto y = t.apply(x);
  CHECK(y[0] == doctest::Approx(0.0));
  CHECK(y[1] == doctest::Approx(0.5));
  CHECK(y[2] == doctest::Approx(0.5));
}

TEST_CASE("generator JSON round trip") {
  auto gp = random_cone_point(3, 5);
  auto gp2 = generator_from_json(generator_to_json(gp));
  CHECK(gp2.q.size() == gp.q.size());
  for (int r = 0; r < 3; ++r) {
    CHECK(gp2.q[r] == doctest::Approx(gp.q[r]).epsilon(1e-15));
    for (int c = 0; c < 3; ++c) CHECK(gp2.Q(r, c) == doctest::Approx(gp.Q(r, c)).epsilon(1e-15));
  }
}
