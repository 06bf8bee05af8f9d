// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "sce/game.hpp"

namespace sce {

// Dense square matrix, row-major: (*this)(r, c) = d[r*m + c].
struct Mat {
  int m = 0;
  std::vector<double> d;

  Mat() = default;
  explicit Mat(int size) : m(size), d(static_cast<std::size_t>(size) * size, 0.0) {}
  double& operator()(int r, int c) { return d[static_cast<std::size_t>(r) * m + c]; }
  double operator()(int r, int c) const { return d[static_cast<std::size_t>(r) * m + c]; }
  static Mat identity(int size);
};

// Generator pair (Q, q): Q symmetric, columns conserved, off-diagonal tangent.
struct GeneratorPair {
  Mat Q;
  std::vector<double> q;
};

// Left-stochastic transform: column a is the distribution P(., a).
struct TransformMatrix {
  Mat P;
  std::string name;  // e.g. "subset{1}" or "cycle(0,2,1)"

  int size() const { return P.m; }
  // column a applied to a point mass; (P x)(a') = sum_a P(a',a) x(a)
  std::vector<double> apply(const std::vector<double>& x) const;
};

struct ValidationReport {
  struct Item {
    std::string constraint;
    double violation;
  };
  std::vector<Item> violations;
  bool pass = true;
};

ValidationReport validate_generator(const GeneratorPair& pair);
void validate_transform(const TransformMatrix& t);  // throws on non-stochastic

// Prop-1 conversion: P = 1 + delta*(Q + q 1^T), delta = 1/Delta (1 if Delta=0).
std::pair<TransformMatrix, double> to_stochastic(const GeneratorPair& pair);

TransformMatrix subset_transform(int m, const std::vector<int>& S);
TransformMatrix cycle_transform(int m, const std::vector<int>& C);
TransformMatrix weighted_subset_transform(int m, const std::vector<int>& S,
                                          const std::vector<int>& w);
TransformMatrix weighted_cycle_transform(int m, const std::vector<int>& C,
                                         const std::vector<int>& w);

struct TripletCheck {
  bool ok = true;
  std::array<int, 3> witness = {-1, -1, -1};
  double defect = 0.0;  // cyclic sum (a,a',a'') minus reverse sum at the witness
};

// Triplet condition: P(a,a') + P(a',a'') + P(a'',a) == P(a,a'') + P(a'',a') + P(a',a)
// for all distinct triplets, within 1e-10.
TripletCheck is_semicoarse_transform(const TransformMatrix& t);

// Inverse of to_stochastic up to the delta rescaling and the trivial ray;
// reference action a* = 0.  Requires the triplet condition.
GeneratorPair generator_from_transform(const TransformMatrix& t);

// All subset transforms (2^m - 2) plus all cycle transforms of length
// 2..max_cycle_len, cycles undirected and deduplicated.
std::vector<TransformMatrix> enumerate_canonical(int m, int max_cycle_len);

std::size_t count_canonical(int m, int max_cycle_len);

std::string transform_to_json(const TransformMatrix& t);
std::string generator_to_json(const GeneratorPair& p);
GeneratorPair generator_from_json(const std::string& text);

}  // namespace sce
