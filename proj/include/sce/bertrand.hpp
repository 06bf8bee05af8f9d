// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "sce/dynamics.hpp"
#include "sce/equilibria.hpp"
#include "sce/game.hpp"
#include "sce/transforms.hpp"

namespace sce {

// Bertrand game plus the generator metadata the analyses need.
struct BertrandGame {
  NormalFormGame game;
  int n = 0;
  std::vector<int> costs;     // integer cost indices, price c_i/n
  std::vector<double> demand;  // D(k/n), k = 0..n
  int min_cost = 0;            // c = min_i costs[i]
  int m = 0;                   // number of firms at minimum cost

  int N() const;  // number of firms
};

BertrandGame make_bertrand_game(int n, const std::vector<int>& costs,
                                const std::vector<double>& demand);
std::vector<double> inelastic_demand(int n);
std::vector<double> linear_demand(int n);  // D(p) = 1 - p

// smallest maximizer of (k - c)/n * D(k/n) over the grid
int monopoly_index(const std::vector<double>& demand, int c, int n);

struct DualCertificate {
  int n = 0;
  int N = 0;  // number of firms
  int m = 0;  // firms at minimum cost
  int c = 0;  // minimum cost index
  int ell_star = 0;
  std::vector<int> costs;
  std::vector<double> demand;
  // epsilon[k-1] multiplies the subset transform onto B^k = c/n + {1/n..k/n},
  // k = 1..n-c; zero once c + k >= ell_star
  std::vector<double> epsilon;
  // delta[i] for firms with cost above minimum (0 for low-cost firms)
  std::vector<double> delta;
  double scale = 1.0;  // common factor applied to reach the eq-pointwise normalization

  double epsilon_sum() const;
};

// Explicit dual multipliers for the Lyapunov LP with d = 1[not pure Nash].
// Throws PreconditionError when the construction's concavity/m preconditions
// fail (certificate unavailable).
DualCertificate build_dual_certificate(int n, const std::vector<int>& costs,
                                       const std::vector<double>& demand);

// the named transforms of the certificate
TransformMatrix certificate_subset_transform(const DualCertificate& cert, int k);  // phi_k
TransformMatrix certificate_firm_transform(const DualCertificate& cert, int firm);  // phi^i

struct PointwiseReport {
  double min_slack = 0.0;  // min over outcomes of LHS - d(p)
  std::vector<int> argmin;
  bool pass = true;
  std::size_t outcomes_checked = 0;
};

// Evaluate eq-pointwise at every price vector.  d defaults to 1[not Nash]
// when empty.
PointwiseReport verify_pointwise(const BertrandGame& bg, const DualCertificate& cert,
                                 const Objective& d = {});

enum class NashType {
  TwoAtMinCost,       // (1) at least two low-cost firms post c/n
  AllAtMinCostPlus1,  // (2) every low-cost firm posts (c+1)/n
  WeakPairAtPlus2,    // m = 2 weak-concavity exception, both at (c+2)/n
  Unclassified,
};

struct NashClassification {
  std::vector<int> outcome;
  NashType type = NashType::Unclassified;
};

std::vector<NashClassification> classify_bertrand_pure_nash(const BertrandGame& bg);

struct ConvergenceBound {
  double T = 0;
  double K = 0;              // schedule-based extra rounds (0 if not applicable)
  double K_illustrative = 0;  // the lax closed form ceil((4 N eps)^2)
  int n = 0, N = 0, m = 0;
  double U = 0;
  double bound = 0;  // probability bound on non-Nash mass
};

// Time-average convergence bound; schedules are per-firm.
ConvergenceBound time_avg_bound(const DualCertificate& cert,
                                const std::vector<StepSchedule>& schedules, long T,
                                double U);

// Finite-iterate bound: T from the inelastic-style inversion, K from the
// step-size sum condition sum_{t=T+1}^{T+K} eta_t >= 4 N eps / D(1/n).
ConvergenceBound finite_iterate_bound(int n, int N, int m, const std::vector<double>& demand,
                                      double eps_target, const StepSchedule& schedule);

struct Fig1Result {
  int n = 0;
  double cce_value = 0;
  double semicoarse_value = 0;
  OutcomeDistribution cce_sigma;
  OutcomeDistribution semicoarse_sigma;
};
Fig1Result fig1_experiment(int n);

struct Fig2Result {
  int n = 0;
  double value_uniform = 0;
  double value_squared = 0;
  OutcomeDistribution sigma_uniform;
  OutcomeDistribution sigma_squared;
};
Fig2Result fig2_experiment(int n);

// two-player heatmap CSV: columns (v1, v2, sigma)
std::string sigma_heatmap_csv(const NormalFormGame& g, const OutcomeDistribution& sigma);
std::string certificate_to_json(const DualCertificate& cert);

}  // namespace sce
