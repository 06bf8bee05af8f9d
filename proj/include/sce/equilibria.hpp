// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "sce/game.hpp"
#include "sce/lp.hpp"
#include "sce/transforms.hpp"

namespace sce {

// An equilibrium LP plus the index maps needed to read solutions back.
struct EquilibriumLpBundle {
  LinearProgram lp;
  std::vector<int> action_counts;
  int num_outcomes = 0;
  bool minimize = false;  // LP stores the negated objective; value() flips back

  // sigma-form LPs: sigma(a) occupies columns [0, num_outcomes)
  bool has_sigma = false;

  // extension LP: per-player column offsets (-1 when absent)
  std::vector<int> gamma_offset;  // ordered pairs (a' != a), row-major skipping diag
  std::vector<int> rho_offset;    // unordered pairs x < y, lexicographic

  // Lyapunov dual LP
  int gamma_var = -1;
  std::vector<int> Q_offset;  // upper triangle incl. diagonal, lexicographic
  std::vector<int> q_offset;
};

struct EquilibriumSolution {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
  OutcomeDistribution sigma;  // empty for the dual LP
  LpSolution raw;
};

EquilibriumSolution solve_bundle(const EquilibriumLpBundle& bundle,
                                 const SolveOptions& opts = {});

struct LyapunovCertificate {
  double gamma = 0.0;
  std::vector<GeneratorPair> pairs;  // one per player
};

// --- builders ---------------------------------------------------------------

using Objective = std::vector<double>;  // d : A -> R, dense over outcomes

EquilibriumLpBundle build_cce_lp(const NormalFormGame& g, const Objective& d);
EquilibriumLpBundle build_ce_lp(const NormalFormGame& g, const Objective& d);
EquilibriumLpBundle build_semicoarse_enumerated_lp(
    const NormalFormGame& g, const Objective& d,
    const std::vector<std::vector<TransformMatrix>>& families);
EquilibriumLpBundle build_semicoarse_extension_lp(const NormalFormGame& g,
                                                  const Objective& d);
EquilibriumLpBundle build_dual_lyapunov_lp(const NormalFormGame& g, const Objective& d);
LyapunovCertificate extract_certificate(const EquilibriumLpBundle& bundle,
                                        const EquilibriumSolution& sol);

// Weighted semicoarse LP: rows over weighted subset/cycle transforms.
// max_cycle_len = 0 enumerates full-length cycles, subject to the row guard.
EquilibriumLpBundle build_weighted_semicoarse_lp(const NormalFormGame& g,
                                                 const std::vector<std::vector<int>>& weights,
                                                 const Objective& d, int max_cycle_len = 0);

// Full canonical transform family per player (all subset and cycle transforms).
std::vector<std::vector<TransformMatrix>> canonical_families(const NormalFormGame& g,
                                                             int max_cycle_len = 0);
std::vector<std::vector<TransformMatrix>> weighted_families(
    const NormalFormGame& g, const std::vector<std::vector<int>>& weights,
    int max_cycle_len = 0);

// --- verification -----------------------------------------------------------

struct ConstraintReport {
  struct Item {
    int player;
    std::string transform;
    double slack;  // deviation gain; nonpositive when satisfied
  };
  std::vector<Item> items;
  double max_slack = 0.0;
  bool pass = true;
};

ConstraintReport verify_distribution(const NormalFormGame& g, const OutcomeDistribution& sigma,
                                     const std::vector<std::vector<TransformMatrix>>& families,
                                     double tol);

// Single-constraint slack under a semicoarse transform for one player.
double transform_slack(const NormalFormGame& g, const OutcomeDistribution& sigma, int player,
                       const TransformMatrix& t);

// Scaled-dynamics constraint.  Z must be symmetric positive and Z(Q,q)
// must satisfy conservation and tangency; throws PreconditionError otherwise.
double verify_scaled_constraint(const NormalFormGame& g, const OutcomeDistribution& sigma,
                                int player, const Mat& Z, const GeneratorPair& pair);

// Symmetric pair (Q, q) with diag(w)(Q + q 1^T) = P - 1 for a weighted
// canonical transform P; feeds verify_scaled_constraint with Z = diag(w).
GeneratorPair scaled_pair_from_weighted_transform(const TransformMatrix& t,
                                                  const std::vector<int>& w);

// --- objective helpers ------------------------------------------------------

Objective d_not_nash(const NormalFormGame& g);
Objective d_indicator(const NormalFormGame& g, const std::vector<int>& outcome);
// sum over players of the squared action value (e.g. sum of squared prices)
Objective d_sum_sq_value(const NormalFormGame& g);
// squared Euclidean distance from the profile's action values to a target
Objective d_sq_dist_to(const NormalFormGame& g, const std::vector<double>& target);

std::string report_to_json(const ConstraintReport& rep);

}  // namespace sce
