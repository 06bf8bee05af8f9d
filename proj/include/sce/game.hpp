// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sce {

// Thrown when an operation's stated preconditions are not met.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Finite normal-form game with dense utility tensors.
//
// Outcomes are indexed row-major over action profiles: the profile
// (a_0, ..., a_{n-1}) has flat index ((a_0*m_1 + a_1)*m_2 + ...) where m_i
// is the number of actions of player i.
struct NormalFormGame {
  // action_labels[i][k] is a human-readable label for action k of player i.
  std::vector<std::vector<std::string>> action_labels;
  // action_values[i][k] is an optional numeric value attached to action k of
  // player i (e.g. a price on a grid).  Empty inner vectors mean "no values".
  std::vector<std::vector<double>> action_values;
  // utilities[i][flat_outcome] = u_i(a).
  std::vector<std::vector<double>> utilities;

  int num_players() const { return static_cast<int>(utilities.size()); }
  int num_actions(int i) const { return static_cast<int>(action_labels[i].size()); }
  std::size_t num_outcomes() const;

  std::size_t outcome_index(const std::vector<int>& a) const;
  std::vector<int> outcome_profile(std::size_t idx) const;
  double utility(int player, const std::vector<int>& a) const {
    return utilities[player][outcome_index(a)];
  }

  void validate() const;  // throws PreconditionError on shape mismatch
};

// Per-player mixed strategies: profile[i] is a distribution over A_i.
using MixedProfile = std::vector<std::vector<double>>;

// Correlated distribution over flat outcomes (same indexing as utilities).
using OutcomeDistribution = std::vector<double>;

NormalFormGame make_game(std::vector<std::vector<std::string>> action_labels,
                         std::vector<std::vector<double>> utilities);

// Expected utility of player i under independent mixing x.
double expected_utility(const NormalFormGame& g, int player, const MixedProfile& x);

// Expected utility of player i under a correlated distribution sigma.
double expected_utility(const NormalFormGame& g, int player, const OutcomeDistribution& sigma);

// Gradient of u_i w.r.t. player i's own mixed strategy, evaluated at x.
// Entry a_i is E_{a_{-i} ~ x_{-i}} [u_i(a_i, a_{-i})].
std::vector<double> utility_gradient(const NormalFormGame& g, int player, const MixedProfile& x);

// Product (independent) outcome distribution induced by x.
OutcomeDistribution product_distribution(const NormalFormGame& g, const MixedProfile& x);

// Uniform average of the product distributions of a trajectory of profiles.
OutcomeDistribution time_avg_outcome_distribution(const NormalFormGame& g,
                                                  const std::vector<MixedProfile>& traj);

// All pure Nash equilibria (as action profiles), lexicographic order.
std::vector<std::vector<int>> enumerate_pure_nash(const NormalFormGame& g, double tol = 0.0);

// 0/1 vector over outcomes: 1 iff the outcome is NOT a pure Nash equilibrium.
std::vector<double> not_nash_indicator(const NormalFormGame& g, double tol = 0.0);

struct DeviationReport {
  // one entry per (player, deviation) pair with positive gain above tol
  struct Item {
    int player;
    int from;  // -1 for coarse deviations (unconditional)
    int to;
    double gain;
  };
  std::vector<Item> violations;
  double max_gain = 0.0;
  bool pass = true;
};

// Coarse correlated equilibrium check: unilateral unconditional deviations.
DeviationReport check_epsilon_cce(const NormalFormGame& g, const OutcomeDistribution& sigma,
                                  double eps);
// Correlated equilibrium check: swap deviations conditioned on recommendation.
DeviationReport check_epsilon_ce(const NormalFormGame& g, const OutcomeDistribution& sigma,
                                 double eps);

void validate_distribution(const NormalFormGame& g, const OutcomeDistribution& sigma,
                           double tol = 1e-9);
void validate_profile(const NormalFormGame& g, const MixedProfile& x, double tol = 1e-9);

// --- generators -----------------------------------------------------------

// Grid of n+1 prices/bids.  Values are exactly k/n (uniform) or (k/n)^2
// (the squared "gauge" grid).
std::vector<double> uniform_grid(int n);
std::vector<double> squared_grid(int n);

// Bertrand pricing game on the uniform grid.  costs[i] is an integer in
// [0, n]; firm i's marginal cost is costs[i]/n.  demand[k] = D(k/n) must be
// nonincreasing and nonnegative.  Lowest-price firms split demand evenly.
NormalFormGame make_bertrand(int n, const std::vector<int>& costs,
                             const std::vector<double>& demand);

// First-price auction with complete information on a bid grid.  values[i] is
// an integer in [0, n]; bidder i's value is values[i]/n.  Highest bidders
// split the win evenly.  grid must have n+1 nondecreasing entries in [0, 1]
// (defaults to the uniform grid when empty).
NormalFormGame make_first_price(int n, const std::vector<int>& values,
                                const std::vector<double>& grid = {});

// 2x3 game: player 1 chooses {T, B}, player 2 chooses {L, M, R}.
// u_1 is identically 0; u_2(T,.) = (1, 0, 0), u_2(B,.) = (0, 0, 1).
NormalFormGame make_bad_game();

// Game where players i and j play a rotation-symmetric rock-paper-scissors
// embedded on given action triplets; every other player's utility is 0, as is
// every outcome where i or j plays outside their triplet.
NormalFormGame make_rps_embedded(const std::vector<int>& num_actions, int i, int j,
                                 const std::vector<int>& triplet_i,
                                 const std::vector<int>& triplet_j);

// --- serialization --------------------------------------------------------

std::string game_to_json(const NormalFormGame& g);
NormalFormGame game_from_json(const std::string& text);

}  // namespace sce
