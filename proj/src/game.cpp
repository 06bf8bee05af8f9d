// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#include "sce/game.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace sce {

std::size_t NormalFormGame::num_outcomes() const {
  std::size_t n = 1;
  for (const auto& acts : action_labels) n *= acts.size();
  return n;
}

std::size_t NormalFormGame::outcome_index(const std::vector<int>& a) const {
  if (static_cast<int>(a.size()) != num_players())
    throw PreconditionError("profile length != num_players");
  std::size_t idx = 0;
  for (int i = 0; i < num_players(); ++i) {
    int m = num_actions(i);
    if (a[i] < 0 || a[i] >= m) throw PreconditionError("action index out of range");
    idx = idx * m + a[i];
  }
  return idx;
}

std::vector<int> NormalFormGame::outcome_profile(std::size_t idx) const {
  std::vector<int> a(num_players());
  for (int i = num_players() - 1; i >= 0; --i) {
    int m = num_actions(i);
    a[i] = static_cast<int>(idx % m);
    idx /= m;
  }
  return a;
}

void NormalFormGame::validate() const {
  if (action_labels.empty()) throw PreconditionError("game has no players");
  if (utilities.size() != action_labels.size())
    throw PreconditionError("utilities/actions player-count mismatch");
  std::size_t n = num_outcomes();
  for (int i = 0; i < num_players(); ++i) {
    if (num_actions(i) < 1) throw PreconditionError("empty action set");
    if (utilities[i].size() != n)
      throw PreconditionError("utility tensor shape mismatch");
    for (double u : utilities[i])
      if (!std::isfinite(u)) throw PreconditionError("non-finite payoff");
  }
  if (!action_values.empty() && action_values.size() != action_labels.size())
    throw PreconditionError("action_values player-count mismatch");
}

NormalFormGame make_game(std::vector<std::vector<std::string>> action_labels,
                         std::vector<std::vector<double>> utilities) {
  NormalFormGame g;
  g.action_labels = std::move(action_labels);
  g.utilities = std::move(utilities);
  g.validate();
  return g;
}

void validate_profile(const NormalFormGame& g, const MixedProfile& x, double tol) {
  if (static_cast<int>(x.size()) != g.num_players())
    throw PreconditionError("profile player-count mismatch");
  for (int i = 0; i < g.num_players(); ++i) {
    if (static_cast<int>(x[i].size()) != g.num_actions(i))
      throw PreconditionError("mixed strategy dimension mismatch");
    double s = 0;
    for (double p : x[i]) {
      if (p < -1e-12) throw PreconditionError("negative probability");
      s += p;
    }
    if (std::abs(s - 1.0) > tol) throw PreconditionError("probabilities do not sum to 1");
  }
}

void validate_distribution(const NormalFormGame& g, const OutcomeDistribution& sigma,
                           double tol) {
  if (sigma.size() != g.num_outcomes())
    throw PreconditionError("distribution dimension mismatch");
  double s = 0;
  for (double p : sigma) {
    if (p < -1e-12) throw PreconditionError("negative probability");
    s += p;
  }
  if (std::abs(s - 1.0) > tol) throw PreconditionError("distribution does not sum to 1");
}

namespace {

// Iterate over all outcomes, tracking the profile in-place.
template <typename F>
void for_each_outcome(const NormalFormGame& g, F&& f) {
  int n = g.num_players();
  std::vector<int> a(n, 0);
  std::size_t total = g.num_outcomes();
  for (std::size_t idx = 0; idx < total; ++idx) {
    f(idx, a);
    for (int i = n - 1; i >= 0; --i) {
      if (++a[i] < g.num_actions(i)) break;
      a[i] = 0;
    }
  }
}

}  // namespace

double expected_utility(const NormalFormGame& g, int player, const MixedProfile& x) {
  validate_profile(g, x);
  double total = 0;
  for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
    double p = 1;
    for (int j = 0; j < g.num_players(); ++j) p *= x[j][a[j]];
    total += p * g.utilities[player][idx];
  });
  return total;
}

double expected_utility(const NormalFormGame& g, int player,
                        const OutcomeDistribution& sigma) {
  validate_distribution(g, sigma);
  double total = 0;
  for (std::size_t idx = 0; idx < sigma.size(); ++idx)
    total += sigma[idx] * g.utilities[player][idx];
  return total;
}

std::vector<double> utility_gradient(const NormalFormGame& g, int player,
                                     const MixedProfile& x) {
  validate_profile(g, x);
  std::vector<double> grad(g.num_actions(player), 0.0);
  for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
    double p = 1;
    for (int j = 0; j < g.num_players(); ++j)
      if (j != player) p *= x[j][a[j]];
    grad[a[player]] += p * g.utilities[player][idx];
  });
  return grad;
}

OutcomeDistribution product_distribution(const NormalFormGame& g, const MixedProfile& x) {
  validate_profile(g, x);
  OutcomeDistribution sigma(g.num_outcomes(), 0.0);
  for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
    double p = 1;
    for (int j = 0; j < g.num_players(); ++j) p *= x[j][a[j]];
    sigma[idx] = p;
  });
  return sigma;
}

OutcomeDistribution time_avg_outcome_distribution(const NormalFormGame& g,
                                                  const std::vector<MixedProfile>& traj) {
  if (traj.empty()) throw PreconditionError("empty trajectory");
  OutcomeDistribution sigma(g.num_outcomes(), 0.0);
  for (const auto& x : traj) {
    OutcomeDistribution p = product_distribution(g, x);
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] += p[i];
  }
  for (double& s : sigma) s /= traj.size();
  return sigma;
}

std::vector<std::vector<int>> enumerate_pure_nash(const NormalFormGame& g, double tol) {
  if (tol <= 0) tol = 1e-12;
  std::vector<std::vector<int>> nash;
  for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
    std::vector<int> dev = a;
    for (int i = 0; i < g.num_players(); ++i) {
      double base = g.utilities[i][idx];
      for (int b = 0; b < g.num_actions(i); ++b) {
        if (b == a[i]) continue;
        dev[i] = b;
        if (g.utility(i, dev) > base + tol) {
          dev[i] = a[i];
          return;
        }
      }
      dev[i] = a[i];
    }
    nash.push_back(a);
  });
  return nash;
}

std::vector<double> not_nash_indicator(const NormalFormGame& g, double tol) {
  std::vector<double> d(g.num_outcomes(), 1.0);
  for (const auto& a : enumerate_pure_nash(g, tol)) d[g.outcome_index(a)] = 0.0;
  return d;
}

namespace {

DeviationReport deviation_report_from(const NormalFormGame& g,
                                      std::vector<DeviationReport::Item> items,
                                      double eps) {
  DeviationReport rep;
  rep.violations.clear();
  for (const auto& it : items) {
    rep.max_gain = std::max(rep.max_gain, it.gain);
    if (it.gain > eps) rep.violations.push_back(it);
  }
  (void)g;
  rep.pass = rep.violations.empty();
  return rep;
}

}  // namespace

DeviationReport check_epsilon_cce(const NormalFormGame& g, const OutcomeDistribution& sigma,
                                  double eps) {
  validate_distribution(g, sigma);
  std::vector<DeviationReport::Item> items;
  for (int i = 0; i < g.num_players(); ++i) {
    double base = expected_utility(g, i, sigma);
    for (int b = 0; b < g.num_actions(i); ++b) {
      double dev_val = 0;
      for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
        std::vector<int> d = a;
        d[i] = b;
        dev_val += sigma[idx] * g.utility(i, d);
      });
      items.push_back({i, -1, b, dev_val - base});
    }
  }
  return deviation_report_from(g, std::move(items), eps);
}

DeviationReport check_epsilon_ce(const NormalFormGame& g, const OutcomeDistribution& sigma,
                                 double eps) {
  validate_distribution(g, sigma);
  std::vector<DeviationReport::Item> items;
  for (int i = 0; i < g.num_players(); ++i) {
    int m = g.num_actions(i);
    // gain[from][to] = sum over outcomes with a_i = from of sigma * (u(to)-u(from))
    std::vector<std::vector<double>> gain(m, std::vector<double>(m, 0.0));
    for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
      if (sigma[idx] == 0) return;
      std::vector<int> d = a;
      double base = g.utilities[i][idx];
      for (int b = 0; b < m; ++b) {
        if (b == a[i]) continue;
        d[i] = b;
        gain[a[i]][b] += sigma[idx] * (g.utility(i, d) - base);
      }
      d[i] = a[i];
    });
    for (int from = 0; from < m; ++from)
      for (int to = 0; to < m; ++to)
        if (to != from) items.push_back({i, from, to, gain[from][to]});
  }
  return deviation_report_from(g, std::move(items), eps);
}

// --- generators -----------------------------------------------------------

std::vector<double> uniform_grid(int n) {
  if (n < 1) throw PreconditionError("grid size must be >= 1");
  std::vector<double> v(n + 1);
  for (int k = 0; k <= n; ++k) v[k] = static_cast<double>(k) / n;
  return v;
}

std::vector<double> squared_grid(int n) {
  std::vector<double> v = uniform_grid(n);
  for (double& x : v) x = x * x;
  return v;
}

static std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

NormalFormGame make_bertrand(int n, const std::vector<int>& costs,
                             const std::vector<double>& demand) {
  if (costs.empty()) throw PreconditionError("need at least one firm");
  for (int c : costs)
    if (c < 0 || c > n) throw PreconditionError("invalid cost index");
  if (static_cast<int>(demand.size()) != n + 1)
    throw PreconditionError("demand must be sampled on the n+1 grid points");
  for (double d : demand)
    if (!(d >= 0) || !std::isfinite(d)) throw PreconditionError("demand must be nonnegative");
  for (int k = 1; k <= n; ++k)
    if (demand[k] > demand[k - 1] + 1e-12)
      throw PreconditionError("demand must be nonincreasing");

  int num_firms = static_cast<int>(costs.size());
  std::vector<double> grid = uniform_grid(n);
  NormalFormGame g;
  g.action_labels.assign(num_firms, {});
  g.action_values.assign(num_firms, grid);
  for (int i = 0; i < num_firms; ++i)
    for (int k = 0; k <= n; ++k) g.action_labels[i].push_back("p=" + format_value(grid[k]));

  std::size_t total = 1;
  for (int i = 0; i < num_firms; ++i) total *= (n + 1);
  g.utilities.assign(num_firms, std::vector<double>(total, 0.0));

  std::vector<int> a(num_firms, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    int kmin = *std::min_element(a.begin(), a.end());
    int ties = static_cast<int>(std::count(a.begin(), a.end(), kmin));
    for (int i = 0; i < num_firms; ++i) {
      if (a[i] == kmin)
        g.utilities[i][idx] =
            (grid[a[i]] - static_cast<double>(costs[i]) / n) * demand[a[i]] / ties;
    }
    for (int i = num_firms - 1; i >= 0; --i) {
      if (++a[i] <= n) break;
      a[i] = 0;
    }
  }
  g.validate();
  return g;
}

NormalFormGame make_first_price(int n, const std::vector<int>& values,
                                const std::vector<double>& grid_in) {
  if (values.empty()) throw PreconditionError("need at least one buyer");
  for (int v : values)
    if (v < 0 || v > n) throw PreconditionError("invalid value index");
  std::vector<double> grid = grid_in.empty() ? uniform_grid(n) : grid_in;
  if (static_cast<int>(grid.size()) != n + 1)
    throw PreconditionError("grid must have n+1 points");
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    if (!(grid[k] < grid[k + 1])) throw PreconditionError("grid must be strictly increasing");
  if (grid.front() != 0.0 || grid.back() != 1.0)
    throw PreconditionError("grid must span [0,1]");

  int num_buyers = static_cast<int>(values.size());
  NormalFormGame g;
  g.action_labels.assign(num_buyers, {});
  g.action_values.assign(num_buyers, grid);
  for (int i = 0; i < num_buyers; ++i)
    for (int k = 0; k <= n; ++k) g.action_labels[i].push_back("b=" + format_value(grid[k]));

  std::size_t total = 1;
  for (int i = 0; i < num_buyers; ++i) total *= (n + 1);
  g.utilities.assign(num_buyers, std::vector<double>(total, 0.0));

  std::vector<int> a(num_buyers, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    int kmax = *std::max_element(a.begin(), a.end());
    int ties = static_cast<int>(std::count(a.begin(), a.end(), kmax));
    for (int i = 0; i < num_buyers; ++i) {
      if (a[i] == kmax)
        g.utilities[i][idx] = (static_cast<double>(values[i]) / n - grid[a[i]]) / ties;
    }
    for (int i = num_buyers - 1; i >= 0; --i) {
      if (++a[i] <= n) break;
      a[i] = 0;
    }
  }
  g.validate();
  return g;
}

NormalFormGame make_bad_game() {
  NormalFormGame g;
  g.action_labels = {{"T", "B"}, {"L", "M", "R"}};
  // outcomes row-major: (T,L),(T,M),(T,R),(B,L),(B,M),(B,R)
  g.utilities = {{0, 0, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 1}};
  return g;
}

NormalFormGame make_rps_embedded(const std::vector<int>& num_actions, int i, int j,
                                 const std::vector<int>& triplet_i,
                                 const std::vector<int>& triplet_j) {
  int n = static_cast<int>(num_actions.size());
  if (i < 0 || i >= n || j < 0 || j >= n || i == j)
    throw PreconditionError("invalid player pair");
  if (triplet_i.size() != 3 || triplet_j.size() != 3)
    throw PreconditionError("triplets must have 3 actions");
  auto check_triplet = [&](const std::vector<int>& t, int m) {
    if (m < 3) throw PreconditionError("player needs at least 3 actions");
    for (int a : t)
      if (a < 0 || a >= m) throw PreconditionError("triplet out of range");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw PreconditionError("triplet actions must be distinct");
  };
  check_triplet(triplet_i, num_actions[i]);
  check_triplet(triplet_j, num_actions[j]);

  const double s6 = std::sqrt(6.0), s2 = std::sqrt(2.0), s23 = std::sqrt(2.0 / 3.0);
  // first two vectors of the orthonormal basis, supported on the triplet
  auto basis = [&](int m, const std::vector<int>& t) {
    std::vector<std::vector<double>> v(2, std::vector<double>(m, 0.0));
    v[0][t[0]] = 1.0 / s6;
    v[0][t[1]] = -s23;
    v[0][t[2]] = 1.0 / s6;
    v[1][t[0]] = 1.0 / s2;
    v[1][t[2]] = -1.0 / s2;
    return v;
  };
  auto v = basis(num_actions[i], triplet_i);
  auto w = basis(num_actions[j], triplet_j);

  NormalFormGame g;
  g.action_labels.assign(n, {});
  for (int p = 0; p < n; ++p)
    for (int k = 0; k < num_actions[p]; ++k)
      g.action_labels[p].push_back("a" + std::to_string(k));
  std::size_t total = 1;
  for (int p = 0; p < n; ++p) total *= num_actions[p];
  g.utilities.assign(n, std::vector<double>(total, 0.0));

  const double s3 = std::sqrt(3.0);
  std::vector<int> a(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    double ui = -s3 * (v[0][a[i]] * w[1][a[j]] - v[1][a[i]] * w[0][a[j]]);
    // snap exact rationals: entries are 0 or +-1 up to roundoff
    if (std::abs(ui) < 1e-12) ui = 0.0;
    if (std::abs(ui - 1.0) < 1e-12) ui = 1.0;
    if (std::abs(ui + 1.0) < 1e-12) ui = -1.0;
    g.utilities[i][idx] = ui;
    g.utilities[j][idx] = -ui;
    for (int p = n - 1; p >= 0; --p) {
      if (++a[p] < num_actions[p]) break;
      a[p] = 0;
    }
  }
  g.validate();
  return g;
}

// --- serialization --------------------------------------------------------

std::string game_to_json(const NormalFormGame& g) {
  nlohmann::json j;
  j["players"] = g.num_players();
  j["actions"] = nlohmann::json::array();
  for (int i = 0; i < g.num_players(); ++i) {
    nlohmann::json acts = nlohmann::json::array();
    for (int k = 0; k < g.num_actions(i); ++k) {
      nlohmann::json a;
      a["label"] = g.action_labels[i][k];
      if (!g.action_values.empty() && !g.action_values[i].empty())
        a["value"] = g.action_values[i][k];
      acts.push_back(a);
    }
    j["actions"].push_back(acts);
  }
  j["utilities"] = g.utilities;
  return j.dump(2);
}

NormalFormGame game_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  NormalFormGame g;
  int players = j.at("players").get<int>();
  g.action_labels.resize(players);
  g.action_values.resize(players);
  for (int i = 0; i < players; ++i) {
    for (const auto& a : j.at("actions").at(i)) {
      g.action_labels[i].push_back(a.at("label").get<std::string>());
      if (a.contains("value")) g.action_values[i].push_back(a.at("value").get<double>());
    }
  }
  bool any_values = false;
  for (const auto& v : g.action_values) any_values = any_values || !v.empty();
  if (!any_values) g.action_values.clear();
  g.utilities = j.at("utilities").get<std::vector<std::vector<double>>>();
  g.validate();
  return g;
}

}  // namespace sce
