// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#include "sce/bertrand.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace sce {

namespace {

constexpr double kTol = 1e-12;

// expected gain for `player` of applying transform column P(., a_i) at
// pure outcome a, minus the status-quo payoff
double deviation_gain(const NormalFormGame& g, const std::vector<int>& a, int player,
                      const TransformMatrix& t) {
  std::vector<int> b = a;
  const int mi = static_cast<int>(g.action_labels[player].size());
  double dev = 0.0;
  for (int ap = 0; ap < mi; ++ap) {
    const double w = t.P(ap, a[player]);
    if (w == 0.0) continue;
    b[player] = ap;
    dev += w * g.utility(player, b);
  }
  return dev - g.utility(player, a);
}

void for_each_outcome(const NormalFormGame& g,
                      const std::function<void(const std::vector<int>&)>& fn) {
  const int players = static_cast<int>(g.action_labels.size());
  std::vector<int> a(players, 0);
  while (true) {
    fn(a);
    int i = players - 1;
    while (i >= 0) {
      if (++a[i] < static_cast<int>(g.action_labels[i].size())) break;
      a[i--] = 0;
    }
    if (i < 0) break;
  }
}

// eq-pointwise left-hand side at a pure price vector
double pointwise_lhs(const BertrandGame& bg, const DualCertificate& cert,
                     const std::vector<TransformMatrix>& phi_k,
                     const std::vector<TransformMatrix>& phi_firm,
                     const std::vector<int>& a) {
  double lhs = 0.0;
  for (int i = 0; i < bg.N(); ++i) {
    if (bg.costs[i] == bg.min_cost) {
      for (std::size_t k = 0; k < phi_k.size(); ++k) {
        if (cert.epsilon[k] == 0.0) continue;
        lhs += cert.epsilon[k] * deviation_gain(bg.game, a, i, phi_k[k]);
      }
    } else if (cert.delta[i] != 0.0) {
      lhs += cert.delta[i] * deviation_gain(bg.game, a, i, phi_firm[i]);
    }
  }
  return lhs;
}

std::vector<TransformMatrix> build_phi_k(const DualCertificate& cert) {
  std::vector<TransformMatrix> out;
  for (std::size_t k = 1; k <= cert.epsilon.size(); ++k)
    out.push_back(certificate_subset_transform(cert, static_cast<int>(k)));
  return out;
}

std::vector<TransformMatrix> build_phi_firm(const DualCertificate& cert) {
  std::vector<TransformMatrix> out(cert.costs.size());
  for (std::size_t i = 0; i < cert.costs.size(); ++i)
    if (cert.costs[i] != cert.c) out[i] = certificate_firm_transform(cert, static_cast<int>(i));
  return out;
}

}  // namespace

int BertrandGame::N() const { return static_cast<int>(costs.size()); }

std::vector<double> inelastic_demand(int n) {
  return std::vector<double>(static_cast<std::size_t>(n) + 1, 1.0);
}

std::vector<double> linear_demand(int n) {
  std::vector<double> d(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) d[k] = 1.0 - static_cast<double>(k) / n;
  return d;
}

BertrandGame make_bertrand_game(int n, const std::vector<int>& costs,
                                const std::vector<double>& demand) {
  BertrandGame bg;
  bg.game = make_bertrand(n, costs, demand);
  bg.n = n;
  bg.costs = costs;
  bg.demand = demand;
  bg.min_cost = *std::min_element(costs.begin(), costs.end());
  bg.m = static_cast<int>(std::count(costs.begin(), costs.end(), bg.min_cost));
  return bg;
}

int monopoly_index(const std::vector<double>& demand, int c, int n) {
  if (static_cast<int>(demand.size()) != n + 1)
    throw PreconditionError("demand must have n+1 entries");
  int best = 0;
  double best_profit = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) {
    const double profit = (static_cast<double>(k - c) / n) * demand[k];
    if (profit > best_profit + kTol) {
      best_profit = profit;
      best = k;
    }
  }
  return best;
}

double DualCertificate::epsilon_sum() const {
  return std::accumulate(epsilon.begin(), epsilon.end(), 0.0);
}

TransformMatrix certificate_subset_transform(const DualCertificate& cert, int k) {
  // phi_k: map every price outside B^k = c/n + {1/n..k/n} to uniform on B^k
  std::vector<int> S;
  for (int a = 0; a <= cert.n; ++a)
    if (a <= cert.c || a > cert.c + k) S.push_back(a);
  return subset_transform(cert.n + 1, S);
}

TransformMatrix certificate_firm_transform(const DualCertificate& cert, int firm) {
  // phi^i: map strictly-underbidding prices to uniform on prices >= c_i/n
  std::vector<int> S;
  for (int a = 0; a < cert.costs[firm]; ++a) S.push_back(a);
  return subset_transform(cert.n + 1, S);
}

DualCertificate build_dual_certificate(int n, const std::vector<int>& costs,
                                       const std::vector<double>& demand) {
  if (n < 2) throw PreconditionError("grid size n must be at least 2");
  if (costs.size() < 2) throw PreconditionError("need at least two firms");
  if (static_cast<int>(demand.size()) != n + 1)
    throw PreconditionError("demand must have n+1 entries");

  DualCertificate cert;
  cert.n = n;
  cert.N = static_cast<int>(costs.size());
  cert.costs = costs;
  cert.demand = demand;
  cert.c = *std::min_element(costs.begin(), costs.end());
  cert.m = static_cast<int>(std::count(costs.begin(), costs.end(), cert.c));

  const int c = cert.c, m = cert.m, N = cert.N;
  if (m < 2)
    throw PreconditionError("certificate unavailable: need two or more minimum-cost firms");
  if (c + 2 > n)
    throw PreconditionError("certificate unavailable: minimum cost too close to grid top");

  // concavity of the monopoly profit (p - c/n) D(p) on the grid: strict for
  // m = 2, weak suffices for m >= 3
  for (int k = 1; k < n; ++k) {
    const auto profit = [&](int j) { return (static_cast<double>(j - c) / n) * demand[j]; };
    const double dd = profit(k + 1) - 2.0 * profit(k) + profit(k - 1);
    if (m == 2 && dd >= -kTol)
      throw PreconditionError(
          "certificate unavailable: monopoly profit not strictly concave (m = 2)");
    if (dd > kTol)
      throw PreconditionError("certificate unavailable: monopoly profit not concave");
  }

  cert.ell_star = monopoly_index(demand, c, n);

  const auto D = [&](int k) { return demand[k]; };
  if (D(c + 1) <= 0.0)
    throw PreconditionError("certificate unavailable: demand vanishes at (c+1)/n");

  cert.epsilon.assign(static_cast<std::size_t>(n - c), 0.0);
  const double tie2 = m * (1.0 / n) * D(c + 1) - (2.0 / n) * D(c + 2);
  if (tie2 <= kTol)
    throw PreconditionError("certificate unavailable: degenerate two-way tie coefficient");
  cert.epsilon[0] = std::max(1.0 / tie2, static_cast<double>(n) * N / D(c + 1));

  double eps_prefix = cert.epsilon[0];
  for (int ell = 2; ell <= n - c; ++ell) {
    if (c + ell >= cert.ell_star) break;  // remaining multipliers stay zero
    const double num =
        (static_cast<double>(ell + 1) / n) * D(c + ell + 1) - (static_cast<double>(ell) / n) * D(c + ell);
    double avg = 0.0;
    for (int k = 1; k <= ell; ++k) avg += (static_cast<double>(k) / n) * D(c + k);
    const double den =
        (static_cast<double>(m) / ell) * avg - (static_cast<double>(ell + 1) / n) * D(c + ell + 1);
    if (den <= kTol)
      throw PreconditionError("certificate unavailable: nonpositive tie-case coefficient");
    const double eps = eps_prefix * num / den;
    if (eps < -kTol)
      throw PreconditionError("certificate unavailable: negative multiplier");
    cert.epsilon[ell - 1] = std::max(eps, 0.0);
    eps_prefix += cert.epsilon[ell - 1];
  }

  cert.delta.assign(costs.size(), 0.0);
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (costs[i] == c) continue;
    if (D(costs[i] - 1) <= 0.0)
      throw PreconditionError("certificate unavailable: demand vanishes below a firm's cost");
    cert.delta[i] = static_cast<double>(n) * N / D(costs[i] - 1);
  }

  // normalize so the left-hand side clears 1 on every non-Nash outcome
  BertrandGame bg = make_bertrand_game(n, costs, demand);
  const Objective d = d_not_nash(bg.game);
  const auto phi_k = build_phi_k(cert);
  const auto phi_firm = build_phi_firm(cert);
  double min_lhs = std::numeric_limits<double>::infinity();
  std::size_t idx = 0;
  for_each_outcome(bg.game, [&](const std::vector<int>& a) {
    if (d[idx++] > 0.5) min_lhs = std::min(min_lhs, pointwise_lhs(bg, cert, phi_k, phi_firm, a));
  });
  if (min_lhs > 0.0 && min_lhs < 1.0) {
    cert.scale = 1.0 / min_lhs;
    for (auto& e : cert.epsilon) e *= cert.scale;
    for (auto& dl : cert.delta) dl *= cert.scale;
  }
  return cert;
}

PointwiseReport verify_pointwise(const BertrandGame& bg, const DualCertificate& cert,
                                 const Objective& d) {
  if (cert.n != bg.n || cert.costs != bg.costs)
    throw PreconditionError("certificate does not match the game");
  Objective dd = d.empty() ? d_not_nash(bg.game) : d;
  if (dd.size() != bg.game.num_outcomes()) throw PreconditionError("objective size mismatch");

  const auto phi_k = build_phi_k(cert);
  const auto phi_firm = build_phi_firm(cert);
  PointwiseReport rep;
  rep.min_slack = std::numeric_limits<double>::infinity();
  std::size_t idx = 0;
  for_each_outcome(bg.game, [&](const std::vector<int>& a) {
    const double slack = pointwise_lhs(bg, cert, phi_k, phi_firm, a) - dd[idx++];
    ++rep.outcomes_checked;
    if (slack < rep.min_slack) {
      rep.min_slack = slack;
      rep.argmin = a;
    }
  });
  rep.pass = rep.min_slack >= -1e-9;
  return rep;
}

std::vector<NashClassification> classify_bertrand_pure_nash(const BertrandGame& bg) {
  std::vector<NashClassification> out;
  for (const auto& a : enumerate_pure_nash(bg.game, kTol)) {
    NashClassification nc;
    nc.outcome = a;
    int at_c = 0;
    bool all_at_c1 = true;
    bool both_at_c2 = bg.m == 2;
    for (int i = 0; i < bg.N(); ++i) {
      if (bg.costs[i] != bg.min_cost) continue;
      if (a[i] == bg.min_cost) ++at_c;
      if (a[i] != bg.min_cost + 1) all_at_c1 = false;
      if (a[i] != bg.min_cost + 2) both_at_c2 = false;
    }
    if (at_c >= 2)
      nc.type = NashType::TwoAtMinCost;
    else if (all_at_c1)
      nc.type = NashType::AllAtMinCostPlus1;
    else if (both_at_c2 &&
             std::abs(bg.demand[bg.min_cost + 1] - bg.demand[bg.min_cost + 2]) <= kTol)
      nc.type = NashType::WeakPairAtPlus2;
    out.push_back(nc);
  }
  return out;
}

ConvergenceBound time_avg_bound(const DualCertificate& cert,
                                const std::vector<StepSchedule>& schedules, long T,
                                double U) {
  if (schedules.size() != cert.costs.size())
    throw PreconditionError("one step schedule per firm required");
  if (T < 1) throw PreconditionError("horizon must be positive");
  const double factor =
      4.0 + 1.5 * static_cast<double>(cert.n + 1) * (cert.n + 1) * U * U;
  const double eps_sum = cert.epsilon_sum();
  double total = 0.0;
  for (std::size_t i = 0; i < schedules.size(); ++i) {
    const double steps =
        1.0 / schedules[i].eta(T) + 1.0 / schedules[i].eta(1) + schedules[i].sum_eta(T);
    const double mult = cert.costs[i] == cert.c ? eps_sum : cert.delta[i];
    total += steps * mult * factor;
  }
  ConvergenceBound b;
  b.T = static_cast<double>(T);
  b.n = cert.n;
  b.N = cert.N;
  b.m = cert.m;
  b.U = U;
  b.bound = total / static_cast<double>(T);
  return b;
}

ConvergenceBound finite_iterate_bound(int n, int N, int m, const std::vector<double>& demand,
                                      double eps_target, const StepSchedule& schedule) {
  if (static_cast<int>(demand.size()) != n + 1)
    throw PreconditionError("demand must have n+1 entries");
  const double D1 = demand[1];
  if (D1 <= 0.0) throw PreconditionError("demand must be positive at 1/n");
  if (eps_target <= 0.0 || eps_target >= D1 / (2.0 * (N + D1)))
    throw PreconditionError("eps_target must lie in (0, D(1/n)/(2(N + D(1/n))))");

  ConvergenceBound b;
  b.n = n;
  b.N = N;
  b.m = m;
  b.bound = eps_target;
  b.T = std::ceil(9.0 * m * m * static_cast<double>(N) * N * std::pow(static_cast<double>(n), 10) /
                  (eps_target * eps_target));

  const long double theta = 4.0L * N * eps_target / D1;
  const long double C = schedule.C, alpha = schedule.alpha;
  if (alpha == 0.0) {
    b.K = static_cast<double>(std::ceil(theta / C));
  } else if (alpha < 1.0) {
    // integral lower bound on the step-size tail sum
    const long double base = std::pow(static_cast<long double>(b.T) + 1.0L, 1.0L - alpha);
    const long double target = theta * (1.0L - alpha) / C + base;
    b.K = static_cast<double>(
        std::ceil(std::pow(target, 1.0L / (1.0L - alpha)) - (static_cast<long double>(b.T) + 1.0L)));
  } else {
    throw PreconditionError("step-size exponent must be below 1");
  }
  b.K = std::max(b.K, 1.0);
  b.K_illustrative = static_cast<double>(std::ceil(theta * theta));
  return b;
}

Fig1Result fig1_experiment(int n) {
  Fig1Result r;
  r.n = n;
  NormalFormGame g = make_bertrand(n, {0, 0}, linear_demand(n));
  const Objective d = d_sum_sq_value(g);
  auto cce = solve_bundle(build_cce_lp(g, d));
  auto semi = solve_bundle(build_semicoarse_extension_lp(g, d));
  r.cce_value = cce.value;
  r.semicoarse_value = semi.value;
  r.cce_sigma = std::move(cce.sigma);
  r.semicoarse_sigma = std::move(semi.sigma);
  return r;
}

Fig2Result fig2_experiment(int n) {
  Fig2Result r;
  r.n = n;
  NormalFormGame g1 = make_first_price(n, {n, n});
  NormalFormGame g2 = make_first_price(n, {n, n}, squared_grid(n));
  auto s1 = solve_bundle(build_semicoarse_extension_lp(g1, d_sq_dist_to(g1, {1.0, 1.0})));
  auto s2 = solve_bundle(build_semicoarse_extension_lp(g2, d_sq_dist_to(g2, {1.0, 1.0})));
  r.value_uniform = s1.value;
  r.value_squared = s2.value;
  r.sigma_uniform = std::move(s1.sigma);
  r.sigma_squared = std::move(s2.sigma);
  return r;
}

std::string sigma_heatmap_csv(const NormalFormGame& g, const OutcomeDistribution& sigma) {
  if (g.action_labels.size() != 2) throw PreconditionError("heatmap requires two players");
  validate_distribution(g, sigma);
  std::ostringstream os;
  os.precision(17);
  os << "v1,v2,sigma\n";
  const int m1 = static_cast<int>(g.action_labels[1].size());
  for (int a0 = 0; a0 < static_cast<int>(g.action_labels[0].size()); ++a0)
    for (int a1 = 0; a1 < m1; ++a1)
      os << g.action_values[0][a0] << ',' << g.action_values[1][a1] << ','
         << sigma[static_cast<std::size_t>(a0) * m1 + a1] << '\n';
  return os.str();
}

std::string certificate_to_json(const DualCertificate& cert) {
  nlohmann::json j;
  j["n"] = cert.n;
  j["firms"] = cert.N;
  j["min_cost_firms"] = cert.m;
  j["min_cost"] = cert.c;
  j["monopoly_index"] = cert.ell_star;
  j["costs"] = cert.costs;
  j["demand"] = cert.demand;
  j["epsilon"] = cert.epsilon;
  j["delta"] = cert.delta;
  j["scale"] = cert.scale;
  return j.dump(2);
}

}  // namespace sce
