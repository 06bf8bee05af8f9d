// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#include "sce/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace sce {

double StepSchedule::eta(long t) const {
  if (t < 1) throw PreconditionError("round index must be >= 1");
  if (alpha == 0.0) return C;
  return C * std::pow(static_cast<double>(t), -alpha);
}

double StepSchedule::sum_eta(long T) const {
  double s = 0;
  for (long t = 1; t <= T; ++t) s += eta(t);
  return s;
}

StepSchedule StepSchedule::power(double C, double alpha) {
  if (C <= 0 || alpha < 0 || alpha >= 1)
    throw PreconditionError("require C > 0 and alpha in [0,1)");
  return {C, alpha};
}

std::vector<double> project_simplex(const std::vector<double>& v) {
  std::vector<double> s(v.size(), 1.0);
  return project_weighted_simplex(v, s);
}

std::vector<double> project_weighted_simplex(const std::vector<double>& v,
                                             const std::vector<double>& s) {
  int n = static_cast<int>(v.size());
  if (static_cast<int>(s.size()) != n || n == 0)
    throw PreconditionError("projection dimension mismatch");
  for (double x : v)
    if (!std::isfinite(x)) throw PreconditionError("non-finite projection input");
  // minimize ||y - v||^2 s.t. <s, y> = 1, y >= 0:
  // y_a = max(v_a - tau * s_a, 0) with tau from the active support
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return v[a] / s[a] > v[b] / s[b]; });
  double num = -1.0, den = 0.0;  // tau = (sum s_a v_a - 1) / sum s_a^2 over support
  int support = 0;
  double tau = 0.0;
  for (int k = 0; k < n; ++k) {
    int a = order[k];
    num += s[a] * v[a];
    den += s[a] * s[a];
    double t = num / den;
    if (v[a] / s[a] - t > 0 || k == 0) {
      tau = t;
      support = k + 1;
    } else {
      break;
    }
  }
  std::vector<double> y(n, 0.0);
  if (support == 1) {
    // exact vertex: avoids roundoff in v - (v - 1/s)
    y[order[0]] = 1.0 / s[order[0]];
    return y;
  }
  for (int k = 0; k < support; ++k) {
    int a = order[k];
    y[a] = std::max(v[a] - tau * s[a], 0.0);
  }
  return y;
}

MixedProfile uniform_profile(const NormalFormGame& g) {
  MixedProfile x(g.num_players());
  for (int i = 0; i < g.num_players(); ++i)
    x[i].assign(g.num_actions(i), 1.0 / g.num_actions(i));
  return x;
}

MixedProfile random_interior_profile(const NormalFormGame& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  MixedProfile x(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) {
    x[i].resize(g.num_actions(i));
    double s = 0;
    for (double& p : x[i]) {
      p = unif(rng);
      s += p;
    }
    for (double& p : x[i]) p /= s;
  }
  return x;
}

namespace {

Trajectory run_dynamics(const NormalFormGame& g, const MixedProfile& init,
                        const std::vector<std::vector<int>>& weights,
                        const std::vector<StepSchedule>& schedules, long T) {
  g.validate();
  validate_profile(g, init);
  if (static_cast<int>(schedules.size()) != g.num_players())
    throw PreconditionError("one schedule per player required");
  if (T < 1) throw PreconditionError("T must be >= 1");

  int n = g.num_players();
  std::vector<std::vector<double>> scale(n);  // s = sqrt(w)
  bool any_scaled = false;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(weights[i].size()) != g.num_actions(i))
      throw PreconditionError("weight dimension mismatch");
    scale[i].resize(weights[i].size());
    for (std::size_t a = 0; a < weights[i].size(); ++a) {
      if (weights[i][a] < 1) throw PreconditionError("weights must be positive");
      scale[i][a] = std::sqrt(static_cast<double>(weights[i][a]));
      any_scaled = any_scaled || weights[i][a] != 1;
    }
  }

  // state y_i in P^{-1} simplex; x_i = P y_i (P = diag(scale))
  MixedProfile x = init;
  std::vector<std::vector<double>> y(n);
  for (int i = 0; i < n; ++i) {
    y[i].resize(x[i].size());
    for (std::size_t a = 0; a < x[i].size(); ++a) y[i][a] = x[i][a] / scale[i][a];
  }

  Trajectory traj;
  traj.profiles.reserve(T);
  for (long t = 1; t <= T; ++t) {
    traj.profiles.push_back(x);
    if (t == T) break;
    std::vector<std::vector<double>> ynext(n);
    for (int i = 0; i < n; ++i) {
      std::vector<double> grad = utility_gradient(g, i, x);
      double eta = schedules[i].eta(t);
      std::vector<double> v = y[i];
      for (std::size_t a = 0; a < v.size(); ++a) v[a] += eta * scale[i][a] * grad[a];
      ynext[i] = project_weighted_simplex(v, scale[i]);
    }
    y = std::move(ynext);
    for (int i = 0; i < n; ++i)
      for (std::size_t a = 0; a < y[i].size(); ++a) x[i][a] = scale[i][a] * y[i][a];
  }
  (void)any_scaled;
  return traj;
}

}  // namespace

Trajectory pga_run(const NormalFormGame& g, const MixedProfile& init,
                   const std::vector<StepSchedule>& schedules, long T) {
  std::vector<std::vector<int>> w(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) w[i].assign(g.num_actions(i), 1);
  return run_dynamics(g, init, w, schedules, T);
}

Trajectory scaled_pga_run(const NormalFormGame& g,
                          const std::vector<std::vector<int>>& weights,
                          const std::vector<StepSchedule>& schedules, long T) {
  return run_dynamics(g, uniform_profile(g), weights, schedules, T);
}

double regret_vs_transform(const NormalFormGame& g, const Trajectory& traj, int player,
                           const TransformMatrix& t) {
  if (traj.profiles.empty()) throw PreconditionError("empty trajectory");
  validate_transform(t);
  double total = 0;
  for (const auto& x : traj.profiles) {
    MixedProfile dev = x;
    dev[player] = t.apply(x[player]);
    total += expected_utility(g, player, dev) - expected_utility(g, player, x);
  }
  return total / traj.profiles.size();
}

double regret_vs_transform_gradient_form(const NormalFormGame& g, const Trajectory& traj,
                                         int player, const TransformMatrix& t) {
  if (traj.profiles.empty()) throw PreconditionError("empty trajectory");
  validate_transform(t);
  double total = 0;
  for (const auto& x : traj.profiles) {
    std::vector<double> grad = utility_gradient(g, player, x);
    std::vector<double> px = t.apply(x[player]);
    for (std::size_t a = 0; a < px.size(); ++a)
      total += (px[a] - x[player][a]) * grad[a];
  }
  return total / traj.profiles.size();
}

double regret_bound(const RegretBoundParams& params, const StepSchedule& schedule, long T) {
  if (T < 1) throw PreconditionError("T must be >= 1");
  if (params.M <= 0 || params.L_h <= 0)
    throw PreconditionError("bound parameters must be positive");
  double sumG = 0;
  for (double gi : params.G) sumG += gi;
  double per_player = 0;
  for (double gi : params.G)
    per_player += gi * gi * params.L_h / 2.0 + gi * params.L_h * sumG;
  double step_term = 1.0 / schedule.eta(T) + 1.0 / schedule.eta(1);
  return 2.0 * params.M * step_term / T + schedule.sum_eta(T) / T * per_player;
}

double utility_gradient_bound(const NormalFormGame& g, int player) {
  double mx = 0;
  for (double u : g.utilities[player]) mx = std::max(mx, std::abs(u));
  return std::sqrt(static_cast<double>(g.num_actions(player))) * mx;
}

MeanBasedReport mean_based_counterexample(int num_actions, double C, double alpha, long T) {
  if (num_actions < 2) throw PreconditionError("need at least 2 actions");
  StepSchedule sched = StepSchedule::power(C, alpha);
  // K = smallest integer with sum_{t=T+1}^{T+K} eta_t / 2 >= 1
  long K = 0;
  double acc = 0;
  while (acc < 2.0) {
    ++K;
    acc += sched.eta(T + K);
    if (K > 100 * T) throw PreconditionError("schedule too small: K bound exceeded");
  }
  if (K > T / 4) throw PreconditionError("T too small: requires K <= T/4");

  const int astar = 0;
  std::vector<double> x(num_actions, 1.0 / num_actions);
  std::vector<double> mean_reward(num_actions, 0.0);  // running sums
  MeanBasedReport rep;
  rep.T = T;
  rep.K = K;
  rep.min_growth_ratio = std::numeric_limits<double>::infinity();
  for (long t = 1; t <= T + K; ++t) {
    std::vector<double> reward(num_actions, 0.0);
    if (t <= T) {
      for (int a = 0; a < num_actions; ++a) reward[a] = a == astar ? 0.0 : 1.0;
    } else {
      reward[astar] = 1.0;
    }
    for (int a = 0; a < num_actions; ++a) mean_reward[a] += reward[a];
    std::vector<double> v = x;
    double eta = sched.eta(t);
    for (int a = 0; a < num_actions; ++a) v[a] += eta * reward[a];
    std::vector<double> xn = project_simplex(v);
    if (t > T && x[astar] < 1.0) {
      double growth = xn[astar] - x[astar];
      double floor = eta / 2.0;
      double ratio = xn[astar] >= 1.0 ? 1.0 : growth / floor;
      rep.min_growth_ratio = std::min(rep.min_growth_ratio, ratio);
    }
    x = std::move(xn);
  }
  rep.final_mass_astar = x[astar];
  double gap = (mean_reward[1] - mean_reward[astar]) / static_cast<double>(T + K);
  rep.mean_gap = gap;
  rep.mean_based_violated = gap > 0.5 && x[astar] == 1.0;
  return rep;
}

CycleRegret rps_cycle_regret(double eps, const TransformMatrix& P, int quadrature_points) {
  validate_transform(P);
  if (eps <= 0 || eps > 0.2)
    throw PreconditionError("eps must lie in (0, 0.2] to stay in the simplex");
  int m = P.size();
  if (m < 3) throw PreconditionError("transform must act on >= 3 actions");
  if (quadrature_points < 256) quadrature_points = 256;
  if (quadrature_points % 2) ++quadrature_points;

  const double s3 = std::sqrt(3.0);
  std::vector<double> v1(m, 0.0), v2(m, 0.0), v3(m, 0.0);
  v1[0] = 1.0 / std::sqrt(6.0);
  v1[1] = -std::sqrt(2.0 / 3.0);
  v1[2] = 1.0 / std::sqrt(6.0);
  v2[0] = 1.0 / std::sqrt(2.0);
  v2[2] = -1.0 / std::sqrt(2.0);
  v3[0] = v3[1] = v3[2] = 1.0 / s3;

  // closed form: (eps^2 sqrt(3)/2) tr[(v1 v2^T - v2 v1^T)(P - 1)]
  double tr = 0;
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      double A_rc = v1[r] * v2[c] - v2[r] * v1[c];
      double Pm1_cr = P.P(c, r) - (c == r ? 1.0 : 0.0);
      tr += A_rc * Pm1_cr;
    }
  CycleRegret out;
  out.closed_form = eps * eps * s3 / 2.0 * tr;

  // quadrature of f(t) = <(P-1) x_i(t), grad_i u_i(x(t))> over one period,
  // x_i(t) = v3/sqrt(3) + eps (cos(sqrt(3) t) v1 + sin(sqrt(3) t) v2),
  // grad_i u_i = -sqrt(3) (v1 v2^T - v2 v1^T) x_j(t), both players cycling
  double period = 2.0 * M_PI / s3;
  auto integrand = [&](double t) {
    double ct = std::cos(s3 * t), st = std::sin(s3 * t);
    std::vector<double> xi(m), grad(m, 0.0);
    for (int a = 0; a < m; ++a) xi[a] = v3[a] / s3 + eps * (ct * v1[a] + st * v2[a]);
    // w-basis equals v-basis; w2 . x_j = eps sin, w1 . x_j = eps cos
    for (int a = 0; a < m; ++a)
      grad[a] = -s3 * (v1[a] * (eps * st) - v2[a] * (eps * ct));
    double f = 0;
    for (int r = 0; r < m; ++r) {
      double px = 0;
      for (int c = 0; c < m; ++c) px += (P.P(r, c) - (r == c ? 1.0 : 0.0)) * xi[c];
      f += px * grad[r];
    }
    return f;
  };
  // composite Simpson, averaged over the period
  int n = quadrature_points;
  double h = period / n;
  double acc = integrand(0.0) + integrand(period);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * integrand(k * h);
  out.numeric = (h / 3.0) * acc / period;
  return out;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "t,player,action,probability\n";
  char buf[64];
  for (std::size_t t = 0; t < traj.profiles.size(); ++t) {
    const auto& x = traj.profiles[t];
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t a = 0; a < x[i].size(); ++a) {
        std::snprintf(buf, sizeof(buf), "%.17g", x[i][a]);
        os << (t + 1) << "," << i << "," << a << "," << buf << "\n";
      }
  }
  return os.str();
}

}  // namespace sce
