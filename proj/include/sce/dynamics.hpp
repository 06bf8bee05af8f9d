// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "sce/game.hpp"
#include "sce/transforms.hpp"

namespace sce {

// eta_t = C * t^{-alpha}, t >= 1
struct StepSchedule {
  double C = 1.0;
  double alpha = 0.5;

  double eta(long t) const;
  double sum_eta(long T) const;  // sum_{t=1}^{T} eta_t

  static StepSchedule constant(double C) { return {C, 0.0}; }
  static StepSchedule inverse_sqrt(double C) { return {C, 0.5}; }
  static StepSchedule power(double C, double alpha);
};

struct Trajectory {
  std::vector<MixedProfile> profiles;  // x^1 .. x^T (x^1 = init)
};

// Euclidean projection onto the probability simplex (sorted-threshold).
std::vector<double> project_simplex(const std::vector<double>& v);
// Projection onto {y >= 0 : sum_a s_a y_a = 1} for positive scales s.
std::vector<double> project_weighted_simplex(const std::vector<double>& v,
                                             const std::vector<double>& s);

MixedProfile uniform_profile(const NormalFormGame& g);
// deterministic interior profile from a seed (for sweeps)
MixedProfile random_interior_profile(const NormalFormGame& g, unsigned seed);

// Simultaneous projected gradient ascent, full gradient feedback.
Trajectory pga_run(const NormalFormGame& g, const MixedProfile& init,
                   const std::vector<StepSchedule>& schedules, long T);

// Scaled PGA for diagonal scalings P_i = diag(sqrt(w_i)); the returned
// trajectory lives in x-space (x = P y).
Trajectory scaled_pga_run(const NormalFormGame& g,
                          const std::vector<std::vector<int>>& weights,
                          const std::vector<StepSchedule>& schedules, long T);

// (1/T) sum_t [u_i(P x_i^t, x_{-i}^t) - u_i(x^t)]
double regret_vs_transform(const NormalFormGame& g, const Trajectory& traj, int player,
                           const TransformMatrix& t);
// same quantity via the gradient inner product <(P-1)x_i, grad_i u_i>
double regret_vs_transform_gradient_form(const NormalFormGame& g, const Trajectory& traj,
                                         int player, const TransformMatrix& t);

struct RegretBoundParams {
  double M = 1.0;    // bound on |h|
  double G_h = 1.0;  // bound on ||grad h||
  double L_h = 1.0;  // Lipschitz modulus of grad h
  std::vector<double> G;  // per-player utility-gradient bounds
};

// Regret bound for PGA against linear modifications, delta -> 0 limit:
// (2M/T)(1/eta_T + 1/eta_1) + (sum eta_t / T) * sum_i (G_i^2 L_h / 2 + G_i L_h sum_j G_j)
double regret_bound(const RegretBoundParams& params, const StepSchedule& schedule, long T);

// G_i estimate from the payoff tensor: sqrt(|A_i|) * max |u_i|
double utility_gradient_bound(const NormalFormGame& g, int player);

struct MeanBasedReport {
  long T = 0;
  long K = 0;
  double final_mass_astar = 0.0;
  double mean_gap = 0.0;  // running mean of rewards: others minus a*
  bool mean_based_violated = false;
  double min_growth_ratio = 0.0;  // min over phase 2 of (mass growth)/(eta_t/2)
};

// Two-phase adversarial reward scenario in the experts setting.
MeanBasedReport mean_based_counterexample(int num_actions, double C, double alpha, long T);

struct CycleRegret {
  double numeric = 0.0;      // quadrature of the regret integrand over one period
  double closed_form = 0.0;  // (eps^2 sqrt(3)/2) tr[(v1 v2^T - v2 v1^T)(P - 1)]
};

// Cyclic-trajectory regret for the embedded RPS game; P acts on >= 3 actions
// with the RPS triplet at indices (0,1,2).
CycleRegret rps_cycle_regret(double eps, const TransformMatrix& P, int quadrature_points = 256);

std::string trajectory_to_csv(const Trajectory& traj);

}  // namespace sce
