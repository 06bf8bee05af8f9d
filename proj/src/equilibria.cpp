// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#include "sce/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "json.hpp"

namespace sce {

namespace {

constexpr std::size_t kRowGuard = 100000;

void check_objective(const NormalFormGame& g, const Objective& d) {
  if (d.size() != g.num_outcomes())
    throw PreconditionError("objective dimension mismatch");
}

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

EquilibriumLpBundle sigma_bundle(const NormalFormGame& g, const Objective& d) {
  g.validate();
  check_objective(g, d);
  EquilibriumLpBundle b;
  b.num_outcomes = static_cast<int>(g.num_outcomes());
  for (int i = 0; i < g.num_players(); ++i) b.action_counts.push_back(g.num_actions(i));
  b.has_sigma = true;
  for (int a = 0; a < b.num_outcomes; ++a)
    b.lp.add_var("s" + std::to_string(a), d[a], /*free=*/false);
  LinearProgram::Row prob;
  prob.rel = Relation::Equal;
  prob.rhs = 1.0;
  prob.name = "prob";
  for (int a = 0; a < b.num_outcomes; ++a) prob.coeffs.emplace_back(a, 1.0);
  b.lp.add_row(std::move(prob));
  return b;
}

}  // namespace

EquilibriumSolution solve_bundle(const EquilibriumLpBundle& bundle, const SolveOptions& opts) {
  LpSolution raw = solve(bundle.lp, opts);
  EquilibriumSolution sol;
  sol.status = raw.status;
  sol.value = bundle.minimize ? -raw.value : raw.value;
  if (raw.status == LpStatus::Optimal && bundle.has_sigma) {
    sol.sigma.assign(raw.primal.begin(), raw.primal.begin() + bundle.num_outcomes);
    for (double& s : sol.sigma) s = std::max(s, 0.0);
  }
  sol.raw = std::move(raw);
  return sol;
}

EquilibriumLpBundle build_cce_lp(const NormalFormGame& g, const Objective& d) {
  EquilibriumLpBundle b = sigma_bundle(g, d);
  for (int i = 0; i < g.num_players(); ++i) {
    for (int dev = 0; dev < g.num_actions(i); ++dev) {
      LinearProgram::Row row;
      row.rel = Relation::LessEq;
      row.rhs = 0.0;
      row.name = "cce_p" + std::to_string(i) + "_a" + std::to_string(dev);
      for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
        std::vector<int> alt = a;
        alt[i] = dev;
        double c = g.utility(i, alt) - g.utilities[i][idx];
        if (c != 0) row.coeffs.emplace_back(static_cast<int>(idx), c);
      });
      b.lp.add_row(std::move(row));
    }
  }
  return b;
}

EquilibriumLpBundle build_ce_lp(const NormalFormGame& g, const Objective& d) {
  EquilibriumLpBundle b = sigma_bundle(g, d);
  for (int i = 0; i < g.num_players(); ++i) {
    int m = g.num_actions(i);
    for (int from = 0; from < m; ++from) {
      for (int to = 0; to < m; ++to) {
        if (to == from) continue;
        LinearProgram::Row row;
        row.rel = Relation::LessEq;
        row.rhs = 0.0;
        row.name = "ce_p" + std::to_string(i) + "_" + std::to_string(from) + "to" +
                   std::to_string(to);
        for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
          if (a[i] != from) return;
          std::vector<int> alt = a;
          alt[i] = to;
          double c = g.utility(i, alt) - g.utilities[i][idx];
          if (c != 0) row.coeffs.emplace_back(static_cast<int>(idx), c);
        });
        b.lp.add_row(std::move(row));
      }
    }
  }
  return b;
}

EquilibriumLpBundle build_semicoarse_enumerated_lp(
    const NormalFormGame& g, const Objective& d,
    const std::vector<std::vector<TransformMatrix>>& families) {
  if (static_cast<int>(families.size()) != g.num_players())
    throw PreconditionError("one transform family per player required");
  std::size_t rows = 1;
  for (const auto& fam : families) rows += fam.size();
  if (rows > kRowGuard) throw PreconditionError("enumerated LP exceeds row guard");

  EquilibriumLpBundle b = sigma_bundle(g, d);
  for (int i = 0; i < g.num_players(); ++i) {
    for (const auto& t : families[i]) {
      if (t.size() != g.num_actions(i))
        throw PreconditionError("transform size mismatch for player");
      TripletCheck chk = is_semicoarse_transform(t);
      if (!chk.ok) throw PreconditionError("non-semicoarse transform: " + t.name);
      LinearProgram::Row row;
      row.rel = Relation::LessEq;
      row.rhs = 0.0;
      row.name = "semi_p" + std::to_string(i) + "_" + t.name;
      for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
        std::vector<int> alt = a;
        double c = -g.utilities[i][idx];
        for (int ap = 0; ap < g.num_actions(i); ++ap) {
          double p = t.P(ap, a[i]);
          if (p == 0) continue;
          alt[i] = ap;
          c += p * g.utility(i, alt);
        }
        if (c != 0) row.coeffs.emplace_back(static_cast<int>(idx), c);
      });
      b.lp.add_row(std::move(row));
    }
  }
  return b;
}

EquilibriumLpBundle build_semicoarse_extension_lp(const NormalFormGame& g,
                                                  const Objective& d) {
  EquilibriumLpBundle b = sigma_bundle(g, d);
  int n = g.num_players();
  b.gamma_offset.assign(n, -1);
  b.rho_offset.assign(n, -1);

  // gamma index within player i: ordered pairs (ap, a), ap != a, row-major
  auto gidx = [&](int i, int ap, int a) {
    int m = g.num_actions(i);
    return b.gamma_offset[i] + ap * (m - 1) + (a < ap ? a : a - 1);
  };
  // rho index within player i: unordered pair x < y, lexicographic
  auto ridx = [&](int i, int x, int y) {
    int m = g.num_actions(i);
    // offset of (x, y) with x < y among pairs
    return b.rho_offset[i] + x * m - x * (x + 1) / 2 + (y - x - 1);
  };

  for (int i = 0; i < n; ++i) {
    int m = g.num_actions(i);
    b.gamma_offset[i] = b.lp.num_vars;
    for (int ap = 0; ap < m; ++ap)
      for (int a = 0; a < m; ++a)
        if (a != ap)
          b.lp.add_var("g" + std::to_string(i) + "_" + std::to_string(ap) + "_" +
                           std::to_string(a),
                       0.0, /*free=*/false);
    b.rho_offset[i] = b.lp.num_vars;
    for (int x = 0; x < m; ++x)
      for (int y = x + 1; y < m; ++y)
        b.lp.add_var("r" + std::to_string(i) + "_" + std::to_string(x) + "_" +
                         std::to_string(y),
                     0.0, /*free=*/true);
  }

  for (int i = 0; i < n; ++i) {
    int m = g.num_actions(i);
    // Q rows: ordered (ap, a), ap != a
    for (int ap = 0; ap < m; ++ap) {
      for (int a = 0; a < m; ++a) {
        if (a == ap) continue;
        LinearProgram::Row row;
        row.rel = Relation::Equal;
        row.rhs = 0.0;
        row.name = "Q" + std::to_string(i) + "_" + std::to_string(ap) + "_" +
                   std::to_string(a);
        row.coeffs.emplace_back(gidx(i, ap, a), 1.0);
        // rho_i(a, ap) - rho_i(ap, a) up to positive rescaling of the free var
        row.coeffs.emplace_back(ridx(i, std::min(a, ap), std::max(a, ap)),
                                a < ap ? 1.0 : -1.0);
        for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& prof) {
          if (prof[i] != a) return;
          std::vector<int> alt = prof;
          alt[i] = ap;
          double c = g.utility(i, alt) - g.utilities[i][idx];
          if (c != 0) row.coeffs.emplace_back(static_cast<int>(idx), c);
        });
        b.lp.add_row(std::move(row));
      }
    }
    // q rows: one per ap
    for (int ap = 0; ap < m; ++ap) {
      LinearProgram::Row row;
      row.rel = Relation::Equal;
      row.rhs = 0.0;
      row.name = "q" + std::to_string(i) + "_" + std::to_string(ap);
      for (int a = 0; a < m; ++a)
        if (a != ap) row.coeffs.emplace_back(gidx(i, ap, a), 1.0);
      for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& prof) {
        std::vector<int> alt = prof;
        alt[i] = ap;
        double c = g.utility(i, alt) - g.utilities[i][idx];
        if (c != 0) row.coeffs.emplace_back(static_cast<int>(idx), c);
      });
      b.lp.add_row(std::move(row));
    }
  }
  return b;
}

EquilibriumLpBundle build_dual_lyapunov_lp(const NormalFormGame& g, const Objective& d) {
  g.validate();
  check_objective(g, d);
  EquilibriumLpBundle b;
  b.num_outcomes = static_cast<int>(g.num_outcomes());
  int n = g.num_players();
  for (int i = 0; i < n; ++i) b.action_counts.push_back(g.num_actions(i));
  b.minimize = true;  // stored LP maximizes -gamma

  b.gamma_var = b.lp.add_var("gamma", -1.0, /*free=*/true);
  b.Q_offset.assign(n, -1);
  b.q_offset.assign(n, -1);
  // one variable per unordered pair incl. diagonal (Q symmetric)
  auto Qidx = [&](int i, int x, int y) {
    if (x > y) std::swap(x, y);
    int m = g.num_actions(i);
    return b.Q_offset[i] + x * m - x * (x - 1) / 2 + (y - x);
  };
  for (int i = 0; i < n; ++i) {
    int m = g.num_actions(i);
    b.Q_offset[i] = b.lp.num_vars;
    for (int x = 0; x < m; ++x)
      for (int y = x; y < m; ++y)
        b.lp.add_var("Q" + std::to_string(i) + "_" + std::to_string(x) + "_" +
                         std::to_string(y),
                     0.0, /*free=*/true);
    b.q_offset[i] = b.lp.num_vars;
    for (int x = 0; x < m; ++x)
      b.lp.add_var("q" + std::to_string(i) + "_" + std::to_string(x), 0.0, /*free=*/true);
  }

  for (int i = 0; i < n; ++i) {
    int m = g.num_actions(i);
    // conservation: sum_{a'} Q(a',a) + q(a') = 0 for every a
    for (int a = 0; a < m; ++a) {
      LinearProgram::Row row;
      row.rel = Relation::Equal;
      row.rhs = 0.0;
      row.name = "cons" + std::to_string(i) + "_" + std::to_string(a);
      for (int ap = 0; ap < m; ++ap) {
        row.coeffs.emplace_back(Qidx(i, ap, a), 1.0);
        row.coeffs.emplace_back(b.q_offset[i] + ap, 1.0);
      }
      b.lp.add_row(std::move(row));
    }
    // tangency: Q(a',a) + q(a') >= 0 for a' != a  ->  -Q - q <= 0
    for (int ap = 0; ap < m; ++ap) {
      for (int a = 0; a < m; ++a) {
        if (a == ap) continue;
        LinearProgram::Row row;
        row.rel = Relation::LessEq;
        row.rhs = 0.0;
        row.name = "tan" + std::to_string(i) + "_" + std::to_string(ap) + "_" +
                   std::to_string(a);
        row.coeffs.emplace_back(Qidx(i, ap, a), -1.0);
        row.coeffs.emplace_back(b.q_offset[i] + ap, -1.0);
        b.lp.add_row(std::move(row));
      }
    }
  }

  // sigma(a) rows: gamma + sum_i sum_{a'} (Q_i(a',a_i)+q_i(a')) u_i(a',a_{-i}) >= d(a)
  for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& prof) {
    LinearProgram::Row row;
    row.rel = Relation::LessEq;
    row.rhs = -d[idx];
    row.name = "sig" + std::to_string(idx);
    std::map<int, double> coef;  // accumulate, then negate for the <= form
    coef[b.gamma_var] += 1.0;
    for (int i = 0; i < n; ++i) {
      int m = g.num_actions(i);
      std::vector<int> alt = prof;
      for (int ap = 0; ap < m; ++ap) {
        alt[i] = ap;
        double u = g.utility(i, alt);
        if (u == 0) continue;
        coef[Qidx(i, ap, prof[i])] += u;
        coef[b.q_offset[i] + ap] += u;
      }
    }
    for (const auto& [j, v] : coef)
      if (v != 0) row.coeffs.emplace_back(j, -v);
    b.lp.add_row(std::move(row));
  });
  return b;
}

LyapunovCertificate extract_certificate(const EquilibriumLpBundle& bundle,
                                        const EquilibriumSolution& sol) {
  if (bundle.gamma_var < 0) throw PreconditionError("bundle is not a Lyapunov LP");
  if (sol.status != LpStatus::Optimal) throw PreconditionError("no optimal solution");
  LyapunovCertificate cert;
  cert.gamma = sol.raw.primal[bundle.gamma_var];
  int n = static_cast<int>(bundle.action_counts.size());
  for (int i = 0; i < n; ++i) {
    int m = bundle.action_counts[i];
    GeneratorPair pair;
    pair.Q = Mat(m);
    pair.q.assign(m, 0.0);
    int at = bundle.Q_offset[i];
    for (int x = 0; x < m; ++x)
      for (int y = x; y < m; ++y) {
        pair.Q(x, y) = sol.raw.primal[at];
        pair.Q(y, x) = sol.raw.primal[at];
        ++at;
      }
    for (int x = 0; x < m; ++x) pair.q[x] = sol.raw.primal[bundle.q_offset[i] + x];
    cert.pairs.push_back(std::move(pair));
  }
  return cert;
}

std::vector<std::vector<TransformMatrix>> canonical_families(const NormalFormGame& g,
                                                             int max_cycle_len) {
  std::vector<std::vector<TransformMatrix>> fams;
  for (int i = 0; i < g.num_players(); ++i) {
    int m = g.num_actions(i);
    int len = max_cycle_len <= 0 ? m : std::min(max_cycle_len, m);
    fams.push_back(enumerate_canonical(m, len));
  }
  return fams;
}

std::vector<std::vector<TransformMatrix>> weighted_families(
    const NormalFormGame& g, const std::vector<std::vector<int>>& weights,
    int max_cycle_len) {
  if (static_cast<int>(weights.size()) != g.num_players())
    throw PreconditionError("one weight vector per player required");
  std::vector<std::vector<TransformMatrix>> fams(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) {
    int m = g.num_actions(i);
    if (static_cast<int>(weights[i].size()) != m)
      throw PreconditionError("weight dimension mismatch");
    int len = max_cycle_len <= 0 ? m : std::min(max_cycle_len, m);
    // subsets
    if (m > 20) throw PreconditionError("enumeration budget exceeded");
    for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
      std::vector<int> S;
      for (int a = 0; a < m; ++a)
        if (mask & (1u << a)) S.push_back(a);
      fams[i].push_back(weighted_subset_transform(m, S, weights[i]));
    }
    // cycles, canonical undirected enumeration
    for (int k = 2; k <= len; ++k) {
      std::vector<int> idx(k);
      for (int j = 0; j < k; ++j) idx[j] = j;
      while (true) {
        std::vector<int> tail(idx.begin() + 1, idx.end());
        std::sort(tail.begin(), tail.end());
        do {
          if (k >= 3 && tail.front() > tail.back()) continue;
          std::vector<int> C;
          C.push_back(idx[0]);
          C.insert(C.end(), tail.begin(), tail.end());
          fams[i].push_back(weighted_cycle_transform(m, C, weights[i]));
        } while (std::next_permutation(tail.begin(), tail.end()));
        int j = k - 1;
        while (j >= 0 && idx[j] == m - k + j) --j;
        if (j < 0) break;
        ++idx[j];
        for (int l = j + 1; l < k; ++l) idx[l] = idx[l - 1] + 1;
      }
    }
  }
  return fams;
}

EquilibriumLpBundle build_weighted_semicoarse_lp(const NormalFormGame& g,
                                                 const std::vector<std::vector<int>>& weights,
                                                 const Objective& d, int max_cycle_len) {
  auto fams = weighted_families(g, weights, max_cycle_len);
  std::size_t rows = 1;
  for (const auto& f : fams) rows += f.size();
  if (rows > kRowGuard) throw PreconditionError("weighted LP exceeds row guard");

  // weighted transforms need not satisfy the triplet condition, so build the
  // rows directly rather than through the enumerated (semicoarse) builder
  EquilibriumLpBundle b = sigma_bundle(g, d);
  for (int i = 0; i < g.num_players(); ++i) {
    for (const auto& t : fams[i]) {
      LinearProgram::Row row;
      row.rel = Relation::LessEq;
      row.rhs = 0.0;
      row.name = "wsemi_p" + std::to_string(i) + "_" + t.name;
      for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
        std::vector<int> alt = a;
        double c = -g.utilities[i][idx];
        for (int ap = 0; ap < g.num_actions(i); ++ap) {
          double p = t.P(ap, a[i]);
          if (p == 0) continue;
          alt[i] = ap;
          c += p * g.utility(i, alt);
        }
        if (c != 0) row.coeffs.emplace_back(static_cast<int>(idx), c);
      });
      b.lp.add_row(std::move(row));
    }
  }
  return b;
}

double transform_slack(const NormalFormGame& g, const OutcomeDistribution& sigma, int player,
                       const TransformMatrix& t) {
  validate_distribution(g, sigma);
  if (t.size() != g.num_actions(player))
    throw PreconditionError("transform size mismatch");
  double slack = 0;
  for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
    if (sigma[idx] == 0) return;
    std::vector<int> alt = a;
    double c = -g.utilities[player][idx];
    for (int ap = 0; ap < g.num_actions(player); ++ap) {
      double p = t.P(ap, a[player]);
      if (p == 0) continue;
      alt[player] = ap;
      c += p * g.utility(player, alt);
    }
    slack += sigma[idx] * c;
  });
  return slack;
}

ConstraintReport verify_distribution(const NormalFormGame& g, const OutcomeDistribution& sigma,
                                     const std::vector<std::vector<TransformMatrix>>& families,
                                     double tol) {
  if (static_cast<int>(families.size()) != g.num_players())
    throw PreconditionError("one transform family per player required");
  ConstraintReport rep;
  rep.max_slack = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.num_players(); ++i) {
    for (const auto& t : families[i]) {
      double s = transform_slack(g, sigma, i, t);
      rep.items.push_back({i, t.name, s});
      rep.max_slack = std::max(rep.max_slack, s);
    }
  }
  if (rep.items.empty()) rep.max_slack = 0.0;
  rep.pass = rep.max_slack <= tol;
  return rep;
}

double verify_scaled_constraint(const NormalFormGame& g, const OutcomeDistribution& sigma,
                                int player, const Mat& Z, const GeneratorPair& pair) {
  validate_distribution(g, sigma);
  int m = g.num_actions(player);
  if (Z.m != m || pair.Q.m != m || static_cast<int>(pair.q.size()) != m)
    throw PreconditionError("scaled constraint dimension mismatch");
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      if (std::abs(Z(x, y) - Z(y, x)) > 1e-9)
        throw PreconditionError("Z must be symmetric");
      if (std::abs(pair.Q(x, y) - pair.Q(y, x)) > 1e-9)
        throw PreconditionError("Q must be symmetric");
    }
  // B(a', a) = sum_{a''} Z(a',a'')(Q(a'',a) + q(a'')); require the scaled
  // conditions: columns of B sum to 0 and B(a',a) >= 0 off the diagonal
  Mat B(m);
  for (int ap = 0; ap < m; ++ap)
    for (int a = 0; a < m; ++a) {
      double s = 0;
      for (int app = 0; app < m; ++app) s += Z(ap, app) * (pair.Q(app, a) + pair.q[app]);
      B(ap, a) = s;
    }
  for (int a = 0; a < m; ++a) {
    double col = 0;
    for (int ap = 0; ap < m; ++ap) {
      col += B(ap, a);
      if (ap != a && B(ap, a) < -1e-9)
        throw PreconditionError("Z(Q,q) violates tangency");
    }
    if (std::abs(col) > 1e-8) throw PreconditionError("Z(Q,q) violates conservation");
  }
  double slack = 0;
  for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
    if (sigma[idx] == 0) return;
    std::vector<int> alt = a;
    double c = 0;
    for (int ap = 0; ap < m; ++ap) {
      double w = B(ap, a[player]);
      if (w == 0) continue;
      alt[player] = ap;
      c += w * g.utility(player, alt);
    }
    slack += sigma[idx] * c;
  });
  return slack;
}

GeneratorPair scaled_pair_from_weighted_transform(const TransformMatrix& t,
                                                  const std::vector<int>& w) {
  validate_transform(t);
  int m = t.size();
  if (static_cast<int>(w.size()) != m) throw PreconditionError("weight dimension mismatch");
  // W = diag(w)^{-1} (P - 1); choose q so that Q = W - q 1^T is symmetric,
  // with reference action 0 (cf. the unweighted triplet construction)
  Mat W(m);
  for (int ap = 0; ap < m; ++ap)
    for (int a = 0; a < m; ++a) W(ap, a) = (t.P(ap, a) - (ap == a ? 1.0 : 0.0)) / w[ap];
  GeneratorPair pair;
  pair.Q = Mat(m);
  pair.q.assign(m, 0.0);
  for (int b = 0; b < m; ++b) pair.q[b] = W(b, 0) - W(0, b);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) pair.Q(b, a) = W(b, a) - pair.q[b];
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      if (std::abs(pair.Q(x, y) - pair.Q(y, x)) > 1e-9)
        throw PreconditionError("weighted transform admits no symmetric scaled generator");
  return pair;
}

Objective d_not_nash(const NormalFormGame& g) { return not_nash_indicator(g); }

Objective d_indicator(const NormalFormGame& g, const std::vector<int>& outcome) {
  Objective d(g.num_outcomes(), 0.0);
  d[g.outcome_index(outcome)] = 1.0;
  return d;
}

Objective d_sum_sq_value(const NormalFormGame& g) {
  if (g.action_values.empty()) throw PreconditionError("game carries no action values");
  Objective d(g.num_outcomes(), 0.0);
  for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
    double s = 0;
    for (int i = 0; i < g.num_players(); ++i) {
      double v = g.action_values[i][a[i]];
      s += v * v;
    }
    d[idx] = s;
  });
  return d;
}

Objective d_sq_dist_to(const NormalFormGame& g, const std::vector<double>& target) {
  if (g.action_values.empty()) throw PreconditionError("game carries no action values");
  if (static_cast<int>(target.size()) != g.num_players())
    throw PreconditionError("target dimension mismatch");
  Objective d(g.num_outcomes(), 0.0);
  for_each_outcome(g, [&](std::size_t idx, const std::vector<int>& a) {
    double s = 0;
    for (int i = 0; i < g.num_players(); ++i) {
      double v = g.action_values[i][a[i]] - target[i];
      s += v * v;
    }
    d[idx] = s;
  });
  return d;
}

std::string report_to_json(const ConstraintReport& rep) {
  nlohmann::json j;
  j["pass"] = rep.pass;
  j["max_slack"] = rep.max_slack;
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : rep.items) {
    items.push_back({{"player", it.player}, {"transform", it.transform}, {"slack", it.slack}});
  }
  j["constraints"] = items;
  return j.dump(2);
}

}  // namespace sce
