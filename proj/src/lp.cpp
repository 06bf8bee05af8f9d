// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#include "sce/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "sce/game.hpp"  // PreconditionError

namespace sce {

int LinearProgram::add_var(const std::string& name, double obj, bool free) {
  objective.push_back(obj);
  var_names.push_back(name);
  var_free.push_back(free ? 1 : 0);
  return num_vars++;
}

void LinearProgram::validate() const {
  if (static_cast<int>(objective.size()) != num_vars ||
      static_cast<int>(var_names.size()) != num_vars ||
      static_cast<int>(var_free.size()) != num_vars)
    throw PreconditionError("LP variable arrays inconsistent");
  for (double c : objective)
    if (!std::isfinite(c)) throw PreconditionError("non-finite objective coefficient");
  for (const auto& r : rows) {
    if (!std::isfinite(r.rhs)) throw PreconditionError("non-finite rhs");
    for (const auto& [j, v] : r.coeffs) {
      if (j < 0 || j >= num_vars) throw PreconditionError("row references unknown variable");
      if (!std::isfinite(v)) throw PreconditionError("non-finite coefficient");
    }
  }
}

namespace {

using Rational = boost::multiprecision::cpp_rational;

template <typename T>
T tabs(const T& x) {
  return x < 0 ? T(-x) : x;
}

template <typename T>
struct KernelResult {
  LpStatus status = LpStatus::Optimal;
  std::vector<T> x;  // structural column values
  std::vector<T> y;  // per-row duals (transformed system)
  int pivots = 0;
};

// Dense two-phase primal simplex over an ordered field T.
// Columns: structural (with free vars pre-split by the caller), then one
// slack per <= row, then one artificial per row.  Rows must have rhs >= 0.
template <typename T>
class Simplex {
 public:
  Simplex(int rows, int struct_cols, int slack_cols, double tol, int max_pivots)
      : m_(rows),
        ns_(struct_cols),
        nk_(slack_cols),
        n_(struct_cols + slack_cols + rows),
        tol_(tol),
        max_pivots_(max_pivots),
        tab_(static_cast<std::size_t>(rows) * (struct_cols + slack_cols + rows + 1), T(0)),
        basis_(rows, -1) {}

  T& at(int r, int c) { return tab_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
  int art_col(int r) const { return ns_ + nk_ + r; }
  int rhs_col() const { return n_; }

  void set_basis(int r, int c) { basis_[r] = c; }

  KernelResult<T> run(const std::vector<T>& cost) {
    KernelResult<T> res;
    for (int r = 0; r < m_; ++r) at(r, art_col(r)) = T(1);

    // phase 1: maximize -sum(artificials)
    std::vector<T> c1(n_, T(0));
    for (int r = 0; r < m_; ++r) c1[art_col(r)] = T(-1);
    compute_reduced_costs(c1);
    LpStatus st = iterate(/*phase2=*/false, c1, &res.pivots);
    (void)st;  // phase 1 is bounded
    T infeas(0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] >= art_col(0)) infeas += at(r, rhs_col());
    if (infeas > T(tol_ > 0 ? tol_ * 10 : 0)) {
      res.status = LpStatus::Infeasible;
      return res;
    }

    // drive remaining basic artificials (all at zero) out of the basis so
    // phase-2 pivots cannot lift them; rows with no structural support are
    // redundant and keep their artificial basic at zero harmlessly
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < art_col(0)) continue;
      for (int j = 0; j < ns_ + nk_; ++j) {
        T piv = at(r, j);
        if (piv < T(0)) piv = -piv;
        if (piv > T(tol_)) {
          pivot(r, j);
          ++res.pivots;
          break;
        }
      }
    }

    // phase 2: artificial columns may stay basic at zero but never enter
    std::vector<T> c2(n_, T(0));
    for (int j = 0; j < ns_ + nk_; ++j) c2[j] = j < static_cast<int>(cost.size()) ? cost[j] : T(0);
    compute_reduced_costs(c2);
    st = iterate(/*phase2=*/true, c2, &res.pivots);
    if (st == LpStatus::Unbounded) {
      res.status = LpStatus::Unbounded;
      return res;
    }

    res.x.assign(ns_ + nk_, T(0));
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < ns_ + nk_) res.x[basis_[r]] = at(r, rhs_col());
    res.y.assign(m_, T(0));
    for (int r = 0; r < m_; ++r) res.y[r] = -obj_[art_col(r)];
    return res;
  }

 private:
  void compute_reduced_costs(const std::vector<T>& cost) {
    obj_.assign(n_ + 1, T(0));
    for (int j = 0; j < n_; ++j) obj_[j] = cost[j];
    for (int r = 0; r < m_; ++r) {
      const T& cb = cost[basis_[r]];
      if (cb == 0) continue;
      for (int j = 0; j <= n_; ++j) obj_[j] -= cb * at(r, j);
    }
  }

  LpStatus iterate(bool phase2, const std::vector<T>& cost, int* pivots) {
    const int art0 = art_col(0);
    // Dantzig pricing while progress is made; after a long degenerate stall
    // switch permanently to Bland's rule, which cannot cycle.
    bool bland = false;
    int stalled = 0;
    int since_refresh = 0;
    const int stall_limit = 2 * (m_ + n_) + 64;
    while (true) {
      // the objective row drifts under repeated eliminations; rebuild it
      // periodically, and always before accepting optimality
      if (since_refresh >= 256) {
        compute_reduced_costs(cost);
        since_refresh = 0;
      }
      int enter = -1;
      if (bland) {
        // smallest eligible index with improving cost
        for (int j = 0; j < n_; ++j) {
          if (phase2 && j >= art0) continue;
          if (obj_[j] > T(tol_)) {
            enter = j;
            break;
          }
        }
      } else {
        T best(0);
        for (int j = 0; j < n_; ++j) {
          if (phase2 && j >= art0) continue;
          if (obj_[j] > T(tol_) && (enter < 0 || obj_[j] > best)) {
            best = obj_[j];
            enter = j;
          }
        }
      }
      if (enter < 0) {
        if (since_refresh == 0) return LpStatus::Optimal;
        compute_reduced_costs(cost);
        since_refresh = 0;
        continue;
      }

      int leave = -1;
      T best_ratio(0);
      if (bland) {
        // min ratio, smallest basis index among ties (anti-cycling)
        for (int r = 0; r < m_; ++r) {
          const T& piv = at(r, enter);
          if (piv <= T(tol_)) continue;
          T ratio = at(r, rhs_col()) / piv;
          if (leave < 0 || ratio < best_ratio ||
              (ratio == best_ratio && basis_[r] < basis_[leave])) {
            leave = r;
            best_ratio = ratio;
          }
        }
      } else {
        // Harris two-pass ratio test: find the tolerance-relaxed minimum
        // ratio, then take the largest pivot element within it; tiny pivots
        // amplify roundoff catastrophically in a dense tableau
        T theta(0);
        bool have = false;
        for (int r = 0; r < m_; ++r) {
          const T& piv = at(r, enter);
          if (piv <= T(tol_)) continue;
          T ratio = (at(r, rhs_col()) + T(tol_)) / piv;
          if (!have || ratio < theta) {
            theta = ratio;
            have = true;
          }
        }
        if (have) {
          T best_piv(0);
          for (int r = 0; r < m_; ++r) {
            const T& piv = at(r, enter);
            if (piv <= T(tol_)) continue;
            if (at(r, rhs_col()) / piv <= theta && piv > best_piv) {
              best_piv = piv;
              leave = r;
            }
          }
          if (leave >= 0) best_ratio = at(leave, rhs_col()) / at(leave, enter);
        }
      }
      if (leave < 0) return LpStatus::Unbounded;

      if (!bland) {
        if (best_ratio <= T(tol_)) {
          if (++stalled >= stall_limit) bland = true;
        } else {
          stalled = 0;
        }
      }
      pivot(leave, enter);
      ++since_refresh;
#ifdef SCE_LP_TRACE
      if (*pivots % 5000 == 0)
        std::fprintf(stderr, "[lp] phase%d pivots=%d obj=%.12g bland=%d stalled=%d enter=%d\n",
                     phase2 ? 2 : 1, *pivots, (double)obj_[rhs_col()], (int)bland, stalled, enter);
#endif
      if (++*pivots > max_pivots_)
        throw SolverStallError("simplex pivot budget exhausted");
    }
  }

  void pivot(int r, int c) {
    T piv = at(r, c);
    for (int j = 0; j <= n_; ++j) at(r, j) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      T f = at(i, c);
      if (f == 0) continue;
      for (int j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
    }
    T f = obj_[c];
    if (f != 0)
      for (int j = 0; j <= n_; ++j) obj_[j] -= f * at(r, j);
    basis_[r] = c;
  }

  int m_, ns_, nk_, n_;
  double tol_;
  int max_pivots_;
  std::vector<T> tab_;
  std::vector<T> obj_;
  std::vector<int> basis_;
};

template <typename T>
LpSolution solve_impl(const LinearProgram& lp, const SolveOptions& opts) {
  const int m = static_cast<int>(lp.rows.size());

  // split free variables into positive/negative parts
  std::vector<int> pos(lp.num_vars), neg(lp.num_vars, -1);
  int ns = 0;
  for (int j = 0; j < lp.num_vars; ++j) {
    pos[j] = ns++;
    if (lp.var_free[j]) neg[j] = ns++;
  }
  int nslack = 0;
  for (const auto& r : lp.rows)
    if (r.rel == Relation::LessEq) ++nslack;

  // row scaling (max-abs equilibration) and sign normalization
  std::vector<double> scale(m, 1.0);
  std::vector<double> sign(m, 1.0);
  if (opts.equilibrate) {
    for (int i = 0; i < m; ++i) {
      double mx = 0;
      for (const auto& [j, v] : lp.rows[i].coeffs) mx = std::max(mx, std::abs(v));
      if (mx > 0) scale[i] = 1.0 / mx;
    }
  }
  for (int i = 0; i < m; ++i)
    if (lp.rows[i].rhs * scale[i] < 0) sign[i] = -1.0;

  double tol = opts.exact_rational ? 0.0 : opts.feas_tol;
  int budget = opts.max_pivots > 0
                   ? opts.max_pivots
                   : 50000 + 50 * (m + ns + nslack);
  Simplex<T> sx(m, ns, nslack, tol, budget);

  int slack_at = ns;
  for (int i = 0; i < m; ++i) {
    double f = scale[i] * sign[i];
    for (const auto& [j, v] : lp.rows[i].coeffs) {
      sx.at(i, pos[j]) += T(v * f);
      if (neg[j] >= 0) sx.at(i, neg[j]) -= T(v * f);
    }
    if (lp.rows[i].rel == Relation::LessEq) {
      sx.at(i, slack_at) = T(f);
      ++slack_at;
    }
    sx.at(i, sx.rhs_col()) = T(lp.rows[i].rhs * f);
  }
  // initial basis: slack where usable, artificial otherwise
  slack_at = ns;
  for (int i = 0; i < m; ++i) {
    bool slack_ok = lp.rows[i].rel == Relation::LessEq && sign[i] > 0;
    if (lp.rows[i].rel == Relation::LessEq) {
      sx.set_basis(i, slack_ok ? slack_at : sx.art_col(i));
      ++slack_at;
    } else {
      sx.set_basis(i, sx.art_col(i));
    }
  }

  std::vector<T> cost(ns + nslack, T(0));
  for (int j = 0; j < lp.num_vars; ++j) {
    cost[pos[j]] = T(lp.objective[j]);
    if (neg[j] >= 0) cost[neg[j]] = T(-lp.objective[j]);
  }

  KernelResult<T> kr = sx.run(cost);
  LpSolution sol;
  sol.status = kr.status;
  sol.pivots = kr.pivots;
  if (kr.status != LpStatus::Optimal) return sol;

  sol.primal.assign(lp.num_vars, 0.0);
  for (int j = 0; j < lp.num_vars; ++j) {
    T v = kr.x[pos[j]];
    if (neg[j] >= 0) v -= kr.x[neg[j]];
    sol.primal[j] = static_cast<double>(v);
  }
  sol.dual.assign(m, 0.0);
  for (int i = 0; i < m; ++i)
    sol.dual[i] = static_cast<double>(kr.y[i]) * scale[i] * sign[i];
  double val = 0;
  for (int j = 0; j < lp.num_vars; ++j) val += lp.objective[j] * sol.primal[j];
  sol.value = val;
  return sol;
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolveOptions& opts) {
  lp.validate();
  if (opts.exact_rational) {
    if (lp.num_vars > 500)
      throw PreconditionError("exact mode limited to 500 variables");
    SolveOptions o = opts;
    o.equilibrate = false;  // exact arithmetic needs no conditioning
    return solve_impl<Rational>(lp, o);
  }
  return solve_impl<double>(lp, opts);
}

SolutionCheck check_solution(const LinearProgram& lp, const LpSolution& sol) {
  SolutionCheck chk;
  if (sol.status != LpStatus::Optimal) return chk;
  // primal feasibility
  for (int j = 0; j < lp.num_vars; ++j)
    if (!lp.var_free[j]) chk.primal_residual = std::max(chk.primal_residual, -sol.primal[j]);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    double lhs = 0;
    for (const auto& [j, v] : lp.rows[i].coeffs) lhs += v * sol.primal[j];
    double r = lhs - lp.rows[i].rhs;
    if (lp.rows[i].rel == Relation::Equal)
      chk.primal_residual = std::max(chk.primal_residual, std::abs(r));
    else
      chk.primal_residual = std::max(chk.primal_residual, r);
  }
  // dual feasibility: A^T y >= c (nonneg vars, = for free), y >= 0 on <= rows
  std::vector<double> aty(lp.num_vars, 0.0);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    if (lp.rows[i].rel == Relation::LessEq)
      chk.dual_residual = std::max(chk.dual_residual, -sol.dual[i]);
    for (const auto& [j, v] : lp.rows[i].coeffs) aty[j] += v * sol.dual[i];
  }
  for (int j = 0; j < lp.num_vars; ++j) {
    double r = lp.objective[j] - aty[j];
    chk.dual_residual =
        std::max(chk.dual_residual, lp.var_free[j] ? std::abs(r) : r);
  }
  double dual_value = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i)
    dual_value += sol.dual[i] * lp.rows[i].rhs;
  chk.gap = std::abs(dual_value - sol.value);
  return chk;
}

// --- textual export/parse ---------------------------------------------------

namespace {

std::string fnum(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_terms(std::ostringstream& os, const std::vector<std::pair<int, double>>& terms,
                 const std::vector<std::string>& names) {
  for (const auto& [j, v] : terms) {
    os << (v < 0 ? " - " : " + ") << fnum(std::abs(v)) << " " << names[j];
  }
}

}  // namespace

std::string export_lp_text(const LinearProgram& lp) {
  lp.validate();
  std::ostringstream os;
  os << "\\ lp export v1\n";
  os << "Maximize\n obj:";
  std::vector<std::pair<int, double>> obj_terms;
  for (int j = 0; j < lp.num_vars; ++j) obj_terms.emplace_back(j, lp.objective[j]);
  write_terms(os, obj_terms, lp.var_names);
  os << "\nSubject To\n";
  for (const auto& r : lp.rows) {
    os << " " << r.name << ":";
    write_terms(os, r.coeffs, lp.var_names);
    os << (r.rel == Relation::Equal ? " = " : " <= ") << fnum(r.rhs) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < lp.num_vars; ++j)
    os << " " << lp.var_names[j] << (lp.var_free[j] ? " free" : " >= 0") << "\n";
  os << "End\n";
  return os.str();
}

LinearProgram parse_lp_text(const std::string& text) {
  LinearProgram lp;
  std::istringstream is(text);
  std::string line;
  enum { None, Obj, Rows, Bnds } section = None;
  std::vector<std::pair<std::string, std::string>> bound_specs;
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, double>>>> raw_rows;
  std::vector<std::pair<Relation, double>> row_tails;
  std::vector<std::pair<std::string, double>> obj_terms;

  auto parse_terms = [](std::istringstream& ls, std::vector<std::pair<std::string, double>>& out,
                        Relation* rel, double* rhs) {
    std::string tok;
    double coef_sign = 1;
    while (ls >> tok) {
      if (tok == "+") {
        coef_sign = 1;
      } else if (tok == "-") {
        coef_sign = -1;
      } else if (tok == "<=" || tok == "=") {
        if (!rel) throw PreconditionError("unexpected relation in objective");
        *rel = tok == "=" ? Relation::Equal : Relation::LessEq;
        ls >> tok;
        *rhs = std::stod(tok);
        return;
      } else {
        double c = std::stod(tok);
        std::string name;
        if (!(ls >> name)) throw PreconditionError("dangling coefficient");
        out.emplace_back(name, coef_sign * c);
      }
    }
  };

  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '\\') continue;
    if (line == "Maximize") { section = Obj; continue; }
    if (line == "Subject To") { section = Rows; continue; }
    if (line == "Bounds") { section = Bnds; continue; }
    if (line == "End") break;
    std::istringstream ls(line);
    if (section == Obj) {
      std::string label;
      ls >> label;  // "obj:"
      parse_terms(ls, obj_terms, nullptr, nullptr);
    } else if (section == Rows) {
      std::string label;
      ls >> label;
      if (!label.empty() && label.back() == ':') label.pop_back();
      std::vector<std::pair<std::string, double>> terms;
      Relation rel = Relation::LessEq;
      double rhs = 0;
      parse_terms(ls, terms, &rel, &rhs);
      raw_rows.emplace_back(label, std::move(terms));
      row_tails.emplace_back(rel, rhs);
    } else if (section == Bnds) {
      std::string name, spec, tail;
      ls >> name >> spec;
      if (spec == ">=") ls >> tail;
      bound_specs.emplace_back(name, spec);
    }
  }

  // variable order comes from the Bounds section
  std::map<std::string, int> index;
  for (const auto& [name, spec] : bound_specs) {
    int j = lp.add_var(name, 0.0, spec == "free");
    index[name] = j;
  }
  for (const auto& [name, c] : obj_terms) {
    auto it = index.find(name);
    if (it == index.end()) throw PreconditionError("objective references unknown variable");
    lp.objective[it->second] = c;
  }
  for (std::size_t i = 0; i < raw_rows.size(); ++i) {
    LinearProgram::Row row;
    row.name = raw_rows[i].first;
    row.rel = row_tails[i].first;
    row.rhs = row_tails[i].second;
    for (const auto& [name, c] : raw_rows[i].second) {
      auto it = index.find(name);
      if (it == index.end()) throw PreconditionError("row references unknown variable");
      row.coeffs.emplace_back(it->second, c);
    }
    lp.add_row(std::move(row));
  }
  lp.validate();
  return lp;
}

std::string solution_to_json(const LpSolution& sol) {
  nlohmann::json j;
  switch (sol.status) {
    case LpStatus::Optimal: j["status"] = "optimal"; break;
    case LpStatus::Infeasible: j["status"] = "infeasible"; break;
    case LpStatus::Unbounded: j["status"] = "unbounded"; break;
  }
  j["value"] = sol.value;
  j["primal"] = sol.primal;
  j["dual"] = sol.dual;
  j["pivots"] = sol.pivots;
  return j.dump(2);
}

}  // namespace sce
