// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sce {

enum class Relation { LessEq, Equal };
enum class LpStatus { Optimal, Infeasible, Unbounded };

// Sparse maximization LP.  Variables are nonnegative unless marked free.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;           // size num_vars
  std::vector<std::string> var_names;      // size num_vars
  std::vector<char> var_free;              // size num_vars; 0 = lower bound 0

  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
    std::string name;
  };
  std::vector<Row> rows;

  int add_var(const std::string& name, double obj = 0.0, bool free = false);
  void add_row(Row row) { rows.push_back(std::move(row)); }
  void validate() const;
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
  std::vector<double> primal;  // per variable
  std::vector<double> dual;    // per row
  int pivots = 0;
};

struct SolveOptions {
  bool exact_rational = false;  // exact pivoting (instances <= 500 vars)
  bool equilibrate = true;      // scale rows by max-abs coefficient
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  int max_pivots = 0;  // 0 = automatic budget
};

// Two-phase primal simplex with Bland's anti-cycling rule.
// Throws SolverStallError if the pivot budget is exhausted.
struct SolverStallError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

LpSolution solve(const LinearProgram& lp, const SolveOptions& opts = {});

// residuals for auditing a claimed-optimal solution
struct SolutionCheck {
  double primal_residual = 0.0;  // max constraint/bound violation
  double dual_residual = 0.0;    // max dual feasibility violation
  double gap = 0.0;              // |primal value - dual value|
};
SolutionCheck check_solution(const LinearProgram& lp, const LpSolution& sol);

std::string export_lp_text(const LinearProgram& lp);
LinearProgram parse_lp_text(const std::string& text);

std::string solution_to_json(const LpSolution& sol);

}  // namespace sce
