#pragma once

#include <Eigen/Dense>
#include <vector>

namespace typeproj {

/// Outcome of solve_lp on min c'x s.t. Ax = b, x >= 0.
struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Eigen::VectorXd x;        // primal solution (Optimal only)
  double objective = 0.0;   // c'x at the solution
  Eigen::VectorXd farkas;   // Infeasible only: y with y'A <= 0 (per column), y'b > 0
};

/// Dense two-phase tableau simplex with Bland's rule. Meant for the tiny
/// instances that appear here (tens of rows/columns at most).
LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& c);

/// Feasibility of { w >= 0, sum w = 1, lower <= U w <= upper }.
/// Infinite bounds mark one-sided rows. strict_margin > 0 additionally asks
/// for the largest uniform margin t with w_i >= t and the finite non-equality
/// bounds tightened by t; the returned margin is that optimum (0 when only a
/// boundary point exists).
struct SimplexFeasibility {
  bool feasible = false;
  Eigen::VectorXd witness;       // a feasible w (the max-margin one when strict)
  double margin = 0.0;           // achieved uniform interior margin
  Eigen::VectorXd farkas;        // infeasible case: row combination, see solve_lp
  double farkas_gap = 0.0;
};

SimplexFeasibility simplex_feasible(const Eigen::MatrixXd& U,
                                    const Eigen::VectorXd& lower,
                                    const Eigen::VectorXd& upper,
                                    bool maximize_margin = true);

}  // namespace typeproj
