#pragma once

#include <Eigen/Dense>

#include "typeproj/newton.hpp"

namespace typeproj::detail {

struct DualOut {
  Eigen::VectorXd lambda;
  Eigen::VectorXd p;  // primal weights on the supplied columns
  double value = 0.0;
  int iterations = 0;
  bool ok = false;
  bool infeasible = false;
  Eigen::VectorXd cert_dir;
  double min_slack = 1.0;  // l-dual: min_i (1 - lambda'u_i)
  int min_slack_atom = -1;
};

/// min over lambda of log sum_i w_i exp(-lambda'Ut_i); face recursion handles
/// optima attained on the boundary of the moment hull.
DualOut solve_i_dual(const Eigen::VectorXd& w, const Eigen::MatrixXd& Ut,
                     const NewtonOptions& opts, int depth = 0);

/// min over lambda of -sum_i w_i log(1 - lambda'Ut_i) on its open domain,
/// fraction-to-boundary factor 0.99.
DualOut solve_l_dual(const Eigen::VectorXd& w, const Eigen::MatrixXd& Ut,
                     const NewtonOptions& opts);

}  // namespace typeproj::detail
