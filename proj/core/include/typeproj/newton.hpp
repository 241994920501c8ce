#pragma once

#include <Eigen/Dense>
#include <functional>

namespace typeproj {

/// Smooth objective callback: fill gradient/Hessian when the pointers are
/// non-null; return +inf outside the domain.
using SmoothObjective =
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*, Eigen::MatrixXd*)>;

/// Largest step in (0, 1] keeping x + a*dir inside the open domain, after the
/// fraction-to-boundary factor has been applied by the callee.
using MaxStepFn = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

struct NewtonOptions {
  double grad_tol = 1e-10;
  int max_iter = 200;
  double armijo = 1e-4;        // sufficient-decrease parameter, halving steps
  double divergence_norm = 1e7;  // |x| beyond this flags an unbounded dual
};

struct NewtonOutcome {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool diverging = false;  // iterates ran away; dual likely unbounded below
};

/// Damped Newton with backtracking line search on a smooth convex objective.
NewtonOutcome newton_minimize(const SmoothObjective& f, Eigen::VectorXd x0,
                              const NewtonOptions& opts = {},
                              const MaxStepFn& max_step = {});

}  // namespace typeproj
