#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "typeproj/pmf.hpp"

namespace typeproj {

/// Parametric family of estimating functions u_j(x; theta), evaluated on a
/// finite theta grid. J and K are unrelated: under- and over-identification
/// are both allowed.
struct EEModel {
  using Evaluator = std::function<void(double x, std::span<const double> theta,
                                       std::span<double> out)>;
  Evaluator u;                                  // fills J values
  int num_functions = 0;                        // J
  int num_params = 0;                           // K (1 or 2 supported)
  std::vector<std::vector<double>> theta_grid;  // nonempty, each of length K

  std::vector<double> eval(double x, std::span<const double> theta) const {
    std::vector<double> out(num_functions);
    u(x, theta, out);
    return out;
  }
};

struct ProfilePoint {
  std::vector<double> theta;
  double value = 0.0;  // -inf when the hull condition fails at this theta
  bool hull_failed = false;
};

struct EstimateReport {
  std::vector<double> theta_hat;
  std::vector<double> lambda_hat;   // length J
  std::vector<double> weights;      // over alphabet atoms or sample points
  double objective = 0.0;           // profile value at theta_hat
  std::vector<ProfilePoint> profile;
  bool grid_tie = false;            // several grid points tied at the optimum;
                                    // the smallest theta was refined
  double min_domain_slack = 1.0;    // EL-type duals: min_l (1 - lambda'u_l)
};

/// Population estimator with known r: sup over theta of the inner dual
/// log sum_i r_i exp(-lambda'u_i), i.e. -I(Pi(theta)||r).
EstimateReport maxmaxent_estimate(const Pmf& r, const EEModel& model);

/// Empirical Likelihood: sup over theta of inf_lambda
/// -sum_l log(1 - lambda'u(x_l;theta)) over the open domain.
EstimateReport el_estimate(const Sample& sample, const EEModel& model);

/// Empirical MaxMaxEnt: the sample analogue log sum_l exp(-lambda'u_l),
/// shifted by -log N so a feasible empirical measure scores 0.
EstimateReport emme_estimate(const Sample& sample, const EEModel& model);

/// Population analogue of EL with known r, summing over alphabet atoms
/// weighted by r.
EstimateReport lprojection_estimate(const Pmf& r, const EEModel& model);

}  // namespace typeproj
