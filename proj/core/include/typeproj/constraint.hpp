#pragma once

#include <Eigen/Dense>

#include "typeproj/pmf.hpp"

namespace typeproj {

/// Linear moment constraints on pmfs: lower_j <= sum_i p_i u(j,i) <= upper_j.
/// Rows with lower == upper are equalities. Infinite bounds give one-sided
/// rows. Rows must be linearly independent (rank tolerance 1e-10).
class ConstraintRegion {
 public:
  ConstraintRegion(Alphabet alphabet, Eigen::MatrixXd u, Eigen::VectorXd lower,
                   Eigen::VectorXd upper);

  /// The paper's case: sum_i p_i u(j,i) = 0 for every row.
  static ConstraintRegion equality(Alphabet alphabet, Eigen::MatrixXd u);

  const Alphabet& alphabet() const { return alphabet_; }
  int num_rows() const { return static_cast<int>(u_.rows()); }
  std::size_t m() const { return alphabet_.size(); }
  const Eigen::MatrixXd& u() const { return u_; }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  bool is_equality(int j) const { return lower_(j) == upper_(j); }

  Eigen::VectorXd moments(const Pmf& p) const;
  Eigen::VectorXd moments(const Eigen::VectorXd& p) const;

  /// Max violation over rows, 0 when inside.
  double residual(const Pmf& p) const;

  /// Membership with per-row slack: |moment - bound| <= eq_slack on equality
  /// rows, bounds widened by interval_slack on the rest.
  bool contains(const Pmf& p, double eq_slack = 0.0,
                double interval_slack = 0.0) const;

 private:
  Alphabet alphabet_;
  Eigen::MatrixXd u_;  // J x m
  Eigen::VectorXd lower_, upper_;
};

}  // namespace typeproj
