#include "typeproj/constraint.hpp"

#include <algorithm>
#include <cmath>

namespace typeproj {

ConstraintRegion::ConstraintRegion(Alphabet alphabet, Eigen::MatrixXd u,
                                   Eigen::VectorXd lower, Eigen::VectorXd upper)
    : alphabet_(std::move(alphabet)),
      u_(std::move(u)),
      lower_(std::move(lower)),
      upper_(std::move(upper)) {
  const int J = static_cast<int>(u_.rows());
  if (J < 1) throw ValidationError("constraint region needs at least one row");
  if (u_.cols() != static_cast<Eigen::Index>(alphabet_.size()))
    throw ValidationError("constraint matrix width does not match alphabet size");
  if (lower_.size() != J || upper_.size() != J)
    throw ValidationError("bound vector length does not match row count");
  for (int j = 0; j < J; ++j) {
    if (std::isnan(lower_(j)) || std::isnan(upper_(j)) || !(lower_(j) <= upper_(j)))
      throw ValidationError("row " + std::to_string(j) + ": need lower <= upper");
  }
  // independence is required of the nonzero rows; all-zero rows are inert
  // (moment identically 0) and left to the feasibility machinery
  std::vector<int> nz;
  for (int j = 0; j < J; ++j)
    if (u_.row(j).cwiseAbs().maxCoeff() > 0.0) nz.push_back(j);
  if (static_cast<int>(nz.size()) > static_cast<int>(alphabet_.size()))
    throw ValidationError("more independent constraint rows than alphabet points");
  if (!nz.empty()) {
    Eigen::MatrixXd unz(nz.size(), u_.cols());
    for (std::size_t k = 0; k < nz.size(); ++k) unz.row(k) = u_.row(nz[k]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(unz);
    const auto& s = svd.singularValues();
    if (s(0) <= 0.0 || s(s.size() - 1) / s(0) < 1e-10)
      throw ValidationError("constraint rows are linearly dependent");
  }
}

ConstraintRegion ConstraintRegion::equality(Alphabet alphabet, Eigen::MatrixXd u) {
  const int J = static_cast<int>(u.rows());
  return ConstraintRegion(std::move(alphabet), std::move(u),
                          Eigen::VectorXd::Zero(J), Eigen::VectorXd::Zero(J));
}

Eigen::VectorXd ConstraintRegion::moments(const Pmf& p) const {
  require_same_alphabet(p.alphabet(), alphabet_);
  return u_ * Eigen::Map<const Eigen::VectorXd>(p.probs().data(), p.size());
}

Eigen::VectorXd ConstraintRegion::moments(const Eigen::VectorXd& p) const {
  return u_ * p;
}

double ConstraintRegion::residual(const Pmf& p) const {
  const Eigen::VectorXd mom = moments(p);
  double r = 0.0;
  for (int j = 0; j < num_rows(); ++j) {
    if (mom(j) < lower_(j)) r = std::max(r, lower_(j) - mom(j));
    if (mom(j) > upper_(j)) r = std::max(r, mom(j) - upper_(j));
  }
  return r;
}

bool ConstraintRegion::contains(const Pmf& p, double eq_slack,
                                double interval_slack) const {
  const Eigen::VectorXd mom = moments(p);
  for (int j = 0; j < num_rows(); ++j) {
    const double slack = is_equality(j) ? eq_slack : interval_slack;
    if (mom(j) < lower_(j) - slack || mom(j) > upper_(j) + slack) return false;
  }
  return true;
}

}  // namespace typeproj
