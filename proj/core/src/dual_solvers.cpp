#include "dual_solvers.hpp"

#include <cmath>
#include <vector>

#include "typeproj/pmf.hpp"

namespace typeproj::detail {

DualOut solve_i_dual(const Eigen::VectorXd& w, const Eigen::MatrixXd& Ut,
                     const NewtonOptions& opts, int depth) {
  const int J = static_cast<int>(Ut.rows());
  const int s = static_cast<int>(Ut.cols());

  auto obj = [&](const Eigen::VectorXd& lam, Eigen::VectorXd* grad,
                 Eigen::MatrixXd* hess) -> double {
    Eigen::VectorXd a = -(Ut.transpose() * lam);
    const double M = a.maxCoeff();
    Eigen::VectorXd e(s);
    double Z = 0.0;
    for (int i = 0; i < s; ++i) {
      e(i) = w(i) * std::exp(a(i) - M);
      Z += e(i);
    }
    const double f = M + std::log(Z);
    if (grad || hess) {
      Eigen::VectorXd p = e / Z;
      Eigen::VectorXd mu = Ut * p;
      if (grad) *grad = -mu;
      if (hess) *hess = Ut * p.asDiagonal() * Ut.transpose() - mu * mu.transpose();
    }
    return f;
  };

  NewtonOutcome nw = newton_minimize(obj, Eigen::VectorXd::Zero(J), opts);

  DualOut out;
  out.iterations = nw.iterations;
  out.lambda = nw.x;
  out.value = nw.value;

  if (nw.diverging || (!nw.converged && nw.x.norm() > 1e3)) {
    const Eigen::VectorXd d = nw.x.normalized();
    const Eigen::VectorXd v = Ut.transpose() * d;
    const double vmin = v.minCoeff();
    const double scale = 1.0 + Ut.cwiseAbs().maxCoeff();
    if (vmin > 1e-9 * scale) {
      out.infeasible = true;  // d'u_i > 0 for every atom: empty face
      out.cert_dir = d;
      return out;
    }
    // optimum sits on the face where d'u is minimal; recurse on that face
    std::vector<int> face;
    for (int i = 0; i < s; ++i)
      if (v(i) <= vmin + 1e-9 * scale) face.push_back(i);
    if (depth > J + 2 || static_cast<int>(face.size()) == s) return out;
    double wf = 0.0;
    for (int i : face) wf += w(i);
    if (wf <= 0.0) return out;
    Eigen::VectorXd wsub(face.size());
    Eigen::MatrixXd Usub(J, face.size());
    for (std::size_t k = 0; k < face.size(); ++k) {
      wsub(k) = w(face[k]) / wf;
      Usub.col(k) = Ut.col(face[k]);
    }
    if (face.size() == 1) {
      // point mass; feasible only if the centered moments vanish there
      if (Usub.col(0).cwiseAbs().maxCoeff() > 1e-8 * scale) {
        out.infeasible = true;
        out.cert_dir = d;
        return out;
      }
      out.ok = true;
      out.value = std::log(wf);
      out.p = Eigen::VectorXd::Zero(s);
      out.p(face[0]) = 1.0;
      return out;
    }
    DualOut sub = solve_i_dual(wsub, Usub, opts, depth + 1);
    out.iterations += sub.iterations;
    if (sub.infeasible) {
      out.infeasible = true;
      out.cert_dir = sub.cert_dir;
      return out;
    }
    if (!sub.ok) return out;
    out.ok = true;
    out.value = std::log(wf) + sub.value;
    out.lambda = sub.lambda;
    out.p = Eigen::VectorXd::Zero(s);
    for (std::size_t k = 0; k < face.size(); ++k) out.p(face[k]) = sub.p(k);
    return out;
  }

  if (!nw.converged) return out;

  out.ok = true;
  Eigen::VectorXd a = -(Ut.transpose() * nw.x);
  const double M = a.maxCoeff();
  out.p.resize(s);
  double Z = 0.0;
  for (int i = 0; i < s; ++i) {
    out.p(i) = w(i) * std::exp(a(i) - M);
    Z += out.p(i);
  }
  out.p /= Z;
  return out;
}

DualOut solve_l_dual(const Eigen::VectorXd& w, const Eigen::MatrixXd& Ut,
                     const NewtonOptions& opts) {
  const int J = static_cast<int>(Ut.rows());
  const int s = static_cast<int>(Ut.cols());

  auto obj = [&](const Eigen::VectorXd& lam, Eigen::VectorXd* grad,
                 Eigen::MatrixXd* hess) -> double {
    Eigen::VectorXd g = Eigen::VectorXd::Ones(s) - Ut.transpose() * lam;
    double f = 0.0;
    for (int i = 0; i < s; ++i) {
      if (g(i) <= 0.0) return kInf;
      f -= w(i) * std::log(g(i));
    }
    if (grad) {
      grad->setZero(J);
      for (int i = 0; i < s; ++i) *grad += (w(i) / g(i)) * Ut.col(i);
    }
    if (hess) {
      hess->setZero(J, J);
      for (int i = 0; i < s; ++i)
        *hess += (w(i) / (g(i) * g(i))) * (Ut.col(i) * Ut.col(i).transpose());
    }
    return f;
  };

  // fraction-to-boundary rule, factor 0.99
  auto max_step = [&](const Eigen::VectorXd& lam, const Eigen::VectorXd& dir) {
    Eigen::VectorXd g = Eigen::VectorXd::Ones(s) - Ut.transpose() * lam;
    Eigen::VectorXd dstep = Ut.transpose() * dir;
    double amax = 1.0;
    for (int i = 0; i < s; ++i)
      if (dstep(i) > 0.0) amax = std::min(amax, 0.99 * g(i) / dstep(i));
    return amax;
  };

  NewtonOutcome nw = newton_minimize(obj, Eigen::VectorXd::Zero(J), opts, max_step);

  DualOut out;
  out.iterations = nw.iterations;
  out.lambda = nw.x;
  out.value = nw.value;
  Eigen::VectorXd g = Eigen::VectorXd::Ones(s) - Ut.transpose() * nw.x;
  int imin = 0;
  for (int i = 1; i < s; ++i)
    if (g(i) < g(imin)) imin = i;
  out.min_slack = g(imin);
  out.min_slack_atom = imin;

  if (nw.diverging || (!nw.converged && nw.x.norm() > 1e3)) {
    const Eigen::VectorXd d = -nw.x.normalized();
    if ((Ut.transpose() * d).minCoeff() >= -1e-9 * (1.0 + Ut.cwiseAbs().maxCoeff())) {
      out.infeasible = true;
      out.cert_dir = d;
    }
    return out;
  }
  if (!nw.converged) return out;

  out.ok = true;
  out.p.resize(s);
  for (int i = 0; i < s; ++i) out.p(i) = w(i) / g(i);
  out.p /= out.p.sum();  // exact at the optimum; removes rounding defect
  return out;
}

}  // namespace typeproj::detail
