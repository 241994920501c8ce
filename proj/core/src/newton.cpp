#include "typeproj/newton.hpp"

#include <cmath>
#include <limits>

namespace typeproj {

NewtonOutcome newton_minimize(const SmoothObjective& f, Eigen::VectorXd x0,
                              const NewtonOptions& opts, const MaxStepFn& max_step) {
  const int dim = static_cast<int>(x0.size());
  NewtonOutcome out;
  out.x = std::move(x0);

  Eigen::VectorXd grad(dim);
  Eigen::MatrixXd hess(dim, dim);
  double fx = f(out.x, &grad, &hess);
  out.value = fx;
  out.grad_norm = grad.norm();

  for (int it = 0; it < opts.max_iter; ++it) {
    out.iterations = it;
    if (out.grad_norm <= opts.grad_tol) {
      out.converged = true;
      return out;
    }
    if (out.x.norm() > opts.divergence_norm) {
      out.diverging = true;
      return out;
    }

    // Newton direction, ridge fallback if the Hessian is near-singular
    Eigen::VectorXd dir;
    double ridge = 0.0;
    for (;;) {
      Eigen::MatrixXd H = hess;
      if (ridge > 0.0) H.diagonal().array() += ridge;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
      dir = ldlt.solve(-grad);
      const bool ok = ldlt.info() == Eigen::Success && dir.allFinite() &&
                      grad.dot(dir) < 0.0;
      if (ok) break;
      ridge = ridge == 0.0 ? 1e-10 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff())
                           : ridge * 100.0;
      if (ridge > 1e20) {
        dir = -grad;  // last resort
        break;
      }
    }

    double alpha = 1.0;
    if (max_step) alpha = std::min(1.0, max_step(out.x, dir));
    const double slope = grad.dot(dir);
    bool stepped = false;
    while (alpha > 1e-20) {
      const Eigen::VectorXd cand = out.x + alpha * dir;
      const double fc = f(cand, nullptr, nullptr);
      // the epsilon term keeps full Newton steps acceptable once the predicted
      // decrease falls below the floating-point resolution of f itself
      const double fuzz =
          16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(fx));
      if (std::isfinite(fc) && fc <= fx + opts.armijo * alpha * slope + fuzz) {
        out.x = cand;
        fx = fc;
        stepped = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!stepped) {
      // no admissible decrease; report where we stand
      out.value = fx;
      return out;
    }
    fx = f(out.x, &grad, &hess);
    out.value = fx;
    out.grad_norm = grad.norm();
  }
  out.iterations = opts.max_iter;
  out.converged = out.grad_norm <= opts.grad_tol;
  if (!out.converged && out.x.norm() > opts.divergence_norm) out.diverging = true;
  return out;
}

}  // namespace typeproj
