#include "typeproj/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "dual_solvers.hpp"
#include "typeproj/simplex_lp.hpp"

namespace typeproj {

namespace {

constexpr double kGridTieTol = 1e-9;
constexpr double kRefineWidth = 1e-9;

enum class InnerKind { Exp, Log };  // log-sum-exp dual vs -sum w log(1-l'u)

struct InnerSetup {
  std::vector<double> xs;  // evaluation points (alphabet atoms or sample values)
  Eigen::VectorXd w;       // weights on the points, sum 1
  double scale = 1.0;      // reported profile = scale * weighted dual optimum
  InnerKind kind = InnerKind::Exp;
};

struct InnerEval {
  double value = -kInf;
  bool hull_failed = false;
  Eigen::VectorXd lambda;
  Eigen::VectorXd weights;
  double min_slack = 1.0;
};

InnerEval eval_inner(const InnerSetup& setup, const EEModel& model,
                     std::span<const double> theta) {
  const int P = static_cast<int>(setup.xs.size());
  const int J = model.num_functions;
  Eigen::MatrixXd U(J, P);
  std::vector<double> buf(J);
  for (int p = 0; p < P; ++p) {
    model.u(setup.xs[p], theta, buf);
    for (int j = 0; j < J; ++j) U(j, p) = buf[j];
  }

  InnerEval out;
  out.lambda = Eigen::VectorXd::Zero(J);

  // hull condition: zero must be expressible as a convex combination of the
  // estimating-function values, else the inner inf is -inf (empty Phi(theta))
  SimplexFeasibility hull = simplex_feasible(U, Eigen::VectorXd::Zero(J),
                                             Eigen::VectorXd::Zero(J), false);
  if (!hull.feasible) {
    out.hull_failed = true;
    return out;
  }

  NewtonOptions opts;
  detail::DualOut dual = setup.kind == InnerKind::Exp
                             ? detail::solve_i_dual(setup.w, U, opts)
                             : detail::solve_l_dual(setup.w, U, opts);
  if (dual.infeasible) {
    out.hull_failed = true;
    return out;
  }
  out.min_slack = dual.min_slack;
  out.value = setup.scale * dual.value;  // best value found even when not
  out.lambda = dual.lambda;              // converged (boundary diagnostics)
  if (dual.ok) out.weights = dual.p;
  return out;
}

double golden_max(const std::function<double(double)>& f, double a, double b,
                  double width) {
  const double phi = 0.6180339887498949;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > width) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

// neighbor span of v among the sorted distinct values of coordinate k
std::pair<double, double> bracket(const std::vector<std::vector<double>>& grid,
                                  std::size_t k, double v) {
  std::vector<double> vals;
  for (const auto& th : grid) vals.push_back(th[k]);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  auto it = std::lower_bound(vals.begin(), vals.end(), v);
  double lo = v, hi = v;
  if (it != vals.begin()) lo = *(it - 1);
  if (it != vals.end() && it + 1 != vals.end()) hi = *(it + 1);
  else if (it == vals.end() && !vals.empty()) hi = vals.back();
  return {lo, hi};
}

EstimateReport run_estimator(const InnerSetup& setup, const EEModel& model) {
  if (model.theta_grid.empty()) throw ValidationError("theta grid is empty");
  if (model.num_params < 1 || model.num_params > 2)
    throw ValidationError("only K = 1 or 2 parameters are supported");

  EstimateReport rep;
  rep.profile.reserve(model.theta_grid.size());
  double best = -kInf;
  std::size_t best_idx = 0;
  std::size_t tied = 0;
  for (std::size_t i = 0; i < model.theta_grid.size(); ++i) {
    const auto& th = model.theta_grid[i];
    if (static_cast<int>(th.size()) != model.num_params)
      throw ValidationError("theta grid entry has wrong dimension");
    InnerEval ev = eval_inner(setup, model, th);
    rep.profile.push_back({th, ev.value, ev.hull_failed});
    if (ev.value > best + kGridTieTol) {
      best = ev.value;
      best_idx = i;
      tied = 1;
    } else if (ev.value > best - kGridTieTol) {
      ++tied;
      // keep the lexicographically smallest theta among ties
      if (model.theta_grid[i] < model.theta_grid[best_idx]) best_idx = i;
      best = std::max(best, ev.value);
    }
  }
  if (best == -kInf)
    throw InfeasibleError("the hull condition fails at every theta on the grid");
  rep.grid_tie = tied > 1;

  std::vector<double> theta = model.theta_grid[best_idx];
  auto value_at = [&](const std::vector<double>& th) {
    return eval_inner(setup, model, th).value;
  };

  // local refinement: golden section per coordinate between grid neighbors
  const int sweeps = model.num_params == 1 ? 1 : 3;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int k = 0; k < model.num_params; ++k) {
      auto [lo, hi] = bracket(model.theta_grid, k, model.theta_grid[best_idx][k]);
      if (sweep > 0) {  // shrink around the current iterate
        const double half = (hi - lo) * std::pow(0.25, sweep);
        lo = theta[k] - half;
        hi = theta[k] + half;
      }
      if (hi - lo <= kRefineWidth) continue;
      auto f1 = [&](double v) {
        auto th = theta;
        th[k] = v;
        return value_at(th);
      };
      theta[k] = golden_max(f1, lo, hi, kRefineWidth);
    }
  }
  // value-comparison search bottoms out on the floating-point plateau of the
  // profile (~1e-8 wide in theta); a few finite-difference Newton steps on the
  // profile recover the stationary point to ~1e-11
  for (int k = 0; k < model.num_params; ++k) {
    const double h = 1e-5;
    for (int polish = 0; polish < 5; ++polish) {
      auto shifted = [&](double dv) {
        auto th = theta;
        th[k] += dv;
        return value_at(th);
      };
      const double fm = shifted(-h), f0 = value_at(theta), fp = shifted(h);
      if (!std::isfinite(fm) || !std::isfinite(f0) || !std::isfinite(fp)) break;
      const double d1 = (fp - fm) / (2.0 * h);
      const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
      if (!(d2 < 0.0)) break;  // not locally concave; keep the golden iterate
      const double step = std::clamp(-d1 / d2, -10.0 * h, 10.0 * h);
      theta[k] += step;
      if (std::abs(step) < 1e-11) break;
    }
  }
  if (value_at(theta) < best - 1e-12) theta = model.theta_grid[best_idx];

  InnerEval fin = eval_inner(setup, model, theta);
  rep.theta_hat = theta;
  rep.objective = std::max(fin.value, best);
  rep.lambda_hat.assign(fin.lambda.data(), fin.lambda.data() + fin.lambda.size());
  if (fin.weights.size())
    rep.weights.assign(fin.weights.data(), fin.weights.data() + fin.weights.size());
  rep.min_domain_slack = fin.min_slack;
  return rep;
}

InnerSetup population_setup(const Pmf& r, InnerKind kind) {
  InnerSetup setup;
  setup.kind = kind;
  std::vector<double> w;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0.0) continue;  // restrict to the support of r
    setup.xs.push_back(r.alphabet()[i]);
    w.push_back(r[i]);
  }
  setup.w = Eigen::Map<Eigen::VectorXd>(w.data(), w.size());
  setup.w /= setup.w.sum();
  return setup;
}

InnerSetup sample_setup(const Sample& sample, InnerKind kind, double scale) {
  InnerSetup setup;
  setup.kind = kind;
  setup.scale = scale;
  const std::size_t n = sample.size();
  setup.xs.resize(n);
  for (std::size_t l = 0; l < n; ++l) setup.xs[l] = sample.value(l);
  setup.w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  return setup;
}

// embed support-restricted weights back onto the full alphabet
void embed_weights(EstimateReport& rep, const Pmf& r) {
  if (rep.weights.empty()) return;
  std::vector<double> full(r.size(), 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] > 0.0) full[i] = rep.weights[k++];
  rep.weights = std::move(full);
}

}  // namespace

EstimateReport maxmaxent_estimate(const Pmf& r, const EEModel& model) {
  EstimateReport rep = run_estimator(population_setup(r, InnerKind::Exp), model);
  embed_weights(rep, r);
  return rep;
}

EstimateReport lprojection_estimate(const Pmf& r, const EEModel& model) {
  EstimateReport rep = run_estimator(population_setup(r, InnerKind::Log), model);
  embed_weights(rep, r);
  return rep;
}

EstimateReport el_estimate(const Sample& sample, const EEModel& model) {
  if (static_cast<int>(sample.size()) < model.num_functions)
    throw ValidationError("sample smaller than the number of estimating functions");
  // profile = inf_lambda -sum_l log(1 - lambda'u_l) = n * weighted dual
  return run_estimator(
      sample_setup(sample, InnerKind::Log, static_cast<double>(sample.size())),
      model);
}

EstimateReport emme_estimate(const Sample& sample, const EEModel& model) {
  if (static_cast<int>(sample.size()) < model.num_functions)
    throw ValidationError("sample smaller than the number of estimating functions");
  // log sum_l exp(-lambda'u_l) - log N is exactly the uniform-weight dual
  return run_estimator(sample_setup(sample, InnerKind::Exp, 1.0), model);
}

}  // namespace typeproj
