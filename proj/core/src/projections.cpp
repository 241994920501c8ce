#include "typeproj/projections.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dual_solvers.hpp"
#include "typeproj/divergences.hpp"
#include "typeproj/simplex_lp.hpp"

namespace typeproj {

namespace {

enum class Mode { IProj, LProj };

InfeasibilityCertificate certificate_from(const SimplexFeasibility& feas) {
  InfeasibilityCertificate cert;
  if (feas.farkas.size()) {
    cert.row_combination.assign(feas.farkas.data(),
                                feas.farkas.data() + feas.farkas.size());
    cert.gap = feas.farkas_gap;
  }
  cert.detail =
      "phase-one simplex found no pmf satisfying all rows; the stored row "
      "combination y satisfies y'A <= 0 columnwise with y'b > 0";
  return cert;
}

ProjectionResult project(Mode mode, const Pmf& base, const ConstraintRegion& region,
                         const NewtonOptions& opts) {
  require_same_alphabet(base.alphabet(), region.alphabet());
  const int J = region.num_rows();
  const int m = static_cast<int>(base.size());

  // restrict to the support of the base measure
  std::vector<int> supp;
  for (int i = 0; i < m; ++i)
    if (base[i] > 0.0) supp.push_back(i);
  const int s = static_cast<int>(supp.size());
  Eigen::VectorXd w(s);
  Eigen::MatrixXd Us(J, s);
  for (int k = 0; k < s; ++k) {
    w(k) = base[supp[k]];
    Us.col(k) = region.u().col(supp[k]);
  }
  w /= w.sum();

  SimplexFeasibility feas =
      simplex_feasible(Us, region.lower(), region.upper(), false);
  if (!feas.feasible) {
    throw InfeasibleError(
        "constraint region is infeasible over the support of the base pmf",
        certificate_from(feas));
  }

  // candidate activity patterns per row, fewest active rows first
  std::vector<std::vector<int>> choices(J);  // 0 inactive, 1 lower, 2 upper
  for (int j = 0; j < J; ++j) {
    if (region.is_equality(j)) {
      choices[j] = {1};
    } else {
      choices[j].push_back(0);
      if (region.upper()(j) < kInf) choices[j].push_back(2);
      if (region.lower()(j) > -kInf) choices[j].push_back(1);
    }
  }
  std::vector<std::vector<int>> patterns{{}};
  for (int j = 0; j < J; ++j) {
    std::vector<std::vector<int>> next;
    for (const auto& pat : patterns)
      for (int c : choices[j]) {
        auto ext = pat;
        ext.push_back(c);
        next.push_back(std::move(ext));
      }
    patterns = std::move(next);
  }
  std::stable_sort(patterns.begin(), patterns.end(),
                   [](const auto& a, const auto& b) {
                     int ca = 0, cb = 0;
                     for (int x : a) ca += x != 0;
                     for (int x : b) cb += x != 0;
                     return ca < cb;
                   });

  int total_iters = 0;
  bool saw_boundary = false;
  int boundary_atom = -1;

  for (const auto& pat : patterns) {
    std::vector<int> active;
    for (int j = 0; j < J; ++j)
      if (pat[j] != 0) active.push_back(j);

    detail::DualOut dual;
    Eigen::VectorXd psupp;
    if (active.empty()) {
      psupp = w;
      dual.ok = true;
      dual.value = 0.0;
      dual.lambda = Eigen::VectorXd::Zero(0);
    } else {
      Eigen::MatrixXd Ut(active.size(), s);
      for (std::size_t a = 0; a < active.size(); ++a) {
        const int j = active[a];
        const double c = pat[j] == 1 ? region.lower()(j) : region.upper()(j);
        Ut.row(a) = Us.row(j).array() - c;
      }
      dual = mode == Mode::IProj ? detail::solve_i_dual(w, Ut, opts)
                                 : detail::solve_l_dual(w, Ut, opts);
      total_iters += dual.iterations;
      if (dual.infeasible) continue;  // this face is empty; try another pattern
      if (!dual.ok) {
        if (mode == Mode::LProj && dual.min_slack < 1e-8) {
          saw_boundary = true;
          boundary_atom = supp[dual.min_slack_atom];
        }
        continue;
      }
      psupp = dual.p;
    }

    // embed and run the KKT screen
    std::vector<double> pfull(m, 0.0);
    for (int k = 0; k < s; ++k) pfull[supp[k]] = psupp(k);
    Pmf cand(base.alphabet(), pfull);

    const Eigen::VectorXd mom = region.moments(cand);
    bool pass = true;
    for (int j = 0; j < J && pass; ++j) {
      if (pat[j] == 0) {
        const double tol = 1e-8 * (1.0 + std::abs(mom(j)));
        if (mom(j) < region.lower()(j) - tol || mom(j) > region.upper()(j) + tol)
          pass = false;
      }
    }
    if (pass && !active.empty()) {
      const double stol = 1e-7 * (1.0 + dual.lambda.norm());
      for (std::size_t a = 0; a < active.size() && pass; ++a) {
        const int j = active[a];
        if (region.is_equality(j)) continue;
        const double lam = dual.lambda(a);
        // multiplier signs per KKT; the tilt and the 1/(1 - l'u) weighting
        // carry opposite conventions
        if (mode == Mode::IProj) {
          if (pat[j] == 2 && lam < -stol) pass = false;
          if (pat[j] == 1 && lam > stol) pass = false;
        } else {
          if (pat[j] == 2 && lam > stol) pass = false;
          if (pat[j] == 1 && lam < -stol) pass = false;
        }
      }
    }
    if (!pass) continue;

    ProjectionResult res{.pmf = cand,
                         .multipliers = Eigen::VectorXd::Zero(J),
                         .iterations = total_iters};
    for (std::size_t a = 0; a < active.size(); ++a)
      res.multipliers(active[a]) = dual.lambda(a);
    res.residual = region.residual(cand);
    if (mode == Mode::IProj) {
      res.divergence = i_divergence(cand, base);
      res.dual_value = -dual.value;
      res.raw_dual = dual.value;
    } else {
      res.divergence = i_divergence(base, cand);
      res.dual_value = -dual.value;
      res.raw_dual = l_divergence(cand, base);
      res.boundary_proximity = dual.min_slack < 1e-6;
    }
    return res;
  }

  if (saw_boundary)
    throw DomainBoundaryError(
        "dual optimum pressed against the domain boundary 1 - lambda'u = 0 at "
        "atom " + std::to_string(boundary_atom),
        boundary_atom);
  throw MaxIterationsError(
      "no activity pattern satisfied the KKT screen within the iteration budget");
}

}  // namespace

ProjectionResult i_projection(const Pmf& q, const ConstraintRegion& region,
                              const NewtonOptions& opts) {
  return project(Mode::IProj, q, region, opts);
}

ProjectionResult l_projection(const Pmf& r, const ConstraintRegion& region,
                              const NewtonOptions& opts) {
  return project(Mode::LProj, r, region, opts);
}

FeasibilityReport feasibility_check(const ConstraintRegion& region) {
  SimplexFeasibility feas = simplex_feasible(region.u(), region.lower(),
                                             region.upper(), true);
  FeasibilityReport rep;
  rep.feasible = feas.feasible;
  if (feas.feasible) {
    std::vector<double> p(feas.witness.data(),
                          feas.witness.data() + feas.witness.size());
    rep.witness = Pmf(region.alphabet(), p);
    rep.strictly_interior = feas.margin > 1e-9;
  } else {
    rep.certificate = certificate_from(feas);
  }
  return rep;
}

}  // namespace typeproj
