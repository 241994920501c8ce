#pragma once

#include <optional>

#include "typeproj/constraint.hpp"
#include "typeproj/newton.hpp"
#include "typeproj/pmf.hpp"

namespace typeproj {

struct ProjectionResult {
  Pmf pmf;                      // the projection
  Eigen::VectorXd multipliers;  // one per constraint row, 0 on inactive rows
  double divergence = 0.0;      // primal route: I(p_hat||q) resp. I(r||q_hat)
  double dual_value = 0.0;      // same quantity through the dual route
  double raw_dual = 0.0;        // i: dual optimum (= -divergence);
                                // l: L(q_hat||r) = H(r) + divergence
  int iterations = 0;
  double residual = 0.0;        // max constraint violation of pmf
  bool boundary_proximity = false;  // l-projection: some 1 - lambda'u near 0
};

/// I-projection of q on the region: argmin_{p in region} I(p||q), computed
/// through the exponential-tilt dual min_l log sum_i q_i exp(-l'u_i).
ProjectionResult i_projection(const Pmf& q, const ConstraintRegion& region,
                              const NewtonOptions& opts = {});

/// L-projection of r on the region: argmin_{q in region} L(q||r), computed
/// through the dual min_l -sum_i r_i log(1 - l'u_i) on its open domain.
/// The divergence field stores I(r||q_hat) = L(q_hat||r) - H(r); raw_dual
/// stores the raw L-divergence.
ProjectionResult l_projection(const Pmf& r, const ConstraintRegion& region,
                              const NewtonOptions& opts = {});

struct FeasibilityReport {
  bool feasible = false;
  std::optional<Pmf> witness;  // strictly interior when one exists
  bool strictly_interior = false;
  InfeasibilityCertificate certificate;  // populated when infeasible
};

/// Linear feasibility of the region over the simplex (phase-one LP).
FeasibilityReport feasibility_check(const ConstraintRegion& region);

}  // namespace typeproj
