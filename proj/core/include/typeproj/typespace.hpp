#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "typeproj/constraint.hpp"
#include "typeproj/pmf.hpp"

namespace typeproj {

/// Membership test on types; must be pure and deterministic.
using TypePredicate = std::function<bool(const EmpiricalType&)>;

/// Feasibility slacks for evaluating a ConstraintRegion on the rational type
/// lattice. Equality rows use 0.5/n by default (the lattice generically
/// misses exact equality manifolds), interval rows 1e-9.
struct PredicateSlack {
  double interval = 1e-9;
  double equality_scale = 0.5;  // slack = equality_scale / n
};

TypePredicate region_predicate(ConstraintRegion region, PredicateSlack slack = {});

inline TypePredicate always_true() {
  return [](const EmpiricalType&) { return true; };
}

struct RatePoint {
  std::int64_t n = 0;
  double log_prob = 0.0;  // log pi(type in set; q), natural log
  double rate = 0.0;      // -log_prob / n
};

struct EnumerationOptions {
  double cap = 1e8;  // fail fast when C(n+m-1, m-1) exceeds this
  int threads = 1;   // partitions by first count; result is thread-count invariant
};

/// Number of types C(n+m-1, m-1) as a double (exact for desk-scale sizes).
double count_types(int m, std::int64_t n);

/// Visits every size-n type on the alphabet once, in lexicographically
/// decreasing count order, streaming (never materialized). Serial.
void for_each_type(const Alphabet& alphabet, std::int64_t n,
                   const std::function<void(const EmpiricalType&)>& visit,
                   double cap = 1e8);

/// Materialized enumeration, for small lattices.
std::vector<EmpiricalType> enumerate_types(const Alphabet& alphabet, std::int64_t n,
                                           double cap = 1e8);

/// log pi(t; q) = log n! - sum log n_i! + sum n_i log q_i; -inf iff the type
/// puts counts where q vanishes.
double log_type_prob(const EmpiricalType& t, const Pmf& q);

/// log sum over types satisfying pred of exp(log_type_prob); -inf when the
/// set is empty. Streaming log-sum-exp, deterministic across thread counts.
double prob_of_set(std::int64_t n, const Pmf& q, const TypePredicate& pred,
                   const EnumerationOptions& opts = {});

/// All feasible types attaining the maximal probability within absolute
/// log-tolerance 1e-9, in enumeration order. Ties are returned, not broken.
std::vector<EmpiricalType> maxprob_types(std::int64_t n, const Pmf& q,
                                         const TypePredicate& pred,
                                         const EnumerationOptions& opts = {});

std::vector<RatePoint> sanov_rate_curve(const std::vector<std::int64_t>& n_list,
                                        const Pmf& q, const TypePredicate& pred,
                                        const EnumerationOptions& opts = {});

/// Exact conditional probability that a type in the set lies within total
/// variation eps of center.
double clln_ball_mass(std::int64_t n, const Pmf& q, const TypePredicate& pred,
                      const Pmf& center, double eps,
                      const EnumerationOptions& opts = {});

/// Conditional mean type E[type | type in set] as a pmf (generally not a
/// lattice point, and outside the set when the set is non-convex).
Pmf mean_type(std::int64_t n, const Pmf& q, const TypePredicate& pred,
              const EnumerationOptions& opts = {});

}  // namespace typeproj
