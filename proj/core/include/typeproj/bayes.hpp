#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "typeproj/constraint.hpp"
#include "typeproj/pmf.hpp"
#include "typeproj/typespace.hpp"

namespace typeproj {

/// Finite list of candidate sampling distributions with strictly positive
/// prior weights, normalized so log-sum-exp of log_weights is 0.
class PriorGrid {
 public:
  PriorGrid(std::vector<Pmf> candidates, std::vector<double> log_weights);
  static PriorGrid uniform(std::vector<Pmf> candidates);

  std::size_t size() const { return candidates_.size(); }
  const Pmf& candidate(std::size_t i) const { return candidates_[i]; }
  const std::vector<Pmf>& candidates() const { return candidates_; }
  double log_weight(std::size_t i) const { return log_weights_[i]; }
  const std::vector<double>& log_weights() const { return log_weights_; }
  const Alphabet& alphabet() const { return candidates_.front().alphabet(); }

 private:
  std::vector<Pmf> candidates_;
  std::vector<double> log_weights_;
};

struct PosteriorReport {
  std::vector<double> log_posterior;       // normalized (log-sum-exp = 0)
  std::vector<std::size_t> map_indices;    // argmax prior + likelihood, ties kept
  std::vector<std::size_t> mnpl_indices;   // argmax likelihood, ties kept
  std::int64_t n = 0;
};

/// Log likelihood of the sample through its type: sum_i n_i log q_i,
/// -inf on support violation.
double log_likelihood(const Pmf& q, const EmpiricalType& t);

PosteriorReport posterior(const PriorGrid& prior, const EmpiricalType& t);

/// Exact mode sums the statistic over the whole size-n type lattice weighted
/// by the type probabilities under r; Path evaluates it along one seeded
/// i.i.d. sample path.
enum class SampleMode { Exact, Path };

struct BstResult {
  double empirical_rate = 0.0;    // (1/n) log posterior-mass(Q)
  double theoretical_rate = 0.0;  // -(L(Q||r) - L(Phi||r)) on the grid
};

BstResult bst_rate(const PriorGrid& prior, const std::vector<std::size_t>& subset,
                   const Pmf& r, std::int64_t n, SampleMode mode,
                   std::uint64_t seed = 0, const EnumerationOptions& opts = {});

/// Posterior mass of the TV eps-ball around center (default: the grid
/// candidate minimizing L-divergence against r).
double blln_ball_mass(const PriorGrid& prior, const Pmf& r, std::int64_t n,
                      double eps, std::optional<Pmf> center, SampleMode mode,
                      std::uint64_t seed = 0, const EnumerationOptions& opts = {});

/// Index of the grid L-projection of r (smallest index on ties).
std::size_t grid_l_projection_index(const PriorGrid& prior, const Pmf& r);

/// Seeded i.i.d. draws from r via a SplitMix64 generator (64-bit state;
/// uniforms are (next() >> 11) * 2^-53, mapped through the cdf).
Sample draw_iid(const Pmf& r, std::int64_t n, std::uint64_t seed);

/// All pmfs with entries k_i/steps on the simplex mesh of the given step
/// (steps = round(1/step)), optionally filtered by a constraint region with
/// the lattice slacks of region_predicate.
std::vector<Pmf> simplex_grid(const Alphabet& alphabet, double step = 0.05,
                              const ConstraintRegion* filter = nullptr,
                              PredicateSlack slack = {});

}  // namespace typeproj
