#include "typeproj/bayes.hpp"

#include <algorithm>
#include <cmath>

#include "typeproj/divergences.hpp"
#include "typeproj/type_reduce.hpp"

namespace typeproj {

namespace {

constexpr double kArgmaxTol = 1e-9;

double log_sum_exp(const std::vector<double>& v) {
  double mx = -kInf;
  for (double x : v) mx = std::max(mx, x);
  if (mx == -kInf) return -kInf;
  double s = 0.0;
  for (double x : v)
    if (x != -kInf) s += std::exp(x - mx);
  return mx + std::log(s);
}

std::vector<std::size_t> argmax_set(const std::vector<double>& v) {
  double best = -kInf;
  for (double x : v) best = std::max(best, x);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] >= best - kArgmaxTol) out.push_back(i);
  return out;
}

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

PriorGrid::PriorGrid(std::vector<Pmf> candidates, std::vector<double> log_weights)
    : candidates_(std::move(candidates)), log_weights_(std::move(log_weights)) {
  if (candidates_.empty()) throw ValidationError("prior grid is empty");
  if (log_weights_.size() != candidates_.size())
    throw ValidationError("prior weight count does not match candidate count");
  for (double lw : log_weights_) {
    if (!std::isfinite(lw))
      throw ValidationError("prior weights must be strictly positive");
  }
  for (std::size_t i = 1; i < candidates_.size(); ++i)
    require_same_alphabet(candidates_[i].alphabet(), candidates_[0].alphabet());
  const double lz = log_sum_exp(log_weights_);
  for (double& lw : log_weights_) lw -= lz;
}

PriorGrid PriorGrid::uniform(std::vector<Pmf> candidates) {
  std::vector<double> lw(candidates.size(), 0.0);
  return PriorGrid(std::move(candidates), std::move(lw));
}

double log_likelihood(const Pmf& q, const EmpiricalType& t) {
  require_same_alphabet(q.alphabet(), t.alphabet());
  double ll = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 0) continue;
    if (q[i] == 0.0) return -kInf;
    ll += static_cast<double>(t[i]) * std::log(q[i]);
  }
  return ll;
}

PosteriorReport posterior(const PriorGrid& prior, const EmpiricalType& t) {
  const std::size_t G = prior.size();
  std::vector<double> loglik(G), unnorm(G);
  for (std::size_t i = 0; i < G; ++i) {
    loglik[i] = log_likelihood(prior.candidate(i), t);
    unnorm[i] = loglik[i] == -kInf ? -kInf : prior.log_weight(i) + loglik[i];
  }
  const double lz = log_sum_exp(unnorm);
  if (lz == -kInf)
    throw EmptySetError("every grid candidate has zero likelihood for this type");
  PosteriorReport rep;
  rep.n = t.n();
  rep.log_posterior.resize(G);
  for (std::size_t i = 0; i < G; ++i)
    rep.log_posterior[i] = unnorm[i] == -kInf ? -kInf : unnorm[i] - lz;
  rep.map_indices = argmax_set(unnorm);
  rep.mnpl_indices = argmax_set(loglik);
  return rep;
}

std::size_t grid_l_projection_index(const PriorGrid& prior, const Pmf& r) {
  std::size_t best = 0;
  double bestv = kInf;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    const double v = l_divergence(prior.candidate(i), r);
    if (v < bestv) {
      bestv = v;
      best = i;
    }
  }
  return best;
}

Sample draw_iid(const Pmf& r, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample size must be >= 1");
  std::vector<double> cdf(r.size());
  double c = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    c += r[i];
    cdf[i] = c;
  }
  cdf.back() = 1.0;
  SplitMix64 rng{seed};
  std::vector<std::size_t> draws(static_cast<std::size_t>(n));
  for (auto& d : draws) {
    const double u = rng.uniform();
    d = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (d >= r.size()) d = r.size() - 1;
  }
  return Sample(r.alphabet(), std::move(draws));
}

namespace {

// exact expectation over the type lattice of a per-type statistic; the
// expectation collapses over samples because the posterior is a function of
// the type alone
template <class Stat>
double exact_expectation(const Pmf& r, std::int64_t n,
                         const EnumerationOptions& opts, Stat stat) {
  struct Acc {
    double wsum = 0.0;   // accumulated type probability (tends to 1)
    double vsum = 0.0;   // weighted statistic
    bool minus_inf = false;
  };
  auto acc = reduce_types(
      r.alphabet(), n, opts, Acc{},
      [&](Acc& a, const EmpiricalType& t) {
        const double lp = log_type_prob(t, r);
        if (lp == -kInf) return;
        const double w = std::exp(lp);
        const double v = stat(t);
        if (v == -kInf) {
          a.minus_inf = true;
          return;
        }
        a.wsum += w;
        a.vsum += w * v;
      },
      [](Acc& a, Acc&& b) {
        a.wsum += b.wsum;
        a.vsum += b.vsum;
        a.minus_inf |= b.minus_inf;
      });
  if (acc.minus_inf) return -kInf;
  if (acc.wsum <= 0.0) throw EmptySetError("no type carries probability under r");
  return acc.vsum / acc.wsum;
}

}  // namespace

BstResult bst_rate(const PriorGrid& prior, const std::vector<std::size_t>& subset,
                   const Pmf& r, std::int64_t n, SampleMode mode,
                   std::uint64_t seed, const EnumerationOptions& opts) {
  if (subset.empty()) throw ValidationError("subset Q is empty");
  std::vector<bool> in_q(prior.size(), false);
  for (std::size_t i : subset) {
    if (i >= prior.size()) throw ValidationError("subset index out of range");
    in_q[i] = true;
  }
  require_same_alphabet(prior.alphabet(), r.alphabet());

  auto stat = [&](const EmpiricalType& t) -> double {
    PosteriorReport rep;
    try {
      rep = posterior(prior, t);
    } catch (const EmptySetError&) {
      return -kInf;  // the posterior is degenerate along this type
    }
    std::vector<double> members;
    for (std::size_t i = 0; i < prior.size(); ++i)
      if (in_q[i]) members.push_back(rep.log_posterior[i]);
    const double mass = log_sum_exp(members);
    return mass == -kInf ? -kInf : mass / static_cast<double>(n);
  };

  BstResult out;
  if (mode == SampleMode::Exact) {
    out.empirical_rate = exact_expectation(r, n, opts, stat);
  } else {
    out.empirical_rate = stat(draw_iid(r, n, seed).type());
  }

  // companion value, computed on the same grid as the posterior
  double l_q = kInf, l_phi = kInf;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    const double v = l_divergence(prior.candidate(i), r);
    l_phi = std::min(l_phi, v);
    if (in_q[i]) l_q = std::min(l_q, v);
  }
  out.theoretical_rate = -(l_q - l_phi);
  return out;
}

double blln_ball_mass(const PriorGrid& prior, const Pmf& r, std::int64_t n,
                      double eps, std::optional<Pmf> center, SampleMode mode,
                      std::uint64_t seed, const EnumerationOptions& opts) {
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  require_same_alphabet(prior.alphabet(), r.alphabet());
  const Pmf c =
      center ? *center : prior.candidate(grid_l_projection_index(prior, r));

  std::vector<bool> in_ball(prior.size());
  for (std::size_t i = 0; i < prior.size(); ++i)
    in_ball[i] = total_variation(prior.candidate(i), c) <= eps;

  auto stat = [&](const EmpiricalType& t) -> double {
    PosteriorReport rep;
    try {
      rep = posterior(prior, t);
    } catch (const EmptySetError&) {
      return 0.0;
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < prior.size(); ++i)
      if (in_ball[i] && rep.log_posterior[i] != -kInf)
        mass += std::exp(rep.log_posterior[i]);
    return std::min(mass, 1.0);
  };

  if (mode == SampleMode::Exact) return exact_expectation(r, n, opts, stat);
  return stat(draw_iid(r, n, seed).type());
}

std::vector<Pmf> simplex_grid(const Alphabet& alphabet, double step,
                              const ConstraintRegion* filter,
                              PredicateSlack slack) {
  if (!(step > 0.0 && step <= 0.5))
    throw ValidationError("grid step must lie in (0, 0.5]");
  const std::int64_t k = std::llround(1.0 / step);
  std::vector<Pmf> out;
  for_each_type(alphabet, k, [&](const EmpiricalType& t) {
    Pmf p = t.pmf();
    if (filter) {
      const double eq = slack.equality_scale / static_cast<double>(k);
      if (!filter->contains(p, eq, slack.interval)) return;
    }
    out.push_back(std::move(p));
  });
  return out;
}

}  // namespace typeproj
