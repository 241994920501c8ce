#include "typeproj/typespace.hpp"

#include <cmath>

#include "typeproj/divergences.hpp"
#include "typeproj/type_reduce.hpp"

namespace typeproj {

namespace detail {

void visit_compositions(std::vector<std::int64_t>& c, std::size_t idx,
                        std::int64_t rem,
                        const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  if (idx + 1 == c.size()) {
    c[idx] = rem;
    visit(c);
    return;
  }
  for (std::int64_t k = rem; k >= 0; --k) {
    c[idx] = k;
    visit_compositions(c, idx + 1, rem - k, visit);
  }
}

namespace {

// streaming log-sum-exp with a running maximum
struct Lse {
  double max = -kInf;
  double sum = 0.0;

  void add(double v) {
    if (v == -kInf) return;
    if (v <= max) {
      sum += std::exp(v - max);
    } else {
      sum = sum * std::exp(max - v) + 1.0;
      max = v;
    }
  }
  void merge(const Lse& o) {
    if (o.sum == 0.0) return;
    if (o.max <= max) {
      sum += o.sum * std::exp(o.max - max);
    } else {
      sum = sum * std::exp(max - o.max) + o.sum;
      max = o.max;
    }
  }
  double value() const { return sum == 0.0 ? -kInf : max + std::log(sum); }
};

}  // namespace
}  // namespace detail

TypePredicate region_predicate(ConstraintRegion region, PredicateSlack slack) {
  return [region = std::move(region), slack](const EmpiricalType& t) {
    const double eq = slack.equality_scale / static_cast<double>(t.n());
    return region.contains(t.pmf(), eq, slack.interval);
  };
}

double count_types(int m, std::int64_t n) {
  double c = 1.0;
  for (int k = 1; k <= m - 1; ++k)
    c *= static_cast<double>(n + k) / static_cast<double>(k);
  return c < 1e15 ? std::round(c) : c;
}

void for_each_type(const Alphabet& alphabet, std::int64_t n,
                   const std::function<void(const EmpiricalType&)>& visit,
                   double cap) {
  if (n < 1) throw ValidationError("n must be >= 1");
  const int m = static_cast<int>(alphabet.size());
  const double total = count_types(m, n);
  if (total > cap) throw ResourceCapError(total, cap);
  std::vector<std::int64_t> c(m);
  detail::visit_compositions(c, 0, n, [&](const std::vector<std::int64_t>& counts) {
    visit(EmpiricalType(alphabet, counts));
  });
}

std::vector<EmpiricalType> enumerate_types(const Alphabet& alphabet, std::int64_t n,
                                           double cap) {
  std::vector<EmpiricalType> out;
  for_each_type(alphabet, n, [&](const EmpiricalType& t) { out.push_back(t); }, cap);
  return out;
}

double log_type_prob(const EmpiricalType& t, const Pmf& q) {
  require_same_alphabet(t.alphabet(), q.alphabet());
  double lp = std::lgamma(static_cast<double>(t.n()) + 1.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::int64_t ni = t[i];
    if (ni == 0) continue;
    if (q[i] == 0.0) return -kInf;
    lp -= std::lgamma(static_cast<double>(ni) + 1.0);
    lp += static_cast<double>(ni) * std::log(q[i]);
  }
  return lp > 0.0 ? 0.0 : lp;
}

double prob_of_set(std::int64_t n, const Pmf& q, const TypePredicate& pred,
                   const EnumerationOptions& opts) {
  if (n < 1) throw ValidationError("n must be >= 1");
  auto acc = reduce_types(
      q.alphabet(), n, opts, detail::Lse{},
      [&](detail::Lse& a, const EmpiricalType& t) {
        if (pred(t)) a.add(log_type_prob(t, q));
      },
      [](detail::Lse& a, detail::Lse&& b) { a.merge(b); });
  return acc.value();
}

namespace {

constexpr double kTieTol = 1e-9;

struct MaxAcc {
  double best = -kInf;
  std::vector<std::vector<std::int64_t>> cands;
  std::vector<double> logs;

  void prune() {
    std::size_t w = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (logs[i] >= best - kTieTol) {
        if (w != i) {
          cands[w] = std::move(cands[i]);
          logs[w] = logs[i];
        }
        ++w;
      }
    }
    cands.resize(w);
    logs.resize(w);
  }
};

}  // namespace

std::vector<EmpiricalType> maxprob_types(std::int64_t n, const Pmf& q,
                                         const TypePredicate& pred,
                                         const EnumerationOptions& opts) {
  auto acc = reduce_types(
      q.alphabet(), n, opts, MaxAcc{},
      [&](MaxAcc& a, const EmpiricalType& t) {
        if (!pred(t)) return;
        const double lp = log_type_prob(t, q);
        if (lp < a.best - kTieTol) return;
        if (lp > a.best) a.best = lp;
        a.cands.push_back(t.counts());
        a.logs.push_back(lp);
        if (a.cands.size() > 4096) a.prune();
      },
      [](MaxAcc& a, MaxAcc&& b) {
        a.best = std::max(a.best, b.best);
        for (std::size_t i = 0; i < b.cands.size(); ++i) {
          a.cands.push_back(std::move(b.cands[i]));
          a.logs.push_back(b.logs[i]);
        }
      });
  acc.prune();
  if (acc.cands.empty())
    throw EmptySetError("no feasible type of size " + std::to_string(n));
  std::vector<EmpiricalType> out;
  out.reserve(acc.cands.size());
  for (auto& c : acc.cands) out.emplace_back(q.alphabet(), std::move(c));
  return out;
}

std::vector<RatePoint> sanov_rate_curve(const std::vector<std::int64_t>& n_list,
                                        const Pmf& q, const TypePredicate& pred,
                                        const EnumerationOptions& opts) {
  std::vector<RatePoint> out;
  out.reserve(n_list.size());
  for (std::int64_t n : n_list) {
    const double lp = prob_of_set(n, q, pred, opts);
    out.push_back({n, lp, lp == -kInf ? kInf : -lp / static_cast<double>(n)});
  }
  return out;
}

double clln_ball_mass(std::int64_t n, const Pmf& q, const TypePredicate& pred,
                      const Pmf& center, double eps,
                      const EnumerationOptions& opts) {
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  struct Acc {
    detail::Lse set, ball;
  };
  auto acc = reduce_types(
      q.alphabet(), n, opts, Acc{},
      [&](Acc& a, const EmpiricalType& t) {
        if (!pred(t)) return;
        const double lp = log_type_prob(t, q);
        a.set.add(lp);
        if (total_variation(t.pmf(), center) <= eps) a.ball.add(lp);
      },
      [](Acc& a, Acc&& b) {
        a.set.merge(b.set);
        a.ball.merge(b.ball);
      });
  const double ls = acc.set.value();
  if (ls == -kInf)
    throw EmptySetError("conditioning event has probability zero");
  const double lb = acc.ball.value();
  return lb == -kInf ? 0.0 : std::exp(lb - ls);
}

Pmf mean_type(std::int64_t n, const Pmf& q, const TypePredicate& pred,
              const EnumerationOptions& opts) {
  const std::size_t m = q.size();
  struct Acc {
    double max = -kInf;  // scale anchor: totals are e^max * (sum, vec)
    double sum = 0.0;
    std::vector<double> vec;
  };
  Acc init;
  init.vec.assign(m, 0.0);
  auto acc = reduce_types(
      q.alphabet(), n, opts, init,
      [&](Acc& a, const EmpiricalType& t) {
        if (!pred(t)) return;
        const double lp = log_type_prob(t, q);
        if (lp == -kInf) return;
        double w;
        if (lp <= a.max) {
          w = std::exp(lp - a.max);
        } else {
          const double f = std::exp(a.max - lp);
          a.sum *= f;
          for (auto& v : a.vec) v *= f;
          a.max = lp;
          w = 1.0;
        }
        a.sum += w;
        for (std::size_t i = 0; i < m; ++i)
          a.vec[i] += w * static_cast<double>(t[i]) / static_cast<double>(n);
      },
      [m](Acc& a, Acc&& b) {
        if (b.sum == 0.0) return;
        const double f = std::exp(std::min(b.max - a.max, 0.0));
        const double g = std::exp(std::min(a.max - b.max, 0.0));
        if (b.max > a.max) {
          a.sum *= g;
          for (auto& v : a.vec) v *= g;
          a.max = b.max;
          a.sum += b.sum;
          for (std::size_t i = 0; i < m; ++i) a.vec[i] += b.vec[i];
        } else {
          a.sum += b.sum * f;
          for (std::size_t i = 0; i < m; ++i) a.vec[i] += b.vec[i] * f;
        }
      });
  if (acc.sum == 0.0)
    throw EmptySetError("conditioning event has probability zero");
  std::vector<double> p(m);
  for (std::size_t i = 0; i < m; ++i) p[i] = acc.vec[i] / acc.sum;
  double total = 0.0;
  for (double v : p) total += v;
  std::size_t imax = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (p[i] > p[imax]) imax = i;
  p[imax] += 1.0 - total;
  return Pmf(q.alphabet(), std::move(p));
}

}  // namespace typeproj
