#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "typeproj/bayes.hpp"
#include "typeproj/divergences.hpp"

using namespace typeproj;

namespace {

Alphabet abc3() { return Alphabet({0.0, 1.0, 2.0}); }

Pmf pmf3(double a, double b, double c) { return Pmf(abc3(), {a, b, c}); }

Pmf random_pmf(std::mt19937_64& rng, int m = 3) {
  std::uniform_real_distribution<double> ud(0.05, 1.0);
  std::vector<double> p(m);
  double s = 0.0;
  for (auto& v : p) s += (v = ud(rng));
  double defect = 1.0;
  int big = 0;
  for (int i = 0; i < m; ++i) {
    p[i] /= s;
    defect -= p[i];
    if (p[i] > p[big]) big = i;
  }
  p[big] += defect;
  std::vector<double> pts(m);
  for (int i = 0; i < m; ++i) pts[i] = i;
  return Pmf(Alphabet(pts), p);
}

// the fixed misspecified 25-candidate grid used by the BLLN checks:
// a 7-point cluster around the L-projection of r = (0.2, 0.3, 0.5) plus 18
// distant candidates
PriorGrid misspecified_grid() {
  const std::vector<std::vector<double>> pts = {
      {0.21, 0.31, 0.48}, {0.24, 0.31, 0.45}, {0.18, 0.31, 0.51},
      {0.21, 0.34, 0.45}, {0.21, 0.28, 0.51}, {0.24, 0.28, 0.48},
      {0.18, 0.34, 0.48}, {0.05, 0.05, 0.90}, {0.05, 0.35, 0.60},
      {0.05, 0.65, 0.30}, {0.35, 0.05, 0.60}, {0.35, 0.35, 0.30},
      {0.65, 0.05, 0.30}, {0.10, 0.10, 0.80}, {0.10, 0.80, 0.10},
      {0.80, 0.10, 0.10}, {0.50, 0.10, 0.40}, {0.10, 0.50, 0.40},
      {0.40, 0.50, 0.10}, {0.50, 0.40, 0.10}, {0.45, 0.45, 0.10},
      {0.05, 0.50, 0.45}, {0.50, 0.05, 0.45}, {0.30, 0.60, 0.10},
      {0.60, 0.30, 0.10}};
  std::vector<Pmf> cands;
  for (const auto& p : pts) cands.emplace_back(abc3(), p);
  return PriorGrid::uniform(std::move(cands));
}

}  // namespace

TEST_CASE("prior grid validation and normalization") {
  CHECK_THROWS_AS(PriorGrid({}, {}), ValidationError);
  CHECK_THROWS_AS(
      PriorGrid({pmf3(0.2, 0.3, 0.5)}, {-kInf}),  // zero prior weight
      ValidationError);
  const PriorGrid g({pmf3(0.2, 0.3, 0.5), pmf3(0.5, 0.3, 0.2)}, {0.0, -1.0});
  const double lse = std::log(std::exp(g.log_weight(0)) + std::exp(g.log_weight(1)));
  CHECK(std::abs(lse) <= 1e-12);
}

TEST_CASE("log_likelihood hand values") {
  const EmpiricalType t(Alphabet({0.0, 1.0}), {3, 2});
  const Pmf q(Alphabet({0.0, 1.0}), {0.4, 0.6});
  CHECK(log_likelihood(q, t) ==
        doctest::Approx(3 * std::log(0.4) + 2 * std::log(0.6)).epsilon(1e-14));
  // uniform q: -n log m for any type
  const EmpiricalType t3(abc3(), {2, 2, 1});
  CHECK(log_likelihood(Pmf::uniform(abc3()), t3) ==
        doctest::Approx(-5 * std::log(3.0)).epsilon(1e-14));
  // support violation
  CHECK(log_likelihood(pmf3(0.0, 0.5, 0.5), EmpiricalType(abc3(), {1, 0, 1})) ==
        -kInf);
}

TEST_CASE("posterior against direct evaluation") {
  const PriorGrid g({pmf3(0.2, 0.3, 0.5), pmf3(0.4, 0.4, 0.2)},
                    {std::log(0.3), std::log(0.7)});
  const EmpiricalType t(abc3(), {4, 3, 3});
  const auto rep = posterior(g, t);
  // independent direct evaluation
  const double a = std::log(0.3) + log_likelihood(g.candidate(0), t);
  const double b = std::log(0.7) + log_likelihood(g.candidate(1), t);
  const double z = std::max(a, b) +
                   std::log(std::exp(a - std::max(a, b)) +
                            std::exp(b - std::max(a, b)));
  CHECK(rep.log_posterior[0] == doctest::Approx(a - z).epsilon(1e-12));
  CHECK(rep.log_posterior[1] == doctest::Approx(b - z).epsilon(1e-12));
  const double lse = std::log(std::exp(rep.log_posterior[0]) +
                              std::exp(rep.log_posterior[1]));
  CHECK(std::abs(lse) <= 1e-10);

  // singleton grid: posterior 1
  const PriorGrid single({pmf3(0.2, 0.3, 0.5)}, {0.0});
  const auto srep = posterior(single, t);
  CHECK(srep.log_posterior[0] == doctest::Approx(0.0));
  CHECK(srep.map_indices == std::vector<std::size_t>{0});

  // every candidate missing support -> typed error
  const PriorGrid bad({pmf3(0.0, 0.5, 0.5)}, {0.0});
  CHECK_THROWS_AS(posterior(bad, EmpiricalType(abc3(), {1, 1, 1})),
                  EmptySetError);
}

TEST_CASE("posterior depends on the sample only through its type") {
  const PriorGrid g = misspecified_grid();
  Sample s1(abc3(), {0, 1, 2, 2, 1, 0, 2});
  Sample s2(abc3(), {2, 2, 2, 1, 1, 0, 0});  // a permutation
  const auto r1 = posterior(g, s1.type());
  const auto r2 = posterior(g, s2.type());
  CHECK(r1.log_posterior == r2.log_posterior);
}

TEST_CASE("uniform-prior MAP equals MNPL on 100 random instances") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Pmf> cands;
    const int k = 2 + static_cast<int>(rng() % 8);
    for (int i = 0; i < k; ++i) cands.push_back(random_pmf(rng));
    const PriorGrid g = PriorGrid::uniform(std::move(cands));
    std::vector<std::int64_t> counts(3, 0);
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 40);
    for (std::int64_t j = 0; j < n; ++j) ++counts[rng() % 3];
    const auto rep = posterior(g, EmpiricalType(abc3(), counts));
    CHECK(rep.map_indices == rep.mnpl_indices);
  }
}

TEST_CASE("draw_iid is seeded and consistent") {
  const Pmf r = pmf3(0.2, 0.3, 0.5);
  const Sample a = draw_iid(r, 1000, 42);
  const Sample b = draw_iid(r, 1000, 42);
  CHECK(a.draws() == b.draws());
  const Sample c = draw_iid(r, 1000, 43);
  CHECK(a.draws() != c.draws());
  // law of large numbers sanity
  const auto t = draw_iid(r, 200000, 7).type();
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(t.pmf()[i] - r[i]) < 0.01);
}

TEST_CASE("grid L-projection index") {
  const Pmf r = pmf3(0.2, 0.3, 0.5);
  const PriorGrid g = misspecified_grid();
  const std::size_t idx = grid_l_projection_index(g, r);
  // brute force
  double best = kInf;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = l_divergence(g.candidate(i), r);
    if (v < best) {
      best = v;
      arg = i;
    }
  }
  CHECK(idx == arg);
  CHECK(idx == 0);  // the cluster center (0.21, 0.31, 0.48)
}

TEST_CASE("bst_rate trivial and two-candidate instances") {
  const Pmf r = pmf3(0.2, 0.3, 0.5);
  const Pmf qp = pmf3(0.3, 0.3, 0.4);
  const PriorGrid g = PriorGrid::uniform({r, qp});

  // Q = full grid: mass 1 always
  const auto full = bst_rate(g, {0, 1}, r, 50, SampleMode::Exact);
  CHECK(std::abs(full.empirical_rate) <= 1e-12);
  CHECK(std::abs(full.theoretical_rate) <= 1e-12);

  // Q = {q'}: theoretical rate = -I(r||q')
  const auto two = bst_rate(g, {1}, r, 200, SampleMode::Exact);
  CHECK(two.theoretical_rate ==
        doctest::Approx(-i_divergence(r, qp)).epsilon(1e-12));
  // frozen exact-mode value at n = 200 from the independent summation script
  CHECK(two.empirical_rate == doctest::Approx(-0.030964995833186165).epsilon(1e-8));
  CHECK(std::abs(two.empirical_rate - two.theoretical_rate) < 5e-4);
}

TEST_CASE("exact-mode bst_rate equals the prob-weighted path average, small n") {
  const Pmf r = pmf3(0.2, 0.3, 0.5);
  const PriorGrid g = PriorGrid::uniform({r, pmf3(0.3, 0.3, 0.4)});
  const std::int64_t n = 6;
  const auto exact = bst_rate(g, {1}, r, n, SampleMode::Exact);
  // independent finite enumeration of the same expectation
  double acc = 0.0;
  for_each_type(abc3(), n, [&](const EmpiricalType& t) {
    const double lp = log_type_prob(t, r);
    const auto rep = posterior(g, t);
    acc += std::exp(lp) * rep.log_posterior[1] / static_cast<double>(n);
  });
  CHECK(exact.empirical_rate == doctest::Approx(acc).epsilon(1e-10));
}

TEST_CASE("blln_ball_mass basics and monotonicity in eps") {
  const Pmf r = pmf3(0.2, 0.3, 0.5);
  const PriorGrid g = misspecified_grid();
  // eps >= 1 covers every candidate
  CHECK(blln_ball_mass(g, r, 50, 1.0, std::nullopt, SampleMode::Exact) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // singleton grid
  const PriorGrid single({r}, {0.0});
  CHECK(blln_ball_mass(single, r, 30, 0.01, std::nullopt, SampleMode::Exact) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // nondecreasing in eps
  double prev = 0.0;
  for (double eps : {0.02, 0.05, 0.1, 0.3}) {
    const double mass =
        blln_ball_mass(g, r, 100, eps, std::nullopt, SampleMode::Exact);
    CHECK(mass >= prev - 1e-12);
    CHECK(mass <= 1.0 + 1e-12);
    prev = mass;
  }
}

TEST_CASE("blln concentration trajectory on the misspecified grid") {
  const Pmf r = pmf3(0.2, 0.3, 0.5);
  const PriorGrid g = misspecified_grid();
  double prev = 0.0;
  double at200 = 0.0;
  for (std::int64_t n : {50, 100, 200}) {
    const double mass =
        blln_ball_mass(g, r, n, 0.05, std::nullopt, SampleMode::Exact);
    CHECK(mass >= prev - 0.01);  // one lattice wobble allowed by contract
    prev = mass;
    if (n == 200) at200 = mass;
  }
  CHECK(at200 >= 0.95);
  // path mode agrees loosely at n = 200 for a fixed seed
  const double path =
      blln_ball_mass(g, r, 200, 0.05, std::nullopt, SampleMode::Path, 11);
  CHECK(path >= 0.5);
  CHECK(path <= 1.0 + 1e-12);
}

TEST_CASE("simplex_grid") {
  const auto grid = simplex_grid(abc3(), 0.2);
  CHECK(grid.size() == 21);  // C(5+2, 2)
  for (const auto& p : grid) {
    double s = 0.0;
    for (double v : p.probs()) s += v;
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  // filtered by a mean constraint
  Eigen::MatrixXd u(1, 3);
  u << 0, 1, 2;
  Eigen::VectorXd lo(1), hi(1);
  lo << 1.4;
  hi << kInf;
  ConstraintRegion reg(abc3(), u, lo, hi);
  const auto sub = simplex_grid(abc3(), 0.2, &reg);
  CHECK(!sub.empty());
  CHECK(sub.size() < grid.size());
  for (const auto& p : sub) CHECK(p.mean() >= 1.4 - 1e-9);
}
