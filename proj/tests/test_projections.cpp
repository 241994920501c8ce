#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "typeproj/divergences.hpp"
#include "typeproj/projections.hpp"
#include "typeproj/simplex_lp.hpp"

using namespace typeproj;

namespace {

Alphabet abc(int m) {
  std::vector<double> pts(m);
  for (int i = 0; i < m; ++i) pts[i] = i;
  return Alphabet(pts);
}

Pmf pmf3(double a, double b, double c) { return Pmf(abc(3), {a, b, c}); }

ConstraintRegion mean_region(int m, double lo, double hi) {
  Eigen::MatrixXd u(1, m);
  for (int i = 0; i < m; ++i) u(0, i) = i;
  Eigen::VectorXd l(1), h(1);
  l << lo;
  h << hi;
  return ConstraintRegion(abc(m), u, l, h);
}

Pmf random_pmf(std::mt19937_64& rng, int m) {
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
  return Pmf(abc(m), p);
}

}  // namespace

TEST_CASE("dense simplex LP") {
  // min -x1 - x2 s.t. x1 + 2 x2 + s = 4, x1 + s2 = 3, x >= 0
  Eigen::MatrixXd A(2, 4);
  A << 1, 2, 1, 0, 1, 0, 0, 1;
  Eigen::VectorXd b(2), c(4);
  b << 4, 3;
  c << -1, -1, 0, 0;
  const auto r = solve_lp(A, b, c);
  REQUIRE(r.status == LpResult::Status::Optimal);
  CHECK(r.objective == doctest::Approx(-3.5));
  CHECK(r.x(0) == doctest::Approx(3.0));
  CHECK(r.x(1) == doctest::Approx(0.5));

  // infeasible: x1 = 1, x1 = 2 -> Farkas certificate
  Eigen::MatrixXd A2(2, 1);
  A2 << 1, 1;
  Eigen::VectorXd b2(2), c2(1);
  b2 << 1, 2;
  c2 << 0;
  const auto r2 = solve_lp(A2, b2, c2);
  REQUIRE(r2.status == LpResult::Status::Infeasible);
  const Eigen::VectorXd y = r2.farkas;
  REQUIRE(y.size() == 2);
  CHECK((y.transpose() * A2)(0) <= 1e-8);
  CHECK(y.dot(b2) > 1e-8);

  // unbounded: min -x, x free-ish (only x >= 0)
  Eigen::MatrixXd A3(1, 2);
  A3 << 0, 1;
  Eigen::VectorXd b3(1), c3(2);
  b3 << 1;
  c3 << -1, 0;
  CHECK(solve_lp(A3, b3, c3).status == LpResult::Status::Unbounded);
}

TEST_CASE("simplex feasibility with witness and certificate") {
  // feasible: mean in [1.2, 1.6] on (0,1,2)
  Eigen::MatrixXd U(1, 3);
  U << 0, 1, 2;
  Eigen::VectorXd lo(1), hi(1);
  lo << 1.2;
  hi << 1.6;
  const auto f = simplex_feasible(U, lo, hi);
  REQUIRE(f.feasible);
  double s = 0.0, mean = 0.0;
  for (int i = 0; i < 3; ++i) {
    CHECK(f.witness(i) >= 0.0);
    s += f.witness(i);
    mean += i * f.witness(i);
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mean >= 1.2 - 1e-8);
  CHECK(mean <= 1.6 + 1e-8);
  CHECK(f.margin > 0.0);

  // infeasible: mean = 2.5 exceeds the max outcome
  lo << 2.5;
  hi << 2.5;
  const auto g = simplex_feasible(U, lo, hi);
  REQUIRE(!g.feasible);
  CHECK(g.farkas_gap > 0.0);
}

TEST_CASE("feasibility_check") {
  const auto ok = feasibility_check(mean_region(3, 1.2, 1.6));
  REQUIRE(ok.feasible);
  REQUIRE(ok.witness.has_value());
  CHECK(ok.strictly_interior);
  CHECK(mean_region(3, 1.2, 1.6).residual(*ok.witness) <= 1e-8);

  // zero-row region: feasible with any witness
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(1, 3);
  Eigen::VectorXd lo(1), hi(1);
  lo << -1.0;
  hi << 1.0;
  const auto zr = feasibility_check(ConstraintRegion(abc(3), z, lo, hi));
  CHECK(zr.feasible);

  // alphabet (0,1), E[x] = 2: infeasible
  const auto bad = feasibility_check(mean_region(2, 2.0, 2.0));
  CHECK(!bad.feasible);
  CHECK(bad.certificate.gap > 0.0);

  // random feasible m=5 instances: witness residual
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Pmf inner = random_pmf(rng, 5);
    Eigen::MatrixXd U(2, 5);
    std::normal_distribution<double> nd;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 5; ++c) U(r, c) = nd(rng);
    Eigen::VectorXd mom = U * Eigen::Map<const Eigen::VectorXd>(
                                  inner.probs().data(), 5);
    ConstraintRegion reg(abc(5), U, mom.array() - 0.05, mom.array() + 0.05);
    const auto rep = feasibility_check(reg);
    REQUIRE(rep.feasible);
    CHECK(reg.residual(*rep.witness) <= 1e-8);
  }
}

TEST_CASE("i_projection trivial and binary cases") {
  // q already in the region
  const Pmf q = pmf3(0.2, 0.3, 0.5);
  const auto id = i_projection(q, mean_region(3, 1.0, 2.0));
  CHECK(id.divergence <= 1e-12);
  CHECK(id.multipliers.norm() <= 1e-8);
  CHECK(total_variation(id.pmf, q) <= 1e-9);

  // binary mean constraint determines the pmf
  const auto bin = i_projection(Pmf::uniform(abc(2)), mean_region(2, 0.7, 0.7));
  CHECK(bin.pmf[0] == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(bin.pmf[1] == doctest::Approx(0.7).epsilon(1e-9));
  const double expect = 0.3 * std::log(0.6) + 0.7 * std::log(1.4);
  CHECK(bin.divergence == doctest::Approx(expect).epsilon(1e-10));
  CHECK(std::abs(bin.divergence - bin.dual_value) <= 1e-6);
  CHECK(bin.residual <= 1e-8);
}

TEST_CASE("i_projection reference instance and frozen values") {
  const Pmf q = pmf3(0.2, 0.3, 0.5);
  const auto r = i_projection(q, mean_region(3, 1.4, kInf));
  CHECK(r.divergence == doctest::Approx(0.008425295068641495).epsilon(1e-8));
  CHECK(r.pmf[0] == doctest::Approx(0.15873583380099209).epsilon(1e-7));
  CHECK(r.pmf[1] == doctest::Approx(0.28252833239801582).epsilon(1e-7));
  CHECK(r.pmf[2] == doctest::Approx(0.55873583380099209).epsilon(1e-7));
  CHECK(r.residual <= 1e-8);
}

TEST_CASE("i_projection matches the 1e-4 grid oracle") {
  // equality version: E[x] = 1.4 under uniform q
  const Pmf q = Pmf::uniform(abc(3));
  const auto r = i_projection(q, mean_region(3, 1.4, 1.4));
  const double grid = oracles::grid_min_m3(
      [](const std::vector<double>& p) {
        return std::abs(p[1] + 2.0 * p[2] - 1.4) <= 1e-12;
      },
      [&](const std::vector<double>& p) {
        return i_divergence(Pmf(abc(3), p), q);
      },
      1e-4);
  CHECK(std::abs(r.divergence - grid) <= 1e-5);
}

TEST_CASE("l_projection trivial, binary, and grid oracle") {
  const Pmf r = pmf3(0.2, 0.3, 0.5);
  // r already in the region
  const auto id = l_projection(r, mean_region(3, 1.0, 2.0));
  CHECK(id.divergence <= 1e-10);
  CHECK(total_variation(id.pmf, r) <= 1e-8);
  // raw_dual stores the L-divergence = H(r) at the identity
  CHECK(id.raw_dual == doctest::Approx(shannon_entropy(r)).epsilon(1e-9));

  // binary: constraint determines q_hat regardless of r
  const Pmf r2(abc(2), {0.6, 0.4});
  const auto bin = l_projection(r2, mean_region(2, 0.7, 0.7));
  CHECK(bin.pmf[0] == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(bin.pmf[1] == doctest::Approx(0.7).epsilon(1e-9));

  // m=3 equality E[x] = 0.8, grid oracle on L(.||r)
  const auto pr = l_projection(r, mean_region(3, 0.8, 0.8));
  CHECK(std::abs(pr.divergence - pr.dual_value) <= 1e-6);
  CHECK(pr.residual <= 1e-8);
  const double grid = oracles::grid_min_m3(
      [](const std::vector<double>& p) {
        return std::abs(p[1] + 2.0 * p[2] - 0.8) <= 1e-12;
      },
      [&](const std::vector<double>& p) {
        return l_divergence(Pmf(abc(3), p), r);
      },
      1e-4);
  CHECK(std::abs(pr.raw_dual - grid) <= 1e-4);
}

TEST_CASE("strong duality on 100 random feasible instances, both projections") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> md(3, 10);
  std::normal_distribution<double> nd;
  int done = 0;
  while (done < 100) {
    const int m = md(rng);
    const int J = 1 + static_cast<int>(rng() % 3);
    const Pmf base = random_pmf(rng, m);
    const Pmf inner = random_pmf(rng, m);
    Eigen::MatrixXd U(J, m);
    for (int r = 0; r < J; ++r)
      for (int c = 0; c < m; ++c) U(r, c) = nd(rng);
    Eigen::VectorXd mom = U * Eigen::Map<const Eigen::VectorXd>(
                                  inner.probs().data(), m);
    Eigen::VectorXd lo(J), hi(J);
    for (int r = 0; r < J; ++r) {
      if (rng() % 2 == 0) {
        lo(r) = hi(r) = mom(r);  // equality row
      } else {
        lo(r) = mom(r) - 0.05;
        hi(r) = mom(r) + 0.1;
      }
    }
    ConstraintRegion reg(abc(m), U, lo, hi);
    const auto ip = i_projection(base, reg);
    CHECK(std::abs(ip.divergence - ip.dual_value) <= 1e-6);
    CHECK(ip.residual <= 1e-8);
    double s = 0.0;
    for (double v : ip.pmf.probs()) s += v;
    CHECK(std::abs(s - 1.0) <= 1e-10);

    const auto lp = l_projection(base, reg);
    CHECK(std::abs(lp.divergence - lp.dual_value) <= 1e-6);
    CHECK(lp.residual <= 1e-8);
    s = 0.0;
    for (double v : lp.pmf.probs()) s += v;
    CHECK(std::abs(s - 1.0) <= 1e-10);
    ++done;
  }
}

TEST_CASE("Pythagorean dominance for equality regions") {
  const Pmf q = pmf3(0.2, 0.3, 0.5);
  auto reg = mean_region(3, 1.4, 1.4);
  const auto proj = i_projection(q, reg);
  // feasible points: p = (a, b, c) with b + 2c = 1.4
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ud(0.01, 0.69);
  for (int trial = 0; trial < 50; ++trial) {
    const double c = 0.36 + (ud(rng) - 0.01) * 0.45;  // c in (0.35, 0.7)
    const double b = 1.4 - 2.0 * c;
    if (b <= 0.0 || b + c >= 1.0) continue;
    const Pmf p = pmf3(1.0 - b - c, b, c);
    CHECK(i_divergence(p, q) >=
          i_divergence(p, proj.pmf) + proj.divergence - 1e-8);
  }
}

TEST_CASE("i_projection invariant under row rescaling") {
  const Pmf q = pmf3(0.2, 0.3, 0.5);
  Eigen::MatrixXd u(1, 3);
  u << 0, 1, 2;
  Eigen::VectorXd lo(1), hi(1);
  lo << 1.4;
  hi << 1.4;
  const auto a = i_projection(q, ConstraintRegion(abc(3), u, lo, hi));
  const auto b =
      i_projection(q, ConstraintRegion(abc(3), 10.0 * u, 10.0 * lo, 10.0 * hi));
  CHECK(total_variation(a.pmf, b.pmf) <= 1e-9);
  CHECK(a.divergence == doctest::Approx(b.divergence).epsilon(1e-9));
  // multipliers rescale inversely
  CHECK(a.multipliers(0) == doctest::Approx(10.0 * b.multipliers(0)).epsilon(1e-6));
}

TEST_CASE("infeasible regions raise typed errors with certificates") {
  const Pmf q = Pmf::uniform(abc(2));
  CHECK_THROWS_AS(i_projection(q, mean_region(2, 2.0, 2.0)), InfeasibleError);
  try {
    i_projection(q, mean_region(2, 2.0, 2.0));
  } catch (const InfeasibleError& e) {
    CHECK(e.certificate.gap > 0.0);
  }
  CHECK_THROWS_AS(l_projection(q, mean_region(2, 2.0, 2.0)), InfeasibleError);
}

TEST_CASE("rank-deficient constraint rows are rejected") {
  Eigen::MatrixXd u(2, 3);
  u << 0, 1, 2, 0, 2, 4;  // dependent rows
  Eigen::VectorXd lo(2), hi(2);
  lo << 1.0, 2.0;
  hi << 1.0, 2.0;
  CHECK_THROWS_AS(ConstraintRegion(abc(3), u, lo, hi), ValidationError);
}
