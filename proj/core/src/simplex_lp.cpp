#include "typeproj/simplex_lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace typeproj {

namespace {

constexpr double kPivTol = 1e-9;
constexpr double kFeasTol = 1e-8;

struct Tableau {
  Eigen::MatrixXd T;          // k rows of [A | I_art | rhs]
  Eigen::RowVectorXd z;       // reduced-cost row, rhs slot holds -objective
  std::vector<int> basis;     // basic variable per row
  int n = 0;                  // structural columns
  int k = 0;                  // rows

  void pivot(int r, int j) {
    T.row(r) /= T(r, j);
    for (int i = 0; i < k; ++i) {
      if (i == r) continue;
      const double f = T(i, j);
      if (f != 0.0) T.row(i) -= f * T.row(r);
    }
    const double fz = z(j);
    if (fz != 0.0) z -= fz * T.row(r);
    basis[r] = j;
  }

  // Bland's rule; allowed(j) gates entering columns.
  // Returns true on optimality, false on unboundedness.
  bool run(const std::vector<bool>& allowed) {
    const int ncols = static_cast<int>(T.cols()) - 1;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        if (allowed[j] && z(j) < -kPivTol) { enter = j; break; }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < k; ++i) {
        if (T(i, enter) > kPivTol) {
          const double ratio = T(i, ncols) / T(i, enter);
          if (ratio < best - 1e-12 ||
              (ratio < best + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void reset_costs(const Eigen::VectorXd& cost) {
    const int ncols = static_cast<int>(T.cols()) - 1;
    z.setZero(ncols + 1);
    for (int j = 0; j < ncols; ++j) z(j) = j < cost.size() ? cost(j) : 0.0;
    for (int i = 0; i < k; ++i) {
      const double cb = basis[i] < cost.size() ? cost(basis[i]) : 0.0;
      if (cb != 0.0) z -= cb * T.row(i);
    }
  }
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in,
                  const Eigen::VectorXd& c) {
  const int k = static_cast<int>(A_in.rows());
  const int n = static_cast<int>(A_in.cols());

  Eigen::MatrixXd A = A_in;
  Eigen::VectorXd b = b_in;
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(k);
  for (int i = 0; i < k; ++i) {
    if (b(i) < 0.0) {
      A.row(i) *= -1.0;
      b(i) *= -1.0;
      sign(i) = -1.0;
    }
  }

  Tableau tb;
  tb.n = n;
  tb.k = k;
  tb.T.resize(k, n + k + 1);
  tb.T << A, Eigen::MatrixXd::Identity(k, k), b;
  tb.basis.resize(k);
  for (int i = 0; i < k; ++i) tb.basis[i] = n + i;

  // phase 1: minimize the artificials
  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n + k);
  c1.tail(k).setOnes();
  tb.reset_costs(c1);
  std::vector<bool> allowed(n + k, true);
  tb.run(allowed);  // phase 1 is always bounded below by 0

  const double infeas = -tb.z(n + k);
  LpResult res;
  if (infeas > kFeasTol) {
    res.status = LpResult::Status::Infeasible;
    res.objective = infeas;
    // y_i = 1 - reduced cost of artificial i, mapped back through row flips
    res.farkas.resize(k);
    for (int i = 0; i < k; ++i) res.farkas(i) = sign(i) * (1.0 - tb.z(n + i));
    return res;
  }

  // drive any zero-level artificials out of the basis when possible
  for (int i = 0; i < k; ++i) {
    if (tb.basis[i] >= n) {
      for (int j = 0; j < n; ++j) {
        if (std::abs(tb.T(i, j)) > kPivTol) {
          tb.pivot(i, j);
          break;
        }
      }
    }
  }

  // phase 2
  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(n + k);
  c2.head(n) = c;
  tb.reset_costs(c2);
  for (int j = n; j < n + k; ++j) allowed[j] = false;
  if (!tb.run(allowed)) {
    res.status = LpResult::Status::Unbounded;
    return res;
  }

  res.status = LpResult::Status::Optimal;
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < k; ++i) {
    if (tb.basis[i] < n) res.x(tb.basis[i]) = tb.T(i, n + k);
  }
  res.objective = c.dot(res.x);
  return res;
}

SimplexFeasibility simplex_feasible(const Eigen::MatrixXd& U,
                                    const Eigen::VectorXd& lower,
                                    const Eigen::VectorXd& upper,
                                    bool maximize_margin) {
  const int J = static_cast<int>(U.rows());
  const int m = static_cast<int>(U.cols());
  const double inf = std::numeric_limits<double>::infinity();

  struct Row { int j; int kind; };  // kind: 0 eq, 1 upper, 2 lower
  std::vector<Row> rows;
  for (int j = 0; j < J; ++j) {
    const bool lo = lower(j) > -inf, hi = upper(j) < inf;
    if (lo && hi && lower(j) == upper(j)) {
      rows.push_back({j, 0});
    } else {
      if (hi) rows.push_back({j, 1});
      if (lo) rows.push_back({j, 2});
    }
  }
  const int R = static_cast<int>(rows.size());

  SimplexFeasibility out;

  {  // plain feasibility
    int nslack = 0;
    for (const auto& r : rows)
      if (r.kind != 0) ++nslack;
    const int nv = m + nslack;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1 + R, nv);
    Eigen::VectorXd b(1 + R);
    A.row(0).head(m).setOnes();
    b(0) = 1.0;
    int s = m;
    for (int r = 0; r < R; ++r) {
      A.row(1 + r).head(m) = U.row(rows[r].j);
      if (rows[r].kind == 0) {
        b(1 + r) = lower(rows[r].j);
      } else if (rows[r].kind == 1) {
        A(1 + r, s++) = 1.0;
        b(1 + r) = upper(rows[r].j);
      } else {
        A(1 + r, s++) = -1.0;
        b(1 + r) = lower(rows[r].j);
      }
    }
    LpResult lp = solve_lp(A, b, Eigen::VectorXd::Zero(nv));
    if (lp.status != LpResult::Status::Optimal) {
      out.feasible = false;
      out.farkas = lp.farkas;
      out.farkas_gap = lp.farkas.size() ? lp.farkas.dot(b) : 0.0;
      return out;
    }
    out.feasible = true;
    out.witness = lp.x.head(m);
  }

  if (!maximize_margin) return out;

  // maximize a uniform interior margin t: w_i >= t, finite non-equality
  // bounds tightened by t, t capped at 1/(2m) to keep the LP bounded
  const double tcap = 0.5 / static_cast<double>(m);
  // vars: w (m), t, g_i (m surpluses for w_i - t >= 0), row slacks, cap slack
  int nslack = 0;
  for (const auto& r : rows)
    if (r.kind != 0) ++nslack;
  const int nv = m + 1 + m + nslack + 1;
  const int nrows = 1 + m + R + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nrows, nv);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nrows);
  const int tcol = m;
  int s = m + 1 + m;
  A.row(0).head(m).setOnes();
  b(0) = 1.0;
  for (int i = 0; i < m; ++i) {  // w_i - t - g_i = 0
    A(1 + i, i) = 1.0;
    A(1 + i, tcol) = -1.0;
    A(1 + i, m + 1 + i) = -1.0;
  }
  for (int r = 0; r < R; ++r) {
    const int row = 1 + m + r;
    A.row(row).head(m) = U.row(rows[r].j);
    if (rows[r].kind == 0) {
      b(row) = lower(rows[r].j);
    } else if (rows[r].kind == 1) {
      A(row, tcol) = 1.0;
      A(row, s++) = 1.0;
      b(row) = upper(rows[r].j);
    } else {
      A(row, tcol) = -1.0;
      A(row, s++) = -1.0;
      b(row) = lower(rows[r].j);
    }
  }
  A(nrows - 1, tcol) = 1.0;
  A(nrows - 1, nv - 1) = 1.0;
  b(nrows - 1) = tcap;

  Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
  c(tcol) = -1.0;
  LpResult lp = solve_lp(A, b, c);
  if (lp.status == LpResult::Status::Optimal) {
    out.witness = lp.x.head(m);
    out.margin = lp.x(tcol);
    // renormalize away simplex-tableau rounding
    const double sum = out.witness.sum();
    if (sum > 0.0) out.witness /= sum;
  }
  return out;
}

}  // namespace typeproj
