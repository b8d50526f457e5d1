#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wnc/errors.hpp"

namespace wnc::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct LpResult {
  LpStatus status = LpStatus::IterLimit;
  Eigen::VectorXd x;  // primal solution over the original columns
  Eigen::VectorXd y;  // dual multipliers, one per original row
  double objective = 0.0;
};

/// min c^T x  s.t.  A x {=,<=} b (row-wise),  x >= 0.
/// Dual convention: at optimality  c_j - y^T a_j >= 0 for every column
/// (slack columns imply y_i <= 0 on '<' rows), and  y^T b = objective.
struct LpProblem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<char> rel;  // '=' or '<'
};

/// Two-phase revised simplex with Bland's rule. Dense and deliberately
/// simple: problems in this library have at most a few hundred columns.
/// Callers never trust the result blindly; every solver re-certifies the
/// answer with independent norm/dual-norm evaluations.
inline LpResult solve_lp(const LpProblem& prob, int max_iter = 50000) {
  const int m = static_cast<int>(prob.A.rows());
  const int n0 = static_cast<int>(prob.A.cols());
  int n_slack = 0;
  for (char r : prob.rel)
    if (r == '<') ++n_slack;

  const int n = n0 + n_slack;  // structural + slack
  Eigen::MatrixXd A(m, n + m); // + artificials
  Eigen::VectorXd b = prob.b;
  A.setZero();
  A.leftCols(n0) = prob.A;
  {
    int s = 0;
    for (int i = 0; i < m; ++i) {
      if (prob.rel[i] == '<') A(i, n0 + s++) = 1.0;
    }
  }
  // flip rows so b >= 0, then add identity artificials
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0) {
      A.row(i).head(n) *= -1.0;
      b[i] = -b[i];
    }
    A(i, n + i) = 1.0;
  }

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const double tol = 1e-10;
  Eigen::VectorXd xB;

  auto run_phase = [&](const Eigen::VectorXd& cost, int allowed_cols,
                       Eigen::VectorXd* y_out) -> LpStatus {
    for (int iter = 0; iter < max_iter; ++iter) {
      Eigen::MatrixXd B(m, m);
      for (int i = 0; i < m; ++i) B.col(i) = A.col(basis[i]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
      xB = lu.solve(b);
      Eigen::VectorXd cB(m);
      for (int i = 0; i < m; ++i) cB[i] = cost[basis[i]];
      Eigen::VectorXd y = B.transpose().fullPivLu().solve(cB);

      // Bland: first column with negative reduced cost enters
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        bool basic = false;
        for (int i = 0; i < m; ++i)
          if (basis[i] == j) basic = true;
        if (basic) continue;
        const double red = cost[j] - y.dot(A.col(j));
        if (red < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) {
        if (y_out) *y_out = y;
        return LpStatus::Optimal;
      }

      Eigen::VectorXd dir = lu.solve(A.col(enter));
      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m; ++i) {
        if (dir[i] > tol) {
          const double ratio = std::max(xB[i], 0.0) / dir[i];
          if (leave < 0 || ratio < best_ratio - 1e-15 ||
              (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      basis[leave] = enter;
    }
    return LpStatus::IterLimit;
  };

  // Phase 1: minimize the artificial mass.
  Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(n + m);
  cost1.tail(m).setOnes();
  LpStatus st = run_phase(cost1, n + m, nullptr);
  if (st != LpStatus::Optimal) return {st, {}, {}, 0.0};
  double art_mass = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= n) art_mass += std::max(xB[i], 0.0);
  if (art_mass > 1e-7 * std::max(1.0, b.lpNorm<Eigen::Infinity>()))
    return {LpStatus::Infeasible, {}, {}, 0.0};

  // Phase 2: original objective; artificials may stay basic at zero but
  // never enter.
  Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(n + m);
  cost2.head(n0) = prob.c;
  Eigen::VectorXd y;
  st = run_phase(cost2, n, &y);

  LpResult res;
  res.status = st;
  if (st != LpStatus::Optimal) return res;
  res.x = Eigen::VectorXd::Zero(n0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n0) res.x[basis[i]] = xB[i];
  res.y = y;
  res.objective = prob.c.dot(res.x);
  return res;
}

}  // namespace wnc::detail
