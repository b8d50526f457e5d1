#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "wnc/certificates.hpp"
#include "wnc/detail/simplex_lp.hpp"
#include "wnc/detail/wolfe.hpp"
#include "wnc/options.hpp"
#include "wnc/spaces.hpp"

namespace wnc {
namespace detail {

struct HullSpanResult {
  double upper = 0.0;  // exact norm of the attained point (sound upper bound)
  double lower = 0.0;  // certified lower bound
  Vector lambda;       // simplex weights over A's columns
  Vector span_coeffs;  // coefficients over Q's columns
  Vector functional;   // cleaned dual functional
  double functional_dual_norm = 0.0;
};

/// Turn a raw dual candidate into a certified lower bound on
///   min_{lambda in simplex, c} ||A lambda - Q c||.
/// Sound regardless of where the candidate came from: f is projected onto
/// the annihilator of Q, its dual norm re-evaluated and rescaled, and the
///残 projection residual converted into explicit slack.
inline double certify_lower(const SpaceSpec& space, const Matrix& A, const Matrix& Q,
                            double r_max, Vector f, Vector* f_out, double* dn_out) {
  if (f.size() != space.dim() || !f.allFinite()) f = Vector::Zero(space.dim());
  if (Q.cols() > 0) {
    f -= Q * (Q.transpose() * f);
    f -= Q * (Q.transpose() * f);
  }
  double dn = space.dual_norm(f);
  if (dn > 1.0) {
    f /= dn;
    dn = space.dual_norm(f);
  }
  double lb = kInf;
  for (int j = 0; j < A.cols(); ++j) lb = std::min(lb, f.dot(A.col(j)));
  if (Q.cols() > 0) {
    const double rho = (Q.transpose() * f).norm();
    lb -= rho * (2.0 * r_max / space.l2_lower_ratio());
  }
  lb = std::max(lb, 0.0);  // f = 0 is always dual-feasible
  if (f_out) *f_out = f;
  if (dn_out) *dn_out = dn;
  return lb;
}

inline void keep_better_lower(const SpaceSpec& space, const Matrix& A, const Matrix& Q,
                              double r_max, const Vector& candidate, HullSpanResult* res) {
  Vector f;
  double dn = 0.0;
  const double lb = certify_lower(space, A, Q, r_max, candidate, &f, &dn);
  if (lb > res->lower || res->functional.size() == 0) {
    res->lower = lb;
    res->functional = f;
    res->functional_dual_norm = dn;
  }
}

inline Vector clean_simplex(Vector lambda) {
  lambda = lambda.cwiseMax(0.0);
  const double s = lambda.sum();
  if (s <= 0.0) {
    lambda.setConstant(1.0 / static_cast<double>(lambda.size()));
  } else {
    lambda /= s;
  }
  return lambda;
}

// ---------- Euclidean path ----------

inline HullSpanResult hull_span_euclidean(const SpaceSpec& space, const Matrix& A,
                                          const Matrix& Q, double r_max) {
  Matrix Ap = A;
  if (Q.cols() > 0) Ap -= Q * (Q.transpose() * A);
  auto w = wolfe_min_norm_point(Ap);
  HullSpanResult res;
  res.lambda = clean_simplex(w.lambda);
  res.span_coeffs = Q.cols() > 0 ? Vector(Q.transpose() * (A * res.lambda)) : Vector(0);
  Vector y = A * res.lambda;
  if (Q.cols() > 0) y -= Q * res.span_coeffs;
  res.upper = y.norm();
  Vector cand = w.x.norm() > 0 ? Vector(w.x / w.x.norm()) : Vector::Zero(space.dim());
  res.lower = 0.0;
  keep_better_lower(space, A, Q, r_max, cand, &res);
  return res;
}

// ---------- cutting-plane path (lp1, lpinf, symmetric) ----------

inline bool add_unique(std::vector<Vector>& set, const Vector& v, double tol) {
  for (const auto& u : set)
    if ((u - v).lpNorm<Eigen::Infinity>() <= tol) return false;
  set.push_back(v);
  return true;
}

inline HullSpanResult hull_span_cutting(const SpaceSpec& space, const Matrix& A, const Matrix& Q,
                                        double r_max, const SolverOptions& opts) {
  const int d = space.dim();
  const int n = static_cast<int>(A.cols());
  const int s = static_cast<int>(Q.cols());
  const double scale = std::max(1.0, A.colwise().norm().maxCoeff());

  std::vector<Vector> cuts;
  for (int j = 0; j < n; ++j) {
    if (!A.col(j).isZero(0.0)) add_unique(cuts, space.norming_functional(A.col(j)), 1e-12);
  }
  {
    Vector mid = A.rowwise().mean();
    if (!mid.isZero(0.0)) add_unique(cuts, space.norming_functional(mid), 1e-12);
  }
  if (cuts.empty()) cuts.push_back(Vector::Zero(d));

  HullSpanResult res;
  res.lambda = Vector::Constant(n, 1.0 / n);
  res.span_coeffs = Vector::Zero(s);
  {
    Vector y0 = A * res.lambda;
    if (s > 0) {
      res.span_coeffs = Q.transpose() * y0;
      y0 -= Q * res.span_coeffs;
    }
    res.upper = space.norm(y0);
  }
  res.lower = 0.0;

  for (int round = 0; round < 80; ++round) {
    const int m = static_cast<int>(cuts.size());
    LpProblem lp;
    const int ncols = n + 2 * s + 1;  // lambda, c+, c-, t
    lp.A.setZero(m + 1, ncols);
    lp.b.setZero(m + 1);
    lp.c.setZero(ncols);
    lp.c[ncols - 1] = 1.0;
    lp.rel.assign(static_cast<std::size_t>(m + 1), '<');
    for (int r = 0; r < m; ++r) {
      lp.A.row(r).head(n) = (cuts[static_cast<std::size_t>(r)].transpose() * A);
      if (s > 0) {
        Eigen::RowVectorXd vq = cuts[static_cast<std::size_t>(r)].transpose() * Q;
        lp.A.row(r).segment(n, s) = -vq;
        lp.A.row(r).segment(n + s, s) = vq;
      }
      lp.A(r, ncols - 1) = -1.0;
    }
    lp.A.row(m).head(n).setOnes();
    lp.b[m] = 1.0;
    lp.rel[static_cast<std::size_t>(m)] = '=';

    auto sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) break;  // keep best-so-far certificate

    Vector lambda = clean_simplex(sol.x.head(n));
    Vector c = s > 0 ? Vector(sol.x.segment(n, s) - sol.x.segment(n + s, s)) : Vector(0);
    Vector y = A * lambda;
    if (s > 0) y -= Q * c;
    const double u = space.norm(y);
    if (u < res.upper) {
      res.upper = u;
      res.lambda = lambda;
      res.span_coeffs = c;
    }

    // dual combination of the cut functionals
    Vector fcand = Vector::Zero(d);
    for (int r = 0; r < m; ++r) fcand -= sol.y[r] * cuts[static_cast<std::size_t>(r)];
    keep_better_lower(space, A, Q, r_max, fcand, &res);
    keep_better_lower(space, A, Q, r_max, -fcand, &res);

    if (res.upper - res.lower <= opts.gap_target * std::max(1.0, scale)) break;
    const double t_star = sol.x[ncols - 1];
    if (u <= t_star + 1e-11 * scale) break;  // relaxation is tight
    if (!y.isZero(0.0)) {
      if (!add_unique(cuts, space.norming_functional(y), 1e-12)) break;
    } else {
      break;
    }
  }
  return res;
}

// ---------- gauge path (primal hull representation) ----------

inline HullSpanResult hull_span_gauge(const SpaceSpec& space, const Matrix& A, const Matrix& Q,
                                      double r_max) {
  const int d = space.dim();
  const int n = static_cast<int>(A.cols());
  const int s = static_cast<int>(Q.cols());
  const Matrix& G = space.generators();
  const int m = static_cast<int>(G.cols());

  LpProblem lp;
  const int ncols = m + n + 2 * s;  // mu, lambda, c+, c-
  lp.A.setZero(d + 1, ncols);
  lp.b.setZero(d + 1);
  lp.c.setZero(ncols);
  lp.c.head(m).setOnes();
  lp.rel.assign(static_cast<std::size_t>(d + 1), '=');
  lp.A.topLeftCorner(d, m) = G;
  lp.A.block(0, m, d, n) = -A;
  if (s > 0) {
    lp.A.block(0, m + n, d, s) = Q;
    lp.A.block(0, m + n + s, d, s) = -Q;
  }
  lp.A.row(d).segment(m, n).setOnes();
  lp.b[d] = 1.0;

  HullSpanResult res;
  auto sol = solve_lp(lp);
  if (sol.status == LpStatus::Optimal) {
    res.lambda = clean_simplex(sol.x.segment(m, n));
    res.span_coeffs = s > 0 ? Vector(sol.x.segment(m + n, s) - sol.x.segment(m + n + s, s))
                            : Vector(0);
  } else {
    res.lambda = Vector::Constant(n, 1.0 / n);
    res.span_coeffs = Vector::Zero(s);
    if (s > 0) res.span_coeffs = Q.transpose() * (A * res.lambda);
  }
  Vector y = A * res.lambda;
  if (s > 0) y -= Q * res.span_coeffs;
  res.lower = 0.0;
  if (sol.status == LpStatus::Optimal) {
    // ||y|| <= sum(mu) + gauge norm of the representation residual; the
    // residual term is bounded through the l2 ratio, so this upper bound is
    // sound without re-running the bisection norm.
    const Vector mu = sol.x.head(m).cwiseMax(0.0);
    const Vector resid = G * mu - y;
    res.upper = mu.sum() + resid.norm() / space.l2_lower_ratio();
    Vector w = sol.y.head(d);
    keep_better_lower(space, A, Q, r_max, w, &res);
    keep_better_lower(space, A, Q, r_max, -w, &res);
  } else {
    res.upper = space.norm(y);
  }
  return res;
}

// ---------- smooth lp path (1 < p < inf, p != 2) ----------

inline Matrix lp_norm_hessian(const SpaceSpec& space, const Vector& y) {
  const double p = space.p();
  const double nrm = space.norm(y);
  const int d = static_cast<int>(y.size());
  Vector u = space.norming_functional(y);
  Vector diag(d);
  for (int i = 0; i < d; ++i) {
    const double a = std::max(std::abs(y[i]), 1e-10 * nrm) / nrm;
    diag[i] = std::pow(a, p - 2.0);
  }
  Matrix H = diag.asDiagonal();
  H -= u * u.transpose();
  H *= (p - 1.0) / nrm;
  return H;
}

inline HullSpanResult hull_span_smooth(const SpaceSpec& space, const Matrix& A, const Matrix& Q,
                                       double r_max, const SolverOptions& opts) {
  const int n = static_cast<int>(A.cols());
  const int s = static_cast<int>(Q.cols());
  const double scale = std::max(1.0, A.colwise().norm().maxCoeff());
  const double zero_tol = 1e-14 * scale;

  Vector lambda = Vector::Constant(n, 1.0 / n);
  Vector c = Vector::Zero(s);

  auto point = [&](const Vector& l, const Vector& cc) -> Vector {
    Vector y = A * l;
    if (s > 0) y -= Q * cc;
    return y;
  };
  auto value = [&](const Vector& l, const Vector& cc) { return space.norm(point(l, cc)); };

  // backtracking line search on a 1D convex slice: try hi, halve on failure
  auto backtrack = [&](auto&& f, double f0, double hi) -> double {
    double t = hi;
    double ft = f(t);
    double best_t = 0.0, best_f = f0;
    for (int it = 0; it < 60; ++it) {
      if (ft < best_f) {
        best_f = ft;
        best_t = t;
        // one refinement probe beyond the accepted step
        const double t2 = 0.5 * t;
        const double f2 = f(t2);
        if (f2 < best_f) {
          best_f = f2;
          best_t = t2;
        }
        break;
      }
      t *= 0.5;
      if (t * scale <= 1e-17) break;
      ft = f(t);
    }
    return best_t;
  };

  // damped Newton in the span coefficients at fixed lambda; the first-order
  // condition Q^T g(y) = 0 is also what makes the final functional annihilate
  // the span, so this loop doubles as certificate preparation
  auto c_step = [&]() {
    if (s == 0) return;
    for (int it = 0; it < 40; ++it) {
      Vector y = point(lambda, c);
      const double ny = space.norm(y);
      if (ny <= zero_tol) return;
      Vector g = space.norming_functional(y);
      Vector grad = -Q.transpose() * g;
      if (grad.norm() <= 1e-13) return;
      Matrix H = Q.transpose() * lp_norm_hessian(space, y) * Q;
      H.diagonal().array() += 1e-12 * std::max(1.0, H.trace());
      Vector dir = H.fullPivLu().solve(-grad);
      if (!dir.allFinite() || dir.dot(grad) >= 0.0) dir = -grad;
      const double f0 = ny;
      const double step =
          backtrack([&](double t) { return value(lambda, Vector(c + t * dir)); }, f0, 1.0);
      if (step * dir.norm() <= 1e-16 * scale) return;
      c += step * dir;
    }
  };

  HullSpanResult res;
  res.lower = 0.0;
  auto record = [&]() {
    const double u = value(lambda, c);
    if (res.functional.size() == 0 || u < res.upper) {
      res.upper = u;
      res.lambda = lambda;
      res.span_coeffs = c;
    }
    Vector y = point(lambda, c);
    if (space.norm(y) > zero_tol)
      keep_better_lower(space, A, Q, r_max, space.norming_functional(y), &res);
  };

  c_step();
  res.upper = value(lambda, c);
  res.lambda = lambda;
  res.span_coeffs = c;
  record();

  for (int round = 0; round < 25; ++round) {
    bool moved = false;

    // Frank-Wolfe expansion: bring in the most violating vertex
    {
      Vector y = point(lambda, c);
      if (space.norm(y) > zero_tol) {
        Vector gl = A.transpose() * space.norming_functional(y);
        int j_fw = 0;
        gl.minCoeff(&j_fw);
        const double gain = gl.dot(lambda) - gl[j_fw];
        if (gain > 1e-14 * scale) {
          Vector dir = -lambda;
          dir[j_fw] += 1.0;
          const double f0 = value(lambda, c);
          const double step =
              backtrack([&](double t) { return value(clean_simplex(lambda + t * dir), c); }, f0,
                        1.0);
          if (step > 0.0) {
            lambda = clean_simplex(lambda + step * dir);
            moved = true;
          }
        }
      }
    }
    c_step();

    // Newton polish on the active face (support may shrink via the
    // positivity bound in the line search)
    for (int polish = 0; polish < 10; ++polish) {
      std::vector<int> S;
      for (int j = 0; j < n; ++j)
        if (lambda[j] > 1e-12) S.push_back(j);
      if (S.size() <= 1) break;
      const int k = static_cast<int>(S.size());
      Vector y = point(lambda, c);
      if (space.norm(y) <= zero_tol) break;
      Matrix AS(space.dim(), k);
      for (int j = 0; j < k; ++j) AS.col(j) = A.col(S[static_cast<std::size_t>(j)]);
      Vector g = space.norming_functional(y);
      Vector grad = AS.transpose() * g;
      Matrix H = AS.transpose() * lp_norm_hessian(space, y) * AS;
      H.diagonal().array() += 1e-13 * std::max(1.0, H.trace());
      Matrix K(k + 1, k + 1);
      K.setZero();
      K.topLeftCorner(k, k) = H;
      K.topRightCorner(k, 1).setOnes();
      K.bottomLeftCorner(1, k).setOnes();
      Vector rhs(k + 1);
      rhs.head(k) = -grad;
      rhs[k] = 0.0;
      Vector sol = K.fullPivLu().solve(rhs);
      Vector delta = sol.head(k);
      if (!delta.allFinite() || delta.norm() <= 1e-16) break;
      double hi = 1.0;
      for (int j = 0; j < k; ++j)
        if (delta[j] < 0)
          hi = std::min(hi, -lambda[S[static_cast<std::size_t>(j)]] / delta[j]);
      const double f0 = value(lambda, c);
      const double step = backtrack(
          [&](double t) {
            Vector l2 = lambda;
            for (int j = 0; j < k; ++j) l2[S[static_cast<std::size_t>(j)]] += t * delta[j];
            return value(clean_simplex(l2), c);
          },
          f0, hi);
      if (step <= 0.0) break;
      for (int j = 0; j < k; ++j) lambda[S[static_cast<std::size_t>(j)]] += step * delta[j];
      lambda = clean_simplex(lambda);
      c_step();
      moved = true;
    }
    record();
    if (res.upper - res.lower <= opts.gap_target * std::max(1.0, scale)) break;
    if (!moved) break;
  }
  return res;
}

inline HullSpanResult min_norm_hull_span(const SpaceSpec& space, const Matrix& A, const Matrix& Q,
                                         const SolverOptions& opts) {
  double r_max = 0.0;
  for (int j = 0; j < A.cols(); ++j) r_max = std::max(r_max, space.norm(A.col(j)));
  HullSpanResult res;
  if (space.kind() == SpaceKind::Lp && space.p() == 2.0) {
    res = hull_span_euclidean(space, A, Q, r_max);
  } else if (space.kind() == SpaceKind::Gauge) {
    res = hull_span_gauge(space, A, Q, r_max);
  } else if (space.smooth_lp()) {
    res = hull_span_smooth(space, A, Q, r_max, opts);
  } else {
    res = hull_span_cutting(space, A, Q, r_max, opts);
  }
  res.lower = std::min(res.lower, res.upper);
  return res;
}

/// Orthonormal basis for the span of the given vectors (possibly none).
inline Matrix span_basis(const SpaceSpec& space, const std::vector<Vector>& vecs) {
  if (vecs.empty()) return Matrix(space.dim(), 0);
  Matrix B(space.dim(), static_cast<int>(vecs.size()));
  for (std::size_t j = 0; j < vecs.size(); ++j) B.col(static_cast<int>(j)) = vecs[j];
  Eigen::ColPivHouseholderQR<Matrix> qr(B);
  qr.setThreshold(1e-12);
  const int rank = static_cast<int>(qr.rank());
  if (rank == 0) return Matrix(space.dim(), 0);
  Matrix Qfull = qr.householderQ();
  return Qfull.leftCols(rank);
}

}  // namespace detail

/// min over simplex weights of || sum_i lambda_i p_i ||. Certificate:
/// value = norm attained by the returned weights, optimum in
/// [value - gap, value].
inline SolveCertificate min_norm_point(const SpaceSpec& space, const std::vector<Vector>& points,
                                       const SolverOptions& opts = {}) {
  if (points.empty()) throw SpecError("min_norm_point: empty point list");
  Matrix A(space.dim(), static_cast<int>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j) {
    space.check_dim(points[j], "point");
    A.col(static_cast<int>(j)) = points[j];
  }
  auto r = detail::min_norm_hull_span(space, A, Matrix(space.dim(), 0), opts);
  SolveCertificate cert;
  cert.value = r.upper;
  cert.gap = std::max(0.0, r.upper - r.lower);
  cert.weights = SimplexWeights{r.lambda};
  if (r.functional.size() > 0)
    cert.functional = DualFunctional{r.functional, r.functional_dual_norm};
  return cert;
}

/// Distance between conv(P) and conv(Qset); computed as the min-norm point
/// of the pairwise differences. Witnesses: weights over P, weights over Q.
inline SolveCertificate hull_distance(const SpaceSpec& space, const std::vector<Vector>& P,
                                      const std::vector<Vector>& Qset,
                                      const SolverOptions& opts = {}) {
  if (P.empty() || Qset.empty()) throw SpecError("hull_distance: empty hull");
  const int np = static_cast<int>(P.size());
  const int nq = static_cast<int>(Qset.size());
  Matrix A(space.dim(), np * nq);
  for (int i = 0; i < np; ++i) {
    space.check_dim(P[static_cast<std::size_t>(i)], "point");
    for (int j = 0; j < nq; ++j) {
      space.check_dim(Qset[static_cast<std::size_t>(j)], "point");
      A.col(i * nq + j) = P[static_cast<std::size_t>(i)] - Qset[static_cast<std::size_t>(j)];
    }
  }
  auto r = detail::min_norm_hull_span(space, A, Matrix(space.dim(), 0), opts);
  SolveCertificate cert;
  cert.value = r.upper;
  cert.gap = std::max(0.0, r.upper - r.lower);
  Vector wp = Vector::Zero(np), wq = Vector::Zero(nq);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nq; ++j) {
      wp[i] += r.lambda[i * nq + j];
      wq[j] += r.lambda[i * nq + j];
    }
  cert.weights = SimplexWeights{detail::clean_simplex(wp)};
  cert.weights_q = SimplexWeights{detail::clean_simplex(wq)};
  if (r.functional.size() > 0)
    cert.functional = DualFunctional{r.functional, r.functional_dual_norm};
  return cert;
}

/// Best guaranteed action on the suffix under annihilation of the prefix:
///   max { min_{j >= k} f(x_j) : ||f||_* <= 1, f(x_j) = 0 for j < k }
/// computed as the distance from conv{x_k..x_n} to span{x_1..x_{k-1}}.
/// Certificate: value = bound attained by the returned functional, optimum
/// in [value, value + gap]. k is 1-based.
inline SolveCertificate chain_feasibility(const SpaceSpec& space, const std::vector<Vector>& tuple,
                                          int k, const SolverOptions& opts = {}) {
  const int n = static_cast<int>(tuple.size());
  if (n == 0) throw SpecError("chain_feasibility: empty tuple");
  if (k < 1 || k > n) throw SpecError("chain_feasibility: k out of range");
  for (const auto& x : tuple) space.check_dim(x, "point");
  std::vector<Vector> prefix(tuple.begin(), tuple.begin() + (k - 1));
  Matrix Q = detail::span_basis(space, prefix);
  Matrix A(space.dim(), n - k + 1);
  for (int j = k - 1; j < n; ++j) A.col(j - (k - 1)) = tuple[static_cast<std::size_t>(j)];
  auto r = detail::min_norm_hull_span(space, A, Q, opts);
  SolveCertificate cert;
  cert.value = r.lower;
  cert.gap = std::max(0.0, r.upper - r.lower);
  cert.weights = SimplexWeights{r.lambda};
  if (r.functional.size() > 0)
    cert.functional = DualFunctional{r.functional, r.functional_dual_norm};
  else
    cert.functional = DualFunctional{Vector::Zero(space.dim()), 0.0};
  return cert;
}

}  // namespace wnc
