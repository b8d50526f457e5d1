#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace wnc::detail {

struct WolfeResult {
  Eigen::VectorXd x;       // the min-norm point of the hull
  Eigen::VectorXd lambda;  // simplex weights over the input columns
  double norm2;            // ||x||_2
  double gap;              // duality gap: ||x||_2 - min_j <x/||x||, p_j> (0 when x = 0)
};

/// Wolfe's minimum-norm-point algorithm over conv(columns of P), Euclidean
/// norm. Finite active-set method; at desk scale it terminates with
/// near-machine-precision gaps. Used directly for lp(2) solves and as the
/// hull-membership kernel behind Minkowski-gauge evaluation.
inline WolfeResult wolfe_min_norm_point(const Eigen::MatrixXd& P, double tol = 1e-12,
                                        int max_major = 10000) {
  const int d = static_cast<int>(P.rows());
  const int n = static_cast<int>(P.cols());
  const double scale2 = P.colwise().squaredNorm().maxCoeff();
  const double eps = tol * std::max(1.0, scale2);

  // corral: indices into P's columns, with weights w > 0 summing to 1
  std::vector<int> corral;
  Eigen::VectorXd w;

  // start from the smallest-norm column
  int start = 0;
  double best = P.col(0).squaredNorm();
  for (int j = 1; j < n; ++j) {
    const double s = P.col(j).squaredNorm();
    if (s < best) {
      best = s;
      start = j;
    }
  }
  corral = {start};
  w = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd x = P.col(start);

  auto affine_min = [&](const std::vector<int>& idx) -> Eigen::VectorXd {
    // min ||P_S a||^2 s.t. 1^T a = 1 via the bordered Gram system
    const int m = static_cast<int>(idx.size());
    Eigen::MatrixXd S(d, m);
    for (int j = 0; j < m; ++j) S.col(j) = P.col(idx[j]);
    Eigen::MatrixXd K(m + 1, m + 1);
    K.topLeftCorner(m, m) = S.transpose() * S;
    K.topRightCorner(m, 1).setOnes();
    K.bottomLeftCorner(1, m).setOnes();
    K(m, m) = 0.0;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs[m] = 1.0;
    Eigen::VectorXd sol = K.fullPivLu().solve(rhs);
    return sol.head(m);
  };

  for (int major = 0; major < max_major; ++major) {
    // most violating vertex
    Eigen::VectorXd inner = P.transpose() * x;
    int jmin = 0;
    inner.minCoeff(&jmin);
    const double xx = x.squaredNorm();
    if (inner[jmin] >= xx - eps) break;  // optimal: x supports the hull

    bool in_corral = false;
    for (int j : corral)
      if (j == jmin) in_corral = true;
    if (!in_corral) {
      corral.push_back(jmin);
      Eigen::VectorXd w2(w.size() + 1);
      w2.head(w.size()) = w;
      w2[w.size()] = 0.0;
      w = w2;
    }

    // minor cycle: restore w > 0 on an affinely independent corral
    for (int minor = 0; minor < max_major; ++minor) {
      Eigen::VectorXd a = affine_min(corral);
      if (a.minCoeff() > -1e-14) {
        w = a.cwiseMax(0.0);
        w /= w.sum();
        break;
      }
      // step toward a until the first weight hits zero
      double theta = 1.0;
      for (int j = 0; j < a.size(); ++j) {
        if (a[j] < -1e-14) {
          const double t = w[j] / (w[j] - a[j]);
          theta = std::min(theta, t);
        }
      }
      w = (1.0 - theta) * w + theta * a;
      // drop zeroed members
      std::vector<int> keep_idx;
      std::vector<double> keep_w;
      for (int j = 0; j < w.size(); ++j) {
        if (w[j] > 1e-13) {
          keep_idx.push_back(corral[j]);
          keep_w.push_back(w[j]);
        }
      }
      if (keep_idx.empty()) {  // numerically flat; keep the largest
        int jmax = 0;
        w.maxCoeff(&jmax);
        keep_idx.push_back(corral[jmax]);
        keep_w.push_back(1.0);
      }
      corral = keep_idx;
      w = Eigen::Map<Eigen::VectorXd>(keep_w.data(), static_cast<int>(keep_w.size()));
      w /= w.sum();
    }

    Eigen::VectorXd xn = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < w.size(); ++j) xn += w[j] * P.col(corral[j]);
    if ((xn - x).squaredNorm() <= 1e-32 * std::max(1.0, scale2)) {
      x = xn;
      break;  // stalled at numerical precision
    }
    x = xn;
  }

  WolfeResult res;
  res.x = x;
  res.lambda = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < w.size(); ++j) res.lambda[corral[j]] += w[j];
  res.norm2 = x.norm();
  if (res.norm2 > 0) {
    const double lo = (P.transpose() * (x / res.norm2)).minCoeff();
    res.gap = std::max(0.0, res.norm2 - lo);
  } else {
    res.gap = 0.0;
  }
  return res;
}

/// Euclidean distance from q to conv(columns of V).
inline double euclidean_hull_distance(const Eigen::VectorXd& q, const Eigen::MatrixXd& V,
                                      double tol = 1e-12) {
  Eigen::MatrixXd shifted = V.colwise() - q;
  return wolfe_min_norm_point(shifted, tol).norm2;
}

}  // namespace wnc::detail
