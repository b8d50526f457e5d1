#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "wnc/detail/simplex_lp.hpp"
#include "wnc/detail/wolfe.hpp"
#include "wnc/errors.hpp"

namespace wnc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SpaceKind { Lp, Gauge, Symmetric };

inline void check_finite(const Vector& x, const char* what = "vector") {
  if (!x.allFinite()) throw SpecError(std::string(what) + " has non-finite entries");
}

/// A finite-dimensional normed space. Three families:
///   lp(p)         p in [1, inf]
///   gauge         Minkowski functional of conv(generators); with the
///                 symmetric_closed flag the generator list is validated to
///                 be symmetric (-g in the hull for every g), otherwise the
///                 hull only needs 0 in its interior and the gauge may be
///                 asymmetric (still positively homogeneous + subadditive)
///   symmetric     Lorentz/top-k gauge ||x|| = sum_i w_i |x|^down_i with
///                 nonincreasing weights; `dual_role` flips the space to the
///                 dual norm max_k (|f|^down_1+...+|f|^down_k)/(w_1+...+w_k)
class SpaceSpec {
 public:
  static SpaceSpec lp(double p, int dim) {
    if (dim < 1) throw SpecError("lp: dimension must be positive");
    if (!(p >= 1.0)) throw SpecError("lp: p must satisfy p >= 1 (use kInf for sup norm)");
    SpaceSpec s;
    s.kind_ = SpaceKind::Lp;
    s.dim_ = dim;
    s.p_ = p;
    return s;
  }

  static SpaceSpec gauge(const std::vector<Vector>& generators, bool symmetric_closed) {
    if (generators.empty()) throw SpecError("gauge: no generators");
    const int d = static_cast<int>(generators.front().size());
    SpaceSpec s;
    s.kind_ = SpaceKind::Gauge;
    s.dim_ = d;
    s.gens_.resize(d, static_cast<int>(generators.size()));
    for (std::size_t j = 0; j < generators.size(); ++j) {
      if (generators[j].size() != d) throw SpecError("gauge: generator dimension mismatch");
      check_finite(generators[j], "gauge generator");
      s.gens_.col(static_cast<int>(j)) = generators[j];
    }
    s.sym_closed_ = symmetric_closed;
    s.validate_gauge();
    return s;
  }

  static SpaceSpec symmetric_gauge(const std::vector<double>& weights, int dim) {
    if (dim < 1) throw SpecError("symmetric: dimension must be positive");
    if (weights.empty() || weights.front() <= 0.0)
      throw SpecError("symmetric: weights[0] must be positive");
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
        throw SpecError("symmetric: weights must be finite and nonnegative");
      if (i > 0 && weights[i] > weights[i - 1] + 1e-12)
        throw SpecError("symmetric: weights must be nonincreasing");
    }
    SpaceSpec s;
    s.kind_ = SpaceKind::Symmetric;
    s.dim_ = dim;
    s.weights_ = Vector::Zero(dim);
    for (int i = 0; i < dim && i < static_cast<int>(weights.size()); ++i)
      s.weights_[i] = std::max(weights[static_cast<std::size_t>(i)], 0.0);
    s.wsum_ = Vector(dim);
    double acc = 0.0;
    for (int i = 0; i < dim; ++i) {
      acc += s.weights_[i];
      s.wsum_[i] = acc;
    }
    return s;
  }

  int dim() const { return dim_; }
  SpaceKind kind() const { return kind_; }
  double p() const { return p_; }
  bool symmetric_closed() const { return sym_closed_; }
  bool dual_role() const { return dual_role_; }
  const Matrix& generators() const { return gens_; }
  const Vector& weights() const { return weights_; }

  bool polyhedral() const {
    switch (kind_) {
      case SpaceKind::Lp:
        return p_ == 1.0 || p_ == kInf;
      case SpaceKind::Gauge:
      case SpaceKind::Symmetric:
        return true;
    }
    return false;
  }

  bool smooth_lp() const { return kind_ == SpaceKind::Lp && p_ > 1.0 && p_ < kInf; }

  /// Permutation / sign invariance of the norm (lp and symmetric kinds).
  bool coordinate_symmetric() const { return kind_ != SpaceKind::Gauge; }

  void check_dim(const Vector& x, const char* what = "vector") const {
    if (x.size() != dim_)
      throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(dim_) +
                           ", got " + std::to_string(x.size()));
    check_finite(x, what);
  }

  double norm(const Vector& x) const {
    check_dim(x);
    switch (kind_) {
      case SpaceKind::Lp:
        return lp_norm(x, p_);
      case SpaceKind::Symmetric:
        return dual_role_ ? sym_dual_formula(x) : sym_primal_formula(x);
      case SpaceKind::Gauge:
        return gauge_norm(x);
    }
    return 0.0;
  }

  double dual_norm(const Vector& f) const {
    check_dim(f, "functional");
    switch (kind_) {
      case SpaceKind::Lp:
        return lp_norm(f, conjugate(p_));
      case SpaceKind::Symmetric:
        return dual_role_ ? sym_primal_formula(f) : sym_dual_formula(f);
      case SpaceKind::Gauge:
        // support function of the unit ball; for a symmetric-closed hull this
        // equals the polar-gauge norm, otherwise the one-sided polar gauge
        return f.isZero(0.0) ? 0.0 : (gens_.transpose() * f).maxCoeff();
    }
    return 0.0;
  }

  /// A functional g with dual_norm(g) <= 1 and g(x) = ||x||. Exact for every
  /// kind; the gauge case solves the polar LP.
  Vector norming_functional(const Vector& x) const {
    check_dim(x);
    if (x.isZero(0.0)) return Vector::Zero(dim_);
    switch (kind_) {
      case SpaceKind::Lp: {
        if (p_ == 1.0) {
          Vector g(dim_);
          for (int i = 0; i < dim_; ++i) g[i] = x[i] > 0 ? 1.0 : (x[i] < 0 ? -1.0 : 0.0);
          return g;
        }
        if (p_ == kInf) {
          int idx = 0;
          x.cwiseAbs().maxCoeff(&idx);
          Vector g = Vector::Zero(dim_);
          g[idx] = x[idx] >= 0 ? 1.0 : -1.0;
          return g;
        }
        const double nx = lp_norm(x, p_);
        Vector g(dim_);
        for (int i = 0; i < dim_; ++i) {
          const double t = std::pow(std::abs(x[i]) / nx, p_ - 1.0);
          g[i] = x[i] >= 0 ? t : -t;
        }
        return g;
      }
      case SpaceKind::Symmetric: {
        std::vector<int> order = abs_sort_order(x);
        Vector g = Vector::Zero(dim_);
        if (!dual_role_) {
          for (int i = 0; i < dim_; ++i) {
            const int idx = order[static_cast<std::size_t>(i)];
            g[idx] = (x[idx] >= 0 ? 1.0 : -1.0) * weights_[i];
          }
        } else {
          // best k-flat vertex of the primal ball
          int kbest = 0;
          double best = -1.0, acc = 0.0;
          for (int k = 0; k < dim_; ++k) {
            acc += std::abs(x[order[static_cast<std::size_t>(k)]]);
            const double v = acc / wsum_[k];
            if (v > best + 1e-18) {
              best = v;
              kbest = k;
            }
          }
          for (int i = 0; i <= kbest; ++i) {
            const int idx = order[static_cast<std::size_t>(i)];
            g[idx] = (x[idx] >= 0 ? 1.0 : -1.0) / wsum_[kbest];
          }
        }
        return g;
      }
      case SpaceKind::Gauge:
        return gauge_norming_functional(x);
    }
    return Vector::Zero(dim_);
  }

  /// Vertex description of the unit ball (polyhedral kinds only).
  std::vector<Vector> ball_vertices(std::size_t cap = 200000) const {
    std::vector<Vector> out;
    switch (kind_) {
      case SpaceKind::Lp: {
        if (p_ == 1.0) {
          for (int i = 0; i < dim_; ++i) {
            Vector v = Vector::Zero(dim_);
            v[i] = 1.0;
            out.push_back(v);
            out.push_back(-v);
          }
          return out;
        }
        if (p_ == kInf) {
          if ((std::size_t{1} << dim_) > cap)
            throw BudgetError("ball_vertices: 2^d sign vectors exceed cap");
          for (std::size_t mask = 0; mask < (std::size_t{1} << dim_); ++mask) {
            Vector v(dim_);
            for (int i = 0; i < dim_; ++i) v[i] = (mask >> i) & 1 ? 1.0 : -1.0;
            out.push_back(v);
          }
          return out;
        }
        throw SpecError("ball_vertices: lp ball is smooth for 1 < p < inf");
      }
      case SpaceKind::Gauge: {
        for (int j = 0; j < gens_.cols(); ++j) out.push_back(gens_.col(j));
        if (!sym_closed_) {
          // callers expect a full V-description; nothing to add, the hull is
          // conv(generators) as given
        }
        return out;
      }
      case SpaceKind::Symmetric: {
        if (!dual_role_) return flat_vertices(cap);
        return orbit_vertices(cap);
      }
    }
    return out;
  }

  /// The dual space, as a SpaceSpec: lp(p) -> lp(q); symmetric flips role;
  /// symmetric-closed gauge -> polar gauge via facet enumeration.
  SpaceSpec dual_space(std::size_t cap = 2000000) const {
    switch (kind_) {
      case SpaceKind::Lp:
        return lp(conjugate(p_), dim_);
      case SpaceKind::Symmetric: {
        SpaceSpec s = *this;
        s.dual_role_ = !dual_role_;
        return s;
      }
      case SpaceKind::Gauge: {
        if (!sym_closed_)
          throw SpecError("dual_space: polar of a gauge space requires the symmetric flag");
        return gauge(polar_vertices(cap), true);
      }
    }
    throw SpecError("dual_space: unknown kind");
  }

  /// m with ||x|| >= m ||x||_2 for every x; used to turn small residuals
  /// into rigorous certificate slack.
  double l2_lower_ratio() const {
    switch (kind_) {
      case SpaceKind::Lp:
        if (p_ <= 2.0) return 1.0;
        if (p_ == kInf) return 1.0 / std::sqrt(static_cast<double>(dim_));
        return std::pow(static_cast<double>(dim_), 1.0 / p_ - 0.5);
      case SpaceKind::Gauge: {
        const double R = gens_.colwise().norm().maxCoeff();
        return R > 0 ? 1.0 / R : 1.0;
      }
      case SpaceKind::Symmetric: {
        double R = 0.0;
        if (!dual_role_) {
          for (int k = 0; k < dim_; ++k)
            R = std::max(R, std::sqrt(static_cast<double>(k + 1)) / wsum_[k]);
        } else {
          R = weights_.norm();
        }
        return R > 0 ? 1.0 / R : 1.0;
      }
    }
    return 1.0;
  }

  std::string describe() const {
    switch (kind_) {
      case SpaceKind::Lp:
        return "lp(" + (p_ == kInf ? std::string("inf") : trim_num(p_)) + ")^" +
               std::to_string(dim_);
      case SpaceKind::Gauge:
        return std::string("gauge[") + std::to_string(gens_.cols()) + " gens" +
               (sym_closed_ ? ", symmetric" : "") + "]^" + std::to_string(dim_);
      case SpaceKind::Symmetric:
        return std::string(dual_role_ ? "symmetric*" : "symmetric") + "^" + std::to_string(dim_);
    }
    return "?";
  }

  friend bool operator==(const SpaceSpec& a, const SpaceSpec& b) {
    if (a.kind_ != b.kind_ || a.dim_ != b.dim_) return false;
    switch (a.kind_) {
      case SpaceKind::Lp:
        return a.p_ == b.p_;
      case SpaceKind::Gauge:
        return a.sym_closed_ == b.sym_closed_ && a.gens_.cols() == b.gens_.cols() &&
               a.gens_ == b.gens_;
      case SpaceKind::Symmetric:
        return a.dual_role_ == b.dual_role_ && a.weights_ == b.weights_;
    }
    return false;
  }

 private:
  SpaceSpec() = default;

  static double conjugate(double p) {
    if (p == 1.0) return kInf;
    if (p == kInf) return 1.0;
    return p / (p - 1.0);
  }

  static double lp_norm(const Vector& x, double p) {
    if (p == kInf) return x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
    if (p == 1.0) return x.lpNorm<1>();
    if (p == 2.0) return x.norm();
    const double m = x.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    for (int i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]) / m, p);
    return m * std::pow(acc, 1.0 / p);
  }

  static std::string trim_num(double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  std::vector<int> abs_sort_order(const Vector& x) const {
    std::vector<int> order(static_cast<std::size_t>(dim_));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(x[a]) > std::abs(x[b]); });
    return order;
  }

  double sym_primal_formula(const Vector& x) const {
    Vector s = x.cwiseAbs();
    std::sort(s.data(), s.data() + s.size(), std::greater<double>());
    return s.dot(weights_);
  }

  double sym_dual_formula(const Vector& f) const {
    Vector s = f.cwiseAbs();
    std::sort(s.data(), s.data() + s.size(), std::greater<double>());
    double best = 0.0, acc = 0.0;
    for (int k = 0; k < dim_; ++k) {
      acc += s[k];
      best = std::max(best, acc / wsum_[k]);
    }
    return best;
  }

  // ---- gauge machinery ----

  double gauge_scale() const { return std::max(1.0, gens_.colwise().norm().maxCoeff()); }

  bool member_of_scaled_hull(const Vector& x, double t, double tol) const {
    Matrix shifted = t * gens_;
    shifted.colwise() -= x;
    return detail::wolfe_min_norm_point(shifted).norm2 <= tol;
  }

  /// Minkowski functional by bisection on the scale with a certified
  /// Euclidean hull-membership test inside.
  double gauge_norm(const Vector& x) const {
    if (x.isZero(0.0)) return 0.0;
    const double tol = 1e-11 * gauge_scale();
    double hi = std::max(1e-9, x.norm() / gauge_scale());
    int guard = 0;
    while (!member_of_scaled_hull(x, hi, tol)) {
      hi *= 2.0;
      if (++guard > 64)
        throw NumericError("gauge norm undefined: generators do not absorb the vector");
    }
    double lo = 0.0;
    for (int it = 0; it < 100 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (member_of_scaled_hull(x, mid, tol))
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }

  /// Exact norming functional from the polar LP:
  ///   max <f,x>  s.t.  <f,g> <= 1 for every generator.
  Vector gauge_norming_functional(const Vector& x) const {
    const int d = dim_;
    const int m = static_cast<int>(gens_.cols());
    detail::LpProblem lp;
    lp.A.resize(m, 2 * d);
    lp.A.leftCols(d) = gens_.transpose();
    lp.A.rightCols(d) = -gens_.transpose();
    lp.b = Vector::Ones(m);
    lp.c.resize(2 * d);
    lp.c.head(d) = -x;
    lp.c.tail(d) = x;
    lp.rel.assign(static_cast<std::size_t>(m), '<');
    auto res = detail::solve_lp(lp);
    if (res.status != detail::LpStatus::Optimal)
      throw NumericError("gauge norming functional: polar LP failed");
    Vector f = res.x.head(d) - res.x.tail(d);
    // rescale so the support constraint holds exactly
    const double s = (gens_.transpose() * f).maxCoeff();
    if (s > 1.0) f /= s;
    return f;
  }

  std::vector<Vector> polar_vertices(std::size_t cap) const {
    const int d = dim_;
    const int m = static_cast<int>(gens_.cols());
    if (m < d) throw SpecError("polar: generators cannot span");
    // facet normals of conv(generators): solve <a, g_s> = 1 on d-subsets
    std::vector<int> idx(static_cast<std::size_t>(d));
    std::vector<Vector> normals;
    std::vector<int> stack;
    std::size_t visited = 0;
    std::function<void(int, int)> rec = [&](int start, int depth) {
      if (depth == d) {
        if (++visited > cap) throw BudgetError("polar: facet enumeration exceeds cap");
        Matrix S(d, d);
        for (int j = 0; j < d; ++j) S.col(j) = gens_.col(idx[static_cast<std::size_t>(j)]);
        Eigen::FullPivLU<Matrix> lu(S.transpose());
        if (!lu.isInvertible()) return;
        Vector a = lu.solve(Vector::Ones(d));
        const double sup = (gens_.transpose() * a).maxCoeff();
        if (sup <= 1.0 + 1e-9) {
          a /= std::max(sup, 1e-300);
          for (const auto& b : normals)
            if ((b - a).lpNorm<Eigen::Infinity>() < 1e-9 * gauge_scale()) return;
          normals.push_back(a);
        }
        return;
      }
      for (int j = start; j < m; ++j) {
        idx[static_cast<std::size_t>(depth)] = j;
        rec(j + 1, depth + 1);
      }
    };
    rec(0, 0);
    if (normals.empty()) throw NumericError("polar: no facets found");
    return normals;
  }

  // symmetric-kind vertex families

  std::vector<Vector> flat_vertices(std::size_t cap) const {
    // signed k-flats (e_{i1}+...+e_{ik})/W_k
    std::vector<Vector> out;
    std::vector<int> subset;
    std::function<void(int, int)> rec = [&](int start, int remaining) {
      if (remaining == 0) {
        const int k = static_cast<int>(subset.size());
        const std::size_t signs = std::size_t{1} << k;
        if (out.size() + signs > cap) throw BudgetError("ball_vertices: symmetric family exceeds cap");
        for (std::size_t mask = 0; mask < signs; ++mask) {
          Vector v = Vector::Zero(dim_);
          for (int j = 0; j < k; ++j)
            v[subset[static_cast<std::size_t>(j)]] = ((mask >> j) & 1 ? 1.0 : -1.0) / wsum_[k - 1];
          out.push_back(v);
        }
        return;
      }
      for (int i = start; i <= dim_ - remaining; ++i) {
        subset.push_back(i);
        rec(i + 1, remaining - 1);
        subset.pop_back();
      }
    };
    for (int k = 1; k <= dim_; ++k) rec(0, k);
    return out;
  }

  std::vector<Vector> orbit_vertices(std::size_t cap) const {
    // signed permutations of the weight vector
    std::vector<int> perm(static_cast<std::size_t>(dim_));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Vector> out;
    do {
      const std::size_t signs = std::size_t{1} << dim_;
      if (out.size() + signs > cap) throw BudgetError("ball_vertices: orbit exceeds cap");
      for (std::size_t mask = 0; mask < signs; ++mask) {
        Vector v(dim_);
        for (int i = 0; i < dim_; ++i)
          v[i] = ((mask >> i) & 1 ? 1.0 : -1.0) * weights_[perm[static_cast<std::size_t>(i)]];
        out.push_back(v);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }

  void validate_gauge() {
    Eigen::ColPivHouseholderQR<Matrix> qr(gens_);
    qr.setThreshold(1e-10);
    if (qr.rank() < dim_)
      throw SpecError("gauge: generators do not span the ambient space");
    const double tol = 1e-9 * gauge_scale();
    if (sym_closed_) {
      for (int j = 0; j < gens_.cols(); ++j) {
        Matrix shifted = gens_;
        shifted.colwise() -= Vector(-gens_.col(j));
        if (detail::wolfe_min_norm_point(shifted).norm2 > tol)
          throw SpecError("gauge: symmetric flag set but -g is outside the hull");
      }
    } else {
      // 0 must be interior so the gauge is finite everywhere: the hull must
      // absorb the coordinate directions
      const double t_cap = 1e9;
      for (int i = 0; i < dim_; ++i) {
        for (double sgn : {1.0, -1.0}) {
          Vector e = Vector::Zero(dim_);
          e[i] = sgn;
          double t = 1.0 / gauge_scale();
          bool ok = false;
          while (t < t_cap) {
            if (member_of_scaled_hull(e, t, 1e-11 * gauge_scale())) {
              ok = true;
              break;
            }
            t *= 4.0;
          }
          if (!ok) throw SpecError("gauge: generators do not absorb the ambient space");
        }
      }
    }
  }

  SpaceKind kind_ = SpaceKind::Lp;
  int dim_ = 1;
  double p_ = 2.0;
  Matrix gens_;
  bool sym_closed_ = false;
  Vector weights_;
  Vector wsum_;
  bool dual_role_ = false;
};

/// Free-function forms used throughout the library.
inline double norm(const SpaceSpec& space, const Vector& x) { return space.norm(x); }
inline double dual_norm(const SpaceSpec& space, const Vector& f) { return space.dual_norm(f); }

}  // namespace wnc
