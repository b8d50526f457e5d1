#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "wnc/pointset.hpp"
#include "wnc/profiles.hpp"
#include "wnc/rng.hpp"

namespace wnc {

/// A family of finite subsets of {0..universe-1}; the combinatorial source
/// of characteristic-function point sets.
struct SetFamily {
  int universe = 0;
  std::vector<std::vector<int>> members;
  std::vector<std::string> labels;

  std::size_t size() const { return members.size(); }
  int max_member_size() const {
    std::size_t n = 0;
    for (const auto& f : members) n = std::max(n, f.size());
    return static_cast<int>(n);
  }
};

inline SetFamily make_set_family(int universe, std::vector<std::vector<int>> members,
                                 std::vector<std::string> labels = {}) {
  if (universe < 1) throw SpecError("set family: universe must be positive");
  for (auto& f : members) {
    if (f.empty()) throw SpecError("set family: members must be nonempty");
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    if (f.front() < 0 || f.back() >= universe)
      throw SpecError("set family: member index outside the universe");
  }
  if (labels.empty()) {
    labels.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) labels.push_back("F" + std::to_string(i));
  } else if (labels.size() != members.size()) {
    throw SpecError("set family: label count must match member count");
  }
  return SetFamily{universe, std::move(members), std::move(labels)};
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

inline std::pair<SpaceSpec, PointSet> lp_basis(double p, int d) {
  if (d < 1) throw SpecError("lp_basis: d must be >= 1");
  SpaceSpec sp = SpaceSpec::lp(p, d);
  std::vector<Vector> pts;
  std::vector<std::string> labels;
  for (int i = 0; i < d; ++i) {
    Vector e = Vector::Zero(d);
    e[i] = 1.0;
    pts.push_back(e);
    labels.push_back("e" + std::to_string(i + 1));
  }
  return {sp, make_point_set(sp, std::move(pts), std::move(labels))};
}

/// Indicator vectors of the family members inside sup-norm space on the
/// universe.
inline std::pair<SpaceSpec, PointSet> characteristic_family(const SetFamily& F) {
  if (F.members.empty()) throw SpecError("characteristic_family: empty family");
  SpaceSpec sp = SpaceSpec::lp(kInf, F.universe);
  std::vector<Vector> pts;
  for (const auto& f : F.members) {
    Vector x = Vector::Zero(F.universe);
    for (int i : f) x[i] = 1.0;
    pts.push_back(std::move(x));
  }
  return {sp, make_point_set(sp, std::move(pts), F.labels)};
}

// ---------------------------------------------------------------------------
// Overlap combinatorics: entry n = max over n-member subfamilies of the
// maximal coverage multiplicity. The sup-norm of a sum of indicators equals
// the multiplicity, which links this to the Cesaro subset profile.
// ---------------------------------------------------------------------------

inline Profile overlap_profile(const SetFamily& F, int n_max,
                               SearchMode mode = SearchMode::Exact,
                               const SolverOptions& opts = {}) {
  const int m = static_cast<int>(F.members.size());
  if (m == 0) throw SpecError("overlap_profile: empty family");
  Profile out;
  out.quantity = "overlap_profile";
  for (int n = 1; n <= n_max && n <= m; ++n) {
    int best = 0;
    if (mode == SearchMode::Exact) {
      if (static_cast<long long>(detail::binom(m, n)) > opts.enum_budget)
        throw BudgetError("overlap_profile: subfamily enumeration exceeds budget");
      detail::for_each_subset(m, n, [&](const std::vector<int>& idx) {
        std::vector<int> mult(static_cast<std::size_t>(F.universe), 0);
        int loc = 0;
        for (int j : idx)
          for (int i : F.members[static_cast<std::size_t>(j)])
            loc = std::max(loc, ++mult[static_cast<std::size_t>(i)]);
        best = std::max(best, loc);
      });
      out.entries.push_back({n, static_cast<double>(best), 0.0, SearchMode::Exact});
    } else {
      // greedy-add then single-swap ascent; lower bound only
      std::vector<int> sel;
      std::vector<char> in(static_cast<std::size_t>(m), 0);
      std::vector<int> mult(static_cast<std::size_t>(F.universe), 0);
      auto mult_of = [&](const std::vector<int>& mlt) {
        int mx = 0;
        for (int v : mlt) mx = std::max(mx, v);
        return mx;
      };
      for (int step = 0; step < n; ++step) {
        int pick = -1, pv = -1;
        for (int j = 0; j < m; ++j) {
          if (in[static_cast<std::size_t>(j)]) continue;
          auto trial = mult;
          for (int i : F.members[static_cast<std::size_t>(j)]) ++trial[static_cast<std::size_t>(i)];
          const int v = mult_of(trial);
          if (v > pv) {
            pv = v;
            pick = j;
          }
        }
        sel.push_back(pick);
        in[static_cast<std::size_t>(pick)] = 1;
        for (int i : F.members[static_cast<std::size_t>(pick)]) ++mult[static_cast<std::size_t>(i)];
      }
      best = mult_of(mult);
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t a = 0; a < sel.size(); ++a)
          for (int j = 0; j < m; ++j) {
            if (in[static_cast<std::size_t>(j)]) continue;
            auto trial = mult;
            for (int i : F.members[static_cast<std::size_t>(sel[a])])
              --trial[static_cast<std::size_t>(i)];
            for (int i : F.members[static_cast<std::size_t>(j)]) ++trial[static_cast<std::size_t>(i)];
            const int v = mult_of(trial);
            if (v > best) {
              best = v;
              in[static_cast<std::size_t>(sel[a])] = 0;
              in[static_cast<std::size_t>(j)] = 1;
              mult = trial;
              sel[a] = j;
              improved = true;
            }
          }
      }
      out.entries.push_back({n, static_cast<double>(best),
                             static_cast<double>(std::min(n, F.max_member_size() ? m : n)),
                             SearchMode::Greedy});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hilbert-factorization audit: with N = max member size, the indicator
// family factors through l2 with operator norm at most N, so coefficient
// sums obey ||sum a_j chi_j||_inf <= N max|a| <= N ||a||_2 and n-fold sums
// stay below N sqrt(n).
// ---------------------------------------------------------------------------

struct HilbertAuditReport {
  bool pass = true;
  int support_bound = 0;  // N
  int coefficient_trials = 0;
  double worst_coefficient_margin = kInf;  // min over trials of rhs - lhs
  std::vector<std::pair<int, double>> covering_margins;  // (n, N sqrt(n) - overlap(n))
};

inline HilbertAuditReport hilbert_factorization_audit(const SetFamily& F, int trials = 64,
                                                      std::uint64_t seed = 7,
                                                      const SolverOptions& opts = {}) {
  auto [sp, A] = characteristic_family(F);
  const int m = static_cast<int>(F.members.size());
  HilbertAuditReport rep;
  rep.support_bound = F.max_member_size();
  rep.coefficient_trials = trials;
  const double N = static_cast<double>(rep.support_bound);

  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    Vector a(m);
    for (int j = 0; j < m; ++j) a[j] = rng.uniform(-1.0, 1.0);
    Vector sum = Vector::Zero(F.universe);
    for (int j = 0; j < m; ++j) sum += a[j] * A.points[static_cast<std::size_t>(j)];
    const double lhs = sum.lpNorm<Eigen::Infinity>();
    const double mid = N * a.cwiseAbs().maxCoeff();
    const double rhs = N * a.norm();
    rep.worst_coefficient_margin = std::min({rep.worst_coefficient_margin, mid - lhs, rhs - mid});
    if (lhs > mid + 1e-9 || mid > rhs + 1e-9) rep.pass = false;
  }

  auto ov = overlap_profile(F, m, SearchMode::Exact, opts);
  for (int n = 1; n <= m; ++n) {
    const double margin = N * std::sqrt(static_cast<double>(n)) - ov.at(n).value;
    rep.covering_margins.emplace_back(n, margin);
    if (margin < -1e-9) rep.pass = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cyclic-shift averaging on coordinate-symmetric spaces (symmetric constant
// one): a small convex combination of basis vectors forces the uniform mean
// just as small.
// ---------------------------------------------------------------------------

struct TroyanskiReport {
  bool pass = true;
  double eps0 = 0.0;              // || sum lambda_k e_{i_k} ||
  double mean_norm = 0.0;         // n^{-1} || sum e_{i_k} ||
  double shift_norm_spread = 0.0; // max deviation of shifted-weight norms from eps0
  double mnp_value = 0.0;         // min-norm point of the basis subset
  double mnp_gap = 0.0;
};

inline TroyanskiReport troyanski_average_check(const SpaceSpec& space,
                                               const std::vector<int>& indices,
                                               const SimplexWeights& lambda, double tol = 1e-9,
                                               const SolverOptions& opts = {}) {
  if (!space.coordinate_symmetric())
    throw SpecError("troyanski_average_check: space norm must be coordinate-symmetric");
  const int n = static_cast<int>(indices.size());
  if (n < 1) throw SpecError("troyanski_average_check: no indices");
  std::set<int> uniq(indices.begin(), indices.end());
  if (static_cast<int>(uniq.size()) != n)
    throw SpecError("troyanski_average_check: indices must be distinct");
  for (int i : indices)
    if (i < 0 || i >= space.dim()) throw SpecError("troyanski_average_check: index out of range");
  if (!lambda.feasible(tol) || lambda.weights.size() != n)
    throw SpecError("troyanski_average_check: weights are not simplex weights over the indices");

  auto combo = [&](const Vector& w) {
    Vector x = Vector::Zero(space.dim());
    for (int k = 0; k < n; ++k) x[indices[static_cast<std::size_t>(k)]] += w[k];
    return x;
  };

  TroyanskiReport rep;
  rep.eps0 = space.norm(combo(lambda.weights));
  Vector ones = Vector::Ones(n);
  rep.mean_norm = space.norm(combo(ones)) / n;

  for (int s = 1; s < n; ++s) {
    Vector w(n);
    for (int k = 0; k < n; ++k) w[k] = lambda.weights[(k + s) % n];
    rep.shift_norm_spread = std::max(rep.shift_norm_spread, std::abs(space.norm(combo(w)) - rep.eps0));
  }

  std::vector<Vector> basis_pts;
  for (int k = 0; k < n; ++k) {
    Vector e = Vector::Zero(space.dim());
    e[indices[static_cast<std::size_t>(k)]] = 1.0;
    basis_pts.push_back(e);
  }
  auto mnp = min_norm_point(space, basis_pts, opts);
  rep.mnp_value = mnp.value;
  rep.mnp_gap = mnp.gap;

  rep.pass = rep.mean_norm <= rep.eps0 + tol && rep.shift_norm_spread <= 1e-9 &&
             std::abs(rep.mnp_value - rep.mean_norm) <= mnp.gap + tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Rademacher type ratio: signed-sum average against the p-sum of norms; a
// lower estimate of the type-p constant. Exact sign enumeration up to 20
// points, seeded sampling beyond.
// ---------------------------------------------------------------------------

struct TypeEstimate {
  double ratio = 0.0;
  double signed_average = 0.0;
  double p_sum = 0.0;
  bool exact = true;
  int samples = 0;
};

inline TypeEstimate type_constant_estimate(const PointSet& A, double p, std::uint64_t seed = 1,
                                           const SolverOptions& /*opts*/ = {}) {
  const int n = static_cast<int>(A.points.size());
  if (n < 1) throw SpecError("type_constant_estimate: empty point set");
  if (!(p >= 1.0)) throw SpecError("type_constant_estimate: p must be >= 1");
  TypeEstimate est;
  double psum = 0.0;
  for (const auto& x : A.points) psum += std::pow(A.space.norm(x), p);
  est.p_sum = std::pow(psum, 1.0 / p);

  if (n <= 20) {
    // sigma and -sigma give the same norm, so half the patterns suffice
    const std::uint64_t total = std::uint64_t{1} << (n - 1);
    double acc = 0.0;
    Vector sum(A.dim());
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      sum.setZero();
      for (int j = 0; j < n; ++j) {
        const double s = (j < n - 1 && ((mask >> j) & 1ULL)) ? -1.0 : 1.0;
        sum += s * A.points[static_cast<std::size_t>(j)];
      }
      acc += A.space.norm(sum);
    }
    est.signed_average = acc / static_cast<double>(total);
    est.exact = true;
    est.samples = static_cast<int>(std::min<std::uint64_t>(total * 2, 1u << 21));
  } else {
    Rng rng(seed);
    const int samples = 20000;
    double acc = 0.0;
    Vector sum(A.dim());
    for (int t = 0; t < samples; ++t) {
      sum.setZero();
      for (int j = 0; j < n; ++j)
        sum += (rng.next_u64() & 1ULL ? 1.0 : -1.0) * A.points[static_cast<std::size_t>(j)];
      acc += A.space.norm(sum);
    }
    est.signed_average = acc / samples;
    est.exact = false;
    est.samples = samples;
  }
  est.ratio = est.p_sum > 0 ? est.signed_average / est.p_sum : 0.0;
  return est;
}

}  // namespace wnc
