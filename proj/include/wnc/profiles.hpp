#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wnc/pointset.hpp"
#include "wnc/rng.hpp"
#include "wnc/solvers.hpp"

namespace wnc {

enum class SearchMode { Exact, Greedy, Beam };

inline const char* to_string(SearchMode m) {
  switch (m) {
    case SearchMode::Exact:
      return "exact";
    case SearchMode::Greedy:
      return "greedy";
    case SearchMode::Beam:
      return "beam";
  }
  return "?";
}

struct ProfileEntry {
  int arg = 0;
  double value = 0.0;
  double gap = 0.0;
  SearchMode mode = SearchMode::Exact;
};

struct Profile {
  std::string quantity;
  std::vector<ProfileEntry> entries;

  const ProfileEntry& at(int arg) const {
    for (const auto& e : entries)
      if (e.arg == arg) return e;
    throw SpecError("profile: no entry for argument " + std::to_string(arg));
  }
};

namespace detail {

inline std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
  return r;
}

inline std::uint64_t falling(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::uint64_t>(n - i);
  return r;
}

template <typename F>
void for_each_subset(int m, int k, F&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      fn(idx);
      return;
    }
    for (int i = start; i <= m - (k - depth); ++i) {
      idx[static_cast<std::size_t>(depth)] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
}

/// Distinct points of A (exact comparison), with a representative index map.
inline std::vector<Vector> distinct_points(const PointSet& A) {
  std::vector<Vector> out;
  for (const auto& x : A.points) {
    bool dup = false;
    for (const auto& y : out)
      if (x == y) dup = true;
    if (!dup) out.push_back(x);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// uniform-weak-null profile U(A,k): the largest action a unit functional can
// guarantee on k+1 points of A simultaneously (in absolute value); equals
// max over (k+1)-subsets and sign patterns of the min-norm-point value.
// ---------------------------------------------------------------------------

inline Profile uwn_profile(const PointSet& A, int k_max, SearchMode mode = SearchMode::Exact,
                           const SolverOptions& opts = {}) {
  if (A.points.empty()) throw SpecError("uwn_profile: empty point set");
  const int m = static_cast<int>(A.points.size());
  Profile out;
  out.quantity = "uwn_profile";

  if (mode == SearchMode::Exact) {
    long long calls = 0;
    for (int k = 0; k <= k_max && k < m; ++k)
      calls += static_cast<long long>(detail::binom(m, k + 1)) * (1LL << k);
    if (calls > opts.enum_budget)
      throw BudgetError("uwn_profile: exact enumeration needs " + std::to_string(calls) +
                        " solver calls (budget " + std::to_string(opts.enum_budget) + ")");
  }

  for (int k = 0; k <= k_max; ++k) {
    if (k >= m) {
      out.entries.push_back({k, 0.0, 0.0, SearchMode::Exact});
      continue;
    }
    double best_val = 0.0, best_lb = 0.0;
    if (mode == SearchMode::Exact) {
      detail::for_each_subset(m, k + 1, [&](const std::vector<int>& idx) {
        // first sign fixed positive: f and -f give the same value
        for (std::uint32_t signs = 0; signs < (1u << k); ++signs) {
          std::vector<Vector> pts;
          pts.reserve(idx.size());
          for (std::size_t j = 0; j < idx.size(); ++j) {
            const double s = (j > 0 && ((signs >> (j - 1)) & 1u)) ? -1.0 : 1.0;
            pts.push_back(s * A.points[static_cast<std::size_t>(idx[j])]);
          }
          auto cert = min_norm_point(A.space, pts, opts);
          if (cert.value > best_val) best_val = cert.value;
          if (cert.value - cert.gap > best_lb) best_lb = cert.value - cert.gap;
        }
      });
      out.entries.push_back({k, best_val, std::max(0.0, best_val - best_lb), SearchMode::Exact});
    } else {
      // greedy: beam over (subset, signs) states; sound lower bound since
      // every evaluated state is a true witness value
      struct State {
        std::vector<int> idx;
        std::vector<double> sign;
        double val;
        double lb;
      };
      std::vector<State> beam;
      for (int i = 0; i < m; ++i) {
        auto c = min_norm_point(A.space, {A.points[static_cast<std::size_t>(i)]}, opts);
        beam.push_back({{i}, {1.0}, c.value, c.value - c.gap});
      }
      std::sort(beam.begin(), beam.end(), [](auto& a, auto& b) { return a.val > b.val; });
      if (static_cast<int>(beam.size()) > opts.beam_width) beam.resize(opts.beam_width);
      for (int depth = 1; depth <= k; ++depth) {
        std::vector<State> next;
        for (const auto& st : beam) {
          for (int i = 0; i < m; ++i) {
            if (std::find(st.idx.begin(), st.idx.end(), i) != st.idx.end()) continue;
            for (double s : {1.0, -1.0}) {
              std::vector<Vector> pts;
              for (std::size_t j = 0; j < st.idx.size(); ++j)
                pts.push_back(st.sign[j] * A.points[static_cast<std::size_t>(st.idx[j])]);
              pts.push_back(s * A.points[static_cast<std::size_t>(i)]);
              auto c = min_norm_point(A.space, pts, opts);
              State ns = st;
              ns.idx.push_back(i);
              ns.sign.push_back(s);
              ns.val = c.value;
              ns.lb = c.value - c.gap;
              next.push_back(std::move(ns));
            }
          }
        }
        std::sort(next.begin(), next.end(), [](auto& a, auto& b) { return a.val > b.val; });
        if (static_cast<int>(next.size()) > opts.beam_width) next.resize(opts.beam_width);
        beam = std::move(next);
        if (beam.empty()) break;
      }
      for (const auto& st : beam) {
        if (st.val > best_val) best_val = st.val;
        if (st.lb > best_lb) best_lb = st.lb;
      }
      // certified upper bound: max norm, improved through the Cesaro link
      // C(A,n) >= U(A, 2n-1) for affordable exact Cesaro entries
      double upper = max_point_norm(A);
      for (int n2 = 1; 2 * n2 - 1 <= k && 2 * n2 <= m; ++n2) {
        if (detail::binom(m, n2) > 200000) break;
        double cmax = 0.0;
        detail::for_each_subset(m, n2, [&](const std::vector<int>& idx) {
          Vector mean = Vector::Zero(A.dim());
          for (int i : idx) mean += A.points[static_cast<std::size_t>(i)];
          mean /= static_cast<double>(n2);
          cmax = std::max(cmax, A.space.norm(mean));
        });
        upper = std::min(upper, cmax);
      }
      out.entries.push_back({k, best_lb, std::max(0.0, upper - best_lb), SearchMode::Greedy});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cesaro subset profile C(A,k): largest norm of a k-point subset mean.
// ---------------------------------------------------------------------------

inline Profile cesaro_subset_profile(const PointSet& A, int k_max,
                                     SearchMode mode = SearchMode::Exact,
                                     const SolverOptions& opts = {}) {
  if (A.points.empty()) throw SpecError("cesaro_subset_profile: empty point set");
  const int m = static_cast<int>(A.points.size());
  Profile out;
  out.quantity = "cesaro_subset_profile";
  const bool gauge = A.space.kind() == SpaceKind::Gauge;

  for (int k = 1; k <= k_max; ++k) {
    if (k > m) {
      if (mode == SearchMode::Exact)
        throw SpecError("cesaro_subset_profile: k exceeds |A| in exact mode");
      continue;
    }
    double best = 0.0;
    if (mode == SearchMode::Exact) {
      if (static_cast<long long>(detail::binom(m, k)) > opts.enum_budget)
        throw BudgetError("cesaro_subset_profile: subset enumeration exceeds budget");
      detail::for_each_subset(m, k, [&](const std::vector<int>& idx) {
        Vector mean = Vector::Zero(A.dim());
        for (int i : idx) mean += A.points[static_cast<std::size_t>(i)];
        mean /= static_cast<double>(k);
        best = std::max(best, A.space.norm(mean));
      });
      out.entries.push_back({k, best, gauge ? 1e-10 * std::max(1.0, best) : 0.0,
                             SearchMode::Exact});
    } else {
      // greedy add, then local single-swap ascent; a certified lower bound
      std::vector<int> sel;
      std::vector<char> in(static_cast<std::size_t>(m), 0);
      Vector sum = Vector::Zero(A.dim());
      for (int step = 0; step < k; ++step) {
        int pick = -1;
        double pv = -1.0;
        for (int i = 0; i < m; ++i) {
          if (in[static_cast<std::size_t>(i)]) continue;
          const double v =
              A.space.norm((sum + A.points[static_cast<std::size_t>(i)]) / double(step + 1));
          if (v > pv) {
            pv = v;
            pick = i;
          }
        }
        sel.push_back(pick);
        in[static_cast<std::size_t>(pick)] = 1;
        sum += A.points[static_cast<std::size_t>(pick)];
      }
      best = A.space.norm(sum / double(k));
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t a = 0; a < sel.size(); ++a) {
          for (int i = 0; i < m; ++i) {
            if (in[static_cast<std::size_t>(i)]) continue;
            Vector cand = sum - A.points[static_cast<std::size_t>(sel[a])] +
                          A.points[static_cast<std::size_t>(i)];
            const double v = A.space.norm(cand / double(k));
            if (v > best + 1e-15) {
              best = v;
              in[static_cast<std::size_t>(sel[a])] = 0;
              in[static_cast<std::size_t>(i)] = 1;
              sum = cand;
              sel[a] = i;
              improved = true;
            }
          }
        }
      }
      out.entries.push_back({k, best, std::max(0.0, max_point_norm(A) - best), SearchMode::Greedy});
    }
  }
  return out;
}

/// Norms of the running prefix means of an ordered sequence.
inline Profile cesaro_prefix_profile(const PointSet& seq) {
  if (seq.points.empty()) throw SpecError("cesaro_prefix_profile: empty sequence");
  Profile out;
  out.quantity = "cesaro_prefix_profile";
  Vector sum = Vector::Zero(seq.dim());
  for (std::size_t k = 1; k <= seq.points.size(); ++k) {
    sum += seq.points[k - 1];
    out.entries.push_back({static_cast<int>(k), seq.space.norm(sum / double(k)), 0.0,
                           SearchMode::Exact});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Audit of the two averaging inequalities connecting U and C.
// ---------------------------------------------------------------------------

struct Prop13Violation {
  int n = 0;
  int n1 = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct Prop13Report {
  bool pass = true;
  double tol = 1e-6;
  std::vector<Prop13Violation> upper_violations;  // C(A,n) vs averaged bound
  std::vector<Prop13Violation> lower_violations;  // C(A,n) vs U(A,2n-1)
  Profile u_profile;
  Profile c_profile;
};

inline Prop13Report prop13_audit(const PointSet& A, double tol = 1e-6,
                                 const SolverOptions& opts = {}) {
  const int m = static_cast<int>(A.points.size());
  Prop13Report rep;
  rep.tol = tol;
  rep.u_profile = uwn_profile(A, m - 1, SearchMode::Exact, opts);
  rep.c_profile = cesaro_subset_profile(A, m, SearchMode::Exact, opts);
  const double r = max_point_norm(A);

  for (int n = 1; n <= m; ++n) {
    const double C = rep.c_profile.at(n).value;
    for (int n1 = 0; n1 < n; ++n1) {
      const auto& u = rep.u_profile.at(n1);
      const double bound = (n1 * r + (n - n1) * u.value) / double(n);
      if (C > bound + tol) {
        rep.pass = false;
        rep.upper_violations.push_back({n, n1, C, bound});
      }
    }
    if (2 * n <= m) {
      const auto& u = rep.u_profile.at(2 * n - 1);
      const double lb = u.value - u.gap;
      if (C < lb - tol) {
        rep.pass = false;
        rep.lower_violations.push_back({n, 2 * n - 1, C, lb});
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// chain_value / separation_value: maxima over ordered tuples of the minimal
// chain-feasibility (resp. cut-separation) value.
// ---------------------------------------------------------------------------

struct ChainWitness {
  std::vector<Vector> tuple;
  std::vector<DualFunctional> functionals;
  double level = 0.0;
};

/// Re-verify a chain witness from scratch (triangular pattern + ball norms).
inline bool verify_chain_witness(const SpaceSpec& space, const ChainWitness& w,
                                 double tol = 1e-7) {
  const std::size_t n = w.tuple.size();
  if (w.functionals.size() != n) return false;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& f = w.functionals[k].coefficients;
    if (space.dual_norm(f) > 1.0 + tol) return false;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = f.dot(w.tuple[j]);
      if (j < k && std::abs(a) > tol) return false;
      if (j >= k && a < w.level - tol) return false;
    }
  }
  return true;
}

struct SeparationWitness {
  std::vector<Vector> tuple;
  double level = 0.0;
  std::vector<SolveCertificate> cut_distances;  // cut k separates prefix k from the rest
};

struct TupleSearchResult {
  double value = 0.0;  // max over tuples of the certified lower cut minimum
  double upper = 0.0;  // max over enumerated tuples of the upper cut minimum
  SearchMode mode = SearchMode::Exact;
  std::vector<int> tuple_indices;  // best tuple, into the deduplicated list
};

namespace detail {

/// Shared engine for the two tuple searches. `eval(prefix_mask, suffix_mask)`
/// returns (lower, upper) for the cut quantity; the tuple value is the min
/// over the tuple's cuts, the search maximizes it over ordered tuples of
/// distinct points.
template <typename Eval>
TupleSearchResult tuple_search(const std::vector<Vector>& pts, int n, SearchMode mode,
                               int min_cut_len, const SolverOptions& opts, Eval&& eval) {
  const int m = static_cast<int>(pts.size());
  if (m > 30) throw BudgetError("tuple search: more than 30 distinct points");
  TupleSearchResult best;
  best.mode = mode;

  struct State {
    std::vector<int> tuple;
    std::uint32_t mask = 0;
    double lb = kInf;
    double ub = kInf;
  };

  auto extend = [&](const State& st, int i) {
    State ns = st;
    ns.tuple.push_back(i);
    ns.mask |= (1u << i);
    const int len = static_cast<int>(ns.tuple.size());
    ns.lb = kInf;
    ns.ub = kInf;
    // cuts at k = min_cut_len..len (prefix of size k-1)
    std::uint32_t pre = 0;
    for (int k = 1; k <= len; ++k) {
      if (k >= min_cut_len) {
        auto [lo, hi] = eval(pre, ns.mask & ~pre);
        ns.lb = std::min(ns.lb, lo);
        ns.ub = std::min(ns.ub, hi);
      }
      if (k <= len - 1) pre |= (1u << ns.tuple[static_cast<std::size_t>(k - 1)]);
    }
    return ns;
  };

  if (mode == SearchMode::Exact) {
    std::function<void(const State&)> rec = [&](const State& st) {
      if (static_cast<int>(st.tuple.size()) == n) {
        best.upper = std::max(best.upper, st.ub);
        if (st.lb > best.value || best.tuple_indices.empty()) {
          best.value = st.lb;
          best.tuple_indices = st.tuple;
        }
        return;
      }
      for (int i = 0; i < m; ++i) {
        if (st.mask & (1u << i)) continue;
        State ns = extend(st, i);
        // a pruned branch cannot raise max-lb, and its upper minimum is
        // already dominated by the recorded best lower bound
        if (!best.tuple_indices.empty() && ns.ub <= best.value) continue;
        rec(ns);
      }
    };
    rec(State{});
  } else {
    std::vector<State> beam{State{}};
    for (int depth = 0; depth < n; ++depth) {
      std::vector<State> next;
      for (const auto& st : beam)
        for (int i = 0; i < m; ++i) {
          if (st.mask & (1u << i)) continue;
          next.push_back(extend(st, i));
        }
      std::sort(next.begin(), next.end(), [](const State& a, const State& b) {
        if (a.lb != b.lb) return a.lb > b.lb;
        return a.tuple < b.tuple;
      });
      if (static_cast<int>(next.size()) > opts.beam_width) next.resize(opts.beam_width);
      beam = std::move(next);
      if (beam.empty()) break;
    }
    if (!beam.empty()) {
      best.value = beam.front().lb;
      best.upper = beam.front().ub;
      best.tuple_indices = beam.front().tuple;
    }
  }
  best.upper = std::max(best.upper, best.value);
  return best;
}

}  // namespace detail

struct ChainValueResult {
  double value = 0.0;
  double gap = 0.0;
  SearchMode mode = SearchMode::Exact;
  ChainWitness witness;
};

inline ChainValueResult chain_value(const PointSet& A, int n, SearchMode mode = SearchMode::Exact,
                                    const SolverOptions& opts = {}) {
  auto pts = detail::distinct_points(A);
  const int m = static_cast<int>(pts.size());
  if (n < 1) throw SpecError("chain_value: n must be >= 1");
  if (mode == SearchMode::Exact && n > static_cast<int>(A.points.size()))
    throw SpecError("chain_value: n exceeds |A| in exact mode");
  if (n > m) {
    // only repeated-point tuples remain, and a repeat forces value 0 (the
    // annihilation constraint conflicts with the >= epsilon demand)
    return ChainValueResult{0.0, 0.0, mode, {}};
  }
  if (mode == SearchMode::Exact) {
    const long long calls =
        static_cast<long long>(detail::binom(m, n)) * ((1LL << n) - 1);
    if (calls > opts.enum_budget) throw BudgetError("chain_value: enumeration exceeds budget");
  }

  // memoized cut evaluation: distance from conv(suffix) to span(prefix)
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<double, double>> memo;
  std::map<std::pair<std::uint32_t, std::uint32_t>, SolveCertificate> cert_memo;
  auto eval = [&](std::uint32_t pre, std::uint32_t suf) -> std::pair<double, double> {
    const auto key = std::make_pair(pre, suf);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<Vector> tuple;
    int k = 1;
    for (int i = 0; i < m; ++i)
      if (pre & (1u << i)) {
        tuple.push_back(pts[static_cast<std::size_t>(i)]);
        ++k;
      }
    for (int i = 0; i < m; ++i)
      if (suf & (1u << i)) tuple.push_back(pts[static_cast<std::size_t>(i)]);
    auto cert = chain_feasibility(A.space, tuple, k, opts);
    auto res = std::make_pair(cert.value, cert.value + cert.gap);
    memo[key] = res;
    cert_memo[key] = std::move(cert);
    return res;
  };

  auto search = detail::tuple_search(pts, n, mode, 1, opts, eval);

  ChainValueResult out;
  out.value = search.value;
  out.gap = std::max(0.0, search.upper - search.value);
  out.mode = mode;
  out.witness.level = search.value;
  std::uint32_t pre = 0;
  std::uint32_t full = 0;
  for (int i : search.tuple_indices) full |= (1u << i);
  for (std::size_t k = 0; k < search.tuple_indices.size(); ++k) {
    out.witness.tuple.push_back(pts[static_cast<std::size_t>(search.tuple_indices[k])]);
  }
  for (std::size_t k = 0; k < search.tuple_indices.size(); ++k) {
    const auto& cert = cert_memo.at(std::make_pair(pre, full & ~pre));
    out.witness.functionals.push_back(
        cert.functional.value_or(DualFunctional{Vector::Zero(A.dim()), 0.0}));
    pre |= (1u << search.tuple_indices[k]);
  }
  return out;
}

struct SeparationValueResult {
  double value = 0.0;
  double gap = 0.0;
  SearchMode mode = SearchMode::Exact;
  SeparationWitness witness;
};

inline SeparationValueResult separation_value(const PointSet& A, int n,
                                              SearchMode mode = SearchMode::Exact,
                                              const SolverOptions& opts = {}) {
  auto pts = detail::distinct_points(A);
  const int m = static_cast<int>(pts.size());
  if (n < 2) throw SpecError("separation_value: n must be >= 2");
  if (mode == SearchMode::Exact && n > static_cast<int>(A.points.size()))
    throw SpecError("separation_value: n exceeds |A| in exact mode");
  if (n > m) {
    // a repeated point sits in both sides of some cut, forcing distance 0
    return SeparationValueResult{0.0, 0.0, mode, {}};
  }
  if (mode == SearchMode::Exact) {
    const long long calls =
        static_cast<long long>(detail::binom(m, n)) * ((1LL << n) - 2);
    if (calls > opts.enum_budget)
      throw BudgetError("separation_value: enumeration exceeds budget");
  }

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<double, double>> memo;
  std::map<std::pair<std::uint32_t, std::uint32_t>, SolveCertificate> cert_memo;
  auto eval = [&](std::uint32_t pre, std::uint32_t suf) -> std::pair<double, double> {
    if (pre == 0) return {kInf, kInf};  // only proper cuts count
    const auto key = std::make_pair(pre, suf);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<Vector> P, Q;
    for (int i = 0; i < m; ++i) {
      if (pre & (1u << i)) P.push_back(pts[static_cast<std::size_t>(i)]);
      if (suf & (1u << i)) Q.push_back(pts[static_cast<std::size_t>(i)]);
    }
    auto cert = hull_distance(A.space, P, Q, opts);
    // distance certificate: truth in [value - gap, value]
    auto res = std::make_pair(std::max(0.0, cert.value - cert.gap), cert.value);
    memo[key] = res;
    cert_memo[key] = std::move(cert);
    return res;
  };

  auto search = detail::tuple_search(pts, n, mode, 2, opts, eval);

  SeparationValueResult out;
  // distance certificates bound truth below by value-gap; the reported value
  // is the attained-distance maximum, truth lies in [value - gap, value]
  out.value = search.upper;
  out.gap = std::max(0.0, search.upper - search.value);
  out.mode = mode;
  out.witness.level = search.value;
  std::uint32_t pre = 0;
  std::uint32_t full = 0;
  for (int i : search.tuple_indices) full |= (1u << i);
  for (int i : search.tuple_indices)
    out.witness.tuple.push_back(pts[static_cast<std::size_t>(i)]);
  for (std::size_t k = 0; k + 1 < search.tuple_indices.size(); ++k) {
    pre |= (1u << search.tuple_indices[k]);
    out.witness.cut_distances.push_back(cert_memo.at(std::make_pair(pre, full & ~pre)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Krein-type probe: does augmenting A by convex combinations raise the
// separation value? Heuristic; explicitly non-certified.
// ---------------------------------------------------------------------------

struct KreinReport {
  double base_value = 0.0;
  double base_gap = 0.0;
  double augmented_value = 0.0;
  double augmented_gap = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string note = "non-certified probe";
};

inline KreinReport krein_probe(const PointSet& A, int n, int samples, std::uint64_t seed,
                               const SolverOptions& opts = {}) {
  KreinReport rep;
  rep.samples = samples;
  rep.seed = seed;
  auto base = separation_value(A, n, SearchMode::Exact, opts);
  rep.base_value = base.value;
  rep.base_gap = base.gap;

  PointSet B = A;
  Rng rng(seed);
  const int m = static_cast<int>(A.points.size());
  for (int s = 0; s < samples; ++s) {
    const int k = rng.uniform_int(2, std::min(4, m));
    Vector w(k);
    for (int i = 0; i < k; ++i) w[i] = rng.uniform(1e-3, 1.0);
    w /= w.sum();
    Vector x = Vector::Zero(A.dim());
    for (int i = 0; i < k; ++i) x += w[i] * A.points[static_cast<std::size_t>(rng.uniform_int(0, m - 1))];
    B.points.push_back(x);
    B.labels.push_back("conv" + std::to_string(s));
  }
  SearchMode mode = SearchMode::Exact;
  const int md = static_cast<int>(detail::distinct_points(B).size());
  if (static_cast<long long>(detail::binom(md, n)) * ((1LL << n) - 2) > opts.enum_budget)
    mode = SearchMode::Beam;
  auto aug = separation_value(B, n, mode, opts);
  rep.augmented_value = aug.value;
  rep.augmented_gap = aug.gap;
  return rep;
}

}  // namespace wnc
