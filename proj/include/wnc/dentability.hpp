#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wnc/pointset.hpp"
#include "wnc/rational.hpp"
#include "wnc/rng.hpp"
#include "wnc/solvers.hpp"

namespace wnc {

// ---------------------------------------------------------------------------
// Slice derivation on finite point sets. A subset S of the current set D is
// a slice iff conv(S) is strictly separable from conv(D \ S); for finite
// sets that is exactly hull_distance > 0, so removals are certified by the
// distance solver instead of a search over halfspace parameters.
// ---------------------------------------------------------------------------

struct SliceRemoval {
  int level = 0;                     // derivation step that removed the point
  int point = 0;                     // index into the original point list
  std::vector<int> slice;            // the witnessing slice (original indices)
  double slice_diameter = 0.0;
  bool complement_empty = false;     // the whole set was the slice
  double separation = 0.0;           // certified lower bound on the distance
  DualFunctional functional;         // separating functional (zero if trivial)
};

struct DerivationTrace {
  double epsilon = 0.0;
  std::vector<std::vector<int>> levels;  // levels[0] = all indices, last = {}
  std::vector<SliceRemoval> removals;
};

namespace detail {

struct SliceStepResult {
  std::vector<int> survivors;
  std::vector<SliceRemoval> removals;
};

inline SliceStepResult slice_derivation_step(const SpaceSpec& space,
                                             const std::vector<Vector>& pts,
                                             const std::vector<int>& active, double eps,
                                             int level, const SolverOptions& opts) {
  const int a = static_cast<int>(active.size());
  Matrix dist(a, a);
  for (int i = 0; i < a; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < a; ++j) {
      const double d = space.norm(pts[static_cast<std::size_t>(active[static_cast<std::size_t>(i)])] -
                                  pts[static_cast<std::size_t>(active[static_cast<std::size_t>(j)])]);
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }

  SliceStepResult out;
  long long budget_used = 0;
  for (int i = 0; i < a; ++i) {
    // candidate slices live inside the eps-neighborhood of the point
    std::vector<int> nb;  // positions within `active`, excluding i
    for (int j = 0; j < a; ++j)
      if (j != i && dist(i, j) <= eps) nb.push_back(j);
    const int nn = static_cast<int>(nb.size());
    if (nn > 22) throw BudgetError("slice_derivation: neighborhood too dense for enumeration");

    std::optional<SliceRemoval> removal;
    // subsets ordered by popcount so the cheapest slices are tried first
    std::vector<std::uint32_t> masks;
    masks.reserve(std::size_t{1} << nn);
    for (std::uint32_t msk = 0; msk < (1u << nn); ++msk) masks.push_back(msk);
    std::sort(masks.begin(), masks.end(), [](std::uint32_t x, std::uint32_t y) {
      const int px = __builtin_popcount(x), py = __builtin_popcount(y);
      return px != py ? px < py : x < y;
    });

    for (std::uint32_t msk : masks) {
      // diameter check within the candidate slice
      std::vector<int> Spos{i};
      for (int t = 0; t < nn; ++t)
        if (msk & (1u << t)) Spos.push_back(nb[static_cast<std::size_t>(t)]);
      bool ok = true;
      for (std::size_t u = 0; u < Spos.size() && ok; ++u)
        for (std::size_t v = u + 1; v < Spos.size() && ok; ++v)
          if (dist(Spos[u], Spos[v]) > eps) ok = false;
      if (!ok) continue;

      double diam = 0.0;
      for (std::size_t u = 0; u < Spos.size(); ++u)
        for (std::size_t v = u + 1; v < Spos.size(); ++v)
          diam = std::max(diam, dist(Spos[u], Spos[v]));

      std::vector<Vector> S, C;
      std::vector<int> Sidx;
      std::vector<char> inS(static_cast<std::size_t>(a), 0);
      for (int pos : Spos) inS[static_cast<std::size_t>(pos)] = 1;
      for (int j = 0; j < a; ++j) {
        const int orig = active[static_cast<std::size_t>(j)];
        if (inS[static_cast<std::size_t>(j)]) {
          S.push_back(pts[static_cast<std::size_t>(orig)]);
          Sidx.push_back(orig);
        } else {
          C.push_back(pts[static_cast<std::size_t>(orig)]);
        }
      }

      if (C.empty()) {
        SliceRemoval r;
        r.level = level;
        r.point = active[static_cast<std::size_t>(i)];
        r.slice = Sidx;
        r.slice_diameter = diam;
        r.complement_empty = true;
        removal = std::move(r);
        break;
      }

      if (++budget_used > opts.enum_budget)
        throw BudgetError("slice_derivation: separation-check budget exceeded");
      auto cert = hull_distance(space, S, C, opts);
      if (cert.value - cert.gap > opts.feas_tol) {
        SliceRemoval r;
        r.level = level;
        r.point = active[static_cast<std::size_t>(i)];
        r.slice = Sidx;
        r.slice_diameter = diam;
        r.separation = cert.value - cert.gap;
        if (cert.functional) r.functional = *cert.functional;
        removal = std::move(r);
        break;
      }
    }

    if (removal) {
      out.removals.push_back(std::move(*removal));
    } else {
      out.survivors.push_back(active[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

}  // namespace detail

/// One derivation step: the points of D surviving after removing every slice
/// of diameter at most eps.
inline PointSet slice_derivation(const SpaceSpec& space, const PointSet& D, double eps,
                                 const SolverOptions& opts = {}) {
  if (eps <= 0.0) throw SpecError("slice_derivation: eps must be positive");
  std::vector<int> active(D.points.size());
  std::iota(active.begin(), active.end(), 0);
  auto step = detail::slice_derivation_step(space, D.points, active, eps, 0, opts);
  PointSet out{space, {}, {}};
  for (int i : step.survivors) {
    out.points.push_back(D.points[static_cast<std::size_t>(i)]);
    out.labels.push_back(D.labels[static_cast<std::size_t>(i)]);
  }
  return out;
}

/// Iterates the derivation until nothing remains; returns the number of
/// steps and the full trace with removal witnesses.
inline std::pair<int, DerivationTrace> dz_index(const SpaceSpec& space, const PointSet& D,
                                                double eps, const SolverOptions& opts = {}) {
  if (eps <= 0.0) throw SpecError("dz_index: eps must be positive");
  if (D.points.empty()) throw SpecError("dz_index: empty point set");
  DerivationTrace trace;
  trace.epsilon = eps;
  std::vector<int> active(D.points.size());
  std::iota(active.begin(), active.end(), 0);
  trace.levels.push_back(active);
  int level = 0;
  while (!active.empty()) {
    auto step = detail::slice_derivation_step(space, D.points, active, eps, level, opts);
    if (step.survivors.size() == active.size())
      throw NumericError("dz_index: derivation step removed nothing (separation below tolerance)");
    for (auto& r : step.removals) trace.removals.push_back(std::move(r));
    active = step.survivors;
    trace.levels.push_back(active);
    ++level;
  }
  return {level, trace};
}

// ---------------------------------------------------------------------------
// Dyadic trees: parent = midpoint of its children, siblings eps apart, built
// in lp(1) with disjoint-support displacements and exact rational arithmetic.
// ---------------------------------------------------------------------------

struct DyadicTree {
  int height = 0;
  int dimension = 1;
  Rational separation;  // sibling distance
  // heap layout: node s in [1, 2^{height+1}-1], children 2s and 2s+1
  std::vector<std::vector<Rational>> nodes;

  int node_count() const { return static_cast<int>(nodes.size()); }
  Vector node_vector(int s) const {  // s is 1-based heap index
    const auto& r = nodes[static_cast<std::size_t>(s - 1)];
    Vector v(dimension);
    for (int i = 0; i < dimension; ++i) v[i] = r[static_cast<std::size_t>(i)].to_double();
    return v;
  }
};

inline std::pair<SpaceSpec, DyadicTree> build_dyadic_tree(int h, const Rational& eps) {
  if (h < 0) throw SpecError("build_dyadic_tree: height must be >= 0");
  if (!(Rational(0) < eps)) throw SpecError("build_dyadic_tree: eps must be positive");
  const int dim = 1 << h;
  DyadicTree tree;
  tree.height = h;
  tree.dimension = dim;
  tree.separation = eps;
  const int total = (1 << (h + 1)) - 1;
  tree.nodes.assign(static_cast<std::size_t>(total),
                    std::vector<Rational>(static_cast<std::size_t>(dim), Rational(0)));
  const Rational half = eps / Rational(2);
  for (int s = 1; s < (1 << h); ++s) {
    // internal node s displaces its children along its own coordinate
    const int coord = s - 1;
    for (int child : {2 * s, 2 * s + 1}) {
      tree.nodes[static_cast<std::size_t>(child - 1)] = tree.nodes[static_cast<std::size_t>(s - 1)];
      auto& c = tree.nodes[static_cast<std::size_t>(child - 1)][static_cast<std::size_t>(coord)];
      c = child == 2 * s ? c + half : c - half;
    }
  }
  return {SpaceSpec::lp(1, dim), tree};
}

inline std::pair<SpaceSpec, DyadicTree> build_dyadic_tree(int h, double eps) {
  return build_dyadic_tree(h, Rational::from_double(eps));
}

/// Exact check of the midpoint identities and the sibling separation.
inline bool verify_tree(const DyadicTree& tree, std::string* reason = nullptr) {
  const int total = (1 << (tree.height + 1)) - 1;
  if (tree.node_count() != total) {
    if (reason) *reason = "malformed node set: expected " + std::to_string(total) + " nodes";
    return false;
  }
  for (int s = 1; s < (1 << tree.height); ++s) {
    const auto& parent = tree.nodes[static_cast<std::size_t>(s - 1)];
    const auto& left = tree.nodes[static_cast<std::size_t>(2 * s - 1)];
    const auto& right = tree.nodes[static_cast<std::size_t>(2 * s)];
    Rational sep(0);
    for (int i = 0; i < tree.dimension; ++i) {
      const auto& l = left[static_cast<std::size_t>(i)];
      const auto& r = right[static_cast<std::size_t>(i)];
      if ((l + r) / Rational(2) != parent[static_cast<std::size_t>(i)]) {
        if (reason) *reason = "midpoint identity fails at node " + std::to_string(s);
        return false;
      }
      sep = sep + (l - r).abs();
    }
    if (sep < tree.separation) {
      if (reason) *reason = "separation fails at node " + std::to_string(s);
      return false;
    }
  }
  return true;
}

/// The tree's nodes as a point set in its ambient lp(1) space.
inline PointSet tree_point_set(const SpaceSpec& space, const DyadicTree& tree) {
  PointSet out{space, {}, {}};
  for (int s = 1; s <= tree.node_count(); ++s) {
    out.points.push_back(tree.node_vector(s));
    out.labels.push_back("node" + std::to_string(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Midpoint convexity gap and the sampled epsilon-uniform-convexity modulus.
// ---------------------------------------------------------------------------

using ConvexFn = std::function<double(const Vector&)>;

inline double delta_f(const ConvexFn& f, const Vector& x, const Vector& y) {
  return 0.5 * (f(x) + f(y)) - f(0.5 * (x + y));
}

struct UcModulusResult {
  std::optional<double> delta;  // empty = no admissible pair sampled
  int admissible_pairs = 0;
  int evaluations = 0;
  std::string note = "sampled upper bound on the modulus";
};

/// Sampled upper bound on the modulus delta(eps) = inf { Delta_f(x,y) :
/// x,y in conv(C), ||x-y|| >= eps }. Pairs are drawn inside the hull; each
/// far-apart pair also contributes its segment point at distance exactly
/// eps, which is where the infimum typically lives.
inline UcModulusResult uc_modulus(const ConvexFn& f, const PointSet& C, double eps, int budget,
                                  std::uint64_t seed = 1) {
  if (eps <= 0.0) throw SpecError("uc_modulus: eps must be positive");
  UcModulusResult res;
  Rng rng(seed);
  const int m = static_cast<int>(C.points.size());
  auto hull_point = [&]() {
    Vector w(m);
    for (int i = 0; i < m; ++i) w[i] = rng.uniform(0.0, 1.0);
    const double s = w.sum();
    Vector x = Vector::Zero(C.dim());
    for (int i = 0; i < m; ++i) x += (w[i] / s) * C.points[static_cast<std::size_t>(i)];
    return x;
  };
  auto consider = [&](const Vector& x, const Vector& y) {
    if (C.space.norm(x - y) < eps) return;
    ++res.admissible_pairs;
    const double d = delta_f(f, x, y);
    if (!res.delta || d < *res.delta) res.delta = d;
  };
  for (int it = 0; it < budget; ++it) {
    Vector u = hull_point();
    Vector v = it % 4 == 0 ? C.points[static_cast<std::size_t>(rng.uniform_int(0, m - 1))]
                           : hull_point();
    res.evaluations += 2;
    const double d = C.space.norm(u - v);
    consider(u, v);
    if (d > eps) {
      // segment point at distance exactly eps stays inside the hull
      consider(u, u + (eps / d) * (v - u));
    }
  }
  return res;
}

}  // namespace wnc
