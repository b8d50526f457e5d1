#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wnc/pointset.hpp"
#include "wnc/profiles.hpp"
#include "wnc/rng.hpp"
#include "wnc/solvers.hpp"

namespace wnc {

/// A bounded linear operator between finite-dimensional normed spaces.
struct MatrixOperator {
  Matrix matrix;       // rows = codomain dim, cols = domain dim
  SpaceSpec domain;
  SpaceSpec codomain;

  Vector apply(const Vector& x) const {
    domain.check_dim(x);
    return matrix * x;
  }
};

inline MatrixOperator make_operator(Matrix m, SpaceSpec domain, SpaceSpec codomain) {
  if (m.cols() != domain.dim() || m.rows() != codomain.dim())
    throw DimensionError("operator: matrix shape does not match the spaces");
  if (!m.allFinite()) throw SpecError("operator: non-finite matrix entries");
  return MatrixOperator{std::move(m), std::move(domain), std::move(codomain)};
}

/// T*: dual(codomain) -> dual(domain), transposed matrix.
inline MatrixOperator adjoint(const MatrixOperator& T, std::size_t vertex_cap = 2000000) {
  return MatrixOperator{T.matrix.transpose(), T.codomain.dual_space(vertex_cap),
                        T.domain.dual_space(vertex_cap)};
}

// ---------------------------------------------------------------------------
// Operator norm: exact when the domain ball has an enumerable vertex set or
// the codomain is sup-norm; the Euclidean pair goes through the spectrum;
// otherwise a certified sandwich via factorization through l1.
// ---------------------------------------------------------------------------

struct OperatorNormBounds {
  double lower = 0.0;
  double upper = 0.0;
};

inline OperatorNormBounds operator_norm_bound(const MatrixOperator& T,
                                              std::size_t vertex_cap = 100000) {
  const auto& dom = T.domain;
  const auto& cod = T.codomain;

  if (dom.polyhedral()) {
    bool affordable = true;
    std::vector<Vector> verts;
    try {
      verts = dom.ball_vertices(vertex_cap);
    } catch (const BudgetError&) {
      affordable = false;
    }
    if (affordable) {
      double v = 0.0;
      for (const auto& x : verts) v = std::max(v, cod.norm(T.matrix * x));
      return {v, v};
    }
  }
  if (cod.kind() == SpaceKind::Lp && cod.p() == kInf) {
    double v = 0.0;
    for (int i = 0; i < T.matrix.rows(); ++i)
      v = std::max(v, dom.dual_norm(T.matrix.row(i).transpose()));
    return {v, v};
  }
  if (dom.kind() == SpaceKind::Lp && dom.p() == 2.0 && cod.kind() == SpaceKind::Lp &&
      cod.p() == 2.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(T.matrix.transpose() * T.matrix);
    const double smax = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
    Vector v = eig.eigenvectors().col(T.matrix.cols() - 1);
    double lower = 0.0;
    if (v.norm() > 0) lower = cod.norm(T.matrix * (v / v.norm()));
    return {std::min(lower, smax), smax * (1.0 + 1e-12) + 1e-15};
  }

  // generic sandwich
  double lower = 0.0;
  for (int j = 0; j < T.matrix.cols(); ++j) {
    Vector e = Vector::Zero(dom.dim());
    e[j] = 1.0;
    const double nx = dom.norm(e);
    if (nx > 0) lower = std::max(lower, cod.norm(T.matrix * e) / nx);
  }
  {
    // ascent from the Euclidean top singular vector
    Eigen::JacobiSVD<Matrix> svd(T.matrix, Eigen::ComputeThinV);
    if (svd.matrixV().cols() > 0) {
      Vector v = svd.matrixV().col(0);
      const double nx = dom.norm(v);
      if (nx > 0) lower = std::max(lower, cod.norm(T.matrix * (v / nx)));
    }
  }
  // ||x||_1 <= c1 over the domain ball, then factor column-wise
  double c1;
  if (dom.kind() == SpaceKind::Lp) {
    c1 = dom.p() == kInf ? static_cast<double>(dom.dim())
                         : std::pow(static_cast<double>(dom.dim()), 1.0 - 1.0 / dom.p());
  } else {
    c1 = std::sqrt(static_cast<double>(dom.dim())) / dom.l2_lower_ratio();
  }
  double colmax = 0.0;
  for (int j = 0; j < T.matrix.cols(); ++j)
    colmax = std::max(colmax, cod.norm(T.matrix.col(j)));
  return {lower, c1 * colmax};
}

// ---------------------------------------------------------------------------
// Operator chains: the chain pattern evaluated on images of domain-ball
// candidates, with the constructive witness transposition.
// ---------------------------------------------------------------------------

struct OperatorChainWitness {
  std::vector<Vector> points;             // x_1..x_n in the domain unit ball
  std::vector<DualFunctional> functionals;  // f_1..f_n in the codomain dual ball
  double level = 0.0;
};

/// Returns the first violated constraint as text, or empty if valid.
inline std::string check_operator_chain_witness(const MatrixOperator& T,
                                                const OperatorChainWitness& w,
                                                double tol = 1e-7) {
  const std::size_t n = w.points.size();
  if (w.functionals.size() != n) return "functional count differs from point count";
  for (std::size_t j = 0; j < n; ++j)
    if (T.domain.norm(w.points[j]) > 1.0 + tol)
      return "point " + std::to_string(j + 1) + " outside the domain ball";
  for (std::size_t k = 0; k < n; ++k)
    if (T.codomain.dual_norm(w.functionals[k].coefficients) > 1.0 + tol)
      return "functional " + std::to_string(k + 1) + " outside the dual ball";
  for (std::size_t k = 0; k < n; ++k) {
    const auto& f = w.functionals[k].coefficients;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = f.dot(T.matrix * w.points[j]);
      if (j < k && std::abs(a) > tol)
        return "annihilation fails at (k=" + std::to_string(k + 1) +
               ", j=" + std::to_string(j + 1) + "): " + std::to_string(a);
      if (j >= k && a < w.level - tol)
        return "action below level at (k=" + std::to_string(k + 1) +
               ", j=" + std::to_string(j + 1) + "): " + std::to_string(a);
    }
  }
  return {};
}

inline bool verify_operator_chain_witness(const MatrixOperator& T, const OperatorChainWitness& w,
                                          double tol = 1e-7) {
  return check_operator_chain_witness(T, w, tol).empty();
}

/// Default candidate set for a domain ball: the vertex set when the ball is
/// a polytope (exact norming family), otherwise seeded sphere samples
/// (results are then lower bounds only).
inline std::vector<Vector> default_ball_candidates(const SpaceSpec& space, int sample_count = 64,
                                                   std::uint64_t seed = 1,
                                                   std::size_t vertex_cap = 100000) {
  if (space.polyhedral()) return space.ball_vertices(vertex_cap);
  std::vector<Vector> out;
  Rng rng(seed);
  for (int i = 0; i < space.dim(); ++i) {
    Vector e = Vector::Zero(space.dim());
    e[i] = 1.0;
    out.push_back(e / space.norm(e));
    out.push_back(-e / space.norm(e));
  }
  for (int s = 0; s < sample_count; ++s) {
    Vector v = rng.gaussian_vector(space.dim());
    const double nv = space.norm(v);
    if (nv > 1e-12) out.push_back(v / nv);
  }
  return out;
}

struct OperatorChainValue {
  double value = 0.0;
  double gap = 0.0;
  SearchMode mode = SearchMode::Exact;
  // The reported value is exact for the full domain ball only at n = 1
  // (there the objective is convex, so vertices suffice). For longer chains
  // the annihilation constraints slice the ball and the optimum can sit
  // strictly inside a face, so any finite candidate set yields a certified
  // lower bound of the full-ball value.
  bool exact_candidates = false;
  OperatorChainWitness witness;
};

inline OperatorChainValue operator_chain_value(const MatrixOperator& T, int n,
                                               const std::vector<Vector>& candidates,
                                               SearchMode mode = SearchMode::Exact,
                                               const SolverOptions& opts = {}) {
  if (candidates.empty()) throw SpecError("operator_chain_value: no candidates");
  for (const auto& x : candidates) {
    T.domain.check_dim(x, "candidate");
    if (T.domain.norm(x) > 1.0 + opts.feas_tol)
      throw SpecError("operator_chain_value: candidate outside the domain unit ball");
  }
  // images, deduplicated, keeping a domain representative for each
  std::vector<Vector> images, reps;
  for (const auto& x : candidates) {
    Vector y = T.matrix * x;
    bool dup = false;
    for (const auto& z : images)
      if (z == y) dup = true;
    if (!dup) {
      images.push_back(std::move(y));
      reps.push_back(x);
    }
  }
  PointSet image_set = make_point_set(T.codomain, images);
  OperatorChainValue out;
  if (n > static_cast<int>(images.size())) {
    out.mode = mode;
    return out;  // repeated images force value 0
  }
  auto r = chain_value(image_set, n, mode, opts);
  out.value = r.value;
  out.gap = r.gap;
  out.mode = r.mode;
  out.exact_candidates = T.domain.polyhedral() && n == 1;
  out.witness.level = r.witness.level;
  out.witness.functionals = r.witness.functionals;
  for (const auto& img : r.witness.tuple) {
    for (std::size_t i = 0; i < images.size(); ++i)
      if (images[i] == img) {
        out.witness.points.push_back(reps[i]);
        break;
      }
  }
  return out;
}

/// Dual-consistent chain values for T and T*: starting from the two vertex
/// candidate sets, each side repeatedly absorbs the other side's witness
/// functionals (which live in its own domain ball) until the two certified
/// values agree within their gaps. This is the constructive content of the
/// adjoint duality: a witness for one side transposes into a witness for the
/// other, so neither value can stay ahead.
struct DualChainValues {
  OperatorChainValue primal;
  OperatorChainValue adjoint_side;
  int exchange_rounds = 0;
};

inline DualChainValues dual_chain_values(const MatrixOperator& T, int n,
                                         SearchMode mode = SearchMode::Exact,
                                         const SolverOptions& opts = {},
                                         std::size_t vertex_cap = 100000) {
  MatrixOperator Ts = adjoint(T, vertex_cap);
  std::vector<Vector> c_primal = default_ball_candidates(T.domain, 64, 1, vertex_cap);
  std::vector<Vector> c_adjoint = default_ball_candidates(Ts.domain, 64, 2, vertex_cap);
  auto absorb = [&](std::vector<Vector>& cands, const SpaceSpec& dom,
                    const std::vector<DualFunctional>& fs) {
    bool grew = false;
    for (const auto& f : fs) {
      Vector v = f.coefficients;
      const double nv = dom.norm(v);
      if (nv > 1.0) v /= nv;  // defensive renormalization into the ball
      bool dup = false;
      for (const auto& u : cands)
        if ((u - v).lpNorm<Eigen::Infinity>() < 1e-12) dup = true;
      if (!dup) {
        cands.push_back(v);
        grew = true;
      }
    }
    return grew;
  };

  DualChainValues out;
  for (int round = 0; round < 8; ++round) {
    out.exchange_rounds = round;
    out.primal = operator_chain_value(T, n, c_primal, mode, opts);
    out.adjoint_side = operator_chain_value(Ts, n, c_adjoint, mode, opts);
    if (std::abs(out.primal.value - out.adjoint_side.value) <=
        out.primal.gap + out.adjoint_side.gap + opts.feas_tol)
      break;
    bool grew = false;
    if (out.primal.value > out.adjoint_side.value)
      grew = absorb(c_adjoint, Ts.domain, out.primal.witness.functionals);
    else
      grew = absorb(c_primal, T.domain, out.adjoint_side.witness.functionals);
    if (!grew) break;  // nothing left to exchange
  }
  return out;
}

/// The constructive transposition: a valid witness for T at level eps turns
/// into a valid witness for T* at the same level by swapping roles and
/// reversing the order.
inline OperatorChainWitness witness_transpose(const MatrixOperator& T,
                                              const OperatorChainWitness& w, double tol = 1e-7) {
  const std::string why = check_operator_chain_witness(T, w, tol);
  if (!why.empty()) throw SpecError("witness_transpose: invalid input witness: " + why);
  OperatorChainWitness out;
  out.level = w.level;
  const std::size_t n = w.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = w.functionals[n - 1 - i];
    out.points.push_back(f.coefficients);
    const auto& x = w.points[n - 1 - i];
    out.functionals.push_back(DualFunctional{x, T.domain.norm(x)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Image-chain audit: chains cannot grow under a bounded operator by more
// than the norm factor.
// ---------------------------------------------------------------------------

struct ImageChainAuditRow {
  int n = 0;
  double image_value = 0.0;
  double domain_value = 0.0;
  double norm_upper = 0.0;
  bool pass = true;
};

struct ImageChainAuditReport {
  bool pass = true;
  std::vector<ImageChainAuditRow> rows;
};

inline ImageChainAuditReport image_chain_audit(const MatrixOperator& T, const PointSet& A,
                                               const std::vector<int>& lengths, double tol = 1e-7,
                                               const SolverOptions& opts = {}) {
  if (!(A.space == T.domain))
    throw SpecError("image_chain_audit: point set must live in the operator domain");
  std::vector<Vector> images;
  images.reserve(A.points.size());
  for (const auto& x : A.points) images.push_back(T.matrix * x);
  PointSet TA = make_point_set(T.codomain, images);
  const double tnorm = operator_norm_bound(T).upper;

  ImageChainAuditReport rep;
  for (int n : lengths) {
    ImageChainAuditRow row;
    row.n = n;
    row.norm_upper = tnorm;
    auto lhs = chain_value(TA, n, SearchMode::Exact, opts);
    auto rhs = chain_value(A, n, SearchMode::Exact, opts);
    row.image_value = lhs.value;
    row.domain_value = rhs.value;
    // sound comparison: certified image lower vs norm * certified domain upper
    row.pass = lhs.value <= tnorm * (rhs.value + rhs.gap) + tol;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Sampled operator epsilon-uniform-convexity modulus: the largest delta such
// that unit vectors with ||x+y|| > 2(1-delta) keep images eps-close, probed
// from above by minimizing 1 - ||x+y||/2 over sampled far-image pairs.
// ---------------------------------------------------------------------------

struct OperatorUcResult {
  std::optional<double> delta;
  int admissible_pairs = 0;
  int evaluations = 0;
  std::string note = "sampled upper bound";
};

inline OperatorUcResult operator_uc_modulus(const MatrixOperator& T, double eps, int budget,
                                            std::uint64_t seed = 1) {
  if (eps <= 0.0) throw SpecError("operator_uc_modulus: eps must be positive");
  OperatorUcResult res;
  Rng rng(seed);
  const auto& dom = T.domain;
  auto sphere = [&]() {
    for (;;) {
      Vector v = rng.gaussian_vector(dom.dim());
      const double nv = dom.norm(v);
      if (nv > 1e-12) return Vector(v / nv);
    }
  };
  auto consider = [&](const Vector& x, const Vector& y) {
    ++res.evaluations;
    if (T.codomain.norm(T.matrix * (x - y)) <= eps) return;
    ++res.admissible_pairs;
    const double val = 1.0 - dom.norm(x + y) / 2.0;
    if (!res.delta || val < *res.delta) res.delta = val;
  };
  for (int it = 0; it < budget; ++it) {
    Vector x = sphere();
    Vector y = sphere();
    consider(x, y);
    // bisect along a sphere path to land just past the image-distance
    // threshold, where the modulus infimum lives
    Vector w = rng.gaussian_vector(dom.dim());
    auto path = [&](double t) {
      Vector z = x + t * w;
      const double nz = dom.norm(z);
      return Vector(z / nz);
    };
    double hi = 1.0;
    bool found = false;
    for (int g = 0; g < 24; ++g) {
      if (T.codomain.norm(T.matrix * (x - path(hi))) > eps * (1.0 + 1e-6)) {
        found = true;
        break;
      }
      hi *= 2.0;
    }
    if (!found) continue;
    double lo = 0.0;
    for (int g = 0; g < 60; ++g) {
      const double mid = 0.5 * (lo + hi);
      if (T.codomain.norm(T.matrix * (x - path(mid))) > eps * (1.0 + 1e-6))
        hi = mid;
      else
        lo = mid;
    }
    consider(x, path(hi));
  }
  return res;
}

}  // namespace wnc
