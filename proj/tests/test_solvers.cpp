#include <catch2/catch_amalgamated.hpp>

#include "oracle_helpers.hpp"
#include "wnc/rng.hpp"
#include "wnc/solvers.hpp"

using namespace wnc;
using Catch::Approx;

namespace {

std::vector<Vector> basis(int d) {
  std::vector<Vector> v;
  for (int i = 0; i < d; ++i) {
    Vector e = Vector::Zero(d);
    e[i] = 1;
    v.push_back(e);
  }
  return v;
}

std::vector<SpaceSpec> test_spaces(int d) {
  std::vector<SpaceSpec> out = {SpaceSpec::lp(1, d), SpaceSpec::lp(2, d), SpaceSpec::lp(kInf, d),
                                SpaceSpec::lp(1.5, d), SpaceSpec::symmetric_gauge({2, 1}, d)};
  return out;
}

}  // namespace

TEST_CASE("min_norm_point closed forms") {
  auto l2 = SpaceSpec::lp(2, 3);
  auto c = min_norm_point(l2, basis(3));
  CHECK(c.value == Approx(1.0 / std::sqrt(3.0)).margin(1e-10));
  CHECK(c.gap < 1e-9);
  CHECK(c.weights->feasible());

  SECTION("zero point forces value zero") {
    auto pts = basis(3);
    pts.push_back(Vector::Zero(3));
    CHECK(min_norm_point(l2, pts).value == Approx(0.0).margin(1e-10));
  }
  SECTION("single point returns its norm") {
    Vector x(3);
    x << 3, 4, 0;
    CHECK(min_norm_point(l2, {x}).value == Approx(5.0));
  }
  SECTION("duplicates are fine, empty is rejected") {
    auto pts = basis(3);
    pts.push_back(pts.front());
    CHECK_NOTHROW(min_norm_point(l2, pts));
    CHECK_THROWS_AS(min_norm_point(l2, {}), SpecError);
  }
  SECTION("polyhedral kinds: basis values") {
    CHECK(min_norm_point(SpaceSpec::lp(1, 4), basis(4)).value == Approx(1.0).margin(1e-9));
    CHECK(min_norm_point(SpaceSpec::lp(kInf, 2), basis(2)).value == Approx(0.5).margin(1e-9));
    CHECK(min_norm_point(SpaceSpec::symmetric_gauge({1, 1, 1}, 3), basis(3)).value ==
          Approx(1.0).margin(1e-8));
  }
  SECTION("smooth lp") {
    auto c15 = min_norm_point(SpaceSpec::lp(1.5, 3), basis(3));
    CHECK(c15.value == Approx(std::pow(3.0, -1.0 / 3.0)).margin(1e-7));
    CHECK(c15.gap < 1e-5);
  }
}

TEST_CASE("hull_distance closed forms") {
  SECTION("disjoint-support faces in l1") {
    auto l1 = SpaceSpec::lp(1, 4);
    auto b = basis(4);
    std::vector<Vector> P(b.begin(), b.begin() + 2), Q(b.begin() + 2, b.end());
    auto c = hull_distance(l1, P, Q);
    CHECK(c.value == Approx(2.0).margin(1e-9));
    CHECK(c.gap < 1e-7);
    CHECK(c.weights->feasible());
    CHECK(c.weights_q->feasible());
  }
  SECTION("identical hulls") {
    auto l2 = SpaceSpec::lp(2, 3);
    CHECK(hull_distance(l2, basis(3), basis(3)).value == Approx(0.0).margin(1e-10));
  }
  SECTION("singletons give the plain distance") {
    Vector z = Vector::Zero(2), x(2);
    x << 3, 4;
    CHECK(hull_distance(SpaceSpec::lp(2, 2), {z}, {x}).value == Approx(5.0));
  }
}

TEST_CASE("chain_feasibility closed forms and witnesses") {
  SECTION("orthonormal tuple in l2") {
    auto sp = SpaceSpec::lp(2, 5);
    auto b = basis(5);
    for (int k = 1; k <= 5; ++k) {
      auto c = chain_feasibility(sp, b, k);
      CHECK(c.value == Approx(1.0 / std::sqrt(6.0 - k)).margin(1e-9));
      CHECK(c.gap < 1e-8);
    }
  }
  SECTION("l1 basis: always 1, with a valid triangular functional") {
    auto sp = SpaceSpec::lp(1, 5);
    auto b = basis(5);
    for (int k = 1; k <= 5; ++k) {
      auto c = chain_feasibility(sp, b, k);
      CHECK(c.value == Approx(1.0).margin(1e-9));
      REQUIRE(c.functional.has_value());
      const auto& f = c.functional->coefficients;
      CHECK(sp.dual_norm(f) <= 1.0 + 1e-9);
      for (int j = 0; j < 5; ++j) {
        const double a = f.dot(b[static_cast<std::size_t>(j)]);
        if (j < k - 1)
          CHECK(std::abs(a) < 1e-9);
        else
          CHECK(a >= c.value - 1e-9);
      }
    }
  }
  SECTION("degenerate cases") {
    Vector x(3);
    x << 3, 4, 0;
    auto sp = SpaceSpec::lp(2, 3);
    CHECK(chain_feasibility(sp, {x}, 1).value == Approx(5.0).margin(1e-9));
    CHECK_THROWS_AS(chain_feasibility(sp, {x}, 2), SpecError);
    CHECK_THROWS_AS(chain_feasibility(sp, {x}, 0), SpecError);
  }
}

TEST_CASE("solver values match the mesh-1/20 grid within gap plus slack", "[oracle]") {
  Rng rng(42);
  int done = 0;
  while (done < 40) {
    const int d = rng.uniform_int(2, 4);
    for (const auto& sp : test_spaces(d)) {
      const int n = rng.uniform_int(1, 5);
      std::vector<Vector> pts;
      for (int i = 0; i < n; ++i) pts.push_back(rng.uniform_vector(d, -1.0, 1.0));
      auto cert = min_norm_point(sp, pts);
      const double grid = oracle::grid_min_norm(sp, pts, 20);
      double r = 0.0;
      for (const auto& p : pts) r = std::max(r, sp.norm(p));
      const double slack = r * (n - 1) / 20.0;
      INFO(sp.describe() << " n=" << n);
      CHECK(cert.value - cert.gap <= grid + 1e-9);
      CHECK(cert.value >= grid - slack - 1e-9);
      ++done;
    }
  }
}

TEST_CASE("solver values match the ellipsoid refiner to 1e-6", "[oracle]") {
  Rng rng(1234);
  for (int t = 0; t < 12; ++t) {
    const int d = rng.uniform_int(2, 3);
    for (const auto& sp : test_spaces(d)) {
      const int n = rng.uniform_int(2, 4);
      std::vector<Vector> pts;
      for (int i = 0; i < n; ++i) pts.push_back(rng.uniform_vector(d, -1.0, 1.0));
      auto cert = min_norm_point(sp, pts);
      const double refined = oracle::refined_min_norm(sp, pts);
      INFO(sp.describe() << " n=" << n);
      CHECK(cert.value == Approx(refined).margin(1e-6 + cert.gap));
    }
  }
}

TEST_CASE("hull distance is zero exactly when hulls intersect", "[oracle]") {
  Rng rng(77);
  int intersecting = 0, disjoint = 0;
  for (int t = 0; t < 60; ++t) {
    const int d = rng.uniform_int(2, 3);
    auto sp = SpaceSpec::lp(rng.uniform_int(0, 1) ? 2.0 : 1.0, d);
    const int np = rng.uniform_int(1, 3), nq = rng.uniform_int(1, 3);
    std::vector<Vector> P, Q;
    for (int i = 0; i < np; ++i) P.push_back(rng.uniform_vector(d, -1.0, 1.0));
    for (int i = 0; i < nq; ++i) Q.push_back(rng.uniform_vector(d, -1.0, 1.0));
    const bool meet = oracle::hulls_intersect_caratheodory(P, Q, d);
    auto cert = hull_distance(sp, P, Q);
    INFO(sp.describe() << " |P|=" << np << " |Q|=" << nq);
    if (meet) {
      ++intersecting;
      CHECK(cert.value <= cert.gap + 1e-7);
    } else {
      ++disjoint;
      CHECK(cert.value + 1e-7 > 0.0);
      // strict separation: the dual witness must separate with the certified margin
      if (cert.value - cert.gap > 1e-7) {
        REQUIRE(cert.functional.has_value());
        const auto& f = cert.functional->coefficients;
        double minP = kInf, maxQ = -kInf;
        for (const auto& p : P) minP = std::min(minP, f.dot(p));
        for (const auto& q : Q) maxQ = std::max(maxQ, f.dot(q));
        CHECK(minP - maxQ >= cert.value - cert.gap - 1e-7);
      }
    }
  }
  CHECK(intersecting > 5);
  CHECK(disjoint > 5);
}

TEST_CASE("hull distance symmetry and the singleton triangle inequality", "[property]") {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const int d = 3;
    for (const auto& sp : test_spaces(d)) {
      std::vector<Vector> P, R;
      for (int i = 0; i < 3; ++i) P.push_back(rng.uniform_vector(d, -1.0, 1.0));
      for (int i = 0; i < 2; ++i) R.push_back(rng.uniform_vector(d, -1.0, 1.0));
      std::vector<Vector> Qm{rng.uniform_vector(d, -1.0, 1.0)};
      auto pr = hull_distance(sp, P, R);
      auto rp = hull_distance(sp, R, P);
      CHECK(pr.value == Approx(rp.value).margin(pr.gap + rp.gap + 1e-8));
      auto pq = hull_distance(sp, P, Qm);
      auto qr = hull_distance(sp, Qm, R);
      CHECK(pr.value - pr.gap <= pq.value + qr.value + 1e-8);
    }
  }
}

TEST_CASE("chain feasibility: suffix appends never increase the value", "[property]") {
  Rng rng(9);
  for (int t = 0; t < 8; ++t) {
    const int d = 3;
    for (const auto& sp : test_spaces(d)) {
      const int n = rng.uniform_int(2, 4);
      std::vector<Vector> tup;
      for (int i = 0; i < n; ++i) tup.push_back(rng.uniform_vector(d, -1.0, 1.0));
      const int k = rng.uniform_int(1, n);
      auto before = chain_feasibility(sp, tup, k);
      tup.push_back(rng.uniform_vector(d, -1.0, 1.0));
      auto after = chain_feasibility(sp, tup, k);
      INFO(sp.describe());
      CHECK(after.value - after.gap <= before.value + before.gap + 1e-8);
    }
  }
}

TEST_CASE("chain feasibility matches the ellipsoid oracle", "[oracle]") {
  Rng rng(31);
  for (int t = 0; t < 8; ++t) {
    const int d = rng.uniform_int(2, 3);
    for (const auto& sp : test_spaces(d)) {
      const int n = rng.uniform_int(2, 4);
      std::vector<Vector> tup;
      for (int i = 0; i < n; ++i) tup.push_back(rng.uniform_vector(d, -1.0, 1.0));
      const int k = rng.uniform_int(1, n);
      auto cert = chain_feasibility(sp, tup, k);
      const double refined = oracle::chain_feas_bruteforce(sp, tup, k);
      INFO(sp.describe() << " n=" << n << " k=" << k);
      CHECK(cert.value == Approx(refined).margin(2e-5 + cert.gap));
    }
  }
}

TEST_CASE("homogeneity of the solver values", "[property]") {
  Rng rng(55);
  for (const auto& sp : test_spaces(3)) {
    std::vector<Vector> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(rng.uniform_vector(3, -1.0, 1.0));
    const double s = 2.75;
    auto scale_all = [&](const std::vector<Vector>& v) {
      std::vector<Vector> out;
      for (const auto& x : v) out.push_back(s * x);
      return out;
    };
    auto a = min_norm_point(sp, pts);
    auto b = min_norm_point(sp, scale_all(pts));
    CHECK(b.value == Approx(s * a.value).margin(s * a.gap + b.gap + 1e-7));

    std::vector<Vector> P(pts.begin(), pts.begin() + 2), Q(pts.begin() + 2, pts.end());
    auto hp = hull_distance(sp, P, Q);
    auto hq = hull_distance(sp, scale_all(P), scale_all(Q));
    CHECK(hq.value == Approx(s * hp.value).margin(s * hp.gap + hq.gap + 1e-7));

    auto cf = chain_feasibility(sp, pts, 2);
    auto cs = chain_feasibility(sp, scale_all(pts), 2);
    CHECK(cs.value == Approx(s * cf.value).margin(s * cf.gap + cs.gap + 2e-6));
  }
}

TEST_CASE("gauge norm evaluation agrees with the polar LP route", "[property]") {
  Rng rng(91);
  std::vector<Vector> gens;
  for (int i = 0; i < 5; ++i) {
    Vector v = rng.gaussian_vector(3);
    gens.push_back(v);
    gens.push_back(-v);
  }
  auto g = SpaceSpec::gauge(gens, true);
  for (int t = 0; t < 20; ++t) {
    Vector x = rng.gaussian_vector(3);
    const double via_bisection = g.norm(x);
    const double via_polar = g.norming_functional(x).dot(x);
    CHECK(via_bisection == Approx(via_polar).margin(1e-7 * std::max(1.0, via_bisection)));
  }
}
