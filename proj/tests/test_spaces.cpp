#include <catch2/catch_amalgamated.hpp>

#include "wnc/rng.hpp"
#include "wnc/spaces.hpp"

using namespace wnc;
using Catch::Approx;

namespace {
std::vector<Vector> square_vertices() {
  std::vector<Vector> sq;
  for (double a : {-1.0, 1.0})
    for (double b : {-1.0, 1.0}) {
      Vector v(2);
      v << a, b;
      sq.push_back(v);
    }
  return sq;
}
}  // namespace

TEST_CASE("lp norms match closed forms") {
  auto l2 = SpaceSpec::lp(2, 2);
  Vector x(2);
  x << 3, 4;
  CHECK(l2.norm(x) == Approx(5.0));
  CHECK(l2.norm(Vector::Zero(2)) == 0.0);

  auto l1 = SpaceSpec::lp(1, 3);
  Vector y(3);
  y << 1, -2, 3;
  CHECK(l1.norm(y) == Approx(6.0));
  CHECK(SpaceSpec::lp(kInf, 3).norm(y) == Approx(3.0));
  CHECK(SpaceSpec::lp(1.5, 3).norm(y) ==
        Approx(std::pow(1.0 + std::pow(2.0, 1.5) + std::pow(3.0, 1.5), 1.0 / 1.5)));
}

TEST_CASE("dual norms: conjugate exponents and support functions") {
  Vector f(3);
  f << 1, -2, 3;
  CHECK(SpaceSpec::lp(1, 3).dual_norm(f) == Approx(3.0));
  CHECK(SpaceSpec::lp(kInf, 3).dual_norm(f) == Approx(6.0));
  Vector g(2);
  g << 3, 4;
  CHECK(SpaceSpec::lp(2, 2).dual_norm(g) == Approx(5.0));

  auto gauge = SpaceSpec::gauge(square_vertices(), true);
  Vector h(2);
  h << 2, -1;
  // support function of the square: |2| + |-1|
  CHECK(gauge.dual_norm(h) == Approx(3.0));
}

TEST_CASE("gauge of the unit square is the sup norm") {
  auto g = SpaceSpec::gauge(square_vertices(), true);
  auto linf = SpaceSpec::lp(kInf, 2);
  Vector x(2);
  x << 0.5, -0.5;
  CHECK(g.norm(x) == Approx(0.5).margin(1e-9));
  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    Vector v = rng.uniform_vector(2, -2.0, 2.0);
    CHECK(g.norm(v) == Approx(linf.norm(v)).margin(1e-8));
  }
}

TEST_CASE("gauge validation errors") {
  // non-spanning generators
  Vector a(2), b(2);
  a << 1, 0;
  b << -1, 0;
  CHECK_THROWS_AS(SpaceSpec::gauge({a, b}, true), SpecError);
  // spanning but not absorbing (0 on the hull boundary)
  Vector c(2), d(2), e(2);
  c << 1, 0;
  d << 0, 1;
  e << 1, 1;
  CHECK_THROWS_AS(SpaceSpec::gauge({c, d, e}, false), SpecError);
  // symmetric flag on an asymmetric hull
  Vector m(2);
  m << -1, -1;
  CHECK_THROWS_AS(SpaceSpec::gauge({c, d, m}, true), SpecError);
  // the same hull is a valid asymmetric gauge (0 interior)
  CHECK_NOTHROW(SpaceSpec::gauge({c, d, m}, false));
}

TEST_CASE("asymmetric gauge is positively homogeneous but not symmetric") {
  Vector c(2), d(2), m(2);
  c << 1, 0;
  d << 0, 1;
  m << -1, -1;
  auto g = SpaceSpec::gauge({c, d, m}, false);
  Vector x(2);
  x << 0.4, 0.1;
  CHECK(g.norm(2.0 * x) == Approx(2.0 * g.norm(x)).epsilon(1e-8));
  CHECK(g.norm(x) != Approx(g.norm(Vector(-x))).epsilon(1e-3));
}

TEST_CASE("symmetric gauge equals l1 / sup norm at the weight extremes") {
  Vector u(3);
  u << 1, -2, 0.5;
  auto as_l1 = SpaceSpec::symmetric_gauge({1, 1, 1}, 3);
  CHECK(as_l1.norm(u) == Approx(3.5));
  auto top1 = SpaceSpec::symmetric_gauge({1}, 3);
  CHECK(top1.norm(u) == Approx(2.0));
  // dual of the sup norm is l1
  CHECK(top1.dual_norm(u) == Approx(3.5));
  // top-2 norm
  auto top2 = SpaceSpec::symmetric_gauge({1, 1}, 3);
  CHECK(top2.norm(u) == Approx(3.0));
}

TEST_CASE("symmetric weights validation") {
  CHECK_THROWS_AS(SpaceSpec::symmetric_gauge({0.0, 1.0}, 2), SpecError);
  CHECK_THROWS_AS(SpaceSpec::symmetric_gauge({1.0, 2.0}, 2), SpecError);
  CHECK_THROWS_AS(SpaceSpec::symmetric_gauge({}, 2), SpecError);
}

TEST_CASE("norming functionals certify the norm", "[property]") {
  Rng rng(7);
  std::vector<SpaceSpec> spaces = {SpaceSpec::lp(2, 4),
                                   SpaceSpec::lp(1, 4),
                                   SpaceSpec::lp(kInf, 4),
                                   SpaceSpec::lp(1.5, 4),
                                   SpaceSpec::lp(3, 4),
                                   SpaceSpec::symmetric_gauge({3, 2, 1}, 4),
                                   SpaceSpec::symmetric_gauge({3, 2, 1}, 4).dual_space(),
                                   SpaceSpec::gauge(square_vertices(), true)};
  for (const auto& sp : spaces) {
    for (int t = 0; t < 40; ++t) {
      Vector v = rng.gaussian_vector(sp.dim());
      Vector g = sp.norming_functional(v);
      INFO(sp.describe());
      CHECK(sp.dual_norm(g) <= 1.0 + 1e-9);
      CHECK(g.dot(v) == Approx(sp.norm(v)).margin(1e-7 * std::max(1.0, sp.norm(v))));
    }
  }
}

TEST_CASE("dual norm is the support function over ball vertices", "[property]") {
  Rng rng(19);
  std::vector<SpaceSpec> spaces = {SpaceSpec::lp(1, 4), SpaceSpec::lp(kInf, 4),
                                   SpaceSpec::symmetric_gauge({2, 1}, 4)};
  for (const auto& sp : spaces) {
    auto verts = sp.ball_vertices();
    for (int t = 0; t < 25; ++t) {
      Vector f = rng.gaussian_vector(sp.dim());
      double sup = 0.0;
      for (const auto& v : verts) sup = std::max(sup, f.dot(v));
      CHECK(sp.dual_norm(f) == Approx(sup).margin(1e-10));
    }
  }
}

TEST_CASE("duality of spaces is involutive and correct") {
  CHECK(SpaceSpec::lp(1, 3).dual_space() == SpaceSpec::lp(kInf, 3));
  CHECK(SpaceSpec::lp(kInf, 3).dual_space() == SpaceSpec::lp(1, 3));
  CHECK(SpaceSpec::lp(2, 3).dual_space() == SpaceSpec::lp(2, 3));
  CHECK(SpaceSpec::lp(1.5, 3).dual_space() == SpaceSpec::lp(3, 3));

  auto sym = SpaceSpec::symmetric_gauge({2, 1}, 3);
  auto symd = sym.dual_space();
  CHECK(symd.dual_space() == sym);
  // dual pairing: |<f,x>| <= ||f||_* ||x||
  Rng rng(3);
  for (int t = 0; t < 40; ++t) {
    Vector x = rng.gaussian_vector(3), f = rng.gaussian_vector(3);
    CHECK(std::abs(f.dot(x)) <= sym.dual_norm(f) * sym.norm(x) + 1e-10);
    CHECK(sym.dual_norm(f) == Approx(symd.norm(f)).margin(1e-12));
  }

  // polar of the square is the cross-polytope (l1 ball)
  auto g = SpaceSpec::gauge(square_vertices(), true);
  auto polar = g.dual_space();
  auto l1 = SpaceSpec::lp(1, 2);
  for (int t = 0; t < 20; ++t) {
    Vector v = rng.uniform_vector(2, -2.0, 2.0);
    CHECK(polar.norm(v) == Approx(l1.norm(v)).margin(1e-8));
  }
  CHECK_THROWS_AS(SpaceSpec::gauge(square_vertices(), false).dual_space(), SpecError);
}

TEST_CASE("l2 lower ratio is a sound norm bound", "[property]") {
  Rng rng(23);
  std::vector<SpaceSpec> spaces = {SpaceSpec::lp(1, 4),
                                   SpaceSpec::lp(3, 4),
                                   SpaceSpec::lp(kInf, 4),
                                   SpaceSpec::symmetric_gauge({2, 1}, 4),
                                   SpaceSpec::symmetric_gauge({2, 1}, 4).dual_space(),
                                   SpaceSpec::gauge(square_vertices(), true)};
  for (const auto& sp : spaces) {
    const double m = sp.l2_lower_ratio();
    for (int t = 0; t < 30; ++t) {
      Vector v = rng.gaussian_vector(sp.dim());
      CHECK(sp.norm(v) >= m * v.norm() - 1e-9);
    }
  }
}

TEST_CASE("dimension and finiteness checks") {
  auto sp = SpaceSpec::lp(2, 3);
  Vector bad(2);
  bad << 1, 2;
  CHECK_THROWS_AS(sp.norm(bad), DimensionError);
  Vector nan(3);
  nan << 1, std::nan(""), 0;
  CHECK_THROWS_AS(sp.norm(nan), SpecError);
  CHECK_THROWS_AS(SpaceSpec::lp(0.5, 2), SpecError);
  CHECK_THROWS_AS(SpaceSpec::lp(2, 0), SpecError);
}
