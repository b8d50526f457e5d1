#include <catch2/catch_amalgamated.hpp>

#include "wnc/rng.hpp"
#include "wnc/sets.hpp"

using namespace wnc;
using Catch::Approx;

namespace {
SetFamily random_family(Rng& rng, int universe, int count) {
  std::vector<std::vector<int>> mem;
  for (int j = 0; j < count; ++j) {
    std::vector<int> f;
    for (int i = 0; i < universe; ++i)
      if (rng.uniform() < 0.4) f.push_back(i);
    if (f.empty()) f.push_back(rng.uniform_int(0, universe - 1));
    mem.push_back(std::move(f));
  }
  return make_set_family(universe, std::move(mem));
}
}  // namespace

TEST_CASE("lp basis generator") {
  auto [sp2, A2] = lp_basis(2, 3);
  CHECK(A2.size() == 3);
  CHECK(sp2.norm(A2.points[0] + A2.points[1]) == Approx(std::sqrt(2.0)));
  auto [sp1, A1] = lp_basis(1, 2);
  CHECK(sp1.norm(A1.points[0] - A1.points[1]) == Approx(2.0));
  auto [spi, Ai] = lp_basis(kInf, 4);
  CHECK(spi.norm((Ai.points[0] + Ai.points[1] + Ai.points[2]) / 3.0) == Approx(1.0 / 3.0));
  CHECK_THROWS_AS(lp_basis(2, 0), SpecError);
}

TEST_CASE("characteristic families") {
  SECTION("disjoint pair gives two basis indicators") {
    auto F = make_set_family(2, {{0}, {1}});
    auto [sp, A] = characteristic_family(F);
    CHECK(sp == SpaceSpec::lp(kInf, 2));
    CHECK(A.points[0][0] == 1.0);
    CHECK(A.points[0][1] == 0.0);
    CHECK(A.points[1][1] == 1.0);
  }
  SECTION("nested pair") {
    auto F = make_set_family(2, {{0}, {0, 1}});
    auto [sp, A] = characteristic_family(F);
    CHECK(A.points[1][0] == 1.0);
    CHECK(A.points[1][1] == 1.0);
  }
  SECTION("empty member rejected") {
    CHECK_THROWS_AS(make_set_family(2, {{}}), SpecError);
    CHECK_THROWS_AS(make_set_family(2, {{2}}), SpecError);
  }
}

TEST_CASE("overlap profiles") {
  SECTION("pairwise disjoint family: multiplicity one") {
    auto F = make_set_family(6, {{0}, {1}, {2}, {3}});
    auto P = overlap_profile(F, 4);
    for (int n = 1; n <= 4; ++n) CHECK(P.at(n).value == 1.0);
  }
  SECTION("nested chain: multiplicity n") {
    auto F = make_set_family(5, {{0}, {0, 1}, {0, 1, 2}, {0, 1, 2, 3}});
    auto P = overlap_profile(F, 4);
    for (int n = 1; n <= 4; ++n) CHECK(P.at(n).value == double(n));
  }
  SECTION("greedy lower bound vs exact on random 3-uniform families", "[property]") {
    Rng rng(13);
    for (int t = 0; t < 6; ++t) {
      std::vector<std::vector<int>> mem;
      for (int j = 0; j < 6; ++j) {
        std::vector<int> f;
        while (static_cast<int>(f.size()) < 3) {
          int i = rng.uniform_int(0, 9);
          if (std::find(f.begin(), f.end(), i) == f.end()) f.push_back(i);
        }
        mem.push_back(f);
      }
      auto F = make_set_family(10, mem);
      auto exact = overlap_profile(F, 4);
      auto greedy = overlap_profile(F, 4, SearchMode::Greedy);
      for (int n = 1; n <= 4; ++n) {
        CHECK(greedy.at(n).value <= exact.at(n).value);
        CHECK(greedy.at(n).mode == SearchMode::Greedy);
      }
    }
  }
}

TEST_CASE("overlap identity links the profiles exactly", "[property]") {
  Rng rng(17);
  for (int t = 0; t < 8; ++t) {
    auto F = random_family(rng, 6, 5);
    auto [sp, A] = characteristic_family(F);
    auto C = cesaro_subset_profile(A, static_cast<int>(F.size()));
    auto O = overlap_profile(F, static_cast<int>(F.size()));
    for (int n = 1; n <= static_cast<int>(F.size()); ++n)
      CHECK(C.at(n).value == Approx(O.at(n).value / n).margin(1e-13));
  }
}

TEST_CASE("hilbert factorization audit") {
  SECTION("disjoint family") {
    auto rep = hilbert_factorization_audit(make_set_family(4, {{0}, {1}, {2}, {3}}));
    CHECK(rep.pass);
    CHECK(rep.support_bound == 1);
    CHECK(rep.worst_coefficient_margin >= -1e-12);
  }
  SECTION("nested chain passes the one-sided covering bound") {
    std::vector<std::vector<int>> mem;
    for (int j = 1; j <= 5; ++j) {
      std::vector<int> f;
      for (int i = 0; i < j; ++i) f.push_back(i);
      mem.push_back(f);
    }
    auto rep = hilbert_factorization_audit(make_set_family(5, mem));
    CHECK(rep.pass);
    CHECK(rep.support_bound == 5);
  }
  SECTION("single member") {
    auto rep = hilbert_factorization_audit(make_set_family(3, {{0, 1, 2}}));
    CHECK(rep.pass);
    CHECK(rep.support_bound == 3);
  }
  SECTION("random families always pass", "[property]") {
    Rng rng(29);
    for (int t = 0; t < 8; ++t) {
      auto F = random_family(rng, 8, 6);
      CHECK(hilbert_factorization_audit(F, 32, 1000 + t).pass);
    }
  }
}

TEST_CASE("troyanski averaging check") {
  SECTION("l2 uniform weights") {
    auto sp = SpaceSpec::lp(2, 6);
    auto rep = troyanski_average_check(sp, {0, 2, 3, 5}, SimplexWeights{Vector::Constant(4, 0.25)});
    CHECK(rep.pass);
    CHECK(rep.eps0 == Approx(0.5));
    CHECK(rep.mean_norm == Approx(0.5));
    CHECK(rep.mnp_value == Approx(0.5).margin(1e-9));
  }
  SECTION("l1: no small combination exists") {
    auto sp = SpaceSpec::lp(1, 5);
    Vector w(3);
    w << 0.2, 0.3, 0.5;
    auto rep = troyanski_average_check(sp, {0, 1, 4}, SimplexWeights{w});
    CHECK(rep.pass);
    CHECK(rep.eps0 == Approx(1.0));
    CHECK(rep.mean_norm == Approx(1.0));
  }
  SECTION("top-1 symmetric norm") {
    auto sp = SpaceSpec::symmetric_gauge({1}, 5);
    auto rep = troyanski_average_check(sp, {0, 1, 2, 3}, SimplexWeights{Vector::Constant(4, 0.25)});
    CHECK(rep.pass);
    CHECK(rep.eps0 == Approx(0.25));
    CHECK(rep.mean_norm == Approx(0.25));
  }
  SECTION("random weights on symmetric spaces always pass", "[property]") {
    Rng rng(31);
    for (int t = 0; t < 8; ++t) {
      auto sp = t % 2 ? SpaceSpec::lp(1.5, 5) : SpaceSpec::symmetric_gauge({3, 2, 1}, 5);
      Vector w(3);
      for (int i = 0; i < 3; ++i) w[i] = rng.uniform(0.1, 1.0);
      w /= w.sum();
      auto rep = troyanski_average_check(sp, {1, 2, 4}, SimplexWeights{w});
      INFO(sp.describe());
      CHECK(rep.pass);
    }
  }
  SECTION("rejections") {
    std::vector<Vector> sq;
    for (double a : {-1.0, 1.0})
      for (double b : {-1.0, 1.0}) {
        Vector v(2);
        v << a, b;
        sq.push_back(v);
      }
    auto g = SpaceSpec::gauge(sq, true);
    CHECK_THROWS_AS(troyanski_average_check(g, {0}, SimplexWeights{Vector::Ones(1)}), SpecError);
    auto sp = SpaceSpec::lp(2, 4);
    CHECK_THROWS_AS(troyanski_average_check(sp, {0, 0}, SimplexWeights{Vector::Constant(2, 0.5)}),
                    SpecError);
  }
}

TEST_CASE("type constant estimates") {
  SECTION("l1 basis has no type 2: ratio sqrt(n)") {
    auto [sp, A] = lp_basis(1, 8);
    auto est = type_constant_estimate(A, 2.0);
    CHECK(est.exact);
    CHECK(est.ratio == Approx(std::sqrt(8.0)).margin(1e-12));
  }
  SECTION("orthonormal sets have ratio exactly one") {
    auto [sp, A] = lp_basis(2, 6);
    auto est = type_constant_estimate(A, 2.0);
    CHECK(est.ratio == Approx(1.0).margin(1e-12));
  }
  SECTION("single point") {
    Vector x(2);
    x << 3, 4;
    auto A = make_point_set(SpaceSpec::lp(2, 2), {x});
    CHECK(type_constant_estimate(A, 2.0).ratio == Approx(1.0).margin(1e-12));
  }
  SECTION("sampled mode beyond 20 points is flagged") {
    std::vector<Vector> pts;
    Rng rng(3);
    for (int i = 0; i < 22; ++i) pts.push_back(rng.uniform_vector(3, -1.0, 1.0));
    auto A = make_point_set(SpaceSpec::lp(2, 3), pts);
    auto est = type_constant_estimate(A, 2.0, 42);
    CHECK(!est.exact);
    CHECK(est.ratio > 0.0);
  }
}

TEST_CASE("cesaro profile of lp(r) bases respects the type-p envelope", "[property]") {
  // for r > 1 and p = min(r,2): C(A,k) <= ratio_k * k^{1/p-1} * max norm,
  // where ratio_k is the signed-average ratio over the same k vectors
  // (the unconditionality constant of a basis is one)
  for (double r : {1.5, 2.0, 3.0}) {
    auto [sp, A] = lp_basis(r, 8);
    const double p = std::min(r, 2.0);
    auto C = cesaro_subset_profile(A, 8);
    for (int k = 1; k <= 8; ++k) {
      auto prefix = make_point_set(sp, {A.points.begin(), A.points.begin() + k});
      auto est = type_constant_estimate(prefix, p);
      INFO("r=" << r << " k=" << k);
      CHECK(C.at(k).value <=
            est.ratio * std::pow(double(k), 1.0 / p - 1.0) * max_point_norm(A) + 1e-9);
    }
  }
}
