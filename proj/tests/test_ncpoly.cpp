#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsphere/ncpoly.hpp"
#include "qsphere/rmatrix.hpp"

using namespace qsphere;

TEST_CASE("defining relations reduce to zero") {
  for (int n : {2, 3, 4}) {
    auto ctx = Context::make(n);
    for (auto& r : defining_relations(ctx)) CHECK(reduce(r).is_zero());
  }
}

TEST_CASE("z1 z2 - q z2 z1 reduces to zero") {
  auto ctx = Context::make(3);
  NCPoly p(ctx);
  p.add_term({z(1), z(2)}, Scalar(ctx, 1L));
  p.add_term({z(2), z(1)}, -Scalar::q(ctx));
  CHECK(reduce(p).is_zero());
}

TEST_CASE("top diagonal relation has an empty tail") {
  auto ctx = Context::make(3);
  NCPoly p(ctx);
  p.add_term({z(3), zs(3)}, Scalar(ctx, 1L));
  p.add_term({zs(3), z(3)}, Scalar(ctx, -1L));
  CHECK(reduce(p).is_zero());
}

TEST_CASE("unit sum reduces to 1") {
  for (int n : {2, 3, 4}) {
    auto ctx = Context::make(n);
    CHECK(reduce(unit_sum(ctx)) == NCPoly::one(ctx));
  }
}

TEST_CASE("weighted trace identity is forced by the quadratic rules") {
  // Reduce sum z_i z*_i - 1 with the top-trace elimination switched off;
  // the result must be proportional to sum q^{-2i} z*_i z_i - q^{-2},
  // which pins the weights of the weighted sum convention.
  for (int n : {2, 3, 4}) {
    auto ctx = Context::make(n);
    NCPoly lhs = unit_sum(ctx);
    lhs.add_term({}, Scalar(ctx, -1L));
    NCPoly red = reduce_quadratic_only(lhs);
    REQUIRE(!red.is_zero());
    NCPoly target = weighted_star_sum(ctx);
    target.add_term({}, -qpow(ctx, -2));
    NCPoly tred = reduce_quadratic_only(target);
    // red == c * tred for one scalar c
    REQUIRE(!tred.is_zero());
    auto it = tred.terms().begin();
    Scalar c = red.terms().count(it->first)
                   ? red.terms().at(it->first) / it->second
                   : Scalar(ctx, 0L);
    REQUIRE(!c.is_zero());
    NCPoly diff = red - tred * c;  // plain scalar multiple, no re-reduction
    CHECK(diff.is_zero());
  }
}

TEST_CASE("weighted trace reduces to q^{-2}") {
  for (int n : {2, 3, 4}) {
    auto ctx = Context::make(n);
    CHECK(reduce(weighted_star_sum(ctx)) == NCPoly::scalar(qpow(ctx, -2)));
  }
}

TEST_CASE("second implied diagonal identity") {
  // z_i z*_i - z*_i z_i + qQ sum_{k>i} q^{2i-2k} z*_k z_k = 0
  for (int n : {2, 3}) {
    auto ctx = Context::make(n);
    Scalar Q = big_q(ctx);
    for (int i = 1; i <= n; ++i) {
      NCPoly p(ctx);
      p.add_term({z(i), zs(i)}, Scalar(ctx, 1L));
      p.add_term({zs(i), z(i)}, Scalar(ctx, -1L));
      for (int k = i + 1; k <= n; ++k)
        p.add_term({zs(k), z(k)}, Scalar::q(ctx) * Q * qpow(ctx, 2 * i - 2 * k));
      CHECK(reduce(p).is_zero());
    }
  }
}

TEST_CASE("R-matrix forms of the relations") {
  for (int n : {2, 3}) {
    auto ctx = Context::make(n);
    auto R = build_R(ctx, n);
    auto Rcm = build_derived(RKind::Rcm, ctx, n);
    auto Rr = build_derived(RKind::Rr, ctx, n);
    auto Rlm = build_derived(RKind::Rlm, ctx, n);
    Scalar q1 = Scalar::q(ctx), qm1 = Scalar::q(ctx, -1);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        NCPoly a(ctx), b(ctx), c(ctx), d(ctx);
        for (int k = 1; k <= n; ++k)
          for (int l = 1; l <= n; ++l) {
            a.add_term({z(k), z(l)}, R.entry(k, l, i, j));
            b.add_term({zs(k), zs(l)}, Rcm.entry(k, l, i, j));
            c.add_term({z(k), zs(l)}, Rr.entry(k, l, i, j));
            d.add_term({zs(k), z(l)}, Rlm.entry(k, l, i, j));
          }
        a.add_term({z(i), z(j)}, -q1);
        b.add_term({zs(i), zs(j)}, -qm1);
        c.add_term({zs(i), z(j)}, -q1);
        d.add_term({z(i), zs(j)}, -qm1);
        CHECK(reduce(a).is_zero());
        CHECK(reduce(b).is_zero());
        CHECK(reduce(c).is_zero());
        CHECK(reduce(d).is_zero());
      }
  }
}

TEST_CASE("confluence smoke: two strategies agree on random words") {
  int samples_per_n = 140;
  for (int n : {2, 3, 4}) {
    auto ctx = Context::make(n);
    for (int s = 0; s < samples_per_n; ++s) {
      NCPoly p = random_poly(ctx, 977 * n + s, 8, 3);
      NCPoly a = reduce(p, Redex::Leftmost);
      NCPoly b = reduce(p, Redex::Rightmost);
      CHECK((a - b).is_zero());
    }
  }
}

TEST_CASE("reduce is idempotent and multiplicative") {
  auto ctx = Context::make(3);
  for (int s = 0; s < 50; ++s) {
    NCPoly p = random_poly(ctx, 31337 + s, 6, 3);
    NCPoly r = reduce(p);
    CHECK((reduce(r) - r).is_zero());
    NCPoly r2 = random_poly(ctx, 90000 + s, 5, 2);
    CHECK((reduce(p * r2) - reduce(reduce(p) * reduce(r2))).is_zero());
  }
}

TEST_CASE("star is an involutive antihomomorphism") {
  auto ctx = Context::make(3);
  NCPoly p(ctx);
  p.add_term({z(1), z(2)}, Scalar(ctx, 1L));
  // (z1 z2)* = z*_2 z*_1 = q z*_1 z*_2
  NCPoly expect(ctx);
  expect.add_term({zs(1), zs(2)}, Scalar::q(ctx));
  CHECK(p.star() == expect);
  for (int s = 0; s < 40; ++s) {
    NCPoly a = random_poly(ctx, 555 + s, 5, 3);
    NCPoly b = random_poly(ctx, 777 + s, 5, 3);
    CHECK(a.star().star() == a);
    CHECK((a * b).star() == b.star() * a.star());
  }
  CHECK(NCPoly::one(ctx).star() == NCPoly::one(ctx));
}

TEST_CASE("random_poly is deterministic for a fixed seed") {
  auto ctx = Context::make(2);
  NCPoly a = random_poly(ctx, 42, 6, 4);
  NCPoly b = random_poly(ctx, 42, 6, 4);
  CHECK((a - b).is_zero());
  CHECK(reduce(reduce(a)) == reduce(a));
}
