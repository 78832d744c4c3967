#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qsphere/scalar.hpp"

using namespace qsphere;

static CtxPtr ctx3() {
  return Context::make(3, {{"lam", true}}, {{"alpha", "alphac"}});
}

TEST_CASE("Q has canonical form (q^2-1)/q") {
  auto ctx = ctx3();
  Scalar Q = big_q(ctx);
  Scalar expect = (Scalar::q(ctx).pow(2) - Scalar(ctx, 1L)) / Scalar::q(ctx);
  CHECK(Q == expect);
  CHECK(Q.str() == "(q^2 - 1) / q");
}

TEST_CASE("s_plus at N=3 is 1+q^2+q^4") {
  auto ctx = ctx3();
  Scalar s = s_plus(ctx);
  Scalar expect = Scalar(ctx, 1L) + Scalar::q(ctx, 2) + Scalar::q(ctx, 4);
  CHECK(s == expect);
}

TEST_CASE("field inverse: Q * Q^{-1} = 1") {
  auto ctx = ctx3();
  Scalar Q = big_q(ctx);
  CHECK((Q * Q.inv()).is_one());
  CHECK_THROWS_AS(Scalar(ctx, 0L).inv(), ScalarError);
  CHECK_THROWS_AS(Q / Scalar(ctx, 0L), ScalarError);
}

TEST_CASE("substitution kills the expected terms") {
  auto ctx = ctx3();
  Scalar lam = Scalar::sym(ctx, "lam");
  // q^{-2} lam - 1 at lam = q^2
  Scalar e = qpow(ctx, -2) * lam - Scalar(ctx, 1L);
  CHECK(e.substitute({{"lam", Scalar::q(ctx, 2)}}).is_zero());
  // alpha^{-1} at alpha = q^{-2}
  Scalar a = Scalar::sym(ctx, "alpha").inv();
  CHECK(a.substitute({{"alpha", Scalar::q(ctx, -2)}}) == Scalar::q(ctx, 2));
  // the H-plus coefficient q^2 lam^{-1} (lam^{-1} - 1) vanishes at lam=1
  Scalar coef = qpow(ctx, 2) * lam.inv() * (lam.inv() - Scalar(ctx, 1L));
  CHECK(coef.substitute({{"lam", Scalar(ctx, 1L)}}).is_zero());
}

TEST_CASE("substitution hitting a pole reports the denominator") {
  auto ctx = ctx3();
  Scalar lam = Scalar::sym(ctx, "lam");
  Scalar e = Scalar(ctx, 1L) / (lam - Scalar(ctx, 1L));
  CHECK_THROWS_AS(e.substitute({{"lam", Scalar(ctx, 1L)}}), ScalarError);
}

TEST_CASE("conjugation fixes reals and swaps pairs") {
  auto ctx = ctx3();
  Scalar r = Scalar::q(ctx, 2) + Scalar(ctx, 3L);
  CHECK(r.conj() == r);
  Scalar a = Scalar::sym(ctx, "alpha");
  Scalar ac = Scalar::sym(ctx, "alphac");
  CHECK(a.conj() == ac);
  Scalar x = ac * Scalar::q(ctx);
  CHECK(x.conj().conj() == x);
  CHECK(x.conj() == a * Scalar::q(ctx));
}

TEST_CASE("probe evaluation") {
  auto ctx = ctx3();
  Scalar Q = big_q(ctx);
  CHECK(Q.eval(Rational(2)) == Rational(3, 2));
  auto ctx2 = Context::make(2);
  CHECK(s_plus(ctx2).eval(Rational(2)) == Rational(5));
  Scalar zero = (Scalar::q(ctx).pow(2) - Scalar(ctx, 1L)) / Scalar::q(ctx) - Q;
  CHECK(zero.eval(Rational(7, 3)) == Rational(0));
  CHECK_THROWS_AS(Q.eval(Rational(1)), ScalarError);
}

TEST_CASE("canonicalization is idempotent and ring axioms hold on samples") {
  auto ctx = ctx3();
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> pw(0, 3);
  auto rand_scalar = [&]() {
    Scalar s(ctx, static_cast<long>(coef(rng)));
    s += Scalar::q(ctx).pow(pw(rng)) * Scalar(ctx, static_cast<long>(coef(rng)));
    s += Scalar::sym(ctx, "lam").pow(pw(rng)) * Scalar(ctx, static_cast<long>(coef(rng)));
    Scalar d = Scalar::q(ctx).pow(pw(rng)) + Scalar(ctx, 1L);
    return s / d;
  };
  for (int it = 0; it < 60; ++it) {
    Scalar a = rand_scalar(), b = rand_scalar(), c = rand_scalar();
    CHECK((a + b) * c == a * c + b * c);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a + b == b + a);
    if (!b.is_zero()) CHECK((a / b) * b == a);
    // probe_eval is a ring homomorphism at admissible points
    std::map<std::string, Rational> vals{{"lam", Rational(3, 2)},
                                         {"alpha", Rational(5, 7)},
                                         {"alphac", Rational(5, 7)}};
    Rational q0(4, 3);
    CHECK((a * b).eval(q0, vals) == a.eval(q0, vals) * b.eval(q0, vals));
    CHECK((a + b).eval(q0, vals) == a.eval(q0, vals) + b.eval(q0, vals));
  }
}

TEST_CASE("conjugation is a field automorphism") {
  auto ctx = ctx3();
  Scalar a = Scalar::sym(ctx, "alpha") + big_q(ctx);
  Scalar b = Scalar::sym(ctx, "alphac") * Scalar::q(ctx, -1) - Scalar(ctx, 2L);
  CHECK((a * b).conj() == a.conj() * b.conj());
  CHECK((a + b).conj() == a.conj() + b.conj());
}

TEST_CASE("laurent powers of q") {
  auto ctx = ctx3();
  CHECK(qpow(ctx, -3) * qpow(ctx, 3) == Scalar(ctx, 1L));
  CHECK(qpow(ctx, -2).str() == "1 / q^2");
}
