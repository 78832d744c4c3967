#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsphere/rmatrix.hpp"

using namespace qsphere;

TEST_CASE("fundamental entries at n=2") {
  auto ctx = Context::make(2);
  auto R = build_R(ctx, 2);
  CHECK(R.entry(1, 1, 1, 1) == Scalar::q(ctx));
  CHECK(R.entry(1, 2, 1, 2) == big_q(ctx));
  CHECK(R.entry(2, 1, 1, 2) == Scalar(ctx, 1L));
  auto Rm = build_Rinv(ctx, 2);
  CHECK(Rm.entry(2, 1, 2, 1) == -big_q(ctx));
  CHECK(Rm.entry(1, 1, 1, 1) == Scalar::q(ctx, -1));
}

TEST_CASE("sparsity count n + n(n-1) + n(n-1)/2") {
  for (int n : {2, 3, 4}) {
    auto ctx = Context::make(n);
    auto R = build_R(ctx, n);
    CHECK(R.entry_count() == size_t(n + n * (n - 1) + n * (n - 1) / 2));
  }
}

TEST_CASE("derived matrix samples") {
  auto ctx = Context::make(2);
  auto Rc = build_derived(RKind::Rc, ctx, 2);
  auto R = build_R(ctx, 2);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l)
          CHECK(Rc.entry(i, j, k, l) == R.entry(l, k, j, i));
  auto Rl = build_derived(RKind::Rl, ctx, 2);
  CHECK(Rl.entry(1, 1, 2, 2) == Scalar::q(ctx, 2) * big_q(ctx));
  auto Rr = build_derived(RKind::Rr, ctx, 2);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l)
          CHECK(Rr.entry(i, j, k, l) == R.entry(k, i, l, j));
}

TEST_CASE("R Rinv = I and R - Rinv = Q I") {
  for (int n : {2, 3, 4}) {
    auto ctx = Context::make(n);
    auto R = build_R(ctx, n);
    auto Rm = build_Rinv(ctx, n);
    CHECK(identity_check(compose(R, Rm)));
    CHECK(identity_check(compose(Rm, R)));
    CHECK((R - Rm) == identity_matrix(ctx, n).scaled(big_q(ctx)));
  }
}

TEST_CASE("derived matrices pair into two-sided inverses across sides") {
  // The conjugate pair inverts within its own family; the two crossing
  // families invert each other: Rl <-> Rrm and Rr <-> Rlm.
  for (int n : {2, 3, 4}) {
    auto ctx = Context::make(n);
    for (RKind k : {RKind::Rc, RKind::Rl, RKind::Rr, RKind::Rcm, RKind::Rlm, RKind::Rrm}) {
      auto M = build_derived(k, ctx, n);
      auto Minv = build_derived(inverse_kind(k), ctx, n);
      CHECK(identity_check(compose(M, Minv)));
    }
  }
}

TEST_CASE("the naive same-letter pairing is not an inverse") {
  auto ctx = Context::make(2);
  auto Rl = build_derived(RKind::Rl, ctx, 2);
  auto Rlm = build_derived(RKind::Rlm, ctx, 2);
  CHECK(!identity_check(compose(Rl, Rlm)));
}

TEST_CASE("braid relation for R and Rinv") {
  for (int n : {2, 3}) {
    auto ctx = Context::make(n);
    CHECK(braid_check(build_R(ctx, n)));
    CHECK(braid_check(build_Rinv(ctx, n)));
  }
}

TEST_CASE("perturbed identity fails the braid relation") {
  auto ctx = Context::make(2);
  auto M = identity_matrix(ctx, 2);
  M.set(1, 2, 2, 1, Scalar::q(ctx, 3));  // random off-diagonal entry
  CHECK(!braid_check(M));
}

TEST_CASE("hecke quadratic") {
  for (int n : {2, 3, 4}) {
    auto ctx = Context::make(n);
    CHECK(hecke_check(ctx, n));
  }
}

TEST_CASE("perturbing a diagonal entry breaks the displayed identity") {
  auto ctx = Context::make(2);
  auto R = build_R(ctx, 2);
  R.set(1, 1, 1, 1, Scalar::q(ctx, 2));
  auto Rm = build_Rinv(ctx, 2);
  CHECK(!((R - Rm) == identity_matrix(ctx, 2).scaled(big_q(ctx))));
}
