#pragma once

#include <array>
#include <map>
#include <string>

#include "qsphere/scalar.hpp"

namespace qsphere {

/// Index pair (i,j), 1-based.
using IdxPair = std::pair<int, int>;

enum class RKind { R, Rinv, Rc, Rl, Rr, Rcm, Rlm, Rrm };
std::string rkind_name(RKind k);

/// Sparse n^2 x n^2 matrix over Scalar, keyed by the output pair (i,j);
/// each row maps input pairs (k,l) to entries.
class SparseN2Matrix {
 public:
  SparseN2Matrix() = default;
  SparseN2Matrix(CtxPtr ctx, int n) : ctx_(std::move(ctx)), n_(n) {}

  int n() const { return n_; }
  const CtxPtr& ctx() const { return ctx_; }

  void set(int i, int j, int k, int l, const Scalar& v);
  Scalar entry(int i, int j, int k, int l) const;  // zero when absent
  size_t entry_count() const;

  /// All entries with the given input pair, as (out-pair, value).
  std::vector<std::pair<IdxPair, Scalar>> column(int k, int l) const;

  const std::map<IdxPair, std::map<IdxPair, Scalar>>& rows() const { return rows_; }

  friend SparseN2Matrix compose(const SparseN2Matrix& m1, const SparseN2Matrix& m2);
  friend SparseN2Matrix operator+(const SparseN2Matrix& a, const SparseN2Matrix& b);
  friend SparseN2Matrix operator-(const SparseN2Matrix& a, const SparseN2Matrix& b);
  SparseN2Matrix scaled(const Scalar& s) const;
  bool operator==(const SparseN2Matrix& o) const;

 private:
  CtxPtr ctx_;
  int n_ = 0;
  std::map<IdxPair, std::map<IdxPair, Scalar>> rows_;
};

SparseN2Matrix identity_matrix(CtxPtr ctx, int n);
bool identity_check(const SparseN2Matrix& m);

SparseN2Matrix build_R(CtxPtr ctx, int n);
SparseN2Matrix build_Rinv(CtxPtr ctx, int n);
SparseN2Matrix build_derived(RKind kind, CtxPtr ctx, int n);

/// m12 m23 m12 == m23 m12 m23 on the n^3 index space.
bool braid_check(const SparseN2Matrix& m);

/// R R^{-1} = I and R - R^{-1} = Q I (with the equivalent quadratic).
bool hecke_check(CtxPtr ctx, int n);

/// The derived matrix that is the two-sided compose-inverse of `kind`.
/// The crossing matrices pair across sides: Rc <-> Rcm, Rl <-> Rrm, Rr <-> Rlm.
RKind inverse_kind(RKind kind);

}  // namespace qsphere
