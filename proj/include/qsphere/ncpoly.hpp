#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "qsphere/scalar.hpp"

namespace qsphere {

/// Generator letter of the sphere algebra: z_i or z*_i, 1 <= i <= N.
struct Letter {
  uint8_t kind;  // 0 = z, 1 = z*
  uint8_t idx;   // 1-based
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

inline Letter z(int i) { return Letter{0, static_cast<uint8_t>(i)}; }
inline Letter zs(int i) { return Letter{1, static_cast<uint8_t>(i)}; }

using Word = std::vector<Letter>;

enum class Redex { Leftmost, Rightmost };

/// Noncommutative polynomial in the sphere generators over Scalar.
/// Normal-form words look like  z*_{j1}..z*_{ja} z_{i1}..z_{ib}  with both
/// index blocks ascending and no adjacent z*_N z_N factor.
class NCPoly {
 public:
  NCPoly() = default;
  explicit NCPoly(CtxPtr ctx) : ctx_(std::move(ctx)) {}
  static NCPoly zero(CtxPtr ctx) { return NCPoly(std::move(ctx)); }
  static NCPoly one(CtxPtr ctx);
  static NCPoly scalar(const Scalar& s);
  static NCPoly letter(CtxPtr ctx, Letter l);
  static NCPoly word(CtxPtr ctx, const Word& w, const Scalar& coeff);

  const CtxPtr& ctx() const { return ctx_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Word, Scalar>& terms() const { return terms_; }

  NCPoly operator+(const NCPoly& o) const;
  NCPoly operator-(const NCPoly& o) const;
  NCPoly operator-() const;
  NCPoly operator*(const NCPoly& o) const;  // concatenate and reduce
  NCPoly operator*(const Scalar& s) const;
  NCPoly& operator+=(const NCPoly& o) { return *this = *this + o; }
  NCPoly& operator-=(const NCPoly& o) { return *this = *this - o; }
  bool operator==(const NCPoly& o) const;
  bool operator!=(const NCPoly& o) const { return !(*this == o); }

  NCPoly star() const;  // involutive antihomomorphism
  std::string str() const;

  void add_term(const Word& w, const Scalar& c);  // no reduction

  friend NCPoly operator*(const Scalar& s, const NCPoly& p) { return p * s; }

 private:
  CtxPtr ctx_;
  std::map<Word, Scalar> terms_;
  friend NCPoly reduce(const NCPoly&, Redex);
};

/// Rewrite to the canonical normal form.
NCPoly reduce(const NCPoly& p, Redex strategy = Redex::Leftmost);

/// Reduction by the quadratic rules only, leaving z*_N z_N unexpanded.
/// Used to re-derive the weighted trace identity from the unit relation.
NCPoly reduce_quadratic_only(const NCPoly& p);

/// Deterministic pseudo-random polynomial (words of length <= max_len).
NCPoly random_poly(CtxPtr ctx, uint64_t seed, int max_len, int max_terms);

/// sum_i z_i z*_i  and the q^{-2i}-weighted  sum_i q^{-2i} z*_i z_i.
NCPoly unit_sum(CtxPtr ctx);          // plain sum, equals 1 after reduction
NCPoly weighted_star_sum(CtxPtr ctx); // weighted sum, equals q^{-2}

/// All defining relations of the sphere algebra (each reduces to zero):
/// the three quadratic families, the diagonal relations and the unit
/// relation. Returned unreduced.
std::vector<NCPoly> defining_relations(CtxPtr ctx);

std::string word_str(const Word& w);

}  // namespace qsphere
