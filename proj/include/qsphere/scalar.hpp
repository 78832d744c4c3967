#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsphere {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct ScalarError : std::runtime_error {
  explicit ScalarError(const std::string& what) : std::runtime_error(what) {}
};

/// Declares a coefficient-field symbol. Symbols are real by default; a
/// symbol with a conjugate partner transforms into its partner under the
/// conjugation involution.
struct SymbolDef {
  std::string name;
  bool is_real = true;
  int conj = -1;  // var id of the partner; -1 means fixed by conjugation
};

/// Immutable table of coefficient-field variables. Variable 0 is always q;
/// declared parameter symbols get ids 1..m. Holds the rank N of the sphere
/// so field constants that depend on it (s_plus) are well defined.
class Context {
 public:
  static std::shared_ptr<const Context> make(
      int n, const std::vector<std::pair<std::string, bool>>& symbols = {},
      const std::vector<std::pair<std::string, std::string>>& conj_pairs = {});

  /// Same n, existing symbols preserved (same ids), extra real symbols added.
  std::shared_ptr<const Context> extended(
      const std::vector<std::string>& extra_real) const;

  int n() const { return n_; }
  int var_count() const { return 1 + static_cast<int>(syms_.size()); }
  bool has_symbol(const std::string& name) const;
  int symbol_id(const std::string& name) const;  // throws if unknown
  const std::string& var_name(int id) const;
  int conj_of(int id) const;  // id of the conjugate variable (q -> q)
  const std::vector<SymbolDef>& symbols() const { return syms_; }

 private:
  int n_ = 2;
  std::vector<SymbolDef> syms_;
};

using CtxPtr = std::shared_ptr<const Context>;

namespace detail {

/// Sparse exponent vector, sorted by var id, all exponents > 0.
using Mono = std::vector<std::pair<int, int>>;

struct Term {
  Mono mono;
  Int coeff;
};

/// Integer-coefficient multivariate polynomial in canonical deg-lex order
/// (q is the least significant variable in ties).
struct Poly {
  std::vector<Term> terms;  // sorted descending, no zero coefficients

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const {
    return terms.empty() || (terms.size() == 1 && terms[0].mono.empty());
  }
};

int mono_cmp(const Mono& a, const Mono& b);
Poly poly_const(const Int& c);
Poly poly_var(int id, int exp = 1);
Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly neg(const Poly& a);
Poly mul(const Poly& a, const Poly& b);
Poly mul_int(const Poly& a, const Int& c);
Poly pow(const Poly& a, int k);  // k >= 0
bool equal(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);
Poly divide_exact(const Poly& a, const Poly& b);
Poly derivative(const Poly& a, int var);
std::optional<Poly> poly_sqrt(const Poly& p);
std::string to_string(const Poly& p, const Context& ctx);

}  // namespace detail

/// Exact rational function in q and the context's parameter symbols.
/// Always kept canonical: numerator and denominator coprime with positive
/// leading denominator coefficient, so equality is syntactic.
class Scalar {
 public:
  Scalar() = default;
  Scalar(CtxPtr ctx, long v);
  Scalar(CtxPtr ctx, const Int& v);
  Scalar(CtxPtr ctx, const Rational& v);

  static Scalar integer(CtxPtr ctx, long v) { return Scalar(ctx, v); }
  static Scalar variable(CtxPtr ctx, int var_id, int exp = 1);
  static Scalar q(CtxPtr ctx, int exp = 1);  // Laurent power of q
  static Scalar sym(CtxPtr ctx, const std::string& name);
  static Scalar from_parts(CtxPtr ctx, detail::Poly num, detail::Poly den);

  const CtxPtr& ctx() const { return ctx_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;  // throws on zero divisor
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  Scalar inv() const;     // throws on zero
  Scalar pow(int k) const;
  Scalar conj() const;    // conjugation involution

  /// Exact substitution symbol -> value; all values must live in target_ctx
  /// (defaults to this scalar's context). Unbound symbols are carried over
  /// by name. Throws if a denominator vanishes under the substitution.
  Scalar substitute(const std::map<std::string, Scalar>& bindings,
                    CtxPtr target_ctx = nullptr) const;

  /// Rebuild this scalar in another context, matching variables by name.
  Scalar lifted(CtxPtr target) const;

  /// Exact rational evaluation at q=q0 and the given symbol values.
  /// Throws if the point is a pole or a symbol is missing.
  Rational eval(const Rational& q0,
                const std::map<std::string, Rational>& vals = {}) const;

  Scalar derivative(const std::string& sym_name) const;

  std::string str() const;

  const detail::Poly& num() const { return num_; }
  const detail::Poly& den() const { return den_; }

 private:
  void canonicalize();
  CtxPtr ctx_;
  detail::Poly num_;
  detail::Poly den_ = detail::poly_const(1);
};

/// Exact square root of a scalar when it is a perfect square in the field.
std::optional<Scalar> scalar_sqrt(const Scalar& s);

// The recurring field constants.
Scalar big_q(CtxPtr ctx);                  // q - q^{-1}
Scalar s_plus(CtxPtr ctx);                 // sum_{i=0}^{N-1} q^{2i}
Scalar s_tilde(CtxPtr ctx);                // s_plus - 1
Scalar qpow(CtxPtr ctx, int k);

}  // namespace qsphere
