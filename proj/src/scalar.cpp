#include "qsphere/scalar.hpp"

#include <algorithm>
#include <sstream>

namespace qsphere {

// ---------------------------------------------------------------------------
// Context

std::shared_ptr<const Context> Context::make(
    int n, const std::vector<std::pair<std::string, bool>>& symbols,
    const std::vector<std::pair<std::string, std::string>>& conj_pairs) {
  if (n < 2) throw ScalarError("context requires n >= 2");
  auto ctx = std::make_shared<Context>();
  ctx->n_ = n;
  auto add = [&](const std::string& name, bool real) -> int {
    if (name.empty() || name == "q")
      throw ScalarError("invalid symbol name '" + name + "'");
    for (const auto& s : ctx->syms_)
      if (s.name == name) throw ScalarError("duplicate symbol '" + name + "'");
    ctx->syms_.push_back(SymbolDef{name, real, -1});
    return static_cast<int>(ctx->syms_.size());  // var id
  };
  for (const auto& [name, real] : symbols) add(name, real);
  for (const auto& [a, b] : conj_pairs) {
    int ia = add(a, false);
    int ib = add(b, false);
    ctx->syms_[ia - 1].conj = ib;
    ctx->syms_[ib - 1].conj = ia;
  }
  return ctx;
}

std::shared_ptr<const Context> Context::extended(
    const std::vector<std::string>& extra_real) const {
  auto ctx = std::make_shared<Context>(*this);
  for (const auto& name : extra_real) {
    if (ctx->has_symbol(name)) continue;
    ctx->syms_.push_back(SymbolDef{name, true, -1});
  }
  return ctx;
}

bool Context::has_symbol(const std::string& name) const {
  for (const auto& s : syms_)
    if (s.name == name) return true;
  return false;
}

int Context::symbol_id(const std::string& name) const {
  if (name == "q") return 0;
  for (size_t i = 0; i < syms_.size(); ++i)
    if (syms_[i].name == name) return static_cast<int>(i) + 1;
  throw ScalarError("unknown symbol '" + name + "'");
}

const std::string& Context::var_name(int id) const {
  static const std::string kq = "q";
  if (id == 0) return kq;
  return syms_.at(id - 1).name;
}

int Context::conj_of(int id) const {
  if (id == 0) return 0;
  int p = syms_.at(id - 1).conj;
  return p < 0 ? id : p;
}

// ---------------------------------------------------------------------------
// Polynomial layer

namespace detail {

static long total_deg(const Mono& m) {
  long d = 0;
  for (auto& [v, e] : m) d += e;
  return d;
}

int mono_cmp(const Mono& a, const Mono& b) {
  long da = total_deg(a), db = total_deg(b);
  if (da != db) return da < db ? -1 : 1;
  // tie: compare exponents from the highest variable down; q (var 0) last
  auto ia = a.rbegin(), ib = b.rbegin();
  while (ia != a.rend() && ib != b.rend()) {
    if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
    if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
    ++ia;
    ++ib;
  }
  if (ia != a.rend()) return 1;
  if (ib != b.rend()) return -1;
  return 0;
}

static Mono mono_mul(const Mono& a, const Mono& b) {
  Mono out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i, ++j;
    } else if (a[i].first < b[j].first) {
      out.push_back(a[i++]);
    } else {
      out.push_back(b[j++]);
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

// a / b, assuming divisibility.
static bool mono_div(const Mono& a, const Mono& b, Mono* out) {
  out->clear();
  size_t i = 0;
  for (auto& [v, e] : b) {
    while (i < a.size() && a[i].first < v) out->push_back(a[i++]);
    if (i >= a.size() || a[i].first != v || a[i].second < e) return false;
    if (a[i].second > e) out->emplace_back(v, a[i].second - e);
    ++i;
  }
  for (; i < a.size(); ++i) out->push_back(a[i]);
  return true;
}

Poly poly_const(const Int& c) {
  Poly p;
  if (c != 0) p.terms.push_back(Term{Mono{}, c});
  return p;
}

Poly poly_var(int id, int exp) {
  if (exp == 0) return poly_const(1);
  Poly p;
  p.terms.push_back(Term{Mono{{id, exp}}, Int(1)});
  return p;
}

Poly add(const Poly& a, const Poly& b) {
  Poly out;
  out.terms.reserve(a.terms.size() + b.terms.size());
  size_t i = 0, j = 0;
  while (i < a.terms.size() && j < b.terms.size()) {
    int c = mono_cmp(a.terms[i].mono, b.terms[j].mono);
    if (c > 0) {
      out.terms.push_back(a.terms[i++]);
    } else if (c < 0) {
      out.terms.push_back(b.terms[j++]);
    } else {
      Int s = a.terms[i].coeff + b.terms[j].coeff;
      if (s != 0) out.terms.push_back(Term{a.terms[i].mono, s});
      ++i, ++j;
    }
  }
  for (; i < a.terms.size(); ++i) out.terms.push_back(a.terms[i]);
  for (; j < b.terms.size(); ++j) out.terms.push_back(b.terms[j]);
  return out;
}

Poly neg(const Poly& a) {
  Poly out = a;
  for (auto& t : out.terms) t.coeff = -t.coeff;
  return out;
}

Poly sub(const Poly& a, const Poly& b) { return add(a, neg(b)); }

Poly mul_int(const Poly& a, const Int& c) {
  if (c == 0) return Poly{};
  Poly out = a;
  for (auto& t : out.terms) t.coeff *= c;
  return out;
}

static Poly mul_term(const Poly& a, const Mono& m, const Int& c) {
  Poly out;
  out.terms.reserve(a.terms.size());
  for (auto& t : a.terms) out.terms.push_back(Term{mono_mul(t.mono, m), t.coeff * c});
  return out;  // order is preserved under monomial multiplication
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly{};
  if (a.terms.size() == 1) return mul_term(b, a.terms[0].mono, a.terms[0].coeff);
  if (b.terms.size() == 1) return mul_term(a, b.terms[0].mono, b.terms[0].coeff);
  Poly out;
  for (auto& t : b.terms) out = add(out, mul_term(a, t.mono, t.coeff));
  return out;
}

Poly pow(const Poly& a, int k) {
  Poly r = poly_const(1), base = a;
  while (k > 0) {
    if (k & 1) r = mul(r, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return r;
}

bool equal(const Poly& a, const Poly& b) {
  if (a.terms.size() != b.terms.size()) return false;
  for (size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].coeff != b.terms[i].coeff) return false;
    if (mono_cmp(a.terms[i].mono, b.terms[i].mono) != 0) return false;
  }
  return true;
}

static Int int_content(const Poly& p) {
  Int g = 0;
  for (auto& t : p.terms) {
    g = boost::multiprecision::gcd(g, t.coeff);
    if (g == 1) break;
  }
  return g;
}

Poly divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw ScalarError("polynomial division by zero");
  Poly r = a, q;
  Mono m;
  while (!r.is_zero()) {
    const Term& lr = r.terms.front();
    const Term& lb = b.terms.front();
    if (!mono_div(lr.mono, lb.mono, &m) || lr.coeff % lb.coeff != 0)
      throw ScalarError("inexact polynomial division");
    Int c = lr.coeff / lb.coeff;
    q.terms.push_back(Term{m, c});
    r = sub(r, mul_term(b, m, c));
  }
  std::sort(q.terms.begin(), q.terms.end(),
            [](const Term& x, const Term& y) { return mono_cmp(x.mono, y.mono) > 0; });
  return q;
}

static int max_var(const Poly& p) {
  int v = -1;
  for (auto& t : p.terms)
    if (!t.mono.empty()) v = std::max(v, t.mono.back().first);
  return v;
}

static int degree_in(const Poly& p, int v) {
  int d = 0;
  for (auto& t : p.terms)
    for (auto& [var, e] : t.mono)
      if (var == v) d = std::max(d, e);
  return d;
}

// Coefficient polynomials of p viewed as univariate in v (index = exponent).
static std::vector<Poly> coeffs_wrt(const Poly& p, int v) {
  std::vector<Poly> out(degree_in(p, v) + 1);
  for (auto& t : p.terms) {
    int e = 0;
    Mono rest;
    for (auto& [var, ex] : t.mono) {
      if (var == v)
        e = ex;
      else
        rest.emplace_back(var, ex);
    }
    out[e] = add(out[e], Poly{{Term{rest, t.coeff}}});
  }
  return out;
}

static Poly from_coeffs(const std::vector<Poly>& cs, int v) {
  Poly out;
  for (size_t e = 0; e < cs.size(); ++e)
    out = add(out, mul(cs[e], poly_var(v, static_cast<int>(e))));
  return out;
}

static Poly prem(const Poly& a, const Poly& b, int v) {
  int db = degree_in(b, v);
  auto bc = coeffs_wrt(b, v);
  Poly lb = bc[db];
  Poly r = a;
  int dr = degree_in(r, v);
  while (!r.is_zero() && (dr = degree_in(r, v)) >= db) {
    auto rc = coeffs_wrt(r, v);
    Poly lr = rc[dr];
    // r := lb*r - lr * v^{dr-db} * b
    r = sub(mul(lb, r), mul(mul(lr, poly_var(v, dr - db)), b));
    if (!r.is_zero() && degree_in(r, v) >= dr)
      throw ScalarError("prem failed to reduce degree");
  }
  return r;
}

static Poly content_wrt(const Poly& p, int v) {
  auto cs = coeffs_wrt(p, v);
  Poly g;
  for (auto& c : cs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant() && !g.is_zero() && g.terms[0].coeff == 1) break;
  }
  return g;
}

static Poly sign_normalized(Poly p) {
  if (!p.is_zero() && p.terms[0].coeff < 0)
    for (auto& t : p.terms) t.coeff = -t.coeff;
  return p;
}

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return sign_normalized(b);
  if (b.is_zero()) return sign_normalized(a);
  Int ca = int_content(a), cb = int_content(b);
  Int g0 = boost::multiprecision::gcd(ca, cb);
  Poly A = divide_exact(a, poly_const(ca > 0 ? ca : Int(1)));
  Poly B = divide_exact(b, poly_const(cb > 0 ? cb : Int(1)));
  int v = std::max(max_var(A), max_var(B));
  if (v < 0) return poly_const(g0);

  Poly contA = content_wrt(A, v);
  Poly contB = content_wrt(B, v);
  A = divide_exact(A, contA);
  B = divide_exact(B, contB);
  if (degree_in(A, v) < degree_in(B, v)) std::swap(A, B);
  while (!B.is_zero()) {
    Poly r = prem(A, B, v);
    A = B;
    if (r.is_zero()) {
      B = Poly{};
    } else {
      Int rc = int_content(r);
      r = divide_exact(r, poly_const(rc));
      Poly pc = content_wrt(r, v);
      B = divide_exact(r, pc);
    }
  }
  // the surviving A is primitive in both senses
  Poly G = mul(gcd(contA, contB), A);
  G = mul_int(G, g0);
  return sign_normalized(G);
}

std::optional<Poly> poly_sqrt(const Poly& p) {
  if (p.is_zero()) return Poly{};
  if (p.is_constant()) {
    const Int& c = p.terms[0].coeff;
    if (c < 0) return std::nullopt;
    Int r = boost::multiprecision::sqrt(c);
    if (r * r != c) return std::nullopt;
    return poly_const(r);
  }
  int v = max_var(p);
  auto cs = coeffs_wrt(p, v);
  int d = static_cast<int>(cs.size()) - 1;
  if (d % 2 != 0) return std::nullopt;
  int m = d / 2;
  auto top = poly_sqrt(cs[d]);
  if (!top) return std::nullopt;
  std::vector<Poly> s(m + 1);
  s[m] = *top;
  Poly twice_top = mul_int(s[m], 2);
  try {
    for (int k = 1; k <= m; ++k) {
      Poly acc = (2 * m - k < static_cast<int>(cs.size())) ? cs[2 * m - k] : Poly{};
      for (int i = m - k + 1; i <= m; ++i) {
        int j = 2 * m - k - i;
        if (j <= m - k || j > m) continue;
        if (j < i) continue;  // count each unordered pair once
        Poly prod = mul(s[i], s[j]);
        acc = sub(acc, (i == j) ? prod : mul_int(prod, 2));
      }
      s[m - k] = divide_exact(acc, twice_top);
    }
  } catch (const ScalarError&) {
    return std::nullopt;
  }
  Poly cand = from_coeffs(s, v);
  if (!equal(mul(cand, cand), p)) return std::nullopt;
  return cand;
}

Poly derivative(const Poly& a, int var) {
  Poly out;
  for (auto& t : a.terms) {
    Mono m;
    Int c = t.coeff;
    bool present = false;
    for (auto& [v, e] : t.mono) {
      if (v == var) {
        present = true;
        c *= e;
        if (e > 1) m.emplace_back(v, e - 1);
      } else {
        m.emplace_back(v, e);
      }
    }
    if (present) out = add(out, Poly{{Term{m, c}}});
  }
  return out;
}

std::string to_string(const Poly& p, const Context& ctx) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& t : p.terms) {
    Int c = t.coeff;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    Int ac = boost::multiprecision::abs(c);
    std::vector<std::string> factors;
    if (ac != 1 || t.mono.empty()) factors.push_back(ac.str());
    for (auto& [v, e] : t.mono) {
      std::string f = ctx.var_name(v);
      if (e != 1) f += "^" + std::to_string(e);
      factors.push_back(f);
    }
    for (size_t k = 0; k < factors.size(); ++k) {
      if (k) os << "*";
      os << factors[k];
    }
  }
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scalar

using detail::Poly;

Scalar::Scalar(CtxPtr ctx, long v) : ctx_(std::move(ctx)), num_(detail::poly_const(Int(v))) {}
Scalar::Scalar(CtxPtr ctx, const Int& v) : ctx_(std::move(ctx)), num_(detail::poly_const(v)) {}
Scalar::Scalar(CtxPtr ctx, const Rational& v) : ctx_(std::move(ctx)) {
  num_ = detail::poly_const(boost::multiprecision::numerator(v));
  den_ = detail::poly_const(boost::multiprecision::denominator(v));
  canonicalize();
}

Scalar Scalar::variable(CtxPtr ctx, int var_id, int exp) {
  Scalar s;
  s.ctx_ = std::move(ctx);
  if (exp >= 0) {
    s.num_ = detail::poly_var(var_id, exp);
  } else {
    s.num_ = detail::poly_const(1);
    s.den_ = detail::poly_var(var_id, -exp);
  }
  return s;
}

Scalar Scalar::q(CtxPtr ctx, int exp) { return variable(std::move(ctx), 0, exp); }

Scalar Scalar::sym(CtxPtr ctx, const std::string& name) {
  int id = ctx->symbol_id(name);
  return variable(std::move(ctx), id, 1);
}

Scalar Scalar::from_parts(CtxPtr ctx, Poly num, Poly den) {
  if (den.is_zero()) throw ScalarError("zero denominator");
  Scalar s;
  s.ctx_ = std::move(ctx);
  s.num_ = std::move(num);
  s.den_ = std::move(den);
  s.canonicalize();
  return s;
}

void Scalar::canonicalize() {
  if (num_.is_zero()) {
    den_ = detail::poly_const(1);
    return;
  }
  Poly g = detail::gcd(num_, den_);
  if (!(g.is_constant() && g.terms[0].coeff == 1)) {
    num_ = detail::divide_exact(num_, g);
    den_ = detail::divide_exact(den_, g);
  }
  if (den_.terms[0].coeff < 0) {
    num_ = detail::neg(num_);
    den_ = detail::neg(den_);
  }
}

bool Scalar::is_one() const {
  return num_.is_constant() && den_.is_constant() && !num_.is_zero() &&
         num_.terms[0].coeff == 1 && den_.terms[0].coeff == 1;
}

static void check_ctx(const Scalar& a, const Scalar& b) {
  if (a.ctx() != b.ctx()) throw ScalarError("scalar context mismatch");
}

Scalar Scalar::operator+(const Scalar& o) const {
  check_ctx(*this, o);
  Poly n = detail::add(detail::mul(num_, o.den_), detail::mul(o.num_, den_));
  return from_parts(ctx_, std::move(n), detail::mul(den_, o.den_));
}

Scalar Scalar::operator-(const Scalar& o) const {
  check_ctx(*this, o);
  Poly n = detail::sub(detail::mul(num_, o.den_), detail::mul(o.num_, den_));
  return from_parts(ctx_, std::move(n), detail::mul(den_, o.den_));
}

Scalar Scalar::operator*(const Scalar& o) const {
  check_ctx(*this, o);
  return from_parts(ctx_, detail::mul(num_, o.num_), detail::mul(den_, o.den_));
}

Scalar Scalar::operator/(const Scalar& o) const {
  check_ctx(*this, o);
  if (o.is_zero()) throw ScalarError("division by zero scalar");
  return from_parts(ctx_, detail::mul(num_, o.den_), detail::mul(den_, o.num_));
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  s.num_ = detail::neg(s.num_);
  return s;
}

bool Scalar::operator==(const Scalar& o) const {
  check_ctx(*this, o);
  return detail::equal(num_, o.num_) && detail::equal(den_, o.den_);
}

Scalar Scalar::inv() const {
  if (is_zero()) throw ScalarError("inverse of zero scalar");
  return from_parts(ctx_, den_, num_);
}

Scalar Scalar::pow(int k) const {
  if (k < 0) return inv().pow(-k);
  Scalar s;
  s.ctx_ = ctx_;
  s.num_ = detail::pow(num_, k);
  s.den_ = detail::pow(den_, k);
  s.canonicalize();
  return s;
}

static Poly conj_poly(const Poly& p, const Context& ctx) {
  Poly out;
  for (auto& t : p.terms) {
    detail::Mono m;
    for (auto& [v, e] : t.mono) m.emplace_back(ctx.conj_of(v), e);
    std::sort(m.begin(), m.end());
    out = detail::add(out, Poly{{detail::Term{m, t.coeff}}});
  }
  return out;
}

Scalar Scalar::conj() const {
  return from_parts(ctx_, conj_poly(num_, *ctx_), conj_poly(den_, *ctx_));
}

static Scalar eval_poly_scalar(const Poly& p, const CtxPtr& src, const CtxPtr& target,
                               const std::map<std::string, Scalar>& bindings) {
  Scalar acc(target, 0L);
  for (auto& t : p.terms) {
    Scalar term(target, t.coeff);
    for (auto& [v, e] : t.mono) {
      const std::string& name = src->var_name(v);
      auto it = bindings.find(name);
      Scalar base = (it != bindings.end()) ? it->second : Scalar::sym(target, name);
      if (v == 0 && it == bindings.end()) base = Scalar::q(target);
      term *= base.pow(e);
    }
    acc += term;
  }
  return acc;
}

Scalar Scalar::substitute(const std::map<std::string, Scalar>& bindings,
                          CtxPtr target_ctx) const {
  CtxPtr target = target_ctx ? target_ctx : ctx_;
  for (auto& [name, val] : bindings) {
    (void)ctx_->symbol_id(name);  // throws on undeclared symbol
    if (val.ctx() != target) throw ScalarError("binding context mismatch");
    if (name == "q") throw ScalarError("q cannot be substituted here");
  }
  Scalar n = eval_poly_scalar(num_, ctx_, target, bindings);
  Scalar d = eval_poly_scalar(den_, ctx_, target, bindings);
  if (d.is_zero())
    throw ScalarError("substitution makes denominator vanish: " +
                      detail::to_string(den_, *ctx_));
  return n / d;
}

Scalar Scalar::lifted(CtxPtr target) const {
  if (target == ctx_) return *this;
  return substitute({}, target);
}

static Rational eval_poly_rat(const Poly& p, const Context& ctx, const Rational& q0,
                              const std::map<std::string, Rational>& vals) {
  Rational acc = 0;
  for (auto& t : p.terms) {
    Rational term(t.coeff);
    for (auto& [v, e] : t.mono) {
      Rational base;
      if (v == 0) {
        base = q0;
      } else {
        auto it = vals.find(ctx.var_name(v));
        if (it == vals.end())
          throw ScalarError("missing value for symbol '" + ctx.var_name(v) + "'");
        base = it->second;
      }
      for (int i = 0; i < e; ++i) term *= base;
    }
    acc += term;
  }
  return acc;
}

Rational Scalar::eval(const Rational& q0,
                      const std::map<std::string, Rational>& vals) const {
  if (q0 == 0 || q0 == 1 || q0 == -1)
    throw ScalarError("evaluation point q in {-1,0,1} is not allowed");
  Rational d = eval_poly_rat(den_, *ctx_, q0, vals);
  if (d == 0) throw ScalarError("evaluation point is a pole");
  return eval_poly_rat(num_, *ctx_, q0, vals) / d;
}

Scalar Scalar::derivative(const std::string& sym_name) const {
  int v = ctx_->symbol_id(sym_name);
  Poly dn = detail::derivative(num_, v);
  Poly dd = detail::derivative(den_, v);
  Poly n = detail::sub(detail::mul(dn, den_), detail::mul(num_, dd));
  return from_parts(ctx_, std::move(n), detail::mul(den_, den_));
}

std::string Scalar::str() const {
  if (is_zero()) return "0";
  std::string n = detail::to_string(num_, *ctx_);
  if (den_.is_constant() && den_.terms[0].coeff == 1) return n;
  std::string d = detail::to_string(den_, *ctx_);
  bool npar = num_.terms.size() > 1;
  bool dpar = den_.terms.size() > 1;
  std::string out = npar ? "(" + n + ")" : n;
  out += " / ";
  out += dpar ? "(" + d + ")" : d;
  return out;
}

std::optional<Scalar> scalar_sqrt(const Scalar& s) {
  auto n = detail::poly_sqrt(s.num());
  if (!n) return std::nullopt;
  auto d = detail::poly_sqrt(s.den());
  if (!d) return std::nullopt;
  return Scalar::from_parts(s.ctx(), *n, *d);
}

Scalar big_q(CtxPtr ctx) { return Scalar::q(ctx, 1) - Scalar::q(ctx, -1); }

Scalar s_plus(CtxPtr ctx) {
  Scalar s(ctx, 0L);
  for (int i = 0; i < ctx->n(); ++i) s += Scalar::q(ctx, 2 * i);
  return s;
}

Scalar s_tilde(CtxPtr ctx) { return s_plus(ctx) - Scalar(ctx, 1L); }

Scalar qpow(CtxPtr ctx, int k) { return Scalar::q(std::move(ctx), k); }

}  // namespace qsphere
