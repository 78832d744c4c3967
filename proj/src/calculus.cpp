#include "qsphere/calculus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qsphere {

std::string family_name(Family f) {
  switch (f) {
    case Family::GammaAlphaTau: return "gamma";
    case Family::GammaPrime: return "gamma_prime";
    case Family::Gamma2Prime: return "gamma_2prime";
    case Family::Gamma3Prime: return "gamma_3prime";
    case Family::GTilde: return "gamma_tilde";
    case Family::GTildePrime: return "gamma_tilde_prime";
    case Family::GTilde2Prime: return "gamma_tilde_2prime";
    case Family::GTildeCirc: return "gamma_tilde_circ";
    case Family::GTilde2Circ: return "gamma_tilde_2circ";
  }
  return "?";
}

void CalculusSpec::build_matrices() {
  row1m = build_derived(RKind::Rinv, ctx, n);
  row2m = build_derived(RKind::Rc, ctx, n);
  row3m = build_derived(RKind::Rlm, ctx, n);
  row4m = build_derived(RKind::Rr, ctx, n);
}

static std::pair<Scalar, Scalar> normalized_relation(const FactorRelation& f) {
  if (!f.mu.is_zero()) return {Scalar(f.mu.ctx(), 1L), f.nu / f.mu};
  return {Scalar(f.nu.ctx(), 0L), Scalar(f.nu.ctx(), 1L)};
}

bool CalculusSpec::same_table(const CalculusSpec& o) const {
  if (n != o.n || ctx != o.ctx) return false;
  bool coeffs = a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 &&
                b1 == o.b1 && b2 == o.b2 && b3 == o.b3 && b4 == o.b4 &&
                c1 == o.c1 && c2 == o.c2 && c3 == o.c3 && c4 == o.c4 &&
                d3 == o.d3 && d4 == o.d4 && e1 == o.e1 && e2 == o.e2 &&
                e3 == o.e3 && e4 == o.e4 && f3 == o.f3 && f4 == o.f4;
  if (!coeffs) return false;
  if (factor.has_value() != o.factor.has_value()) return false;
  if (factor) {
    auto [m1, n1] = normalized_relation(*factor);
    auto [m2, n2] = normalized_relation(*o.factor);
    return m1 == m2 && n1 == n2;
  }
  return true;
}

// ---------------------------------------------------------------------------
// OneForm

NCPoly OneForm::comp(Letter l) const {
  auto it = comps_.find(l);
  return it == comps_.end() ? NCPoly::zero(ctx_) : it->second;
}

void OneForm::add(Letter l, const NCPoly& coeff) {
  if (coeff.is_zero()) return;
  auto it = comps_.find(l);
  if (it == comps_.end()) {
    comps_.emplace(l, coeff);
  } else {
    it->second += coeff;
    if (it->second.is_zero()) comps_.erase(it);
  }
}

OneForm OneForm::operator+(const OneForm& o) const {
  OneForm out = *this;
  for (auto& [l, p] : o.comps_) out.add(l, p);
  return out;
}

OneForm OneForm::operator-() const {
  OneForm out = *this;
  for (auto& [l, p] : out.comps_) p = -p;
  return out;
}

OneForm OneForm::operator-(const OneForm& o) const { return *this + (-o); }

OneForm OneForm::operator*(const Scalar& s) const {
  OneForm out(ctx_, n_);
  if (s.is_zero()) return out;
  for (auto& [l, p] : comps_) out.comps_[l] = p * s;
  return out;
}

OneForm OneForm::left_mul(const NCPoly& p) const {
  OneForm out(ctx_, n_);
  for (auto& [l, c] : comps_) out.add(l, p * c);
  return out;
}

bool OneForm::syntactically_zero() const {
  for (auto& [l, p] : comps_)
    if (!reduce(p).is_zero()) return false;
  return true;
}

std::string OneForm::str() const {
  if (comps_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [l, p] : comps_) {
    if (!first) os << " + ";
    first = false;
    os << "[" << p.str() << "] " << (l.kind ? "dzs[" : "dz[") << int(l.idx) << "]";
  }
  return os.str();
}

OneForm basis_form(CtxPtr ctx, int n, Letter l) {
  OneForm f(ctx, n);
  f.add(l, NCPoly::one(ctx));
  return f;
}

OneForm h_plus(CtxPtr ctx, int n) {
  OneForm f(ctx, n);
  for (int i = 1; i <= n; ++i) f.add(zs(i), NCPoly::letter(ctx, z(i)));
  return f;
}

OneForm h_minus(CtxPtr ctx, int n) {
  OneForm f(ctx, n);
  for (int i = 1; i <= n; ++i)
    f.add(z(i), NCPoly::letter(ctx, zs(i)) * qpow(ctx, -2 * i));
  return f;
}

OneForm relation_form(const CalculusSpec& spec) {
  if (!spec.factor) throw ScalarError("spec has no factor relation");
  return h_plus(spec.ctx, spec.n) * spec.factor->mu +
         h_minus(spec.ctx, spec.n) * spec.factor->nu;
}

// ---------------------------------------------------------------------------
// Rewrite rows

OneForm push_letter(const CalculusSpec& spec, Letter dxi, Letter x) {
  const CtxPtr& ctx = spec.ctx;
  int n = spec.n;
  OneForm out(ctx, n);
  int k = dxi.idx, l = x.idx;
  auto add_matrix_part = [&](const SparseN2Matrix& m, const Scalar& a,
                             uint8_t coeff_kind, uint8_t d_kind) {
    if (a.is_zero()) return;
    for (auto& [o, row] : m.rows()) {
      auto it = row.find({k, l});
      if (it == row.end()) continue;
      auto [s, t] = o;
      out.add(Letter{d_kind, static_cast<uint8_t>(t)},
              NCPoly::letter(ctx, Letter{coeff_kind, static_cast<uint8_t>(s)}) *
                  (a * it->second));
    }
  };
  auto add_h = [&](const NCPoly& coeff, bool plus) {
    if (coeff.is_zero()) return;
    OneForm h = plus ? h_plus(ctx, n) : h_minus(ctx, n);
    for (auto& [dl, p] : h.comps()) out.add(dl, coeff * p);
  };
  Scalar one(ctx, 1L);
  if (dxi.kind == 0 && x.kind == 0) {
    add_matrix_part(spec.row1m, spec.a1, 0, 0);
    out.add(x, NCPoly::letter(ctx, z(k)) * spec.b1);
    NCPoly w = reduce(NCPoly::word(ctx, {z(k), z(l)}, one));
    add_h(w * spec.c1, true);
    add_h(w * spec.e1, false);
  } else if (dxi.kind == 1 && x.kind == 1) {
    add_matrix_part(spec.row2m, spec.a2, 1, 1);
    out.add(x, NCPoly::letter(ctx, zs(k)) * spec.b2);
    NCPoly w = reduce(NCPoly::word(ctx, {zs(k), zs(l)}, one));
    add_h(w * spec.c2, true);
    add_h(w * spec.e2, false);
  } else if (dxi.kind == 0 && x.kind == 1) {
    add_matrix_part(spec.row3m, spec.a3, 1, 0);
    out.add(Letter{1, static_cast<uint8_t>(l)}, NCPoly::letter(ctx, z(k)) * spec.b3);
    NCPoly w = reduce(NCPoly::word(ctx, {z(k), zs(l)}, one));
    NCPoly hp = w * spec.c3;
    NCPoly hm = w * spec.e3;
    if (k == l) {
      hp += NCPoly::scalar(spec.d3 * qpow(ctx, 2 * k));
      hm += NCPoly::scalar(spec.f3 * qpow(ctx, 2 * k));
    }
    add_h(hp, true);
    add_h(hm, false);
  } else {
    add_matrix_part(spec.row4m, spec.a4, 0, 1);
    out.add(Letter{0, static_cast<uint8_t>(l)}, NCPoly::letter(ctx, zs(k)) * spec.b4);
    NCPoly w = reduce(NCPoly::word(ctx, {zs(k), z(l)}, one));
    NCPoly hp = w * spec.c4;
    NCPoly hm = w * spec.e4;
    if (k == l) {
      hp += NCPoly::scalar(spec.d4);
      hm += NCPoly::scalar(spec.f4);
    }
    add_h(hp, true);
    add_h(hm, false);
  }
  return out;
}

OneForm push_word(const CalculusSpec& spec, Letter dxi, const Word& w) {
  OneForm cur = basis_form(spec.ctx, spec.n, dxi);
  for (const Letter& x : w) {
    OneForm next(spec.ctx, spec.n);
    for (auto& [dl, p] : cur.comps()) {
      OneForm step = push_letter(spec, dl, x);
      for (auto& [dl2, p2] : step.comps()) next.add(dl2, p * p2);
    }
    cur = next;
  }
  return cur;
}

OneForm push_poly(const CalculusSpec& spec, Letter dxi, const NCPoly& x) {
  OneForm out(spec.ctx, spec.n);
  for (auto& [w, c] : x.terms()) {
    OneForm part = push_word(spec, dxi, w);
    for (auto& [dl, p] : part.comps()) out.add(dl, p * c);
  }
  return out;
}

OneForm form_times(const CalculusSpec& spec, const OneForm& omega, const NCPoly& x) {
  OneForm out(spec.ctx, spec.n);
  for (auto& [dl, p] : omega.comps()) {
    OneForm part = push_poly(spec, dl, x);
    for (auto& [dl2, p2] : part.comps()) out.add(dl2, p * p2);
  }
  return out;
}

OneForm differential(const CalculusSpec& spec, const NCPoly& x) {
  OneForm out(spec.ctx, spec.n);
  for (auto& [w, c] : x.terms()) {
    for (size_t j = 0; j < w.size(); ++j) {
      Word suffix(w.begin() + j + 1, w.end());
      OneForm part = push_word(spec, w[j], suffix);
      NCPoly prefix = NCPoly::word(spec.ctx, Word(w.begin(), w.begin() + j), c);
      for (auto& [dl, p] : part.comps()) out.add(dl, prefix * p);
    }
  }
  return out;
}

bool is_zero_form(const CalculusSpec& spec, const OneForm& omega) {
  if (!spec.factor) return omega.syntactically_zero();
  const CtxPtr& ctx = spec.ctx;
  const Scalar& mu = spec.factor->mu;
  const Scalar& nu = spec.factor->nu;
  NCPoly x(ctx);
  if (!nu.is_zero()) {
    for (int i = 1; i <= spec.n; ++i)
      x += omega.comp(z(i)) * NCPoly::letter(ctx, z(i));
    x = x * (qpow(ctx, 2) * nu.inv());
  } else {
    for (int i = 1; i <= spec.n; ++i)
      x += omega.comp(zs(i)) * NCPoly::letter(ctx, zs(i));
    x = x * mu.inv();
  }
  OneForm expect = relation_form(spec).left_mul(x);
  return (omega - expect).syntactically_zero();
}

bool forms_equal(const CalculusSpec& spec, const OneForm& a, const OneForm& b) {
  return is_zero_form(spec, a - b);
}

std::string form_residue_str(const OneForm& f) { return f.str(); }

// ---------------------------------------------------------------------------
// Well-definedness and star checks

static std::vector<Letter> all_letters(int n) {
  std::vector<Letter> ls;
  for (int i = 1; i <= n; ++i) ls.push_back(z(i));
  for (int i = 1; i <= n; ++i) ls.push_back(zs(i));
  return ls;
}

Report verify_well_defined(const CalculusSpec& spec) {
  Report rep;
  const CtxPtr& ctx = spec.ctx;
  auto record = [&](const std::string& id, const std::string& anchor,
                    const OneForm& residue) {
    bool ok = is_zero_form(spec, residue);
    rep.checks.push_back(
        {id, anchor, ok, ok ? "" : form_residue_str(residue), 0.0});
  };

  auto rels = defining_relations(ctx);
  NCPoly weighted = weighted_star_sum(ctx);
  weighted.add_term({}, -qpow(ctx, -2));
  rels.push_back(weighted);

  for (size_t r = 0; r < rels.size(); ++r) {
    record("fc1." + std::to_string(r), "d(rel)=0 for rel: " + rels[r].str(),
           differential(spec, rels[r]));
  }
  auto letters = all_letters(spec.n);
  for (size_t g = 0; g < letters.size(); ++g) {
    for (size_t r = 0; r < rels.size(); ++r) {
      record("fc2." + std::to_string(g) + "." + std::to_string(r),
             "d" + word_str({letters[g]}) + " * rel = 0",
             push_poly(spec, letters[g], rels[r]));
    }
  }
  for (size_t g = 0; g < letters.size(); ++g) {
    OneForm lhs1 = basis_form(ctx, spec.n, letters[g]) -
                   push_poly(spec, letters[g], unit_sum(ctx));
    record("fc3a." + std::to_string(g),
           "d" + word_str({letters[g]}) + " (1 - sum z_i z*_i) = 0", lhs1);
    OneForm lhs2 = basis_form(ctx, spec.n, letters[g]) * qpow(ctx, -2) -
                   push_poly(spec, letters[g], weighted_star_sum(ctx));
    record("fc3b." + std::to_string(g),
           "d" + word_str({letters[g]}) + " (q^-2 - sum q^-2i z*_i z_i) = 0", lhs2);
  }
  if (spec.factor) {
    OneForm rel = relation_form(spec);
    for (auto& x : all_letters(spec.n)) {
      record("frel." + word_str({x}), "(mu H+ + nu H-) " + word_str({x}) + " = 0",
             form_times(spec, rel, NCPoly::letter(ctx, x)));
    }
  }
  return rep;
}

Report verify_star(const CalculusSpec& spec) {
  Report rep;
  const CtxPtr& ctx = spec.ctx;
  auto record = [&](const std::string& id, const std::string& anchor,
                    const OneForm& residue) {
    bool ok = is_zero_form(spec, residue);
    rep.checks.push_back(
        {id, anchor, ok, ok ? "" : form_residue_str(residue), 0.0});
  };
  // (H+)* = sum d(z_i) z*_i ; the star axiom forces H+ + (H+)* = 0
  OneForm hstar(ctx, spec.n);
  for (int i = 1; i <= spec.n; ++i) {
    OneForm part = push_word(spec, z(i), {zs(i)});
    hstar = hstar + part;
  }
  record("star.h", "H+ + (H+)* = 0", h_plus(ctx, spec.n) + hstar);

  // roundtrip on generator pairs: (dg g')* recomputed two ways
  auto letters = all_letters(spec.n);
  for (auto& g : letters) {
    for (auto& gp : letters) {
      OneForm a = push_letter(spec, g, gp);
      OneForm lhs(ctx, spec.n);
      for (auto& [dl, p] : a.comps()) {
        Letter flipped{static_cast<uint8_t>(dl.kind ^ 1), dl.idx};
        OneForm part = push_poly(spec, flipped, p.star());
        lhs = lhs + part;
      }
      Letter gflip{static_cast<uint8_t>(g.kind ^ 1), g.idx};
      Letter gpflip{static_cast<uint8_t>(gp.kind ^ 1), gp.idx};
      OneForm rhs =
          basis_form(ctx, spec.n, gflip).left_mul(NCPoly::letter(ctx, gpflip));
      record("star.rt." + word_str({g}) + "." + word_str({gp}),
             "(d" + word_str({g}) + " " + word_str({gp}) + ")* consistency",
             lhs - rhs);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Quasi-commuting invariants

namespace {

struct QForm {  // g2 mu^2 + g1 mu nu + g0 nu^2
  Scalar g2, g1, g0;
  bool zero() const { return g2.is_zero() && g1.is_zero() && g0.is_zero(); }
};

// linear decomposition of a scalar  s = a*mu + b*nu  over the extended ctx
struct Lin {
  Scalar a, b;
  bool zero() const { return a.is_zero() && b.is_zero(); }
};

Lin lin_split(const Scalar& s, const CtxPtr& ctx2) {
  Scalar one(ctx2, 1L), zero(ctx2, 0L);
  Scalar a = s.substitute({{"mu", one}, {"nu", zero}});
  Scalar b = s.substitute({{"mu", zero}, {"nu", one}});
  return {a, b};
}

QForm cross_form(const Lin& A, const Lin& Bv, const Lin& A2, const Lin& B2) {
  // (A mu-part etc): form = A*B2 - A2*B  pointwise in (mu,nu)
  return QForm{A.a * B2.a - A2.a * Bv.a,
               A.a * B2.b + A.b * B2.a - A2.a * Bv.b - A2.b * Bv.a,
               A.b * B2.b - A2.b * Bv.b};
}

QForm normalized(QForm f) {
  const Scalar* lead = nullptr;
  if (!f.g2.is_zero()) lead = &f.g2;
  else if (!f.g1.is_zero()) lead = &f.g1;
  else if (!f.g0.is_zero()) lead = &f.g0;
  if (!lead) return f;
  Scalar inv = lead->inv();
  return QForm{f.g2 * inv, f.g1 * inv, f.g0 * inv};
}

// gcd of the dehomogenized quadratics c2 t^2 + c1 t + c0 over the field
std::vector<Scalar> uni_gcd(std::vector<Scalar> A, std::vector<Scalar> B) {
  auto strip = [](std::vector<Scalar>& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
  };
  strip(A);
  strip(B);
  while (!B.empty()) {
    // A mod B
    while (A.size() >= B.size() && !A.empty()) {
      Scalar factor = A.back() / B.back();
      size_t off = A.size() - B.size();
      for (size_t i = 0; i < B.size(); ++i) A[off + i] -= factor * B[i];
      strip(A);
    }
    std::swap(A, B);
  }
  strip(A);
  if (!A.empty()) {
    Scalar inv = A.back().inv();
    for (auto& c : A) c *= inv;
  }
  return A;
}

}  // namespace

QuasiCommutantResult invariant_quasi_commutants(const CalculusSpec& spec) {
  const CtxPtr& ctx = spec.ctx;
  CtxPtr ctx2 = ctx->extended({"mu", "nu"});
  CalculusSpec spec2 = lift_spec(spec, ctx2);
  Scalar mu = Scalar::sym(ctx2, "mu"), nu = Scalar::sym(ctx2, "nu");
  OneForm omega = h_plus(ctx2, spec.n) * mu + h_minus(ctx2, spec.n) * nu;

  // per-generator coefficient vectors, positions keyed by (letter, word)
  struct GenData {
    std::vector<Lin> A, B;
  };
  std::vector<GenData> gens;
  for (auto& g : all_letters(spec.n)) {
    NCPoly gp = NCPoly::letter(ctx2, g);
    OneForm W = form_times(spec2, omega, gp);   // omega g
    OneForm X = omega.left_mul(gp);             // g omega
    std::set<std::pair<Letter, Word>> keys;
    for (auto& [dl, p] : W.comps())
      for (auto& [w, c] : p.terms()) keys.insert({dl, w});
    for (auto& [dl, p] : X.comps())
      for (auto& [w, c] : p.terms()) keys.insert({dl, w});
    GenData gd;
    for (auto& [dl, w] : keys) {
      auto coeff = [&](const OneForm& f) -> Scalar {
        NCPoly p = f.comp(dl);
        auto it = p.terms().find(w);
        return it == p.terms().end() ? Scalar(ctx2, 0L) : it->second;
      };
      gd.A.push_back(lin_split(coeff(W), ctx2));
      gd.B.push_back(lin_split(coeff(X), ctx2));
    }
    gens.push_back(std::move(gd));
  }

  // collect distinct cross-ratio constraint forms
  std::vector<QForm> forms;
  std::set<std::string> seen;
  auto push_form = [&](QForm f) {
    if (f.zero()) return;
    QForm nf = normalized(f);
    std::string key = nf.g2.str() + "|" + nf.g1.str() + "|" + nf.g0.str();
    if (seen.insert(key).second) forms.push_back(nf);
  };
  for (auto& gd : gens) {
    size_t P = gd.A.size();
    for (size_t s = 0; s < P; ++s)
      for (size_t t = s + 1; t < P; ++t)
        push_form(cross_form(gd.A[s], gd.B[s], gd.A[t], gd.B[t]));
    // positions whose right-action coefficient vanishes identically force
    // the left-action coefficient to vanish on any ray
    for (size_t t = 0; t < P; ++t) {
      if (gd.B[t].zero() && !gd.A[t].zero()) {
        push_form(QForm{gd.A[t].a, gd.A[t].b, Scalar(ctx2, 0L)});  // lin * mu
        push_form(QForm{Scalar(ctx2, 0L), gd.A[t].a, gd.A[t].b});  // lin * nu
      }
    }
  }

  QuasiCommutantResult res{QuasiCommutantResult::Kind::NoRay,
                           {},
                           Scalar(ctx, 0L),
                           Scalar(ctx, 0L),
                           Scalar(ctx, 0L),
                           ""};
  auto lower = [&](const Scalar& s) { return s.lifted(ctx); };
  if (forms.empty()) {
    res.kind = QuasiCommutantResult::Kind::AllRays;
    return res;
  }

  // candidate rays
  std::vector<std::pair<Scalar, Scalar>> cands;
  bool ray10 = true;  // (mu,nu) = (1,0) iff every g2 vanishes
  for (auto& f : forms) ray10 = ray10 && f.g2.is_zero();
  if (ray10) cands.push_back({Scalar(ctx2, 1L), Scalar(ctx2, 0L)});

  std::vector<Scalar> G{forms[0].g0, forms[0].g1, forms[0].g2};  // in t = mu/nu
  for (size_t i = 1; i < forms.size(); ++i)
    G = uni_gcd(G, {forms[i].g0, forms[i].g1, forms[i].g2});
  if (G.size() == 3) {
    res.g2 = lower(G[2]);
    res.g1 = lower(G[1]);
    res.g0 = lower(G[0]);
    Scalar disc = G[1] * G[1] - Scalar(ctx2, 4L) * G[2] * G[0];
    auto root = scalar_sqrt(disc);
    if (!root) {
      res.kind = QuasiCommutantResult::Kind::IrreducibleQuadratic;
      res.note = "constraint quadratic has no roots in the rational-function field";
      return res;
    }
    Scalar two_a = Scalar(ctx2, 2L) * G[2];
    cands.push_back({(-G[1] + *root) / two_a, Scalar(ctx2, 1L)});
    if (!root->is_zero()) cands.push_back({(-G[1] - *root) / two_a, Scalar(ctx2, 1L)});
  } else if (G.size() == 2) {
    res.g1 = lower(G[1]);
    res.g0 = lower(G[0]);
    cands.push_back({-G[0] / G[1], Scalar(ctx2, 1L)});
  } else if (G.size() == 1) {
    // no common root with nu != 0
  } else {
    // all forms vanish identically in t: every (t,1) works; combined with
    // ray10 this is the all-rays case
    res.kind = QuasiCommutantResult::Kind::AllRays;
    return res;
  }

  // verify candidates and build certificates
  auto letters = all_letters(spec.n);
  for (auto& [cm, cn] : cands) {
    bool ok = true;
    QuasiRay ray;
    ray.mu = lower(cm);
    ray.nu = lower(cn);
    for (size_t gi = 0; gi < gens.size() && ok; ++gi) {
      auto& gd = gens[gi];
      auto at = [&](const Lin& L) { return L.a * cm + L.b * cn; };
      Scalar C(ctx2, 0L);
      bool haveC = false;
      for (size_t t = 0; t < gd.A.size(); ++t) {
        Scalar bv = at(gd.B[t]);
        if (!bv.is_zero()) {
          C = at(gd.A[t]) / bv;
          haveC = true;
          break;
        }
      }
      if (!haveC) {
        // right action vanished entirely; need the left action to vanish too
        for (size_t t = 0; t < gd.A.size(); ++t)
          if (!at(gd.A[t]).is_zero()) ok = false;
        if (ok) ray.certificate[word_str({letters[gi]})] = Scalar(ctx, 0L);
        continue;
      }
      for (size_t t = 0; t < gd.A.size() && ok; ++t)
        if (!(at(gd.A[t]) == C * at(gd.B[t]))) ok = false;
      if (ok) ray.certificate[word_str({letters[gi]})] = lower(C);
    }
    if (ok) res.rays.push_back(std::move(ray));
  }
  res.kind = res.rays.empty() ? QuasiCommutantResult::Kind::NoRay
                              : QuasiCommutantResult::Kind::Rays;
  return res;
}

bool no_extra_letter_quasi_commutant(const CalculusSpec& spec, Letter extra) {
  // omega = mu H+ + nu H- + d(extra); infeasibility certificate: some
  // constraint form is a nonzero constant, or a forced-vanish position is
  // constant-nonzero.
  const CtxPtr& ctx = spec.ctx;
  CtxPtr ctx2 = ctx->extended({"mu", "nu"});
  CalculusSpec spec2 = lift_spec(spec, ctx2);
  Scalar mu = Scalar::sym(ctx2, "mu"), nu = Scalar::sym(ctx2, "nu");
  OneForm omega = h_plus(ctx2, spec.n) * mu + h_minus(ctx2, spec.n) * nu +
                  basis_form(ctx2, spec.n, extra);
  struct Aff {
    Scalar a, b, k;  // a mu + b nu + k
  };
  auto aff_split = [&](const Scalar& s) -> Aff {
    Scalar one(ctx2, 1L), zero(ctx2, 0L);
    Scalar k = s.substitute({{"mu", zero}, {"nu", zero}});
    Scalar a = s.substitute({{"mu", one}, {"nu", zero}}) - k;
    Scalar b = s.substitute({{"mu", zero}, {"nu", one}}) - k;
    return {a, b, k};
  };
  for (auto& g : all_letters(spec.n)) {
    NCPoly gp = NCPoly::letter(ctx2, g);
    OneForm W = form_times(spec2, omega, gp);
    OneForm X = omega.left_mul(gp);
    std::set<std::pair<Letter, Word>> keys;
    for (auto& [dl, p] : W.comps())
      for (auto& [w, c] : p.terms()) keys.insert({dl, w});
    for (auto& [dl, p] : X.comps())
      for (auto& [w, c] : p.terms()) keys.insert({dl, w});
    std::vector<Aff> A, B;
    for (auto& [dl, w] : keys) {
      auto coeff = [&](const OneForm& f) -> Scalar {
        NCPoly p = f.comp(dl);
        auto it = p.terms().find(w);
        return it == p.terms().end() ? Scalar(ctx2, 0L) : it->second;
      };
      A.push_back(aff_split(coeff(W)));
      B.push_back(aff_split(coeff(X)));
    }
    for (size_t t = 0; t < A.size(); ++t) {
      bool bzero = B[t].a.is_zero() && B[t].b.is_zero() && B[t].k.is_zero();
      bool aconst = A[t].a.is_zero() && A[t].b.is_zero() && !A[t].k.is_zero();
      if (bzero && aconst) return true;  // A(t) is a nonzero constant
    }
    for (size_t s = 0; s < A.size(); ++s) {
      for (size_t t = s + 1; t < A.size(); ++t) {
        // constant part of the cross ratio: k_s k'_t - k_t k'_s; if the whole
        // cross ratio is a nonzero constant the system is infeasible
        Scalar c2 = A[s].a * B[t].a - A[t].a * B[s].a;
        Scalar c1 = A[s].a * B[t].b + A[s].b * B[t].a - A[t].a * B[s].b -
                    A[t].b * B[s].a;
        Scalar c0 = A[s].b * B[t].b - A[t].b * B[s].b;
        Scalar l1 = A[s].a * B[t].k + A[s].k * B[t].a - A[t].a * B[s].k -
                    A[t].k * B[s].a;
        Scalar l2 = A[s].b * B[t].k + A[s].k * B[t].b - A[t].b * B[s].k -
                    A[t].k * B[s].b;
        Scalar k = A[s].k * B[t].k - A[t].k * B[s].k;
        if (c2.is_zero() && c1.is_zero() && c0.is_zero() && l1.is_zero() &&
            l2.is_zero() && !k.is_zero())
          return true;
      }
    }
  }
  return false;
}

CalculusSpec factorize(const CalculusSpec& spec, const Scalar& mu, const Scalar& nu) {
  if (spec.factor) throw ScalarError("spec is already factored");
  CalculusSpec out = spec;
  if (!nu.is_zero()) {
    Scalar r = mu / nu;  // H- = -r H+
    out.c1 = spec.c1 - spec.e1 * r;
    out.c2 = spec.c2 - spec.e2 * r;
    out.c3 = spec.c3 - spec.e3 * r;
    out.c4 = spec.c4 - spec.e4 * r;
    out.d3 = spec.d3 - spec.f3 * r;
    out.d4 = spec.d4 - spec.f4 * r;
    Scalar zero(spec.ctx, 0L);
    out.e1 = out.e2 = out.e3 = out.e4 = zero;
    out.f3 = out.f4 = zero;
  } else {
    Scalar zero(spec.ctx, 0L);
    out.c1 = out.c2 = out.c3 = out.c4 = zero;
    out.d3 = out.d4 = zero;
  }
  out.factor = FactorRelation{mu, nu};
  return out;
}

OneForm surviving_trace_form(const CalculusSpec& spec) {
  if (!spec.factor) throw ScalarError("surviving_trace_form needs a factored spec");
  if (!spec.factor->nu.is_zero()) return h_plus(spec.ctx, spec.n);
  return h_minus(spec.ctx, spec.n);
}

bool check_inner(const CalculusSpec& spec, const OneForm& theta) {
  const CtxPtr& ctx = spec.ctx;
  for (auto& g : all_letters(spec.n)) {
    NCPoly gp = NCPoly::letter(ctx, g);
    OneForm lhs = differential(spec, gp);
    OneForm rhs = form_times(spec, theta, gp) - theta.left_mul(gp);
    if (!is_zero_form(spec, lhs - rhs)) return false;
  }
  // inner derivations extend along products; spot-check a few length-2 words
  for (auto& w : {Word{z(1), z(2)}, Word{z(1), zs(1)}, Word{zs(1), zs(2)}}) {
    if (static_cast<int>(w[1].idx) > spec.n) continue;
    NCPoly p = reduce(NCPoly::word(ctx, w, Scalar(ctx, 1L)));
    OneForm lhs = differential(spec, p);
    OneForm rhs = form_times(spec, theta, p) - theta.left_mul(p);
    if (!is_zero_form(spec, lhs - rhs)) return false;
  }
  return true;
}

std::optional<Scalar> derive_inner_scalar(const CalculusSpec& spec) {
  const CtxPtr& ctx = spec.ctx;
  OneForm base = surviving_trace_form(spec);
  NCPoly g1 = NCPoly::letter(ctx, z(1));
  OneForm lhs = differential(spec, g1);
  OneForm comm = form_times(spec, base, g1) - base.left_mul(g1);
  // lhs = c * comm in the quotient: compare a nonzero coefficient; the
  // membership test below certifies the choice globally.
  for (auto& [dl, p] : comm.comps()) {
    for (auto& [w, cv] : p.terms()) {
      NCPoly lp = lhs.comp(dl);
      auto it = lp.terms().find(w);
      if (it == lp.terms().end()) continue;
      Scalar c = it->second / cv;
      if (c.is_zero()) continue;
      if (check_inner(spec, base * c)) return c;
    }
  }
  return std::nullopt;
}

CalculusSpec lift_spec(const CalculusSpec& spec, CtxPtr target) {
  CalculusSpec out = spec;
  out.ctx = target;
  auto L = [&](const Scalar& s) { return s.lifted(target); };
  out.a1 = L(spec.a1); out.a2 = L(spec.a2); out.a3 = L(spec.a3); out.a4 = L(spec.a4);
  out.b1 = L(spec.b1); out.b2 = L(spec.b2); out.b3 = L(spec.b3); out.b4 = L(spec.b4);
  out.c1 = L(spec.c1); out.c2 = L(spec.c2); out.c3 = L(spec.c3); out.c4 = L(spec.c4);
  out.d3 = L(spec.d3); out.d4 = L(spec.d4);
  out.e1 = L(spec.e1); out.e2 = L(spec.e2); out.e3 = L(spec.e3); out.e4 = L(spec.e4);
  out.f3 = L(spec.f3); out.f4 = L(spec.f4);
  if (spec.factor) out.factor = FactorRelation{L(spec.factor->mu), L(spec.factor->nu)};
  out.params.clear();
  for (auto& [k, v] : spec.params) out.params.emplace(k, L(v));
  out.build_matrices();
  return out;
}

}  // namespace qsphere
