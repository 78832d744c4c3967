#include "qsphere/ncpoly.hpp"

#include <deque>
#include <optional>
#include <sstream>

namespace qsphere {

NCPoly NCPoly::one(CtxPtr ctx) {
  NCPoly p(ctx);
  p.terms_[Word{}] = Scalar(ctx, 1L);
  return p;
}

NCPoly NCPoly::scalar(const Scalar& s) {
  NCPoly p(s.ctx());
  if (!s.is_zero()) p.terms_[Word{}] = s;
  return p;
}

NCPoly NCPoly::letter(CtxPtr ctx, Letter l) {
  NCPoly p(ctx);
  p.terms_[Word{l}] = Scalar(ctx, 1L);
  return p;
}

NCPoly NCPoly::word(CtxPtr ctx, const Word& w, const Scalar& coeff) {
  NCPoly p(ctx);
  if (!coeff.is_zero()) p.terms_[w] = coeff;
  return p;
}

void NCPoly::add_term(const Word& w, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    terms_.emplace(w, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

NCPoly NCPoly::operator+(const NCPoly& o) const {
  NCPoly out = *this;
  if (!out.ctx_) out.ctx_ = o.ctx_;
  for (auto& [w, c] : o.terms_) out.add_term(w, c);
  return out;
}

NCPoly NCPoly::operator-() const {
  NCPoly out = *this;
  for (auto& [w, c] : out.terms_) c = -c;
  return out;
}

NCPoly NCPoly::operator-(const NCPoly& o) const { return *this + (-o); }

NCPoly NCPoly::operator*(const Scalar& s) const {
  NCPoly out(ctx_ ? ctx_ : s.ctx());
  if (s.is_zero()) return out;
  for (auto& [w, c] : terms_) out.terms_[w] = c * s;
  return out;
}

NCPoly NCPoly::operator*(const NCPoly& o) const {
  NCPoly out(ctx_ ? ctx_ : o.ctx_);
  for (auto& [w1, c1] : terms_) {
    for (auto& [w2, c2] : o.terms_) {
      Word w = w1;
      w.insert(w.end(), w2.begin(), w2.end());
      out.add_term(w, c1 * c2);
    }
  }
  return reduce(out);
}

bool NCPoly::operator==(const NCPoly& o) const {
  NCPoly d = reduce(*this) - reduce(o);
  return d.terms_.empty();
}

NCPoly NCPoly::star() const {
  NCPoly out(ctx_);
  for (auto& [w, c] : terms_) {
    Word r(w.rbegin(), w.rend());
    for (auto& l : r) l.kind ^= 1;
    out.add_term(r, c.conj());
  }
  return reduce(out);
}

std::string word_str(const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) os << "*";
    os << (w[i].kind ? "zs[" : "z[") << int(w[i].idx) << "]";
  }
  return os.str();
}

std::string NCPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [w, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    if (!w.empty()) os << "*" << word_str(w);
  }
  return os.str();
}

namespace {

struct Rules {
  CtxPtr ctx;
  int n;
  Scalar q1, qm1, Q;

  explicit Rules(CtxPtr c)
      : ctx(c), n(c->n()), q1(Scalar::q(c, 1)), qm1(Scalar::q(c, -1)), Q(big_q(c)) {}

  // Rewrites the adjacent pair (a,b); returns false when already normal.
  // Each replacement is (scalar, two-or-zero-letter subword) appended to out.
  bool apply_pair(Letter a, Letter b, std::vector<std::pair<Scalar, Word>>* out) const {
    out->clear();
    if (a.kind == 0 && b.kind == 0) {  // z_j z_i -> q^{-1} z_i z_j (j > i)
      if (a.idx > b.idx) {
        out->push_back({qm1, Word{b, a}});
        return true;
      }
      return false;
    }
    if (a.kind == 1 && b.kind == 1) {  // z*_j z*_i -> q z*_i z*_j (j > i)
      if (a.idx > b.idx) {
        out->push_back({q1, Word{b, a}});
        return true;
      }
      return false;
    }
    if (a.kind == 0 && b.kind == 1) {
      if (a.idx != b.idx) {  // z_i z*_j -> q z*_j z_i
        out->push_back({q1, Word{b, a}});
        return true;
      }
      int i = a.idx;
      // z_i z*_i -> z*_i z_i - q^{-1} Q sum_{k>i} z_k z*_k
      out->push_back({Scalar(ctx, 1L), Word{zs(i), z(i)}});
      Scalar c = -(qm1 * Q);
      for (int k = i + 1; k <= n; ++k) out->push_back({c, Word{z(k), zs(k)}});
      return true;
    }
    return false;
  }

  // Canonical words never contain z*_N together with z_N. Starting at
  // position p the segment  z*_N z_{i1}..z_{ik} z_N  (i's < N) collapses via
  //   z*_N z_N = q^{2N-2} - sum_{i<N} q^{2N-2i} z*_i z_i
  // after commuting z*_N across the k intermediate letters.
  bool apply_top_trace(const Word& w, int p,
                       std::vector<std::pair<Scalar, Word>>* out) const {
    if (w[p] != zs(n)) return false;
    int r = p + 1;
    while (r < static_cast<int>(w.size()) && w[r].kind == 0 && w[r].idx < n) ++r;
    if (r >= static_cast<int>(w.size()) || w[r] != z(n)) return false;
    out->clear();
    int k = r - p - 1;
    Scalar jump = qpow(ctx, -k);
    Word mid(w.begin() + p + 1, w.begin() + r);  // the k skipped letters
    Word head;
    head.insert(head.end(), mid.begin(), mid.end());
    out->push_back({jump * qpow(ctx, 2 * n - 2), head});
    for (int i = 1; i < n; ++i) {
      Word rep = mid;
      rep.push_back(zs(i));
      rep.push_back(z(i));
      out->push_back({-jump * qpow(ctx, 2 * n - 2 * i), rep});
    }
    return true;
  }
};

struct Reducer {
  Rules rules;
  Redex strategy;
  bool expand_top_trace;
  std::map<Word, NCPoly> memo;

  Reducer(CtxPtr ctx, Redex s, bool top)
      : rules(std::move(ctx)), strategy(s), expand_top_trace(top) {}

  // One-step expansion of the chosen redex, or nullopt when normal.
  // The top-trace collapse outranks the pair rules under both strategies;
  // sorting a z-block past a pending z*_N..z_N pattern can loop.
  std::optional<std::vector<std::pair<Scalar, Word>>> step(const Word& w) {
    if (w.size() < 2) return std::nullopt;
    std::vector<std::pair<Scalar, Word>> repl;
    int len = static_cast<int>(w.size());
    if (expand_top_trace) {
      for (int i = 0; i < len - 1; ++i) {
        if (rules.apply_top_trace(w, i, &repl)) {
          int r = i + 1;  // position of the matching z_N
          while (w[r].kind == 0 && w[r].idx < rules.n) ++r;
          std::vector<std::pair<Scalar, Word>> out;
          for (auto& [factor, sub] : repl) {
            Word nw(w.begin(), w.begin() + i);
            nw.insert(nw.end(), sub.begin(), sub.end());
            nw.insert(nw.end(), w.begin() + r + 1, w.end());
            out.emplace_back(factor, std::move(nw));
          }
          return out;
        }
      }
    }
    for (int s = 0; s < len - 1; ++s) {
      int i = (strategy == Redex::Leftmost) ? s : len - 2 - s;
      if (rules.apply_pair(w[i], w[i + 1], &repl)) {
        std::vector<std::pair<Scalar, Word>> out;
        for (auto& [factor, sub] : repl) {
          Word nw(w.begin(), w.begin() + i);
          nw.insert(nw.end(), sub.begin(), sub.end());
          nw.insert(nw.end(), w.begin() + i + 2, w.end());
          out.emplace_back(factor, std::move(nw));
        }
        return out;
      }
    }
    return std::nullopt;
  }

  const NCPoly& word_normal_form(const Word& w) {
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    auto redex = step(w);
    NCPoly result(rules.ctx);
    if (!redex) {
      result.add_term(w, Scalar(rules.ctx, 1L));
    } else {
      for (auto& [factor, nw] : *redex) {
        const NCPoly& sub = word_normal_form(nw);
        for (auto& [sw, sc] : sub.terms()) result.add_term(sw, sc * factor);
      }
    }
    return memo.emplace(w, std::move(result)).first->second;
  }
};

NCPoly reduce_impl(const NCPoly& p, Redex strategy, bool expand_top_trace) {
  if (!p.ctx()) return p;
  Reducer red(p.ctx(), strategy, expand_top_trace);
  NCPoly out(p.ctx());
  for (auto& [w, c] : p.terms()) {
    const NCPoly& nf = red.word_normal_form(w);
    for (auto& [sw, sc] : nf.terms()) out.add_term(sw, sc * c);
  }
  return out;
}

}  // namespace

NCPoly reduce(const NCPoly& p, Redex strategy) {
  return reduce_impl(p, strategy, true);
}

NCPoly reduce_quadratic_only(const NCPoly& p) {
  return reduce_impl(p, Redex::Leftmost, false);
}

NCPoly random_poly(CtxPtr ctx, uint64_t seed, int max_len, int max_terms) {
  std::mt19937_64 rng(seed);
  int n = ctx->n();
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> kind(0, 1);
  std::uniform_int_distribution<int> idx(1, n);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> qexp(-2, 2);
  NCPoly out(ctx);
  int t = nterms(rng);
  for (int k = 0; k < t; ++k) {
    Word w;
    int L = len(rng);
    for (int j = 0; j < L; ++j)
      w.push_back(Letter{static_cast<uint8_t>(kind(rng)), static_cast<uint8_t>(idx(rng))});
    int c = coef(rng);
    if (c == 0) c = 1;
    out.add_term(w, Scalar(ctx, static_cast<long>(c)) * qpow(ctx, qexp(rng)));
  }
  return out;
}

NCPoly unit_sum(CtxPtr ctx) {
  NCPoly s(ctx);
  for (int i = 1; i <= ctx->n(); ++i) s.add_term(Word{z(i), zs(i)}, Scalar(ctx, 1L));
  return s;
}

NCPoly weighted_star_sum(CtxPtr ctx) {
  NCPoly s(ctx);
  for (int i = 1; i <= ctx->n(); ++i)
    s.add_term(Word{zs(i), z(i)}, qpow(ctx, -2 * i));
  return s;
}

std::vector<NCPoly> defining_relations(CtxPtr ctx) {
  int n = ctx->n();
  Scalar one(ctx, 1L), q1 = Scalar::q(ctx), qm1 = Scalar::q(ctx, -1), Q = big_q(ctx);
  std::vector<NCPoly> rels;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      NCPoly r(ctx);  // z_i z_j - q z_j z_i
      r.add_term(Word{z(i), z(j)}, one);
      r.add_term(Word{z(j), z(i)}, -q1);
      rels.push_back(r);
      NCPoly r2(ctx);  // z*_i z*_j - q^{-1} z*_j z*_i
      r2.add_term(Word{zs(i), zs(j)}, one);
      r2.add_term(Word{zs(j), zs(i)}, -qm1);
      rels.push_back(r2);
    }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      NCPoly r(ctx);  // z_i z*_j - q z*_j z_i
      r.add_term(Word{z(i), zs(j)}, one);
      r.add_term(Word{zs(j), z(i)}, -q1);
      rels.push_back(r);
    }
  for (int i = 1; i <= n; ++i) {
    NCPoly r(ctx);  // z_i z*_i - z*_i z_i + q^{-1} Q sum_{k>i} z_k z*_k
    r.add_term(Word{z(i), zs(i)}, one);
    r.add_term(Word{zs(i), z(i)}, -one);
    for (int k = i + 1; k <= n; ++k) r.add_term(Word{z(k), zs(k)}, qm1 * Q);
    rels.push_back(r);
  }
  NCPoly unit = unit_sum(ctx);  // sum z_i z*_i - 1
  unit.add_term(Word{}, -one);
  rels.push_back(unit);
  return rels;
}

}  // namespace qsphere
