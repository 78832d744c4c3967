#include "qsphere/wedge.hpp"

#include <algorithm>
#include <set>
#include <functional>
#include <sstream>

namespace qsphere {

std::string wword_str(const WWord& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) os << "^";
    os << (w[i].kind ? "dzs[" : "dz[") << int(w[i].idx) << "]";
  }
  return os.str();
}

bool FormElement::is_zero() const {
  for (auto& [w, c] : terms)
    if (!reduce(c).is_zero()) return false;
  return true;
}

void FormElement::add(const WWord& w, const NCPoly& c) {
  if (c.is_zero()) return;
  auto it = terms.find(w);
  if (it == terms.end()) {
    terms.emplace(w, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

FormElement FormElement::operator+(const FormElement& o) const {
  FormElement out = *this;
  for (auto& [w, c] : o.terms) out.add(w, c);
  return out;
}

FormElement FormElement::operator-() const {
  FormElement out = *this;
  for (auto& [w, c] : out.terms) c = -c;
  return out;
}

FormElement FormElement::operator-(const FormElement& o) const {
  return *this + (-o);
}

FormElement FormElement::operator*(const Scalar& s) const {
  FormElement out{ctx, mode, {}};
  if (s.is_zero()) return out;
  for (auto& [w, c] : terms) out.terms[w] = c * s;
  return out;
}

FormElement FormElement::left_mul(const NCPoly& p) const {
  FormElement out{ctx, mode, {}};
  for (auto& [w, c] : terms) out.add(w, p * c);
  return out;
}

std::string FormElement::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [w, c] : terms) {
    if (!first) os << " + ";
    first = false;
    os << "[" << c.str() << "] " << wword_str(w);
  }
  return os.str();
}

// ---------------------------------------------------------------------------

WedgeAlgebra::WedgeAlgebra(CtxPtr ctx, int n, WedgeMode mode)
    : ctx_(std::move(ctx)), n_(n), mode_(mode) {
  base_ = make_family(Family::GTilde, ctx_, {{"lam", Scalar(ctx_, 1L)}});
  R_ = build_R(ctx_, n_);
  Rr_ = build_derived(RKind::Rr, ctx_, n_);
}

FormElement WedgeAlgebra::form(const WWord& w, const NCPoly& coeff) const {
  FormElement f{ctx_, mode_, {}};
  f.add(w, coeff);
  return f;
}

FormElement WedgeAlgebra::from_one_form(const OneForm& f) const {
  FormElement out{ctx_, mode_, {}};
  for (auto& [dl, p] : f.comps()) out.add(WWord{dl}, p);
  return out;
}

FormElement WedgeAlgebra::h_form() const {
  // H = q Q^{-1} sum_i q^{-2i} z*_i dz_i
  FormElement out{ctx_, mode_, {}};
  Scalar c = Scalar::q(ctx_) * big_q(ctx_).inv();
  for (int i = 1; i <= n_; ++i)
    out.add(WWord{z(i)}, NCPoly::letter(ctx_, zs(i)) * (c * qpow(ctx_, -2 * i)));
  return out;
}

std::map<WWord, NCPoly> WedgeAlgebra::pull_through(const WWord& w, const NCPoly& x) {
  std::map<WWord, NCPoly> out;
  NCPoly xr = reduce(x);
  if (xr.is_zero()) return out;
  if (w.empty()) {
    out[WWord{}] = xr;
    return out;
  }
  WWord prefix(w.begin(), w.end() - 1);
  Letter last = w.back();
  for (auto& [u, c] : xr.terms()) {
    OneForm step = push_word(base_, last, u);  // last * u as a left form
    for (auto& [dl, p] : step.comps()) {
      auto pulled = pull_through(prefix, p);
      for (auto& [pw, pc] : pulled) {
        WWord nw = pw;
        nw.push_back(dl);
        NCPoly contrib = pc * c;
        auto it = out.find(nw);
        if (it == out.end())
          out.emplace(nw, contrib);
        else {
          it->second += contrib;
          if (it->second.is_zero()) out.erase(it);
        }
      }
    }
  }
  return out;
}

namespace {

// dxi ^ H expanded into coefficient * 2-letter segments
struct Seg {
  NCPoly coeff;
  Letter l1, l2;
};

}  // namespace

const std::vector<WedgeAlgebra::Repl>& WedgeAlgebra::mixed_rule(int a, int b) {
  auto key = std::make_pair(a, b);
  auto it = mixed_.find(key);
  if (it != mixed_.end()) return it->second;

  Scalar q1 = Scalar::q(ctx_), Q = big_q(ctx_);
  Scalar hc = q1 * Q.inv();  // H = hc * sum q^{-2i} zs_i dz_i = -hc * sum z_j dzs_j

  // dxi ^ H as segments, mode-dependent expansion
  auto wedge_h = [&](Letter dxi) {
    std::vector<Seg> segs;
    if (mode_ == WedgeMode::Star) {
      // dxi ^ H = -H ^ dxi  (from d(dxi) = 0 under the graded commutator)
      for (int i = 1; i <= n_; ++i)
        segs.push_back(Seg{NCPoly::letter(ctx_, zs(i)) * (-(hc * qpow(ctx_, -2 * i))),
                           z(i), dxi});
    } else {
      // expand H through the second slot and pull z_j across dxi
      for (int j = 1; j <= n_; ++j) {
        OneForm step = push_letter(base_, dxi, z(j));
        for (auto& [dl, p] : step.comps())
          segs.push_back(Seg{p * (-hc), dl, zs(j)});
      }
    }
    return segs;
  };

  std::vector<Repl> rule;
  auto add_seg = [&](const NCPoly& c, Letter l1, Letter l2) {
    NCPoly cr = reduce(c);
    if (cr.is_zero()) return;
    rule.push_back(Repl{cr, WWord{l1, l2}});
  };

  // -Q^2 zs_a (dz_b ^ H)
  for (auto& s : wedge_h(z(b)))
    add_seg(NCPoly::letter(ctx_, zs(a)) * s.coeff * (-(Q * Q)), s.l1, s.l2);

  // H ^ H segments for the universal mode correction term
  std::vector<Seg> hh;
  if (mode_ == WedgeMode::Universal) {
    for (int i = 1; i <= n_; ++i) {
      auto inner = wedge_h(zs(i));  // dzs_i ^ H
      for (auto& s : inner)
        hh.push_back(Seg{NCPoly::letter(ctx_, z(i)) * s.coeff * (-hc), s.l1, s.l2});
    }
  }

  Scalar q3 = qpow(ctx_, 3);
  for (auto& [o, v] : Rr_.column(a, b)) {
    auto [k, l] = o;
    add_seg(NCPoly::scalar(-(q3 * v)), z(k), zs(l));
    for (auto& s : wedge_h(zs(l)))
      add_seg(NCPoly::letter(ctx_, z(k)) * s.coeff * (-(q3 * v * Q * Q)), s.l1, s.l2);
    if (mode_ == WedgeMode::Universal) {
      Scalar w = -(q3 * v * Q * Q * (Q * Q + Scalar(ctx_, 1L)));
      NCPoly zz = reduce(NCPoly::word(ctx_, {z(k), zs(l)}, w));
      for (auto& s : hh) add_seg(zz * s.coeff, s.l1, s.l2);
    }
  }
  return mixed_.emplace(key, std::move(rule)).first->second;
}

std::map<WWord, NCPoly> WedgeAlgebra::word_nf_strategy(
    const WWord& w, bool rightmost, std::map<WWord, std::map<WWord, NCPoly>>& memo) {
  auto it = memo.find(w);
  if (it != memo.end()) return it->second;

  std::map<WWord, NCPoly> result;
  Scalar q1 = Scalar::q(ctx_), qm1 = Scalar::q(ctx_, -1);

  // same-kind sorts and kills first, then a mixed pair per strategy
  int len = static_cast<int>(w.size());
  int sort_pos = -1, mixed_pos = -1;
  Scalar sort_factor(ctx_, 0L);
  bool kill = false;
  for (int s = 0; s + 1 < len; ++s) {
    int i = rightmost ? len - 2 - s : s;
    Letter x = w[i], y = w[i + 1];
    if (x.kind == y.kind) {
      if (x.idx == y.idx) {
        sort_pos = i;
        kill = true;
        break;
      }
      if (x.idx > y.idx) {
        sort_pos = i;
        sort_factor = x.kind == 0 ? -q1 : -qm1;
        break;
      }
    } else if (x.kind == 1 && y.kind == 0 && mixed_pos < 0) {
      mixed_pos = i;
    }
  }

  auto accumulate = [&](const NCPoly& factor, const std::map<WWord, NCPoly>& sub) {
    for (auto& [sw, sc] : sub) {
      NCPoly v = factor * sc;
      if (v.is_zero()) continue;
      auto jt = result.find(sw);
      if (jt == result.end())
        result.emplace(sw, std::move(v));
      else {
        jt->second += v;
        if (jt->second.is_zero()) result.erase(jt);
      }
    }
  };

  if (sort_pos >= 0) {
    if (!kill) {
      WWord nw = w;
      std::swap(nw[sort_pos], nw[sort_pos + 1]);
      accumulate(NCPoly::scalar(sort_factor), word_nf_strategy(nw, rightmost, memo));
    }
  } else if (mixed_pos >= 0) {
    int i = mixed_pos;
    WWord prefix(w.begin(), w.begin() + i);
    WWord suffix(w.begin() + i + 2, w.end());
    for (auto& repl : mixed_rule(w[i].idx, w[i + 1].idx)) {
      auto pulled = pull_through(prefix, repl.coeff);
      for (auto& [pw, pc] : pulled) {
        WWord nw = pw;
        nw.insert(nw.end(), repl.word.begin(), repl.word.end());
        nw.insert(nw.end(), suffix.begin(), suffix.end());
        accumulate(pc, word_nf_strategy(nw, rightmost, memo));
      }
    }
  } else {
    result.emplace(w, NCPoly::one(ctx_));
  }
  memo.emplace(w, result);
  return result;
}

const std::map<WWord, NCPoly>& WedgeAlgebra::word_normal_form(const WWord& w) {
  auto it = memo_.find(w);
  if (it != memo_.end()) return it->second;
  auto nf = word_nf_strategy(w, false, memo_);
  return memo_.find(w)->second;
}

void WedgeAlgebra::build_projection(int degree) {
  if (proj_.count(degree)) return;
  auto& table = proj_[degree];
  if (mode_ != WedgeMode::Star || degree < 2) return;

  // ascending index tuples for the two blocks
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  std::function<void(int)> gen = [&](int start) {
    subsets.push_back(cur);
    for (int i = start; i <= n_; ++i) {
      cur.push_back(i);
      gen(i + 1);
      cur.pop_back();
    }
  };
  gen(1);

  // relation vectors u ^ T ^ v with T = sum_j dz_j ^ dzs_j
  std::vector<std::map<WWord, Scalar>> rows;
  for (auto& us : subsets) {
    for (auto& vs : subsets) {
      if (static_cast<int>(us.size() + vs.size()) != degree - 2) continue;
      std::map<WWord, Scalar> row;
      for (int j = 1; j <= n_; ++j) {
        WWord w;
        for (int i : us) w.push_back(z(i));
        w.push_back(z(j));
        w.push_back(zs(j));
        for (int i : vs) w.push_back(zs(i));
        for (auto& [sw, sc] : word_normal_form(w)) {
          auto terms = sc.terms();
          Scalar val(ctx_, 0L);
          for (auto& [cw, cc] : terms) {
            if (!cw.empty())
              throw ScalarError("trace relation picked up a nonscalar coefficient");
            val += cc;
          }
          if (val.is_zero()) continue;
          auto jt = row.find(sw);
          if (jt == row.end())
            row.emplace(sw, val);
          else {
            jt->second += val;
            if (jt->second.is_zero()) row.erase(jt);
          }
        }
      }
      if (!row.empty()) rows.push_back(std::move(row));
    }
  }

  // echelonize with the largest word as pivot
  std::map<WWord, std::map<WWord, Scalar>> solved;  // pivot -> replacement
  auto reduce_row = [&](std::map<WWord, Scalar>& row) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = row.rbegin(); it != row.rend(); ++it) {
        auto st = solved.find(it->first);
        if (st == solved.end()) continue;
        Scalar f = it->second;
        row.erase(std::next(it).base());
        for (auto& [sw, sc] : st->second) {
          auto jt = row.find(sw);
          if (jt == row.end())
            row.emplace(sw, f * sc);
          else {
            jt->second += f * sc;
            if (jt->second.is_zero()) row.erase(jt);
          }
        }
        changed = true;
        break;
      }
    }
  };
  for (auto& row : rows) {
    reduce_row(row);
    if (row.empty()) continue;
    auto pit = std::prev(row.end());  // largest word
    WWord pivot = pit->first;
    Scalar lead = pit->second;
    row.erase(pit);
    std::map<WWord, Scalar> repl;
    for (auto& [sw, sc] : row) repl.emplace(sw, -(sc / lead));
    // substitute the new pivot into previously solved entries
    for (auto& [pv, rp] : solved) {
      auto jt = rp.find(pivot);
      if (jt == rp.end()) continue;
      Scalar f = jt->second;
      rp.erase(jt);
      for (auto& [sw, sc] : repl) {
        auto kt = rp.find(sw);
        if (kt == rp.end())
          rp.emplace(sw, f * sc);
        else {
          kt->second += f * sc;
          if (kt->second.is_zero()) rp.erase(kt);
        }
      }
    }
    solved.emplace(std::move(pivot), std::move(repl));
  }
  for (auto& [pivot, repl] : solved) {
    std::vector<std::pair<Scalar, WWord>> out;
    for (auto& [sw, sc] : repl) out.emplace_back(sc, sw);
    table.emplace(pivot, std::move(out));
  }
}

FormElement WedgeAlgebra::apply_projection(const FormElement& f) {
  FormElement out{ctx_, mode_, {}};
  for (auto& [w, c] : f.terms) {
    build_projection(static_cast<int>(w.size()));
    auto& table = proj_[static_cast<int>(w.size())];
    auto it = table.find(w);
    if (it == table.end()) {
      out.add(w, c);
    } else {
      for (auto& [sc, sw] : it->second) out.add(sw, c * sc);
    }
  }
  return out;
}

FormElement WedgeAlgebra::normalize(const FormElement& f) {
  FormElement out{ctx_, mode_, {}};
  for (auto& [w, c] : f.terms) {
    for (auto& [sw, sc] : word_normal_form(w)) out.add(sw, reduce(c) * sc);
  }
  if (mode_ == WedgeMode::Star) out = apply_projection(out);
  return out;
}

FormElement WedgeAlgebra::normalize_alt(const FormElement& f) {
  FormElement out{ctx_, mode_, {}};
  for (auto& [w, c] : f.terms) {
    auto nf = word_nf_strategy(w, true, memo_alt_);
    for (auto& [sw, sc] : nf) out.add(sw, reduce(c) * sc);
  }
  if (mode_ == WedgeMode::Star) out = apply_projection(out);
  return out;
}

namespace {

// the degree-1 relation: H+ expansion plus H- expansion
FormElement relation_one_form(const CtxPtr& ctx, int n, WedgeMode mode) {
  FormElement v{ctx, mode, {}};
  for (int i = 1; i <= n; ++i) {
    v.add({zs(i)}, NCPoly::letter(ctx, z(i)));
    v.add({z(i)}, NCPoly::letter(ctx, zs(i)) * qpow(ctx, -2 * i));
  }
  return v;
}

std::vector<WWord> normal_wwords(int n, int length) {
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  std::function<void(int)> gen = [&](int start) {
    subsets.push_back(cur);
    for (int i = start; i <= n; ++i) {
      cur.push_back(i);
      gen(i + 1);
      cur.pop_back();
    }
  };
  gen(1);
  std::vector<WWord> out;
  for (auto& J : subsets)
    for (auto& K : subsets) {
      if (static_cast<int>(J.size() + K.size()) != length) continue;
      WWord w;
      for (int j : J) w.push_back(z(j));
      for (int k : K) w.push_back(zs(k));
      out.push_back(std::move(w));
    }
  return out;
}

std::vector<Word> sphere_words_upto(const CtxPtr& ctx, int n, int maxlen) {
  // normal sphere words: ascending z* block, ascending z block, not both
  // containing the top index
  std::vector<std::vector<int>> multis{{}};
  std::vector<Word> out;
  std::function<void(std::vector<int>&, int, int)> gen =
      [&](std::vector<int>& acc, int start, int room) {
        if (room == 0) return;
        for (int i = start; i <= n; ++i) {
          acc.push_back(i);
          multis.push_back(acc);
          gen(acc, i, room - 1);
          acc.pop_back();
        }
      };
  std::vector<int> acc;
  gen(acc, 1, maxlen);
  for (auto& sblock : multis) {
    for (auto& zblock : multis) {
      if (static_cast<int>(sblock.size() + zblock.size()) > maxlen) continue;
      bool top_both = !sblock.empty() && !zblock.empty() &&
                      sblock.back() == n && zblock.back() == n;
      if (top_both) continue;
      Word w;
      for (int i : sblock) w.push_back(zs(i));
      for (int i : zblock) w.push_back(z(i));
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace

void WedgeAlgebra::extend_relation_space(int degree, int ubound) {
  auto& rs = rel_[degree];
  if (rs.ubound >= ubound) return;
  FormElement v = relation_one_form(ctx_, n_, mode_);
  std::vector<FormElement> gens;
  for (int alen = 0; alen <= degree - 1; ++alen) {
    for (auto& A : normal_wwords(n_, alen)) {
      for (auto& B : normal_wwords(n_, degree - 1 - alen)) {
        FormElement g =
            wedge(wedge(form(A, NCPoly::one(ctx_)), v), form(B, NCPoly::one(ctx_)));
        if (!g.terms.empty()) gens.push_back(std::move(g));
      }
    }
  }
  auto reduce_row = [&](std::map<Coord, Scalar>& row) {
    while (!row.empty()) {
      auto lead = std::prev(row.end());
      auto pit = rs.echelon.find(lead->first);
      if (pit == rs.echelon.end()) return;
      Scalar f = lead->second;
      row.erase(lead);
      for (auto& [co, sc] : pit->second) {
        auto jt = row.find(co);
        if (jt == row.end())
          row.emplace(co, f * sc);
        else {
          jt->second += f * sc;
          if (jt->second.is_zero()) row.erase(jt);
        }
      }
    }
  };
  auto words = sphere_words_upto(ctx_, n_, ubound);
  for (auto& u : words) {
    if (static_cast<int>(u.size()) <= rs.ubound) continue;  // already added
    NCPoly up = NCPoly::word(ctx_, u, Scalar(ctx_, 1L));
    for (auto& g : gens) {
      std::map<Coord, Scalar> row;
      for (auto& [w, c] : g.terms) {
        NCPoly pc = up * c;
        for (auto& [cw, cc] : pc.terms()) row[{w, cw}] = cc;
      }
      reduce_row(row);
      if (row.empty()) continue;
      auto lead = std::prev(row.end());
      Coord pivot = lead->first;
      Scalar leadval = lead->second;
      row.erase(lead);
      std::map<Coord, Scalar> entry;
      for (auto& [co, sc] : row) entry.emplace(co, -(sc / leadval));
      rs.echelon.emplace(std::move(pivot), std::move(entry));
    }
  }
  rs.ubound = ubound;
}

bool WedgeAlgebra::relation_member(const FormElement& f) {
  if (f.terms.empty()) return true;
  int degree = static_cast<int>(f.terms.begin()->first.size());
  int maxlen = 0;
  std::map<Coord, Scalar> row;
  for (auto& [w, c] : f.terms) {
    NCPoly cr = reduce(c);
    for (auto& [cw, cc] : cr.terms()) {
      maxlen = std::max(maxlen, static_cast<int>(cw.size()));
      row[{w, cw}] = cc;
    }
  }
  extend_relation_space(degree, maxlen + 2);
  auto& rs = rel_[degree];
  while (!row.empty()) {
    auto lead = std::prev(row.end());
    auto pit = rs.echelon.find(lead->first);
    if (pit == rs.echelon.end()) return false;
    Scalar fval = lead->second;
    row.erase(lead);
    for (auto& [co, sc] : pit->second) {
      auto jt = row.find(co);
      if (jt == row.end())
        row.emplace(co, fval * sc);
      else {
        jt->second += fval * sc;
        if (jt->second.is_zero()) row.erase(jt);
      }
    }
  }
  return true;
}

FormElement WedgeAlgebra::wedge(const FormElement& a, const FormElement& b) {
  FormElement out{ctx_, mode_, {}};
  for (auto& [w, p] : a.terms) {
    for (auto& [v, r] : b.terms) {
      auto pulled = pull_through(w, r);
      for (auto& [pw, pc] : pulled) {
        WWord nw = pw;
        nw.insert(nw.end(), v.begin(), v.end());
        out.add(nw, p * pc);
      }
    }
  }
  return normalize(out);
}

FormElement WedgeAlgebra::d(const FormElement& a) {
  FormElement out{ctx_, mode_, {}};
  if (mode_ == WedgeMode::Universal) {
    for (auto& [w, p] : a.terms) {
      OneForm dp = differential(base_, p);
      for (auto& [dl, r] : dp.comps()) {
        WWord nw{dl};
        nw.insert(nw.end(), w.begin(), w.end());
        out.add(nw, r);
      }
    }
    return normalize(out);
  }
  // graded commutator with H
  FormElement h = h_form();
  for (auto& [w, p] : a.terms) {
    FormElement t = form(w, p);
    FormElement left = wedge(h, t);
    FormElement right = wedge(t, h);
    Scalar sign(ctx_, (w.size() % 2 == 0) ? -1L : 1L);
    out = out + left + right * sign;
  }
  return normalize(out);
}

bool WedgeAlgebra::is_zero_form(const FormElement& f) {
  FormElement nf = normalize(f);
  if (nf.terms.empty()) return true;
  std::map<int, FormElement> parts;
  for (auto& [w, c] : nf.terms)
    parts.try_emplace(static_cast<int>(w.size()), FormElement{ctx_, mode_, {}})
        .first->second.add(w, c);
  for (auto& [deg, part] : parts) {
    if (deg == 0) {
      if (!part.is_zero()) return false;
    } else if (deg == 1) {
      OneForm omega(ctx_, n_);
      for (auto& [w, c] : part.terms) omega.add(w[0], c);
      if (!qsphere::is_zero_form(base_, omega)) return false;
    } else {
      if (!relation_member(part)) return false;
    }
  }
  return true;
}

bool WedgeAlgebra::equal(const FormElement& a, const FormElement& b) {
  return is_zero_form(a - b);
}

Report WedgeAlgebra::verify_rules() {
  Report rep;
  auto record = [&](const std::string& id, const std::string& anchor,
                    const FormElement& residue) {
    bool ok = is_zero_form(residue);
    rep.checks.push_back({id, anchor, ok, ok ? "" : normalize(residue).str(), 0.0});
  };
  Scalar q1 = Scalar::q(ctx_), Q = big_q(ctx_);
  auto Rcm = build_derived(RKind::Rcm, ctx_, n_);
  auto Rlm = build_derived(RKind::Rlm, ctx_, n_);

  for (int k = 1; k <= n_; ++k)
    for (int l = 1; l <= n_; ++l) {
      FormElement r1 = form({z(k), z(l)}, NCPoly::one(ctx_));
      for (auto& [o, v] : R_.column(k, l))
        r1.add({z(o.first), z(o.second)}, NCPoly::scalar(q1 * v));
      record("rule.zz." + std::to_string(k) + std::to_string(l),
             "dz_k^dz_l + q R^{st}_{kl} dz_s^dz_t = 0", r1);

      FormElement r2 = form({zs(k), zs(l)}, NCPoly::one(ctx_));
      for (auto& [o, v] : Rcm.column(k, l))
        r2.add({zs(o.first), zs(o.second)}, NCPoly::scalar(Scalar::q(ctx_, -1) * v));
      record("rule.ss." + std::to_string(k) + std::to_string(l),
             "dzs_k^dzs_l + q^-1 Rcm^{st}_{kl} dzs_s^dzs_t = 0", r2);

      // the mixed row, with dH replaced per mode
      FormElement r3{ctx_, mode_, {}};
      Scalar qm3 = qpow(ctx_, -3);
      for (auto& [o, v] : Rlm.column(k, l)) {
        auto [s, t] = o;
        r3.add({zs(s), z(t)}, NCPoly::scalar(qm3 * v));
        // Q^2 zs_s (dz_t ^ H): use the H expansion through the second slot
        for (int j = 1; j <= n_; ++j) {
          OneForm step = push_letter(base_, z(t), z(j));
          for (auto& [dl, p] : step.comps())
            r3.add({dl, zs(j)},
                   NCPoly::letter(ctx_, zs(s)) * p *
                       (-(qm3 * v * Q * Q * q1 * Q.inv())));
        }
      }
      r3.add({z(k), zs(l)}, NCPoly::one(ctx_));
      for (int j = 1; j <= n_; ++j) {
        OneForm step = push_letter(base_, zs(l), z(j));
        for (auto& [dl, p] : step.comps())
          r3.add({dl, zs(j)},
                 NCPoly::letter(ctx_, z(k)) * p * (-(Q * Q * q1 * Q.inv())));
      }
      if (mode_ == WedgeMode::Universal) {
        // + Q^2(Q^2+1) z_k zs_l  d H with d H = q Q^{-1} sum q^{-2j} dzs_j ^ dz_j
        NCPoly zz = reduce(NCPoly::word(
            ctx_, {z(k), zs(l)},
            Q * Q * (Q * Q + Scalar(ctx_, 1L)) * q1 * Q.inv()));
        for (int j = 1; j <= n_; ++j)
          r3.add({zs(j), z(j)}, zz * qpow(ctx_, -2 * j));
      }
      record("rule.mixed." + std::to_string(k) + std::to_string(l),
             "mixed reorder row with the mode dH value", r3);
    }

  // trace relation: sum dz_i^dzs_i + sum q^{-2i} dzs_i^dz_i = 0
  FormElement dh{ctx_, mode_, {}};
  for (int i = 1; i <= n_; ++i) {
    dh.add({z(i), zs(i)}, NCPoly::one(ctx_));
    dh.add({zs(i), z(i)}, NCPoly::scalar(qpow(ctx_, -2 * i)));
  }
  record("rule.dh", "sum dz_i^dzs_i + sum q^-2i dzs_i^dz_i = 0", dh);

  FormElement h = h_form();
  if (mode_ == WedgeMode::Star) {
    record("rule.dH", "dH = 0", d(h));
    // the vanishing trace quasi-commutes into the quotient: T x = x-multiple
    FormElement T{ctx_, mode_, {}};
    for (int i = 1; i <= n_; ++i) T.add({z(i), zs(i)}, NCPoly::one(ctx_));
    for (int g = 1; g <= n_; ++g) {
      for (auto gl : {z(g), zs(g)}) {
        FormElement tx{ctx_, mode_, {}};
        for (auto& [w, c] : T.terms) {
          auto pulled = pull_through(w, NCPoly::letter(ctx_, gl));
          for (auto& [pw, pc] : pulled) tx.add(pw, c * pc);
        }
        record("rule.Tx." + word_str({gl}), "trace two-form times generator = 0", tx);
      }
    }
  } else {
    record("rule.hh", "dH = H^H", d(h) - wedge(h, h));
  }
  return rep;
}

// ---------------------------------------------------------------------------

TopDegreeReport top_degree_scan(WedgeAlgebra& alg) {
  TopDegreeReport out;
  int n = alg.n();
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  std::function<void(int)> gen = [&](int start) {
    subsets.push_back(cur);
    for (int i = start; i <= n; ++i) {
      cur.push_back(i);
      gen(i + 1);
      cur.pop_back();
    }
  };
  gen(1);

  std::map<int, std::vector<WWord>> survivors_by_degree;
  for (auto& J : subsets) {
    for (auto& K : subsets) {
      int deg = static_cast<int>(J.size() + K.size());
      if (deg < 2 * n - 2) continue;
      WWord w;
      for (int j : J) w.push_back(z(j));
      for (int k : K) w.push_back(zs(k));
      FormElement nf = alg.normalize(alg.form(w, NCPoly::one(alg.ctx())));
      bool zero = nf.is_zero();
      if (deg >= 2 * n - 1) {
        out.checks.checks.push_back(
            {"top.vanish." + wword_str(w),
             "forms of degree >= 2N-1 vanish", zero, zero ? "" : nf.str(), 0.0});
      } else if (!zero) {
        survivors_by_degree[deg].push_back(w);
      }
    }
  }
  out.degree = 2 * n - 2;
  out.survivors = survivors_by_degree[2 * n - 2];
  if (n >= 3) {
    // survivors must be left scalar multiples of a single generator
    auto& sv = out.survivors;
    bool ok = !sv.empty();
    for (size_t i = 1; i < sv.size() && ok; ++i) {
      FormElement a = alg.normalize(alg.form(sv[0], NCPoly::one(alg.ctx())));
      FormElement b = alg.normalize(alg.form(sv[i], NCPoly::one(alg.ctx())));
      // find scalar c with a = c b
      std::optional<Scalar> ratio;
      for (auto& [w, cb] : b.terms) {
        auto it = a.terms.find(w);
        if (it == a.terms.end()) continue;
        for (auto& [cw, cc] : cb.terms()) {
          auto jt = it->second.terms().find(cw);
          if (jt == it->second.terms().end()) continue;
          ratio = jt->second / cc;
          break;
        }
        if (ratio) break;
      }
      ok = ratio.has_value() && alg.equal(a, b * (*ratio));
    }
    out.checks.checks.push_back({"top.proportional",
                                 "degree 2N-2 generators are scalar multiples of "
                                 "one another",
                                 ok, "", 0.0});
  }
  return out;
}

bool index_set_lemma_check(WedgeAlgebra& alg, const WWord& theta) {
  return alg.is_zero_form(alg.form(theta, NCPoly::one(alg.ctx())));
}

}  // namespace qsphere
