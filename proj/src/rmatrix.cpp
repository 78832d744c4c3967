#include "qsphere/rmatrix.hpp"

#include <stdexcept>

namespace qsphere {

std::string rkind_name(RKind k) {
  switch (k) {
    case RKind::R: return "R";
    case RKind::Rinv: return "Rinv";
    case RKind::Rc: return "Rc";
    case RKind::Rl: return "Rl";
    case RKind::Rr: return "Rr";
    case RKind::Rcm: return "Rcm";
    case RKind::Rlm: return "Rlm";
    case RKind::Rrm: return "Rrm";
  }
  return "?";
}

void SparseN2Matrix::set(int i, int j, int k, int l, const Scalar& v) {
  if (v.is_zero()) {
    auto it = rows_.find({i, j});
    if (it != rows_.end()) {
      it->second.erase({k, l});
      if (it->second.empty()) rows_.erase(it);
    }
    return;
  }
  rows_[{i, j}][{k, l}] = v;
}

Scalar SparseN2Matrix::entry(int i, int j, int k, int l) const {
  auto it = rows_.find({i, j});
  if (it == rows_.end()) return Scalar(ctx_, 0L);
  auto jt = it->second.find({k, l});
  if (jt == it->second.end()) return Scalar(ctx_, 0L);
  return jt->second;
}

size_t SparseN2Matrix::entry_count() const {
  size_t c = 0;
  for (auto& [o, row] : rows_) c += row.size();
  return c;
}

std::vector<std::pair<IdxPair, Scalar>> SparseN2Matrix::column(int k, int l) const {
  std::vector<std::pair<IdxPair, Scalar>> out;
  for (auto& [o, row] : rows_) {
    auto it = row.find({k, l});
    if (it != row.end()) out.emplace_back(o, it->second);
  }
  return out;
}

SparseN2Matrix compose(const SparseN2Matrix& m1, const SparseN2Matrix& m2) {
  if (m1.n_ != m2.n_) throw ScalarError("matrix dimension mismatch");
  SparseN2Matrix out(m1.ctx_, m1.n_);
  for (auto& [o, row1] : m1.rows_) {
    for (auto& [mid, v1] : row1) {
      auto it = m2.rows_.find(mid);
      if (it == m2.rows_.end()) continue;
      for (auto& [in, v2] : it->second) {
        Scalar cur = out.entry(o.first, o.second, in.first, in.second) + v1 * v2;
        out.set(o.first, o.second, in.first, in.second, cur);
      }
    }
  }
  return out;
}

SparseN2Matrix operator+(const SparseN2Matrix& a, const SparseN2Matrix& b) {
  SparseN2Matrix out = a;
  for (auto& [o, row] : b.rows_)
    for (auto& [in, v] : row)
      out.set(o.first, o.second, in.first, in.second,
              out.entry(o.first, o.second, in.first, in.second) + v);
  return out;
}

SparseN2Matrix operator-(const SparseN2Matrix& a, const SparseN2Matrix& b) {
  return a + b.scaled(Scalar(a.ctx(), -1L));
}

SparseN2Matrix SparseN2Matrix::scaled(const Scalar& s) const {
  SparseN2Matrix out(ctx_, n_);
  if (s.is_zero()) return out;
  for (auto& [o, row] : rows_)
    for (auto& [in, v] : row) out.rows_[o][in] = v * s;
  return out;
}

bool SparseN2Matrix::operator==(const SparseN2Matrix& o) const {
  if (n_ != o.n_) return false;
  SparseN2Matrix d = *this - o;
  return d.rows_.empty();
}

SparseN2Matrix identity_matrix(CtxPtr ctx, int n) {
  SparseN2Matrix m(ctx, n);
  Scalar one(ctx, 1L);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) m.set(i, j, i, j, one);
  return m;
}

bool identity_check(const SparseN2Matrix& m) {
  return m == identity_matrix(m.ctx(), m.n());
}

SparseN2Matrix build_R(CtxPtr ctx, int n) {
  SparseN2Matrix m(ctx, n);
  Scalar one(ctx, 1L), q1 = Scalar::q(ctx), Q = big_q(ctx);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) {
        m.set(i, i, i, i, q1);
      } else {
        m.set(i, j, j, i, one);          // i = l != k = j
        if (i < j) m.set(i, j, i, j, Q); // i = k < j = l
      }
    }
  return m;
}

SparseN2Matrix build_Rinv(CtxPtr ctx, int n) {
  SparseN2Matrix m(ctx, n);
  Scalar one(ctx, 1L), qm1 = Scalar::q(ctx, -1), Q = big_q(ctx);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) {
        m.set(i, i, i, i, qm1);
      } else {
        m.set(i, j, j, i, one);
        if (i > j) m.set(i, j, i, j, -Q);  // i = k > j = l
      }
    }
  return m;
}

SparseN2Matrix build_derived(RKind kind, CtxPtr ctx, int n) {
  switch (kind) {
    case RKind::R: return build_R(ctx, n);
    case RKind::Rinv: return build_Rinv(ctx, n);
    default: break;
  }
  bool from_inverse = (kind == RKind::Rcm || kind == RKind::Rlm || kind == RKind::Rrm);
  SparseN2Matrix base = from_inverse ? build_Rinv(ctx, n) : build_R(ctx, n);
  SparseN2Matrix out(ctx, n);
  for (auto& [o, row] : base.rows()) {
    auto [a, b] = o;  // base entry base^{ab}_{cd}
    for (auto& [in, v] : row) {
      auto [c, d] = in;
      switch (kind) {
        case RKind::Rc:
        case RKind::Rcm:
          // derived^{ij}_{kl} = base^{lk}_{ji} : i=d, j=c, k=b, l=a
          out.set(d, c, b, a, v);
          break;
        case RKind::Rl:
        case RKind::Rlm:
          // derived^{ij}_{kl} = q^{2l-2i} base^{jl}_{ik} : j=a, l=b, i=c, k=d
          out.set(c, a, d, b, v * qpow(ctx, 2 * b - 2 * c));
          break;
        case RKind::Rr:
        case RKind::Rrm:
          // derived^{ij}_{kl} = base^{ki}_{lj} : k=a, i=b, l=c, j=d
          out.set(b, d, a, c, v);
          break;
        default:
          throw ScalarError("bad derived kind");
      }
    }
  }
  return out;
}

bool braid_check(const SparseN2Matrix& m) {
  int n = m.n();
  CtxPtr ctx = m.ctx();
  // entries on the triple index space, keyed by ((a,b,c),(d,e,f))
  using Trip = std::array<int, 3>;
  auto lift12 = [&](const SparseN2Matrix& x) {
    std::map<std::pair<Trip, Trip>, Scalar> out;
    for (auto& [o, row] : x.rows())
      for (auto& [in, v] : row)
        for (int c = 1; c <= n; ++c)
          out[{{o.first, o.second, c}, {in.first, in.second, c}}] = v;
    return out;
  };
  auto lift23 = [&](const SparseN2Matrix& x) {
    std::map<std::pair<Trip, Trip>, Scalar> out;
    for (auto& [o, row] : x.rows())
      for (auto& [in, v] : row)
        for (int a = 1; a <= n; ++a)
          out[{{a, o.first, o.second}, {a, in.first, in.second}}] = v;
    return out;
  };
  using TMat = std::map<std::pair<Trip, Trip>, Scalar>;
  auto mulT = [&](const TMat& x, const TMat& y) {
    TMat out;
    std::map<Trip, std::vector<std::pair<Trip, Scalar>>> yrows;
    for (auto& [k, v] : y) yrows[k.first].emplace_back(k.second, v);
    for (auto& [k, v] : x) {
      auto it = yrows.find(k.second);
      if (it == yrows.end()) continue;
      for (auto& [in, v2] : it->second) {
        auto key = std::make_pair(k.first, in);
        auto jt = out.find(key);
        if (jt == out.end())
          out.emplace(key, v * v2);
        else {
          jt->second += v * v2;
          if (jt->second.is_zero()) out.erase(jt);
        }
      }
    }
    return out;
  };
  TMat a = lift12(m), b = lift23(m);
  TMat lhs = mulT(mulT(a, b), a);
  TMat rhs = mulT(mulT(b, a), b);
  if (lhs.size() != rhs.size()) return false;
  for (auto& [k, v] : lhs) {
    auto it = rhs.find(k);
    if (it == rhs.end() || !(it->second == v)) return false;
  }
  return true;
}

bool hecke_check(CtxPtr ctx, int n) {
  SparseN2Matrix R = build_R(ctx, n), Rm = build_Rinv(ctx, n);
  SparseN2Matrix I = identity_matrix(ctx, n);
  if (!(compose(R, Rm) == I) || !(compose(Rm, R) == I)) return false;
  if (!((R - Rm) == I.scaled(big_q(ctx)))) return false;
  // (R - q)(R + q^{-1}) = 0
  SparseN2Matrix lhs = compose(R - I.scaled(Scalar::q(ctx)),
                               R + I.scaled(Scalar::q(ctx, -1)));
  return lhs.rows().empty();
}

RKind inverse_kind(RKind kind) {
  switch (kind) {
    case RKind::R: return RKind::Rinv;
    case RKind::Rinv: return RKind::R;
    case RKind::Rc: return RKind::Rcm;
    case RKind::Rcm: return RKind::Rc;
    case RKind::Rl: return RKind::Rrm;
    case RKind::Rrm: return RKind::Rl;
    case RKind::Rr: return RKind::Rlm;
    case RKind::Rlm: return RKind::Rr;
  }
  throw ScalarError("bad kind");
}

}  // namespace qsphere
