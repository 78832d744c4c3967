#pragma once

#include "qsphere/calculus.hpp"

namespace qsphere {

enum class WedgeMode { Universal, Star };

using WWord = std::vector<Letter>;  // word of one-form basis letters

/// Graded element: sum of left NCPoly coefficients times wedge words.
/// Normal words put all dz letters before all dz* letters, each block
/// strictly increasing.
struct FormElement {
  CtxPtr ctx;
  WedgeMode mode = WedgeMode::Star;
  std::map<WWord, NCPoly> terms;

  bool is_zero() const;
  FormElement operator+(const FormElement& o) const;
  FormElement operator-(const FormElement& o) const;
  FormElement operator-() const;
  FormElement operator*(const Scalar& s) const;
  FormElement left_mul(const NCPoly& p) const;
  void add(const WWord& w, const NCPoly& c);
  std::string str() const;
};

/// The wedge calculus over the distinguished inner first-order calculus.
/// Holds the rewrite tables and (in star mode) the per-degree projections
/// coming from the vanishing trace two-form.
class WedgeAlgebra {
 public:
  WedgeAlgebra(CtxPtr ctx, int n, WedgeMode mode);

  const CtxPtr& ctx() const { return ctx_; }
  int n() const { return n_; }
  WedgeMode mode() const { return mode_; }
  const CalculusSpec& first_order() const { return base_; }

  FormElement form(const WWord& w, const NCPoly& coeff) const;
  FormElement zero() const { return FormElement{ctx_, mode_, {}}; }
  FormElement from_one_form(const OneForm& f) const;
  FormElement h_form() const;  // the distinguished one-form H

  FormElement normalize(const FormElement& f);
  FormElement wedge(const FormElement& a, const FormElement& b);
  FormElement d(const FormElement& a);                 // graded differential
  bool is_zero_form(const FormElement& f);
  bool equal(const FormElement& a, const FormElement& b);

  /// Pull an algebra element left through a wedge word with the first-order
  /// rows; returns words of the same length with left coefficients.
  std::map<WWord, NCPoly> pull_through(const WWord& w, const NCPoly& x);

  /// Verifies the derived rewrite rules against their sources: the two
  /// same-kind reorder rows, the mixed row, the trace relation and the
  /// H-squared identity. Returns a report of residues.
  Report verify_rules();

  /// Normal form computed with the alternative redex strategy (rightmost
  /// mixed pair first); used by the confluence smoke tests.
  FormElement normalize_alt(const FormElement& f);

 private:
  friend struct WedgeTestAccess;
  struct Repl {  // replacement of a 2-letter segment
    NCPoly coeff;
    WWord word;
  };
  const std::vector<Repl>& mixed_rule(int a, int b);
  const std::map<WWord, NCPoly>& word_normal_form(const WWord& w);
  std::map<WWord, NCPoly> word_nf_strategy(const WWord& w, bool rightmost,
                                           std::map<WWord, std::map<WWord, NCPoly>>& memo);
  void build_projection(int degree);
  FormElement apply_projection(const FormElement& f);

  // membership in the sub-bimodule generated by the one-form relation,
  // tested against an echelon of left multiples of frame insertions
  using Coord = std::pair<WWord, Word>;
  struct RelSpace {
    int ubound = -1;
    std::map<Coord, std::map<Coord, Scalar>> echelon;
  };
  bool relation_member(const FormElement& f);
  void extend_relation_space(int degree, int ubound);

  CtxPtr ctx_;
  int n_;
  WedgeMode mode_;
  CalculusSpec base_;
  SparseN2Matrix R_, Rr_;
  std::map<std::pair<int, int>, std::vector<Repl>> mixed_;
  std::map<WWord, std::map<WWord, NCPoly>> memo_;
  std::map<WWord, std::map<WWord, NCPoly>> memo_alt_;
  std::map<int, std::map<WWord, std::vector<std::pair<Scalar, WWord>>>> proj_;
  std::map<int, RelSpace> rel_;
};

struct TopDegreeReport {
  Report checks;
  int degree = 0;
  std::vector<WWord> survivors;  // nonzero generator words of that degree
};

/// Enumerates the generator words with strictly increasing index blocks and
/// reduces them: all words of degree >= 2N-1 must vanish; at degree 2N-2
/// (for N >= 3) the survivors must be scalar multiples of one another.
TopDegreeReport top_degree_scan(WedgeAlgebra& alg);

/// True exactly when the word reduces to zero. The hypothesis of the index
/// lemma (J u K = {1..N}, J n K nonempty) forces it.
bool index_set_lemma_check(WedgeAlgebra& alg, const WWord& theta);

std::string wword_str(const WWord& w);

}  // namespace qsphere
