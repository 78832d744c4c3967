#pragma once

#include <optional>

#include "qsphere/ncpoly.hpp"
#include "qsphere/report.hpp"
#include "qsphere/rmatrix.hpp"

namespace qsphere {

/// Relation  mu H+ + nu H- = 0  cutting the free module down; (0,1) encodes
/// the H- = 0 case ("lambda = infinity").
struct FactorRelation {
  Scalar mu, nu;
};

enum class Family {
  GammaAlphaTau,   // free, parameters alpha, tau
  GammaPrime,      // free, parameters alpha (possibly complex), omega
  Gamma2Prime,     // free, parameters omega, psi
  Gamma3Prime,     // free, parameters rho, tau
  GTilde,          // factored, parameter lam
  GTildePrime,     // factored, parameter lam
  GTilde2Prime,    // factored, parameter lam in C u {0, infinity}
  GTildeCirc,      // factored, parameter lam, not a *-calculus
  GTilde2Circ      // factored, parameter lam, not a *-calculus
};

std::string family_name(Family f);

/// Bimodule rewrite table: the four rows
///   dz_k  z_l  = a1 Rinv^{st}_{kl} z_s dz_t  + b1 z_k dz_l  + c1 z_k z_l H+ + e1 z_k z_l H-
///   dz*_k z*_l = a2 Rc^{st}_{kl}  z*_s dz*_t + b2 z*_k dz*_l+ c2 ...  H+ + e2 ... H-
///   dz_k  z*_l = a3 Rlm^{st}_{kl} z*_s dz_t  + b3 z_k dz*_l + (c3 z_k z*_l + d3 q^{2k} delta_{kl}) H+ + (e3 .. + f3 q^{2k} delta_{kl}) H-
///   dz*_k z_l  = a4 Rr^{st}_{kl}  z_s dz*_t  + b4 z*_k dz_l + (c4 z*_k z_l + d4 delta_{kl}) H+ + (e4 .. + f4 delta_{kl}) H-
struct CalculusSpec {
  CtxPtr ctx;
  int n = 2;
  Scalar a1, a2, a3, a4;
  Scalar b1, b2, b3, b4;
  Scalar c1, c2, c3, c4;
  Scalar d3, d4;
  Scalar e1, e2, e3, e4;
  Scalar f3, f4;
  std::optional<FactorRelation> factor;
  bool star_flag = false;
  Family family = Family::GTilde;
  std::map<std::string, Scalar> params;

  // row contraction matrices (Rinv, Rc, Rlm, Rr for this n)
  SparseN2Matrix row1m, row2m, row3m, row4m;
  void build_matrices();

  bool same_table(const CalculusSpec& o) const;  // literal coefficient equality
};

struct FamilyError : ScalarError {
  using ScalarError::ScalarError;
};

struct FamilyOptions {
  /// Keep the delta-term weights of rows 3/4 exactly as printed in the
  /// source tables, including the two rows that fail the well-definedness
  /// checks; used to document the corrections.
  bool as_displayed = false;
};

/// Builds a family table over `ctx` (which must declare the parameter
/// symbols used by the bindings). Throws FamilyError on excluded values.
CalculusSpec make_family(Family f, CtxPtr ctx,
                         const std::map<std::string, Scalar>& params,
                         const FamilyOptions& opts = {});

/// A one-form in left normal form: sum of NCPoly coefficients times the
/// 2N basis differentials. Letter reuse: kind 0 = dz_i, kind 1 = dz*_i.
class OneForm {
 public:
  OneForm() = default;
  OneForm(CtxPtr ctx, int n) : ctx_(std::move(ctx)), n_(n) {}

  const CtxPtr& ctx() const { return ctx_; }
  int n() const { return n_; }
  const std::map<Letter, NCPoly>& comps() const { return comps_; }
  NCPoly comp(Letter l) const;

  void add(Letter l, const NCPoly& coeff);
  OneForm operator+(const OneForm& o) const;
  OneForm operator-(const OneForm& o) const;
  OneForm operator-() const;
  OneForm operator*(const Scalar& s) const;
  OneForm left_mul(const NCPoly& p) const;
  bool syntactically_zero() const;
  std::string str() const;

 private:
  CtxPtr ctx_;
  int n_ = 0;
  std::map<Letter, NCPoly> comps_;
};

OneForm basis_form(CtxPtr ctx, int n, Letter l);          // d(letter)
OneForm h_plus(CtxPtr ctx, int n);                        // sum z_i dz*_i
OneForm h_minus(CtxPtr ctx, int n);                       // sum q^{-2i} z*_i dz_i
OneForm relation_form(const CalculusSpec& spec);          // mu H+ + nu H-

/// dxi . x rewritten into the left module by the spec rows.
OneForm push_letter(const CalculusSpec& spec, Letter dxi, Letter x);
OneForm push_word(const CalculusSpec& spec, Letter dxi, const Word& w);
OneForm push_poly(const CalculusSpec& spec, Letter dxi, const NCPoly& x);
/// omega . x for a general left-form omega.
OneForm form_times(const CalculusSpec& spec, const OneForm& omega, const NCPoly& x);

OneForm differential(const CalculusSpec& spec, const NCPoly& x);

/// Zero test in the (possibly factored) module of one-forms.
bool is_zero_form(const CalculusSpec& spec, const OneForm& omega);
bool forms_equal(const CalculusSpec& spec, const OneForm& a, const OneForm& b);

Report verify_well_defined(const CalculusSpec& spec);
Report verify_star(const CalculusSpec& spec);

// ---------------------------------------------------------------------------
// Quasi-commuting invariant one-forms

struct QuasiRay {
  Scalar mu, nu;                       // the invariant form  mu H+ + nu H-
  std::map<std::string, Scalar> certificate;  // generator name -> C(g)
};

struct QuasiCommutantResult {
  enum class Kind { AllRays, NoRay, Rays, IrreducibleQuadratic } kind;
  std::vector<QuasiRay> rays;
  // common constraint  g2 mu^2 + g1 mu nu + g0 nu^2 = 0 (zero scalars when
  // the constraint is trivial)
  Scalar g2, g1, g0;
  std::string note;
};

QuasiCommutantResult invariant_quasi_commutants(const CalculusSpec& spec);

/// True when no combination  mu H+ + nu H- + d(letter)  quasi-commutes with
/// all generators once the extra letter coefficient is forced nonzero.
bool no_extra_letter_quasi_commutant(const CalculusSpec& spec, Letter extra);

/// Factor a free-family table by a quasi-commuting ray.
CalculusSpec factorize(const CalculusSpec& spec, const Scalar& mu, const Scalar& nu);

/// d(g) = theta g - g theta for all 2N generators (plus length-2 samples).
bool check_inner(const CalculusSpec& spec, const OneForm& theta);

/// Solve  d(z_1) = theta z_1 - z_1 theta  for theta = c * (surviving trace
/// form); returns the scalar c when the full generator check passes.
std::optional<Scalar> derive_inner_scalar(const CalculusSpec& spec);

/// The surviving invariant form of a factored spec (H+ if the relation has
/// nonzero H- part, H- when the relation is H+ = 0).
OneForm surviving_trace_form(const CalculusSpec& spec);

/// Rebuild the spec over another context (by symbol name).
CalculusSpec lift_spec(const CalculusSpec& spec, CtxPtr target);

std::string form_residue_str(const OneForm& f);

}  // namespace qsphere
