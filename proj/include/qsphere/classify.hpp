#pragma once

#include "qsphere/calculus.hpp"
#include "qsphere/report.hpp"

namespace qsphere {

/// One equation of the coefficient system, expressed over a context whose
/// symbols are the 20 unknowns plus their conjugates (and lam when factored).
struct Equation {
  std::string id;
  std::string display;              // rendered form of `expr` = 0
  Scalar expr;
  std::optional<Scalar> verbatim;   // printed variant, when it differs
  std::string note;                 // transcription remarks
};

struct EquationSystem {
  CtxPtr ctx;
  int n = 2;
  bool factored = false;
  std::vector<Equation> equations;
};

EquationSystem build_free_system(int n);
EquationSystem build_factored_system(int n);

/// The coefficient bindings a1..f4 read off a family table.
std::map<std::string, Scalar> table_assignment(const CalculusSpec& spec);

/// Substitutes the table into every equation and reports residues. When an
/// equation carries a printed variant, both are evaluated; the check passes
/// on the corrected form and the verbatim residue is noted.
Report check_assignment(const EquationSystem& sys, const CalculusSpec& spec);

/// Membership in the documented case splits:
///   d3 = d4 = 0  iff  f3 = f4 = 0       (free system)
///   b1 = 0       iff  b2 = 0            (free system, star-dependent)
///   a1 = q lam^{-1}  or  a1 = q^{-1}    (factored)
///   a2 = q^{-1} lam  or  a2 = q         (factored)
Report check_case_splits(const CalculusSpec& spec);

struct RedundancyWitness {
  std::string dependent_equation;
  int rank_all = 0;
  int rank_without = 0;
  std::string probe;  // the random point used
};

/// Numeric (exact rational) first-order redundancy certificate: an equation
/// whose gradient lies in the span of the others' gradients at a random
/// point of the generic two-parameter solution family.
std::optional<RedundancyWitness> redundancy_witness(const EquationSystem& sys,
                                                    const CalculusSpec& generic,
                                                    uint64_t seed);

}  // namespace qsphere
