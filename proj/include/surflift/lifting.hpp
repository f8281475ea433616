#pragma once

// Gluing, lifting and gluifting of flags, with obstruction classes computed as
// relator defects in coker(d1), and the step-by-step lifting algorithms for wound
// Kummer and Kummer flags.
//
// Compatibility of flags is matrix equality: a lift F of f satisfies
// reduce(F, r) == f entrywise, and "compatible with ♯" means
// quotient_by_first(F) == ♯ (resp. truncate(F) == ♭).

#include <optional>
#include <string>
#include <vector>

#include "surflift/cohomology.hpp"
#include "surflift/flags.hpp"

namespace surflift {

/// Outcome of an obstruction-theoretic construction: either the constructed flag or
/// a 2-cochain in `coefficients` whose class is the (nonzero) obstruction.
struct ObstructedFlag {
  std::optional<Flag> flag;
  GModule coefficients;
  Vec obstruction;  // the relator defect of the canonical candidate (zero class iff solvable)
  bool ok() const { return flag.has_value(); }
};

/// Glues E = V_d (sub L_1) and F (sub V_{d/1}, quotient L_{d+1}) along their common
/// V_{d/1} = quotient_by_first(E) = truncate(F). Coefficients: Hom(L_{d+1}, L_1).
ObstructedFlag glue(const Flag& e, const Flag& f);

/// Lifts a flag mod p^r to mod p^{r+1} with the prescribed diagonal
/// (characters[s][i] = χ_{i+1}(gen s) mod p^{r+1}). Coefficients: strictly upper
/// triangular endomorphisms mod p with the adjoint action.
ObstructedFlag lift_rep(const Flag& f, const std::vector<Vec>& characters);
/// Same with each character lifted by its least nonnegative residue.
ObstructedFlag lift_rep(const Flag& f);
GModule strictly_upper_adjoint(const Flag& f);

/// Lifts the gluing f (n×n mod p^r) to mod p^{r+1}, given lifts ♭ of truncate(f) and
/// ♯ of quotient_by_first(f) that agree on their common (n-2)-dimensional middle.
/// Coefficients: Hom(L_n, L_1) mod p.
ObstructedFlag gluift(const Flag& f, const Flag& flat, const Flag& sharp);

struct AdjustmentRecord {
  int dim;
  Vec c1;               // obstruction before adjustment (mod p 2-cochain)
  Vec epsilon;          // solve_cup output
  Vec c1_adjusted_class;  // class of the obstruction after adjustment; zero on success
};

struct LiftTrace {
  int gluift_calls = 0;
  std::vector<AdjustmentRecord> adjustments;
  std::vector<std::string> branches;  // lift_kummer branch taken at each level, e.g. "d=4:(a)"
};

/// Lift of a wound Kummer flag mod p^r to a wound Kummer flag mod p^{r+1} whose
/// truncation is `flat` when given.
Flag lift_wound_kummer(const Flag& f, const std::optional<Flag>& flat = std::nullopt, LiftTrace* trace = nullptr);

enum class KummerMode { ExtendQuotient, ExtendTruncation };

/// Kummer lift of a Kummer flag mod p^r. With ExtendQuotient the result satisfies
/// quotient_by_first(result) == data; with ExtendTruncation, truncate(result) == data.
Flag lift_kummer(const Flag& f, KummerMode mode = KummerMode::ExtendQuotient,
                 const std::optional<Flag>& data = std::nullopt, LiftTrace* trace = nullptr,
                 const KummerOptions& opts = {});

/// Baer sum (sign = +1) or difference (sign = -1) of two extensions with the same sub
/// and quotient modules; the result is in standard block form.
ExtensionData baer(const ExtensionData& a, const ExtensionData& b, int sign);
/// The standard-form extension with the given class in Z^1(Hom(C, A)).
ExtensionData extension_from_class(const GModule& sub, const GModule& quotient, std::span<const Residue> cls);

/// Given a Kummer flag f mod p^r (r >= 1) and a 1-cocycle c of V = f mod p, returns a
/// 1-cocycle of V over Z/p^r whose reduction is c.
Vec lift_h1_class(const Flag& f, std::span<const Residue> c, LiftTrace* trace = nullptr);

}  // namespace surflift
