#pragma once

// Complete flags 0 = V_0 ⊂ V_1 ⊂ ... ⊂ V_d, stored as upper triangular
// representations: V_i is spanned by the first i basis vectors and the i-th
// graded character is the i-th diagonal entry.
//
// Index conventions: subquotient(f, i, j) is V_j / V_i with 0 <= i < j <= d,
// i.e. the block of rows and columns i..j-1. The splitting index k is 1-based as
// in i(k), 1 <= k <= d.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "surflift/cohomology.hpp"
#include "surflift/surface.hpp"

namespace surflift {

class Flag {
 public:
  explicit Flag(GModule m);
  static Flag from_matrices(Ring ring, int genus, std::vector<Matrix> actions);

  const GModule& module() const { return module_; }
  const Ring& ring() const { return module_.ring(); }
  int dim() const { return module_.rank(); }
  int genus() const { return module_.genus(); }
  int num_generators() const { return module_.num_generators(); }
  const Matrix& action(int gen) const { return module_.action(gen); }
  const std::vector<Matrix>& actions() const { return module_.actions(); }

  /// χ_i(gen) for 1 <= i <= d.
  Residue character(int i, int gen) const { return action(gen)(i - 1, i - 1); }
  bool has_trivial_characters() const;

  friend bool operator==(const Flag& a, const Flag& b) { return a.module_ == b.module_; }
  friend bool operator!=(const Flag& a, const Flag& b) { return !(a == b); }

 private:
  GModule module_;
};

GModule subquotient(const Flag& f, int i, int j);
Flag subflag(const Flag& f, int i, int j);
/// V_{d-1}: drops the last row and column.
Flag truncate(const Flag& f);
/// V_d / V_1: drops the first row and column.
Flag quotient_by_first(const Flag& f);
/// (V_{d+1-i}^∨): inverse transpose conjugated by the antidiagonal permutation.
Flag dual(const Flag& f);
Flag reduce(const Flag& f, int s);

/// The extension 0 → V_{k-1}/V_i → V_k/V_i → L_k → 0 (k 1-based, 0 <= i <= k-1).
ExtensionData step_extension(const Flag& f, int i, int k);

/// i(k) for k = 1..d, stored at index k-1.
struct FlagIndexTable {
  std::vector<int> index;
  int operator()(int k) const { return index[k - 1]; }
};
FlagIndexTable index_table(const Flag& f);
/// Smallest i with step_extension(f, i, k) split.
int splitting_index(const Flag& f, int k);

bool is_wound(const Flag& f);
bool is_wound_kummer(const Flag& f);

/// Lines of F_p^d (given by their normalized spanning vector) stable under every generator.
std::vector<Vec> invariant_lines(const GModule& m);

/// All equivariant splittings L_k → V_k, as vectors v of length k with v_k = 1.
/// std::nullopt when there are more than `bound`.
std::optional<std::vector<Vec>> equivariant_splittings(const Flag& f, int k, std::uint64_t bound);
/// The affine solution set of the splitting equations (particular + H^0 directions).
std::optional<Solution> splitting_solutions(const Flag& f, int k);
/// One equivariant splitting (the solver's particular solution), if any.
std::optional<Vec> canonical_splitting(const Flag& f, int k);
/// The basis change U (identity with column k replaced by v).
Matrix splitting_basis(const Flag& f, int k, std::span<const Residue> v);
/// ∇ / s(L_k): conjugate by splitting_basis and drop row and column k.
Flag quotient_by_splitting(const Flag& f, int k, std::span<const Residue> v);
/// Conjugates every generator: ρ'(s) = U^-1 ρ(s) U.
Flag conjugate(const Flag& f, const Matrix& u);

/// How the split-line condition (quotients by s(L_k) are Kummer) quantifies over
/// the equivariant splittings s of a split step.
enum class SplittingQuantifier {
  Every,  // every quotient by s(L_k) must be Kummer
  Some,   // some quotient by s(L_k) must be Kummer
};

struct KummerOptions {
  std::uint64_t splitting_bound = 4096;
  SplittingQuantifier splittings = SplittingQuantifier::Some;
  /// Check the index condition in its sub-extension form: every 0 → V_{j/i} → V_{k/i} →
  /// V_{k/j} → 0 that splits mod p splits mod p^r. With false, only i_r(k) = i_1(k).
  bool all_subextensions = true;
  /// Accept graded pieces equal to the Teichmüller lift of their reduction
  /// instead of requiring them to be trivial.
  bool relaxed_characters = false;
};

struct KummerVerdict {
  enum class Status { Kummer, NotKummer, Inconclusive };
  Status status;
  std::string violation;  // empty for Kummer
  explicit operator bool() const { return status == Status::Kummer; }
};

KummerVerdict is_kummer(const Flag& f, const KummerOptions& opts = {});

/// An invertible upper triangular X with X ρ_a(s) X^-1 = ρ_b(s) for every generator,
/// searched among at most `bound` candidates.
std::optional<Matrix> flag_isomorphism(const Flag& a, const Flag& b, std::uint64_t bound = 1 << 20);

}  // namespace surflift
