#pragma once

// The closed orientable surface group of genus g,
//   Γ_g = < x1, y1, ..., xg, yg | [x1,y1]...[xg,yg] >,  [a,b] = a b a^-1 b^-1,
// words in its generators, and finite free Z/p^s-modules with a Γ_g-action.

#include <string>
#include <vector>

#include "surflift/error.hpp"
#include "surflift/zpr.hpp"

namespace surflift {

/// A letter is a nonzero integer: +(i+1) is generator i, -(i+1) its inverse.
/// Generators are ordered x1, y1, x2, y2, ...
using Letter = int;

inline int letter_generator(Letter l) { return (l > 0 ? l : -l) - 1; }
inline bool letter_inverted(Letter l) { return l < 0; }

class Word {
 public:
  Word() = default;
  /// Freely reduces the letter sequence.
  explicit Word(const std::vector<Letter>& letters);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word operator*(const Word& o) const;
  Word inverse() const;
  static Word generator(int index) { return Word({index + 1}); }

  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }

 private:
  std::vector<Letter> letters_;
};

struct Presentation {
  int genus;
  explicit Presentation(int g);
  int num_generators() const { return 2 * genus; }
  /// The surface relator as a letter sequence of length 4g (not a Word: it is
  /// consumed letter by letter by the Fox-calculus routines).
  std::vector<Letter> relator() const;
  std::string generator_name(int index) const;
};

/// defect() is ρ(relator) - I.
class RelatorDefect : public InvalidInput {
 public:
  RelatorDefect(const std::string& what, Matrix defect) : InvalidInput(what), defect_(std::move(defect)) {}
  const Matrix& defect() const { return defect_; }

 private:
  Matrix defect_;
};

/// A finite free Z/p^s-module of rank n with an action of Γ_g, given by one
/// invertible n×n matrix per generator. The relator is checked on construction.
class GModule {
 public:
  GModule(Ring ring, int genus, int rank, std::vector<Matrix> actions);
  static GModule trivial(Ring ring, int genus, int rank);

  const Ring& ring() const { return ring_; }
  int genus() const { return genus_; }
  int rank() const { return rank_; }
  int num_generators() const { return 2 * genus_; }
  Presentation presentation() const { return Presentation(genus_); }

  const Matrix& action(int gen) const { return actions_[gen]; }
  const Matrix& action_inverse(int gen) const { return inverses_[gen]; }
  const std::vector<Matrix>& actions() const { return actions_; }
  const Matrix& letter(Letter l) const {
    return letter_inverted(l) ? inverses_[letter_generator(l)] : actions_[letter_generator(l)];
  }

  Matrix evaluate(const Word& w) const;
  Matrix evaluate(const std::vector<Letter>& letters) const;

  /// Every generator acts trivially.
  bool is_trivial() const;

  friend bool operator==(const GModule& a, const GModule& b) {
    return a.ring_ == b.ring_ && a.genus_ == b.genus_ && a.rank_ == b.rank_ && a.actions_ == b.actions_;
  }

 private:
  Ring ring_;
  int genus_;
  int rank_;
  std::vector<Matrix> actions_;
  std::vector<Matrix> inverses_;
};

/// A representation of Γ_g is the same data as its module.
using SurfaceRep = GModule;

/// Value on w of the crossed homomorphism c with c(gen_i) = values[i]:
/// c(uv) = c(u) + u·c(v), c(s^-1) = -s^-1·c(s).
Vec crossed_extend(const GModule& m, const std::vector<Vec>& values, const std::vector<Letter>& w);
inline Vec crossed_extend(const GModule& m, const std::vector<Vec>& values, const Word& w) {
  return crossed_extend(m, values, w.letters());
}

/// Index convention: (A ⊗ B) basis element a⊗b sits at a*rank(B) + b.
GModule tensor(const GModule& a, const GModule& b);
/// Contragredient: g acts by (ρ(g)^-1)^T.
GModule dual(const GModule& a);
/// Hom(A, B) with g·f = ρ_B(g) f ρ_A(g)^-1. A map f is stored row-major as a
/// rank(B)×rank(A) matrix, so this is B ⊗ A^∨ in the tensor index convention.
GModule hom(const GModule& a, const GModule& b);
GModule direct_sum(const GModule& a, const GModule& b);
/// Entrywise reduction of the action modulo p^s.
GModule reduce(const GModule& m, int s);

/// Reshape helpers for the Hom(A,B) convention above.
Matrix vec_to_map(const Ring& ring, std::span<const Residue> v, int rows, int cols);
Vec map_to_vec(const Matrix& f);

}  // namespace surflift
