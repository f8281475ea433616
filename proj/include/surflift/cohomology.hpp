#pragma once

// Cohomology of Γ_g computed on the presentation 2-complex:
//   C^0 = M  --d0-->  C^1 = M^{2g}  --d1-->  C^2 = M
// d0(m) = (ρ(s)m - m)_s and d1(c) = c(R), the value of the crossed homomorphism
// on the relator. The surface is aspherical, so this computes H^*(Γ_g, M).
//
// A 1-cochain is stored as one flat vector: the value on generator s occupies
// entries [s*n, (s+1)*n). A 2-cochain is an element of M.

#include <memory>
#include <optional>
#include <vector>

#include "surflift/surface.hpp"
#include "surflift/zpr.hpp"

namespace surflift {

struct CochainComplex {
  GModule module;
  Matrix d0;  // (2g·n) × n
  Matrix d1;  // n × (2g·n)

  explicit CochainComplex(const GModule& m);
};

std::vector<Vec> split_cochain(const GModule& m, std::span<const Residue> flat);
Vec join_cochain(const std::vector<Vec>& values);

/// H^0, H^1, H^2 of one coefficient module, with class-level operations.
class Cohomology {
 public:
  explicit Cohomology(const GModule& m);

  const GModule& module() const { return complex_.module; }
  const CochainComplex& complex() const { return complex_; }
  const Subquotient& h0() const { return h0_; }
  const Subquotient& h1() const { return h1_; }
  const Subquotient& h2() const { return h2_; }

  bool is_cocycle(std::span<const Residue> c) const;
  /// Witness m with d0(m) = c (degree 1) or cochain b with d1(b) = c (degree 2).
  std::optional<Vec> coboundary_witness(int degree, std::span<const Residue> c) const;
  bool is_coboundary(int degree, std::span<const Residue> c) const {
    return coboundary_witness(degree, c).has_value();
  }
  /// Coordinates of the class of a cocycle (degree 1) or of any element (degree 2).
  Vec class_of(int degree, std::span<const Residue> c) const;
  bool same_class(int degree, std::span<const Residue> a, std::span<const Residue> b) const;
  /// The canonical representative of the class.
  Vec canonical(int degree, std::span<const Residue> c) const;

  /// Basis of Z^1 = ker d1 as generators with orders.
  const std::vector<KernelGenerator>& cocycle_generators() const { return z1_->kernel(); }

 private:
  CochainComplex complex_;
  std::shared_ptr<LinearSolver> d0_solver_;
  std::shared_ptr<LinearSolver> d1_solver_;
  std::shared_ptr<LinearSolver> z1_;
  Subquotient h0_, h1_, h2_;
};

/// A cohomology class together with the module it lives in.
struct CohClass {
  int degree;
  Vec cochain;
};

/// Cup product of 1-cocycles u ∈ Z^1(A), v ∈ Z^1(B); the result is a 2-cochain
/// in A ⊗ B (tensor index convention of tensor()).
Vec cup(const GModule& a, const GModule& b, std::span<const Residue> u, std::span<const Residue> v);

/// 0 → A → B → C → 0 with inclusion i (nB×nA), projection π (nC×nB) and a
/// module (not necessarily equivariant) section s (nB×nC).
struct ExtensionData {
  GModule sub;
  GModule total;
  GModule quotient;
  Matrix inclusion;
  Matrix projection;
  Matrix section;

  /// Checks shapes, π∘i = 0, π∘s = id, [i | s] invertible and equivariance of i, π.
  void validate() const;
  /// Left inverse of the inclusion vanishing on the image of the section.
  Matrix retraction() const;

  /// For a block upper triangular module B with an invariant leading block of rank
  /// `sub_rank`: the coordinate inclusion, projection and section.
  static ExtensionData standard(const GModule& total, int sub_rank);
};

/// The class of E in H^1(Γ, Hom(C, A)) (Hom convention of hom()).
Vec extension_class(const ExtensionData& e);
/// An equivariant section C → B if E splits.
std::optional<Matrix> splits(const ExtensionData& e);
/// δ: H^1(C) → H^2(A); returns a 2-cochain in A.
Vec connecting(const ExtensionData& e, std::span<const Residue> v);

/// Finds a 1-cocycle ε in the quotient of E (which must be defined mod p) with
/// [connecting(E, ε)] = [target]; the coefficient vector over the canonical cocycle
/// basis is lexicographically minimal. Throws InconsistencyError if none exists.
Vec solve_cup(const ExtensionData& e, std::span<const Residue> target);

struct DemushkinReport {
  int p;
  int genus;
  int h1_dim;
  int h2_dim;
  Matrix gram;  // cup pairing on the H^1 basis, valued in H^2 coordinates
  int gram_rank;
  bool ok() const { return h2_dim == 1 && gram_rank == h1_dim && h1_dim == 2 * genus; }
};
DemushkinReport demushkin_check(Residue p, int genus);

}  // namespace surflift
