#pragma once

// Square classes and Hilbert symbols over Q_2 and Q_ℓ (ℓ odd), and the parity
// system that rules out cyclotomic-diagonal lifts of the 5-dimensional example.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace surflift::local {

/// A local field: Q_2 when ell == 2, otherwise Q_ell for an odd prime ell.
struct Field {
  std::int64_t ell;
  static Field q2() { return {2}; }
  static Field ql(std::int64_t ell);
  bool is_dyadic() const { return ell == 2; }
  std::string name() const;
};

/// Canonical representatives of K^x/(K^x)^2: {1,-1,2,-2,5,-5,10,-10} for Q_2 and
/// {1, u, ℓ, uℓ} for Q_ℓ, with u = -1 when ℓ ≡ 3 mod 4 and otherwise the smallest
/// positive non-residue.
std::vector<std::int64_t> square_classes(const Field& k);
std::int64_t nonresidue(const Field& k);
/// The canonical representative of the class of the nonzero integer x.
std::int64_t square_class(const Field& k, std::int64_t x);

/// (a, b)_K ∈ {+1, -1} by the closed formulas.
int hilbert(const Field& k, std::int64_t a, std::int64_t b);
/// Whether a x^2 + b y^2 = z^2 has a primitive solution modulo 2^6 (resp. ℓ^3).
bool hilbert_soluble_bruteforce(const Field& k, std::int64_t a, std::int64_t b);

/// (x) lifts to H^1(K, Z/4) iff (x) ∪ (-1) = 0.
bool liftable_mod4(const Field& k, std::int64_t x);
std::vector<std::int64_t> non_liftable_classes(const Field& k);

using Edge = std::pair<int, int>;  // 1-based variable indices, i < j

/// The shape of the mod-2 representation: "e" / "f" mark the two classes, "*" a
/// free entry, "1" the diagonal and "0" zeros.
const std::array<std::array<const char*, 5>, 5>& example_shape();
/// Edges (i, j) with an ε or ε' in position (i, j) of the shape.
std::vector<Edge> derive_edges();
/// Number of assignments ξ ∈ {0,1}^n satisfying ξ_i != ξ_j on every edge.
int count_parity_solutions(int n, const std::vector<Edge>& edges);

struct ParityReport {
  std::vector<Edge> edges;
  int assignments = 0;
  int satisfying = 0;
  std::vector<int> satisfying_without_edge;  // one count per removed edge
  bool unsat() const { return satisfying == 0; }
  bool minimal() const;
};
ParityReport check_no_cyclotomic_lift();

}  // namespace surflift::local
