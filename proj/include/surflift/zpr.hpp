#pragma once

// Exact arithmetic and linear algebra over the local rings Z/p^r.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace surflift {

using Residue = std::int64_t;
using Vec = std::vector<Residue>;

bool is_prime(Residue n);

/// The coefficient ring Z/p^r. Moduli are capped at 2^30 so that products of
/// two residues never overflow 64 bits.
class Ring {
 public:
  Ring(Residue p, int r);

  Residue p() const { return p_; }
  int exponent() const { return r_; }
  Residue modulus() const { return mod_; }

  Residue reduce(Residue x) const {
    x %= mod_;
    return x < 0 ? x + mod_ : x;
  }
  Residue add(Residue a, Residue b) const { return reduce(a + b); }
  Residue sub(Residue a, Residue b) const { return reduce(a - b); }
  Residue mul(Residue a, Residue b) const { return reduce(a * b); }
  Residue neg(Residue a) const { return reduce(-a); }

  /// p-adic valuation of a residue; the zero residue has valuation r.
  int valuation(Residue a) const;
  bool is_unit(Residue a) const { return reduce(a) % p_ != 0; }
  Residue inverse(Residue a) const;
  Residue power(Residue a, std::uint64_t e) const;
  /// p^k reduced into the ring (zero once k >= r).
  Residue p_power(int k) const;

  Ring with_exponent(int s) const { return Ring(p_, s); }

  friend bool operator==(const Ring& a, const Ring& b) { return a.p_ == b.p_ && a.r_ == b.r_; }
  friend bool operator!=(const Ring& a, const Ring& b) { return !(a == b); }

  std::string name() const;

 private:
  Residue p_;
  int r_;
  Residue mod_;
};

/// Dense row-major matrix over Z/p^r with entries kept as least nonnegative residues.
class Matrix {
 public:
  Matrix(Ring ring, int rows, int cols);
  static Matrix identity(Ring ring, int n);
  static Matrix from_rows(Ring ring, const std::vector<std::vector<Residue>>& rows);
  static Matrix column(Ring ring, std::span<const Residue> v);
  /// Matrix whose columns are the given vectors (all of length `rows`).
  static Matrix from_columns(Ring ring, int rows, const std::vector<Vec>& cols);

  const Ring& ring() const { return ring_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Residue operator()(int i, int j) const { return data_[index(i, j)]; }
  void set(int i, int j, Residue v) { data_[index(i, j)] = ring_.reduce(v); }
  void add_to(int i, int j, Residue v) { set(i, j, (*this)(i, j) + v); }
  const Vec& data() const { return data_; }

  Vec col(int j) const;
  Vec row(int i) const;

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator-() const;
  Matrix scaled(Residue c) const;
  Vec apply(std::span<const Residue> v) const;

  Matrix transpose() const;
  Matrix block(int r0, int c0, int nr, int nc) const;
  void set_block(int r0, int c0, const Matrix& b);
  /// Deletes row k and column k.
  Matrix without(int k) const;

  bool is_zero() const;
  bool is_identity() const;
  bool is_upper_triangular() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::string to_string() const;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * cols_ + j; }
  Ring ring_;
  int rows_;
  int cols_;
  Vec data_;
};

std::ostream& operator<<(std::ostream& os, const Matrix& m);

/// Entrywise reduction modulo p^s, 1 <= s <= r.
Matrix reduce(const Matrix& m, int s);
/// Least-nonnegative-residue embedding into Z/p^s for s >= r.
Matrix lift(const Matrix& m, int s);
Vec reduce_vec(const Ring& ring, std::span<const Residue> v, int s);

Matrix kronecker(const Matrix& a, const Matrix& b);
Matrix inverse(const Matrix& m);
bool is_invertible(const Matrix& m);

Vec vec_add(const Ring& ring, std::span<const Residue> a, std::span<const Residue> b);
Vec vec_sub(const Ring& ring, std::span<const Residue> a, std::span<const Residue> b);
Vec vec_scale(const Ring& ring, Residue c, std::span<const Residue> a);
bool vec_is_zero(std::span<const Residue> v);

/// Two-sided reduction P·A·Q = D with D diagonal, D(i,i) = p^{valuations[i]} for
/// i < rank and zero elsewhere. Pivots are chosen by minimal valuation, ties broken by
/// the smallest (row, col).
struct Diagonalization {
  Matrix P;
  Matrix Q;
  Matrix D;
  std::vector<int> valuations;
  int rank() const { return static_cast<int>(valuations.size()); }
};
Diagonalization diagonalize(const Matrix& a);

/// Generator of a cyclic submodule: `vector` has additive order p^order_exponent.
struct KernelGenerator {
  Vec vector;
  int order_exponent;
};

struct Solution {
  Vec particular;
  std::vector<KernelGenerator> kernel;
};

/// Solves A·x = b exactly. std::nullopt when no solution exists.
std::optional<Solution> solve(const Matrix& a, std::span<const Residue> b);

/// Factors A once and then answers many right-hand sides.
class LinearSolver {
 public:
  explicit LinearSolver(const Matrix& a);
  const Matrix& matrix() const { return a_; }
  std::optional<Vec> particular(std::span<const Residue> b) const;
  std::optional<Solution> solve(std::span<const Residue> b) const;
  const std::vector<KernelGenerator>& kernel() const { return kernel_; }

 private:
  Matrix a_;
  Diagonalization diag_;
  std::vector<KernelGenerator> kernel_;
};

std::vector<KernelGenerator> kernel(const Matrix& a);
/// The kernel generators as the columns of a matrix (a.cols() rows).
Matrix kernel_matrix(const Matrix& a);

/// Enumerates every element of {particular + Σ c_i kernel_i}; the generators coming
/// out of solve/kernel are independent, so the enumeration has no repeats.
/// Returns false (and stops) when the count would exceed `bound`.
template <typename F>
bool for_each_solution(const Ring& ring, const Solution& sol, std::uint64_t bound, F&& visit);

std::uint64_t solution_count(const Ring& ring, const Solution& sol);

struct Pivot {
  int column;
  int valuation;
};

/// Row-only staircase form: transform·input = transformed; each pivot is normalized
/// to p^v and the entries above it are reduced modulo p^v.
struct EchelonResult {
  Matrix transformed;
  Matrix transform;
  std::vector<Pivot> pivots;
};
EchelonResult echelonize(const Matrix& a);

/// Multiplicative section F_p^x -> (Z/p^r)^x onto the (p-1)-th roots of unity.
Residue teichmuller(const Ring& ring, Residue a);

/// A finite Z/p^r-module presented as A/B with A, B spanned by matrix columns and
/// B inside A. Provides an invariant-factor basis of class representatives and
/// coordinates of elements of A in that basis.
class Subquotient {
 public:
  static Subquotient of(const Matrix& numerator, const Matrix& denominator);

  const Ring& ring() const { return ring_; }
  int ambient_dim() const { return ambient_; }
  const std::vector<Vec>& generators() const { return generators_; }
  /// Each generator has order p^e; entries are >= 1 and nondecreasing.
  const std::vector<int>& exponents() const { return exponents_; }
  /// log_p of the module's cardinality.
  int log_order() const;

  bool in_numerator(std::span<const Residue> z) const;
  /// Coordinates of z (which must lie in A) in the generator basis, each reduced
  /// modulo the generator's order.
  Vec coordinates(std::span<const Residue> z) const;
  bool is_zero_class(std::span<const Residue> z) const { return vec_is_zero(coordinates(z)); }
  /// The canonical representative Σ coordinate_i · generator_i of z's class.
  Vec canonical(std::span<const Residue> z) const;
  Vec from_coordinates(std::span<const Residue> coords) const;

 private:
  Subquotient(Ring ring, int ambient) : ring_(ring), ambient_(ambient), coord_map_(ring, 0, 0) {}
  Ring ring_;
  int ambient_;
  std::shared_ptr<const LinearSolver> numerator_;
  Matrix coord_map_;  // rows of P for the kept invariant factors
  std::vector<Vec> generators_;
  std::vector<int> exponents_;
};

// ---------------------------------------------------------------------------

template <typename F>
bool for_each_solution(const Ring& ring, const Solution& sol, std::uint64_t bound, F&& visit) {
  if (solution_count(ring, sol) > bound) return false;
  const std::size_t k = sol.kernel.size();
  std::vector<Residue> counter(k, 0);
  std::vector<Residue> limit(k);
  for (std::size_t i = 0; i < k; ++i) {
    limit[i] = 1;
    for (int e = 0; e < sol.kernel[i].order_exponent; ++e) limit[i] *= ring.p();
  }
  Vec current = sol.particular;
  while (true) {
    visit(static_cast<const Vec&>(current));
    std::size_t i = 0;
    for (; i < k; ++i) {
      ++counter[i];
      current = vec_add(ring, current, sol.kernel[i].vector);
      if (counter[i] < limit[i]) break;
      counter[i] = 0;  // wrapped: order p^e returns the vector to its start
    }
    if (i == k) return true;
  }
}

}  // namespace surflift
