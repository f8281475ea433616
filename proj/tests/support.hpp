#pragma once

// Small helpers shared by the test binaries.

#include <random>
#include <vector>

#include "surflift/flags.hpp"
#include "surflift/oracle.hpp"

namespace testing_support {

using namespace surflift;

inline Matrix random_matrix(const Ring& R, int rows, int cols, std::mt19937_64& rng) {
  Matrix m(R, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.set(i, j, static_cast<Residue>(rng() % R.modulus()));
  return m;
}

inline Matrix random_invertible(const Ring& R, int n, std::mt19937_64& rng) {
  while (true) {
    Matrix m = random_matrix(R, n, n, rng);
    if (is_invertible(m)) return m;
  }
}

inline Vec random_vec(const Ring& R, int n, std::mt19937_64& rng) { return random_matrix(R, n, 1, rng).col(0); }

// A module that is usually not triangular in the standard basis: a random flag
// conjugated by a random invertible matrix.
inline GModule random_module(Residue p, int s, int genus, int rank, std::uint64_t seed) {
  oracle::FlagRequest req;
  req.p = p;
  req.r = s;
  req.dim = rank;
  req.genus = genus;
  req.seed = seed;
  Flag f = oracle::gen_random_flag(req);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  Matrix u = random_invertible(f.ring(), rank, rng);
  Matrix ui = inverse(u);
  std::vector<Matrix> acts;
  for (const auto& a : f.actions()) acts.push_back(ui * a * u);
  return GModule(f.ring(), genus, rank, acts);
}

inline Flag random_flag(Residue p, int r, int dim, int genus, oracle::FlagKind kind, std::uint64_t seed) {
  oracle::FlagRequest req;
  req.p = p;
  req.r = r;
  req.dim = dim;
  req.genus = genus;
  req.kind = kind;
  req.seed = seed;
  return oracle::gen_random_flag(req);
}

// Every upper triangular matrix over R with the given diagonal, one call per matrix.
template <class F>
void for_each_upper(const Ring& R, const Vec& diag, F&& visit) {
  const int n = static_cast<int>(diag.size());
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  std::vector<Residue> c(slots.size(), 0);
  while (true) {
    Matrix m(R, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, diag[i]);
    for (std::size_t k = 0; k < slots.size(); ++k) m.set(slots[k].first, slots[k].second, c[k]);
    visit(m);
    std::size_t k = 0;
    for (; k < c.size(); ++k) {
      if (++c[k] < R.modulus()) break;
      c[k] = 0;
    }
    if (k == c.size()) return;
  }
}

// All flags of dimension d over Z/p^r for genus 1 with the given diagonals,
// by brute force over pairs of upper triangular matrices.
inline std::vector<Flag> all_genus1_flags(const Ring& R, const Vec& dx, const Vec& dy) {
  std::vector<Flag> out;
  for_each_upper(R, dx, [&](const Matrix& x) {
    for_each_upper(R, dy, [&](const Matrix& y) {
      if (x * y == y * x) out.push_back(Flag::from_matrices(R, 1, {x, y}));
    });
  });
  return out;
}

}  // namespace testing_support
