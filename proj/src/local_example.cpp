#include "surflift/local_example.hpp"

#include "surflift/error.hpp"
#include "surflift/zpr.hpp"

namespace surflift::local {

namespace {

// x = ell^v * u with u prime to ell.
std::pair<int, std::int64_t> split_valuation(std::int64_t ell, std::int64_t x) {
  if (x == 0) throw InvalidInput("square classes are defined for nonzero elements only");
  int v = 0;
  while (x % ell == 0) x /= ell, ++v;
  return {v, x};
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

int legendre(std::int64_t u, std::int64_t ell) {
  Ring f(ell, 1);
  Residue r = f.power(f.reduce(u), (ell - 1) / 2);
  return r == 1 ? 1 : -1;
}

}  // namespace

Field Field::ql(std::int64_t ell) {
  if (ell == 2 || !is_prime(ell)) throw InvalidInput("Q_ell needs an odd prime ell, got " + std::to_string(ell));
  return {ell};
}

std::string Field::name() const { return is_dyadic() ? "Q2" : "Q" + std::to_string(ell); }

std::int64_t nonresidue(const Field& k) {
  if (k.is_dyadic()) throw InvalidInput("no quadratic non-residue defined for Q_2");
  if (k.ell % 4 == 3) return -1;
  for (std::int64_t u = 2;; ++u)
    if (legendre(u, k.ell) == -1) return u;
}

std::vector<std::int64_t> square_classes(const Field& k) {
  if (k.is_dyadic()) return {1, -1, 2, -2, 5, -5, 10, -10};
  const std::int64_t u = nonresidue(k);
  return {1, u, k.ell, u * k.ell};
}

std::int64_t square_class(const Field& k, std::int64_t x) {
  auto [v, u] = split_valuation(k.ell, x);
  const std::int64_t scale = v % 2 ? k.ell : 1;
  if (k.is_dyadic()) {
    switch (mod(u, 8)) {
      case 1: return scale;
      case 7: return -scale;
      case 5: return 5 * scale;
      default: return -5 * scale;
    }
  }
  return legendre(u, k.ell) == 1 ? scale : nonresidue(k) * scale;
}

int hilbert(const Field& k, std::int64_t a, std::int64_t b) {
  auto [al, u] = split_valuation(k.ell, a);
  auto [be, v] = split_valuation(k.ell, b);
  if (k.is_dyadic()) {
    auto eps = [](std::int64_t w) { return static_cast<int>(mod((mod(w, 8) - 1) / 2, 2)); };
    auto omega = [](std::int64_t w) {
      const std::int64_t r = mod(w, 8);
      return static_cast<int>(((r * r - 1) / 8) % 2);
    };
    const int e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
    return e % 2 ? -1 : 1;
  }
  int s = (al * be % 2 == 1 && k.ell % 4 == 3) ? -1 : 1;
  if (be % 2) s *= legendre(u, k.ell);
  if (al % 2) s *= legendre(v, k.ell);
  return s;
}

bool hilbert_soluble_bruteforce(const Field& k, std::int64_t a, std::int64_t b) {
  const std::int64_t n = k.is_dyadic() ? 64 : k.ell * k.ell * k.ell;
  const std::int64_t am = mod(a, n), bm = mod(b, n);
  std::vector<std::int64_t> squares(n);
  std::vector<char> is_square_unit(n, 0), is_square_any(n, 0);
  for (std::int64_t z = 0; z < n; ++z) {
    squares[z] = z * z % n;
    is_square_any[squares[z]] = 1;
    if (z % k.ell) is_square_unit[squares[z]] = 1;
  }
  for (std::int64_t x = 0; x < n; ++x)
    for (std::int64_t y = 0; y < n; ++y) {
      const std::int64_t lhs = (am * squares[x] + bm * squares[y]) % n;
      const bool xy_unit = x % k.ell || y % k.ell;
      if (xy_unit ? is_square_any[lhs] : is_square_unit[lhs]) return true;
    }
  return false;
}

bool liftable_mod4(const Field& k, std::int64_t x) { return hilbert(k, x, -1) == 1; }

std::vector<std::int64_t> non_liftable_classes(const Field& k) {
  std::vector<std::int64_t> out;
  for (std::int64_t x : square_classes(k))
    if (!liftable_mod4(k, x)) out.push_back(x);
  return out;
}

const std::array<std::array<const char*, 5>, 5>& example_shape() {
  static const std::array<std::array<const char*, 5>, 5> shape{{
      {"1", "e", "e", "*", "*"},
      {"0", "1", "0", "f", "*"},
      {"0", "0", "1", "0", "f"},
      {"0", "0", "0", "1", "e"},
      {"0", "0", "0", "0", "1"},
  }};
  return shape;
}

std::vector<Edge> derive_edges() {
  std::vector<Edge> edges;
  const auto& shape = example_shape();
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      const std::string cell = shape[i][j];
      if (cell == "e" || cell == "f") edges.emplace_back(i + 1, j + 1);
    }
  return edges;
}

int count_parity_solutions(int n, const std::vector<Edge>& edges) {
  int count = 0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    bool ok = true;
    for (auto [i, j] : edges)
      if (((mask >> (i - 1)) & 1) == ((mask >> (j - 1)) & 1)) ok = false;
    count += ok;
  }
  return count;
}

bool ParityReport::minimal() const {
  for (int c : satisfying_without_edge)
    if (c == 0) return false;
  return !satisfying_without_edge.empty();
}

ParityReport check_no_cyclotomic_lift() {
  ParityReport rep;
  rep.edges = derive_edges();
  rep.assignments = 1 << 5;
  rep.satisfying = count_parity_solutions(5, rep.edges);
  for (std::size_t e = 0; e < rep.edges.size(); ++e) {
    auto fewer = rep.edges;
    fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(e));
    rep.satisfying_without_edge.push_back(count_parity_solutions(5, fewer));
  }
  return rep;
}

}  // namespace surflift::local
