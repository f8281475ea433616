#include "surflift/oracle.hpp"

#include <cstdlib>
#include <random>

#include "surflift/error.hpp"

namespace surflift::oracle {

namespace {

using Clock = std::chrono::steady_clock;

class Deadline {
 public:
  explicit Deadline(const SearchBudget& b) : end_(Clock::now() + b.time_ceiling) {}
  void check() const {
    if (Clock::now() > end_) throw BudgetExceeded("oracle: time ceiling exceeded");
  }

 private:
  Clock::time_point end_;
};

std::uint64_t checked_count(const Ring& ring, int n, const SearchBudget& budget) {
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) {
    count *= static_cast<std::uint64_t>(ring.modulus());
    if (count > budget.max_count)
      throw BudgetExceeded("oracle: enumeration of " + ring.name() + "^" + std::to_string(n) + " exceeds the budget");
  }
  return count;
}

bool relator_holds(const std::vector<Matrix>& acts, int genus) {
  const int n = acts.front().rows();
  std::vector<Matrix> inv;
  for (const auto& a : acts) {
    if (!is_invertible(a)) return false;
    inv.push_back(inverse(a));
  }
  Matrix prod = Matrix::identity(acts.front().ring(), n);
  for (Letter l : Presentation(genus).relator())
    prod = prod * (letter_inverted(l) ? inv[letter_generator(l)] : acts[letter_generator(l)]);
  return prod.is_identity();
}

}  // namespace

SearchBudget SearchBudget::from_env() {
  SearchBudget b;
  if (const char* s = std::getenv("SURFLIFT_ORACLE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) b.max_count = v;
  }
  return b;
}

void enumerate_vectors(const Ring& ring, int n, const SearchBudget& budget,
                       const std::function<void(const Vec&)>& visit) {
  checked_count(ring, n, budget);
  Deadline deadline(budget);
  Vec v(n, 0);
  std::uint64_t steps = 0;
  while (true) {
    visit(v);
    if ((++steps & 0xfff) == 0) deadline.check();
    int i = 0;
    for (; i < n; ++i) {
      if (++v[i] < ring.modulus()) break;
      v[i] = 0;
    }
    if (i == n) return;
  }
}

BruteH1 brute_h1(const GModule& m, const SearchBudget& budget) {
  const Ring& R = m.ring();
  const int n = m.rank(), g2 = m.num_generators();
  const auto rel = m.presentation().relator();
  BruteH1 out;

  std::set<Vec> boundaries;
  enumerate_vectors(R, n, budget, [&](const Vec& x) {
    Vec b;
    bool fixed = true;
    for (int s = 0; s < g2; ++s) {
      Vec d = vec_sub(R, m.action(s).apply(x), x);
      fixed = fixed && vec_is_zero(d);
      b.insert(b.end(), d.begin(), d.end());
    }
    out.invariants += fixed;
    boundaries.insert(b);
  });
  out.coboundaries = boundaries.size();

  std::vector<Vec> cocycles;
  enumerate_vectors(R, n * g2, budget, [&](const Vec& c) {
    std::vector<Vec> vals;
    for (int s = 0; s < g2; ++s) vals.emplace_back(c.begin() + s * n, c.begin() + (s + 1) * n);
    if (vec_is_zero(crossed_extend(m, vals, rel))) cocycles.push_back(c);
  });
  out.cocycles = cocycles.size();

  // |H^1[p^k]| = p^{Σ min(e_i, k)} determines the invariant factors.
  const int s = R.exponent();
  std::vector<int> logs(s + 2, 0);
  for (int k = 1; k <= s; ++k) {
    std::uint64_t hits = 0;
    for (const Vec& z : cocycles)
      if (boundaries.count(vec_scale(R, R.p_power(k), z))) ++hits;
    std::uint64_t q = hits / out.coboundaries;
    while (q > 1) q /= static_cast<std::uint64_t>(R.p()), ++logs[k];
  }
  logs[s + 1] = logs[s];
  for (int k = 1; k <= s; ++k) {
    const int at_least_k = logs[k] - logs[k - 1];
    const int at_least_next = logs[k + 1] - logs[k];
    for (int i = 0; i < at_least_k - at_least_next; ++i) out.exponents.push_back(k);
  }
  return out;
}

std::vector<Flag> brute_lift(const Flag& f, const SearchBudget& budget) {
  const Ring& R = f.ring();
  const Ring R1 = R.with_exponent(R.exponent() + 1);
  const Ring Rp = R.with_exponent(1);
  const int d = f.dim(), g2 = f.num_generators();
  std::vector<std::pair<int, int>> pos;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) pos.emplace_back(i, j);
  const int n = static_cast<int>(pos.size());
  std::vector<Matrix> base;
  for (const auto& a : f.actions()) base.push_back(lift(a, R.exponent() + 1));
  const Residue pr = R1.p_power(R.exponent());

  std::vector<Flag> out;
  enumerate_vectors(Rp, g2 * n, budget, [&](const Vec& t) {
    std::vector<Matrix> acts = base;
    for (int s = 0; s < g2; ++s)
      for (int c = 0; c < n; ++c) acts[s].add_to(pos[c].first, pos[c].second, pr * t[s * n + c]);
    if (relator_holds(acts, f.genus())) out.push_back(Flag::from_matrices(R1, f.genus(), acts));
  });
  return out;
}

std::vector<Flag> brute_glue(const Flag& e, const Flag& f, const SearchBudget& budget) {
  const Ring& R = e.ring();
  const int d = e.dim(), g2 = e.num_generators();
  std::vector<Flag> out;
  enumerate_vectors(R, g2, budget, [&](const Vec& beta) {
    std::vector<Matrix> acts;
    for (int s = 0; s < g2; ++s) {
      Matrix m(R, d + 1, d + 1);
      m.set_block(1, 1, f.action(s));
      m.set_block(0, 0, e.action(s));
      m.set(0, d, beta[s]);
      acts.push_back(m);
    }
    if (relator_holds(acts, e.genus())) out.push_back(Flag::from_matrices(R, e.genus(), acts));
  });
  return out;
}

std::pair<std::uint64_t, std::uint64_t> brute_h1_reduction_image(const GModule& m, const SearchBudget& budget) {
  const Ring& R = m.ring();
  const GModule mp = reduce(m, 1);
  const Ring& Rp = mp.ring();
  const int n = m.rank(), g2 = m.num_generators();
  const auto rel = m.presentation().relator();
  auto is_cocycle = [&](const GModule& mod, const Vec& c) {
    std::vector<Vec> vals;
    for (int s = 0; s < g2; ++s) vals.emplace_back(c.begin() + s * n, c.begin() + (s + 1) * n);
    return vec_is_zero(crossed_extend(mod, vals, rel));
  };

  std::set<Vec> boundaries;
  enumerate_vectors(Rp, n, budget, [&](const Vec& x) {
    Vec b;
    for (int s = 0; s < g2; ++s) {
      Vec d = vec_sub(Rp, mp.action(s).apply(x), x);
      b.insert(b.end(), d.begin(), d.end());
    }
    boundaries.insert(b);
  });
  std::set<Vec> reduced;
  enumerate_vectors(R, n * g2, budget, [&](const Vec& c) {
    if (is_cocycle(m, c)) reduced.insert(reduce_vec(R, c, 1));
  });
  std::set<Vec> image;
  for (const Vec& z : reduced)
    for (const Vec& b : boundaries) image.insert(vec_add(Rp, z, b));
  std::uint64_t z1 = 0;
  enumerate_vectors(Rp, n * g2, budget, [&](const Vec& c) { z1 += is_cocycle(mp, c); });
  return {image.size(), z1};
}

FlagKind parse_flag_kind(const std::string& s) {
  if (s == "any") return FlagKind::Any;
  if (s == "kummer") return FlagKind::Kummer;
  if (s == "wound-kummer") return FlagKind::WoundKummer;
  throw InvalidInput("unknown flag kind '" + s + "' (expected any, kummer or wound-kummer)");
}

std::string to_string(FlagKind k) {
  switch (k) {
    case FlagKind::Any: return "any";
    case FlagKind::Kummer: return "kummer";
    case FlagKind::WoundKummer: return "wound-kummer";
  }
  return "?";
}

Flag gen_random_flag(const FlagRequest& req) {
  if (req.dim < 1 || req.genus < 1 || req.r < 1) throw InvalidInput("gen_random_flag: dim, genus and r must be positive");
  const Ring R(req.p, req.r);
  const Ring Rp(req.p, 1);
  const int d = req.dim, g2 = 2 * req.genus;
  std::mt19937_64 rng(req.seed);
  auto uniform = [&](Residue n) { return static_cast<Residue>(rng() % static_cast<std::uint64_t>(n)); };

  auto diagonal = [&]() {
    switch (req.kind) {
      case FlagKind::Kummer: return Residue{1};
      case FlagKind::WoundKummer: return teichmuller(R, 1 + uniform(req.p - 1));
      case FlagKind::Any: break;
    }
    Residue u;
    do u = uniform(R.modulus()); while (!R.is_unit(u));
    return u;
  };
  // Sparse-ish entries make split steps (and hence every branch of the lifting
  // algorithms) common.
  auto entry = [&]() { return uniform(3) == 0 ? Residue{0} : uniform(R.modulus()); };
  auto random_triangular = [&]() {
    Matrix m(R, d, d);
    for (int i = 0; i < d; ++i) {
      m.set(i, i, diagonal());
      for (int j = i + 1; j < d; ++j) m.set(i, j, entry());
    }
    return m;
  };

  std::vector<std::pair<int, int>> upper;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) upper.emplace_back(i, j);
  const int nu = static_cast<int>(upper.size());

  for (int attempt = 0; attempt < req.max_attempts; ++attempt) {
    std::vector<Matrix> acts;
    for (int s = 0; s < g2 - 1; ++s) acts.push_back(random_triangular());
    // [x_1,y_1]...[x_g,y_g] = 1  ⇔  X Y = C Y X with X = x_g, Y = y_g and C the
    // inverse of the first g-1 commutators: linear in the entries of Y.
    Matrix c = Matrix::identity(R, d);
    for (int k = 0; k + 1 < req.genus; ++k) {
      const Matrix& a = acts[2 * k];
      const Matrix& b = acts[2 * k + 1];
      c = c * a * b * inverse(a) * inverse(b);
    }
    c = inverse(c);
    const Matrix& x = acts.back();
    Matrix sys(R, d * d + d, nu);
    Vec rhs(d * d + d, 0);
    for (int u = 0; u < nu; ++u) {
      Matrix e(R, d, d);
      e.set(upper[u].first, upper[u].second, 1);
      Matrix img = x * e - c * e * x;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) sys.set(i * d + j, u, img(i, j));
      if (upper[u].first == upper[u].second) sys.set(d * d + upper[u].first, u, 1);
    }
    for (int i = 0; i < d; ++i) rhs[d * d + i] = diagonal();
    auto sol = solve(sys, rhs);
    if (!sol) continue;
    Vec y = sol->particular;
    for (const auto& k : sol->kernel) y = vec_add(R, y, vec_scale(R, uniform(R.modulus()), k.vector));
    Matrix ym(R, d, d);
    for (int u = 0; u < nu; ++u) ym.set(upper[u].first, upper[u].second, y[u]);
    acts.push_back(ym);
    if (!relator_holds(acts, req.genus)) continue;
    Flag f = Flag::from_matrices(R, req.genus, std::move(acts));
    switch (req.kind) {
      case FlagKind::Any: return f;
      case FlagKind::Kummer:
        if (is_kummer(f).status == KummerVerdict::Status::Kummer) return f;
        break;
      case FlagKind::WoundKummer:
        if (is_wound_kummer(f)) return f;
        break;
    }
  }
  throw BudgetExceeded("gen_random_flag: no " + to_string(req.kind) + " flag found in " +
                       std::to_string(req.max_attempts) + " attempts");
}

}  // namespace surflift::oracle
