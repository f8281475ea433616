#include "surflift/flags.hpp"

#include <map>
#include <random>

namespace surflift {

Flag::Flag(GModule m) : module_(std::move(m)) {
  for (const auto& a : module_.actions())
    if (!a.is_upper_triangular()) throw InvalidInput("flag generator matrix is not upper triangular");
}

Flag Flag::from_matrices(Ring ring, int genus, std::vector<Matrix> actions) {
  const int d = actions.empty() ? 0 : actions[0].rows();
  return Flag(GModule(ring, genus, d, std::move(actions)));
}

bool Flag::has_trivial_characters() const {
  for (int s = 0; s < num_generators(); ++s)
    for (int i = 1; i <= dim(); ++i)
      if (character(i, s) != 1 % ring().modulus()) return false;
  return true;
}

GModule subquotient(const Flag& f, int i, int j) {
  if (i < 0 || j > f.dim() || i >= j) throw InvalidInput("subquotient indices out of range");
  std::vector<Matrix> acts;
  for (const auto& a : f.actions()) acts.push_back(a.block(i, i, j - i, j - i));
  return GModule(f.ring(), f.genus(), j - i, std::move(acts));
}

Flag subflag(const Flag& f, int i, int j) { return Flag(subquotient(f, i, j)); }

Flag truncate(const Flag& f) {
  if (f.dim() < 2) throw InvalidInput("truncation needs dimension >= 2");
  return subflag(f, 0, f.dim() - 1);
}

Flag quotient_by_first(const Flag& f) {
  if (f.dim() < 2) throw InvalidInput("quotient needs dimension >= 2");
  return subflag(f, 1, f.dim());
}

Flag dual(const Flag& f) {
  const int d = f.dim();
  Matrix j(f.ring(), d, d);
  for (int i = 0; i < d; ++i) j.set(i, d - 1 - i, 1);
  std::vector<Matrix> acts;
  for (int s = 0; s < f.num_generators(); ++s) acts.push_back(j * f.module().action_inverse(s).transpose() * j);
  return Flag::from_matrices(f.ring(), f.genus(), std::move(acts));
}

Flag reduce(const Flag& f, int s) { return Flag(reduce(f.module(), s)); }

ExtensionData step_extension(const Flag& f, int i, int k) {
  if (k < 1 || k > f.dim() || i < 0 || i > k - 1) throw InvalidInput("step extension indices out of range");
  return ExtensionData::standard(subquotient(f, i, k), k - 1 - i);
}

int splitting_index(const Flag& f, int k) {
  for (int i = 0; i < k - 1; ++i)
    if (splits(step_extension(f, i, k))) return i;
  return k - 1;
}

FlagIndexTable index_table(const Flag& f) {
  FlagIndexTable t;
  for (int k = 1; k <= f.dim(); ++k) t.index.push_back(splitting_index(f, k));
  return t;
}

bool is_wound(const Flag& f) {
  Flag f1 = f.ring().exponent() == 1 ? f : reduce(f, 1);
  for (int i = 0; i + 2 <= f1.dim(); ++i)
    if (splits(ExtensionData::standard(subquotient(f1, i, i + 2), 1))) return false;
  return true;
}

bool is_wound_kummer(const Flag& f) {
  if (!is_wound(f)) return false;
  for (int s = 0; s < f.num_generators(); ++s)
    for (int i = 1; i <= f.dim(); ++i)
      if (f.character(i, s) != teichmuller(f.ring(), f.character(i, s))) return false;
  return true;
}

std::vector<Vec> invariant_lines(const GModule& m) {
  const Ring& R = m.ring();
  if (R.exponent() != 1) throw InvalidInput("invariant lines are enumerated modulo p only");
  const int d = m.rank();
  const Residue p = R.p();
  std::vector<Vec> lines;
  for (int lead = 0; lead < d; ++lead) {
    // vectors (0, ..., 0, 1, *, ..., *) with the 1 at position `lead`
    const int tail = d - lead - 1;
    std::uint64_t count = 1;
    for (int t = 0; t < tail; ++t) count *= static_cast<std::uint64_t>(p);
    for (std::uint64_t code = 0; code < count; ++code) {
      Vec v(d, 0);
      v[lead] = 1;
      std::uint64_t c = code;
      for (int t = 0; t < tail; ++t, c /= p) v[lead + 1 + t] = static_cast<Residue>(c % p);
      bool stable = true;
      for (int s = 0; s < m.num_generators() && stable; ++s) {
        Vec w = m.action(s).apply(v);
        stable = w == vec_scale(R, w[lead], v);
      }
      if (stable) lines.push_back(v);
    }
  }
  return lines;
}

namespace {

// Linear system for v ∈ (Z/p^r)^k: (ρ_k(s) - χ_k(s)) v = 0 for all s, v_k = 1.
std::optional<Solution> splitting_system(const Flag& f, int k) {
  const Ring& R = f.ring();
  const int g2 = f.num_generators();
  Matrix a(R, g2 * k + 1, k);
  Vec b(g2 * k + 1, 0);
  for (int s = 0; s < g2; ++s) {
    Matrix blk = f.action(s).block(0, 0, k, k) - Matrix::identity(R, k).scaled(f.character(k, s));
    a.set_block(s * k, 0, blk);
  }
  a.set(g2 * k, k - 1, 1);
  b[g2 * k] = 1;
  return solve(a, b);
}

}  // namespace

std::optional<Solution> splitting_solutions(const Flag& f, int k) { return splitting_system(f, k); }

std::optional<std::vector<Vec>> equivariant_splittings(const Flag& f, int k, std::uint64_t bound) {
  auto sol = splitting_system(f, k);
  std::vector<Vec> out;
  if (!sol) return out;
  bool ok = for_each_solution(f.ring(), *sol, bound, [&](const Vec& v) { out.push_back(v); });
  if (!ok) return std::nullopt;
  return out;
}

std::optional<Vec> canonical_splitting(const Flag& f, int k) {
  auto sol = splitting_system(f, k);
  if (!sol) return std::nullopt;
  return sol->particular;
}

Matrix splitting_basis(const Flag& f, int k, std::span<const Residue> v) {
  Matrix u = Matrix::identity(f.ring(), f.dim());
  for (int i = 0; i < k; ++i) u.set(i, k - 1, v[i]);
  return u;
}

Flag conjugate(const Flag& f, const Matrix& u) {
  Matrix ui = inverse(u);
  std::vector<Matrix> acts;
  for (const auto& a : f.actions()) acts.push_back(ui * a * u);
  return Flag::from_matrices(f.ring(), f.genus(), std::move(acts));
}

Flag quotient_by_splitting(const Flag& f, int k, std::span<const Residue> v) {
  Flag c = conjugate(f, splitting_basis(f, k, v));
  std::vector<Matrix> acts;
  for (const auto& a : c.actions()) acts.push_back(a.without(k - 1));
  return Flag::from_matrices(f.ring(), f.genus(), std::move(acts));
}

namespace {

std::string flag_key(const Flag& f) {
  std::string key = std::to_string(f.ring().p()) + "/" + std::to_string(f.ring().exponent()) + "/" +
                    std::to_string(f.genus()) + "/" + std::to_string(f.dim()) + ":";
  for (const auto& a : f.actions())
    for (Residue x : a.data()) key += std::to_string(x) + ",";
  return key;
}

class KummerChecker {
 public:
  explicit KummerChecker(const KummerOptions& o) : opts_(o) {}

  KummerVerdict check(const Flag& f) {
    const std::string key = flag_key(f);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    KummerVerdict v = compute(f);
    memo_.emplace(key, v);
    return v;
  }

 private:
  static KummerVerdict no(std::string why) { return {KummerVerdict::Status::NotKummer, std::move(why)}; }

  KummerVerdict compute(const Flag& f) {
    const int d = f.dim();
    // graded pieces
    for (int s = 0; s < f.num_generators(); ++s)
      for (int i = 1; i <= d; ++i) {
        const Residue c = f.character(i, s);
        const bool ok = opts_.relaxed_characters ? c == teichmuller(f.ring(), c) : c == 1 % f.ring().modulus();
        if (!ok) return no("graded piece L_" + std::to_string(i) + " is not trivial");
      }
    if (d == 1) return {KummerVerdict::Status::Kummer, ""};

    // index condition: i_r(k) = i_1(k)
    const FlagIndexTable ir = index_table(f);
    const FlagIndexTable i1 = f.ring().exponent() == 1 ? ir : index_table(reduce(f, 1));
    for (int k = 1; k <= d; ++k)
      if (ir(k) != i1(k))
        return no("i_r(" + std::to_string(k) + ") = " + std::to_string(ir(k)) + " differs from i_1(" +
                  std::to_string(k) + ") = " + std::to_string(i1(k)));

    // index condition, sub-extension form; triples with i > 0 or k < d are covered by the recursion
    if (opts_.all_subextensions && f.ring().exponent() > 1) {
      const Flag f1 = reduce(f, 1);
      for (int j = 1; j < d - 1; ++j)
        if (splits(ExtensionData::standard(f1.module(), j)) && !splits(ExtensionData::standard(f.module(), j)))
          return no("V_" + std::to_string(d) + " / V_" + std::to_string(j) + " splits off mod p but not mod p^r");
    }

    // truncation and quotient
    if (auto v = check(truncate(f)); !v) return wrap(v, "truncation");
    if (auto v = check(quotient_by_first(f)); !v) return wrap(v, "quotient by V_1");

    // quotients by split lines
    for (int k = 2; k <= d; ++k) {
      if (ir(k) != 0) continue;
      auto all = equivariant_splittings(f, k, opts_.splitting_bound);
      if (!all)
        return {KummerVerdict::Status::Inconclusive,
                "more than " + std::to_string(opts_.splitting_bound) + " splittings of L_" + std::to_string(k)};
      const std::string where = "quotient by a splitting of L_" + std::to_string(k);
      if (opts_.splittings == SplittingQuantifier::Every) {
        for (const auto& s : *all)
          if (auto v = check(quotient_by_splitting(f, k, s)); !v) return wrap(v, where);
        continue;
      }
      std::optional<KummerVerdict> worst;
      bool found = false;
      for (const auto& s : *all) {
        KummerVerdict v = check(quotient_by_splitting(f, k, s));
        if (v) {
          found = true;
          break;
        }
        if (!worst || v.status == KummerVerdict::Status::Inconclusive) worst = v;
      }
      if (!found) return wrap(*worst, "every " + where);
    }
    return {KummerVerdict::Status::Kummer, ""};
  }

  static KummerVerdict wrap(const KummerVerdict& inner, const std::string& where) {
    return {inner.status, where + ": " + inner.violation};
  }

  KummerOptions opts_;
  std::map<std::string, KummerVerdict> memo_;
};

}  // namespace

KummerVerdict is_kummer(const Flag& f, const KummerOptions& opts) { return KummerChecker(opts).check(f); }

std::optional<Matrix> flag_isomorphism(const Flag& a, const Flag& b, std::uint64_t bound) {
  if (a.ring() != b.ring() || a.dim() != b.dim() || a.genus() != b.genus()) return std::nullopt;
  const Ring& R = a.ring();
  const int d = a.dim();
  if (a == b) return Matrix::identity(R, d);

  // unknowns: upper triangular entries of X, row-major
  std::vector<std::pair<int, int>> pos;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) pos.emplace_back(i, j);
  const int nu = static_cast<int>(pos.size());
  Matrix sys(R, a.num_generators() * d * d, nu);
  for (int s = 0; s < a.num_generators(); ++s) {
    const Matrix& ra = a.action(s);
    const Matrix& rb = b.action(s);
    for (int u = 0; u < nu; ++u) {
      auto [i, j] = pos[u];
      // (X ρ_a)(i, c) gains ρ_a(j, c); (ρ_b X)(r, j) gains ρ_b(r, i)
      for (int c = 0; c < d; ++c) sys.add_to(s * d * d + i * d + c, u, ra(j, c));
      for (int r = 0; r < d; ++r) sys.add_to(s * d * d + r * d + j, u, -rb(r, i));
    }
  }
  auto ker = kernel(sys);
  auto to_matrix = [&](const Vec& x) {
    Matrix m(R, d, d);
    for (int u = 0; u < nu; ++u) m.set(pos[u].first, pos[u].second, x[u]);
    return m;
  };
  auto unit_diagonal = [&](const Vec& x) {
    for (int u = 0; u < nu; ++u)
      if (pos[u].first == pos[u].second && !R.is_unit(x[u])) return false;
    return true;
  };
  Solution sol{Vec(nu, 0), ker};
  std::optional<Matrix> found;
  if (solution_count(R, sol) <= bound) {
    for_each_solution(R, sol, bound, [&](const Vec& x) {
      if (!found && unit_diagonal(x)) found = to_matrix(x);
    });
    return found;
  }
  // too many to enumerate: sample random combinations
  std::mt19937_64 rng(0x5eed);
  for (std::uint64_t t = 0; t < bound; ++t) {
    Vec x(nu, 0);
    for (const auto& g : ker) x = vec_add(R, x, vec_scale(R, static_cast<Residue>(rng() % R.modulus()), g.vector));
    if (unit_diagonal(x)) return to_matrix(x);
  }
  return std::nullopt;
}

}  // namespace surflift
