#include "surflift/lifting.hpp"

#include <functional>

namespace surflift {

namespace {

// A map from unknowns to defects that is affine over one ring: sampled at zero and
// at the unit vectors.
struct Affine {
  Vec base;
  Matrix linear;
};

Affine linearize(const Ring& ring, int unknowns, int outputs, const std::function<Vec(const Vec&)>& defect) {
  Affine a{defect(Vec(unknowns, 0)), Matrix(ring, outputs, unknowns)};
  for (int j = 0; j < unknowns; ++j) {
    Vec e(unknowns, 0);
    e[j] = 1;
    Vec col = vec_sub(ring, defect(e), a.base);
    for (int i = 0; i < outputs; ++i) a.linear.set(i, j, col[i]);
  }
  return a;
}

std::optional<Vec> solve_affine(const Affine& a) {
  auto sol = solve(a.linear, vec_scale(a.linear.ring(), -1, a.base));
  if (!sol) return std::nullopt;
  return sol->particular;
}

Flag character_flag(const Ring& ring, int genus, const std::vector<Residue>& chi) {
  std::vector<Matrix> acts;
  for (Residue c : chi) acts.push_back(Matrix::from_rows(ring, {{c}}));
  return Flag::from_matrices(ring, genus, std::move(acts));
}

// Teichmüller lift of the i-th graded character (1-based) into `ring`.
Flag teichmuller_character(const Flag& f, int i, const Ring& ring) {
  std::vector<Residue> chi;
  for (int s = 0; s < f.num_generators(); ++s) chi.push_back(teichmuller(ring, f.character(i, s)));
  return character_flag(ring, f.genus(), chi);
}

Ring next_ring(const Ring& r) { return r.with_exponent(r.exponent() + 1); }

void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

void consistent(bool cond, const std::string& what) {
  if (!cond) throw InconsistencyError(what);
}

Flag build_flag(const Ring& ring, int genus, std::vector<Matrix> acts, const std::string& context) {
  try {
    return Flag::from_matrices(ring, genus, std::move(acts));
  } catch (const RelatorDefect& e) {
    throw InconsistencyError(context + ": constructed matrices violate the relator");
  }
}

}  // namespace

ObstructedFlag glue(const Flag& e, const Flag& f) {
  require(e.ring() == f.ring() && e.genus() == f.genus(), "glue: flags over different rings or genera");
  require(e.dim() == f.dim() && e.dim() >= 1, "glue: flags of different dimensions");
  const int d = e.dim();
  if (d >= 2) require(quotient_by_first(e) == truncate(f), "glue: quotient of E differs from the sub of F");
  const Ring& R = e.ring();
  const int g2 = e.num_generators();
  const Presentation pres(e.genus());
  const auto rel = pres.relator();

  auto candidate = [&](const Vec& beta) {
    std::vector<Matrix> acts;
    for (int s = 0; s < g2; ++s) {
      Matrix m(R, d + 1, d + 1);
      m.set_block(1, 1, f.action(s));
      m.set_block(0, 0, e.action(s));
      m.set(0, d, beta[s]);
      acts.push_back(m);
    }
    return acts;
  };
  auto defect = [&](const Vec& beta) {
    auto acts = candidate(beta);
    Matrix prod = Matrix::identity(R, d + 1);
    for (Letter l : rel) {
      const int s = letter_generator(l);
      prod = prod * (letter_inverted(l) ? inverse(acts[s]) : acts[s]);
    }
    return Vec{prod(0, d)};
  };

  GModule coeff = hom(subquotient(f, d - 1, d), subquotient(e, 0, 1));
  Affine a = linearize(R, g2, 1, defect);
  auto beta = solve_affine(a);
  if (!beta) return {std::nullopt, coeff, a.base};
  return {build_flag(R, e.genus(), candidate(*beta), "glue"), coeff, a.base};
}

GModule strictly_upper_adjoint(const Flag& f) {
  const Ring& R = f.ring();
  const int d = f.dim();
  std::vector<std::pair<int, int>> pos;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) pos.emplace_back(i, j);
  const int n = static_cast<int>(pos.size());
  std::vector<Matrix> acts;
  for (int s = 0; s < f.num_generators(); ++s) {
    Matrix act(R, n, n);
    for (int c = 0; c < n; ++c) {
      Matrix x(R, d, d);
      x.set(pos[c].first, pos[c].second, 1);
      Matrix y = f.action(s) * x * f.module().action_inverse(s);
      for (int r = 0; r < n; ++r) act.set(r, c, y(pos[r].first, pos[r].second));
    }
    acts.push_back(act);
  }
  return GModule(R, f.genus(), n, std::move(acts));
}

ObstructedFlag lift_rep(const Flag& f, const std::vector<Vec>& characters) {
  const Ring& R = f.ring();
  const Ring R1 = next_ring(R);
  const Ring Rp = R.with_exponent(1);
  const int d = f.dim(), g2 = f.num_generators(), r = R.exponent();
  require(static_cast<int>(characters.size()) == g2, "lift_rep: one character vector per generator expected");
  std::vector<Matrix> base;
  for (int s = 0; s < g2; ++s) {
    require(static_cast<int>(characters[s].size()) == d, "lift_rep: character vector has the wrong length");
    Matrix m = lift(f.action(s), r + 1);
    for (int i = 0; i < d; ++i) {
      require(R.reduce(characters[s][i]) == f.character(i + 1, s), "lift_rep: prescribed diagonal does not reduce to the flag");
      m.set(i, i, characters[s][i]);
    }
    base.push_back(m);
  }
  std::vector<std::pair<int, int>> pos;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) pos.emplace_back(i, j);
  const int n = static_cast<int>(pos.size());
  const Residue pr = R1.p_power(r);
  const auto rel = Presentation(f.genus()).relator();

  auto candidate = [&](const Vec& eps) {
    std::vector<Matrix> acts;
    for (int s = 0; s < g2; ++s) {
      Matrix t = Matrix::identity(R1, d);
      for (int c = 0; c < n; ++c) t.add_to(pos[c].first, pos[c].second, pr * eps[s * n + c]);
      acts.push_back(base[s] * t);
    }
    return acts;
  };
  auto defect = [&](const Vec& eps) {
    auto acts = candidate(eps);
    Matrix prod = Matrix::identity(R1, d);
    for (Letter l : rel) {
      const int s = letter_generator(l);
      prod = prod * (letter_inverted(l) ? inverse(acts[s]) : acts[s]);
    }
    Matrix e = prod - Matrix::identity(R1, d);
    Vec out(n);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        consistent(e(i, j) % pr == 0, "lift_rep: relator defect is not divisible by p^r");
        if (j <= i) consistent(e(i, j) == 0, "lift_rep: relator defect is not strictly upper triangular");
      }
    for (int c = 0; c < n; ++c) out[c] = Rp.reduce(e(pos[c].first, pos[c].second) / pr);
    return out;
  };

  GModule coeff = strictly_upper_adjoint(reduce(f, 1));
  Affine a = linearize(Rp, g2 * n, n, defect);
  auto eps = solve_affine(a);
  if (!eps) return {std::nullopt, coeff, a.base};
  return {build_flag(R1, f.genus(), candidate(*eps), "lift_rep"), coeff, a.base};
}

ObstructedFlag lift_rep(const Flag& f) {
  std::vector<Vec> chars;
  for (int s = 0; s < f.num_generators(); ++s) {
    Vec c;
    for (int i = 1; i <= f.dim(); ++i) c.push_back(f.character(i, s));
    chars.push_back(c);
  }
  return lift_rep(f, chars);
}

ObstructedFlag gluift(const Flag& f, const Flag& flat, const Flag& sharp) {
  const Ring& R = f.ring();
  const Ring R1 = next_ring(R);
  const Ring Rp = R.with_exponent(1);
  const int n = f.dim(), r = R.exponent(), g2 = f.num_generators();
  require(n >= 2, "gluift: dimension must be at least 2");
  require(flat.ring() == R1 && sharp.ring() == R1, "gluift: lifts must live one level up");
  require(flat.dim() == n - 1 && sharp.dim() == n - 1, "gluift: lifts have the wrong dimension");
  require(reduce(flat, r) == truncate(f), "gluift: flat lift does not reduce to the truncation");
  require(reduce(sharp, r) == quotient_by_first(f), "gluift: sharp lift does not reduce to the quotient");
  if (n >= 3) require(quotient_by_first(flat) == truncate(sharp), "gluift: lifts disagree on their common middle");

  const Residue pr = R1.p_power(r);
  const auto rel = Presentation(f.genus()).relator();
  auto candidate = [&](const Vec& t) {
    std::vector<Matrix> acts;
    for (int s = 0; s < g2; ++s) {
      Matrix m(R1, n, n);
      m.set_block(1, 1, sharp.action(s));
      m.set_block(0, 0, flat.action(s));
      m.set(0, n - 1, f.action(s)(0, n - 1) + pr * t[s]);
      acts.push_back(m);
    }
    return acts;
  };
  auto defect = [&](const Vec& t) {
    auto acts = candidate(t);
    Matrix prod = Matrix::identity(R1, n);
    for (Letter l : rel) {
      const int s = letter_generator(l);
      prod = prod * (letter_inverted(l) ? inverse(acts[s]) : acts[s]);
    }
    Matrix e = prod - Matrix::identity(R1, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!(i == 0 && j == n - 1)) consistent(e(i, j) == 0, "gluift: defect outside the corner");
    consistent(e(0, n - 1) % pr == 0, "gluift: corner defect not divisible by p^r");
    return Vec{Rp.reduce(e(0, n - 1) / pr)};
  };

  const Flag fp = reduce(f, 1);
  GModule coeff = hom(subquotient(fp, n - 1, n), subquotient(fp, 0, 1));
  Affine a = linearize(Rp, g2, 1, defect);
  auto t = solve_affine(a);
  if (!t) return {std::nullopt, coeff, a.base};
  return {build_flag(R1, f.genus(), candidate(*t), "gluift"), coeff, a.base};
}

// --- wound Kummer ---------------------------------------------------------------

namespace {

Flag perturb(const Flag& f, const std::function<void(int, Matrix&)>& edit, const std::string& context) {
  std::vector<Matrix> acts = f.actions();
  for (int s = 0; s < f.num_generators(); ++s) edit(s, acts[s]);
  return build_flag(f.ring(), f.genus(), std::move(acts), context);
}

Vec class_coordinates(const GModule& coeff, std::span<const Residue> c) { return Cohomology(coeff).class_of(2, c); }

Flag lift_wk(const Flag& f, const std::optional<Flag>& flat_in, LiftTrace* trace) {
  const Ring& R = f.ring();
  const Ring R1 = next_ring(R);
  const int d = f.dim(), r = R.exponent();
  if (d == 1) return teichmuller_character(f, 1, R1);

  Flag flat = flat_in ? *flat_in : (d == 2 ? teichmuller_character(f, 1, R1) : lift_wk(truncate(f), std::nullopt, trace));
  Flag sharp = d == 2 ? teichmuller_character(f, 2, R1) : lift_wk(quotient_by_first(f), quotient_by_first(flat), trace);

  if (trace) ++trace->gluift_calls;
  ObstructedFlag g = gluift(f, flat, sharp);
  if (g.ok()) return *g.flag;
  consistent(d > 2, "wound Kummer lift: two-dimensional gluift is obstructed");

  // Adjust ♯ by a central twist Id + p^r ε at the entry linking L_2 to L_d.
  const Flag fp = reduce(f, 1);
  const GModule ld = subquotient(fp, d - 1, d);
  ExtensionData e = ExtensionData::standard(tensor(subquotient(fp, 0, 2), dual(ld)), 1);
  const Ring Rp = fp.ring();
  Vec eps = solve_cup(e, vec_scale(Rp, -1, g.obstruction));
  const Residue pr = R1.p_power(r);
  Flag adjusted = perturb(
      sharp, [&](int s, Matrix& m) { m.add_to(0, d - 2, pr * Rp.mul(fp.character(d, s), eps[s])); },
      "wound Kummer adjustment");

  if (trace) ++trace->gluift_calls;
  ObstructedFlag g2 = gluift(f, flat, adjusted);
  Vec adjusted_class = class_coordinates(g2.coefficients, g2.obstruction);
  if (trace) trace->adjustments.push_back({d, g.obstruction, eps, adjusted_class});
  consistent(g2.ok() && vec_is_zero(adjusted_class), "wound Kummer lift: adjusted obstruction does not vanish");
  return *g2.flag;
}

}  // namespace

Flag lift_wound_kummer(const Flag& f, const std::optional<Flag>& flat, LiftTrace* trace) {
  require(is_wound_kummer(f), "lift_wound_kummer: input is not a wound Kummer flag");
  const int r = f.ring().exponent();
  if (flat) {
    require(f.dim() >= 2 && flat->dim() == f.dim() - 1, "lift_wound_kummer: flat lift has the wrong dimension");
    require(flat->ring() == next_ring(f.ring()), "lift_wound_kummer: flat lift must live one level up");
    require(reduce(*flat, r) == truncate(f), "lift_wound_kummer: flat lift does not reduce to the truncation");
    require(is_wound_kummer(*flat), "lift_wound_kummer: flat lift is not wound Kummer");
  }
  Flag out = lift_wk(f, flat, trace);
  consistent(reduce(out, r) == f, "lift_wound_kummer: result does not reduce to the input");
  if (flat) consistent(truncate(out) == *flat, "lift_wound_kummer: result does not extend the flat lift");
  consistent(is_wound_kummer(out), "lift_wound_kummer: result is not wound Kummer");
  return out;
}

// --- Kummer -------------------------------------------------------------------------

namespace {

class KummerLifter {
 public:
  KummerLifter(LiftTrace* trace, const KummerOptions& opts) : trace_(trace), opts_(opts) {}

  // Lift of f whose quotient by V_1 equals sharp.
  Flag extend_quotient(const Flag& f, const std::optional<Flag>& sharp_in) {
    const Ring& R = f.ring();
    const Ring R1 = next_ring(R);
    const int d = f.dim(), r = R.exponent();
    if (d == 1) return teichmuller_character(f, 1, R1);
    Flag sharp = sharp_in ? *sharp_in : extend_quotient(quotient_by_first(f), std::nullopt);

    Flag out = [&] {
      if (d == 2 && index_table(reduce(f, 1))(2) == 0) {
        // Split mod p, hence mod p^r: the lift must stay split.
        note(d, "base-split");
        auto v = canonical_splitting(f, 2);
        consistent(v.has_value(), "Kummer lift: split two-dimensional flag has no splitting");
        Matrix u = Matrix::identity(R1, 2);
        u.set(0, 1, (*v)[0]);
        std::vector<Matrix> acts;
        for (int s = 0; s < f.num_generators(); ++s)
          acts.push_back(Matrix::from_rows(R1, {{teichmuller(R1, f.character(1, s)), 0}, {0, sharp.action(s)(0, 0)}}));
        return conjugate(build_flag(R1, f.genus(), std::move(acts), "Kummer lift (split base)"), inverse(u));
      }
      if (d == 2) {
        note(d, "base");
        if (trace_) ++trace_->gluift_calls;
        ObstructedFlag g = gluift(f, teichmuller_character(f, 1, R1), sharp);
        consistent(g.ok(), "Kummer lift: two-dimensional gluift is obstructed");
        return *g.flag;
      }
      Flag flat = extend_quotient(truncate(f), truncate(sharp));
      const FlagIndexTable i1 = index_table(reduce(f, 1));
      for (int k = 2; k <= d - 1; ++k)
        if (i1(k) == 0) return branch_a(f, flat, sharp, k);
      if (i1(d) == 0) return branch_b(f, flat, sharp);
      if (i1(d) == 1) return branch_c(f, flat, sharp);
      return branch_d(f, flat, sharp, i1(d));
    }();

    consistent(reduce(out, r) == f, "Kummer lift: result does not reduce to the input");
    consistent(quotient_by_first(out) == sharp, "Kummer lift: result is not compatible with the quotient lift");
    KummerVerdict v = is_kummer(out, opts_);
    if (v.status == KummerVerdict::Status::Inconclusive)
      throw InconclusiveError("Kummer lift: re-check inconclusive: " + v.violation);
    consistent(static_cast<bool>(v), "Kummer lift: " + std::to_string(d) + "-dimensional result is not Kummer (" + v.violation + ")");
    return out;
  }

 private:
  void note(int d, const std::string& b) {
    if (trace_) trace_->branches.push_back("d=" + std::to_string(d) + ":" + b);
  }

  // Some 2 <= k <= d-1 with i_1(k) = 0: split off s(L_k), lift the quotient, and
  // take the fibre product with ♯.
  Flag branch_a(const Flag& f, const Flag& flat, const Flag& sharp, int k) {
    note(f.dim(), "(a)");
    std::string last = "no candidate splitting";
    if (auto out = branch_a_over(f, flat, sharp, k, last)) return *out;
    // With the split-line condition asking only for some good splitting, the splittings of the
    // recursively built ♭ may all be bad. Every Kummer lift of the truncation that is
    // compatible with ♯ is an admissible ♭, so the others are tried as well.
    auto flats = first_row_lifts(truncate(f), truncate(sharp));
    if (!flats) throw InconclusiveError("Kummer lift (a): too many choices of the flat lift to search");
    for (const Flag& other : *flats) {
      if (other == flat || !is_kummer(other, opts_)) continue;
      if (auto out = branch_a_over(f, other, sharp, k, last)) {
        note(f.dim(), "(a):other-flat");
        return *out;
      }
    }
    throw InconsistencyError("Kummer lift (a): no splitting of any flat lift works (" + last + ")");
  }

  // Tries the canonical splitting of ♭ first, then the other equivariant splittings.
  std::optional<Flag> branch_a_over(const Flag& f, const Flag& flat, const Flag& sharp, int k, std::string& last) {
    auto canonical = canonical_splitting(flat, k);
    consistent(canonical.has_value(), "Kummer lift (a): the flat lift does not split at the chosen step");
    auto all = equivariant_splittings(flat, k, opts_.splitting_bound);
    if (!all) throw InconclusiveError("Kummer lift (a): too many splittings of the flat lift to search");
    std::vector<Vec> order{*canonical};
    for (const Vec& v : *all)
      if (v != *canonical) order.push_back(v);
    for (const Vec& v : order) {
      try {
        if (auto out = branch_a_with(f, flat, sharp, k, v)) return out;
        last = "quotients by the splitting are not Kummer";
      } catch (const InconsistencyError& e) {
        last = e.what();
      }
    }
    return std::nullopt;
  }

  // Every lift of f one level up whose quotient by V_1 is sharp and whose first
  // character is the Teichmüller lift. Only the first row is free, and the relator is
  // affine in its p^r-part. std::nullopt when there are more than the bound.
  std::optional<std::vector<Flag>> first_row_lifts(const Flag& f, const Flag& sharp) {
    const int d = f.dim(), g2 = f.num_generators(), r = f.ring().exponent();
    const Ring R1 = sharp.ring();
    const Ring Rp = R1.with_exponent(1);
    const Residue pr = R1.p_power(r);
    const auto rel = f.module().presentation().relator();
    const int nu = g2 * (d - 1);
    auto build = [&](const Vec& t) {
      std::vector<Matrix> acts;
      for (int s = 0; s < g2; ++s) {
        Matrix m(R1, d, d);
        m.set_block(1, 1, sharp.action(s));
        m.set(0, 0, teichmuller(R1, f.character(1, s)));
        for (int j = 1; j < d; ++j) m.set(0, j, f.action(s)(0, j) + pr * t[s * (d - 1) + j - 1]);
        acts.push_back(m);
      }
      return acts;
    };
    auto defect = [&](const Vec& t) {
      auto acts = build(t);
      Matrix w = Matrix::identity(R1, d);
      for (Letter l : rel) w = w * (letter_inverted(l) ? inverse(acts[letter_generator(l)]) : acts[letter_generator(l)]);
      Vec out(d);
      for (int j = 0; j < d; ++j) out[j] = Rp.reduce((w(0, j) - (j == 0 ? 1 : 0) + R1.modulus()) % R1.modulus() / pr);
      return out;
    };
    Affine a = linearize(Rp, nu, d, defect);
    auto sol = solve(a.linear, vec_scale(Rp, -1, a.base));
    std::vector<Flag> out;
    if (!sol) return out;
    if (solution_count(Rp, *sol) > opts_.splitting_bound) return std::nullopt;
    for_each_solution(Rp, *sol, opts_.splitting_bound,
                      [&](const Vec& t) { out.push_back(build_flag(R1, f.genus(), build(t), "Kummer lift (a) flat search")); });
    return out;
  }

  std::optional<Flag> branch_a_with(const Flag& f, const Flag& flat, const Flag& sharp, int k, const Vec& v) {
    const int d = f.dim(), r = f.ring().exponent();
    const Ring R1 = flat.ring();
    Matrix u = Matrix::identity(R1, d);
    for (int i = 0; i < k; ++i) u.set(i, k - 1, v[i]);
    const Flag fc = conjugate(f, reduce(u, r));
    const Flag sc = conjugate(sharp, u.block(1, 1, d - 1, d - 1));
    for (int s = 0; s < f.num_generators(); ++s)
      for (int i = 0; i < k - 1; ++i)
        consistent(fc.action(s)(i, k - 1) == 0, "Kummer lift (a): splitting does not descend");

    auto drop = [](const Flag& x, int idx) {
      std::vector<Matrix> acts;
      for (const auto& a : x.actions()) acts.push_back(a.without(idx));
      return Flag::from_matrices(x.ring(), x.genus(), std::move(acts));
    };
    const Flag nabla_s = drop(fc, k - 1);
    const Flag sharp_s = drop(sc, k - 2);
    if (!is_kummer(nabla_s, opts_) || !is_kummer(sharp_s, opts_)) return std::nullopt;
    auto assemble = [&](const Flag& low) {
      std::vector<Matrix> acts;
      for (int s = 0; s < f.num_generators(); ++s) {
        Matrix m(R1, d, d);
        m.set_block(1, 1, sc.action(s));
        m.set(0, 0, low.action(s)(0, 0));
        for (int j = 1; j < d; ++j)
          if (j != k - 1) m.set(0, j, low.action(s)(0, j < k - 1 ? j : j - 1));
        acts.push_back(m);
      }
      return conjugate(build_flag(R1, f.genus(), std::move(acts), "Kummer lift (a)"), inverse(u));
    };
    const Flag low = extend_quotient(nabla_s, sharp_s);
    Flag out = assemble(low);
    if (is_kummer(out, opts_)) return out;
    // The recursive lift of the split quotient is one of several; any Kummer lift of
    // it compatible with ♯ / s(L_k) is admissible.
    auto lows = first_row_lifts(nabla_s, sharp_s);
    if (!lows) throw InconclusiveError("Kummer lift (a): too many lifts of the split quotient to search");
    for (const Flag& other : *lows) {
      if (other == low || !is_kummer(other, opts_)) continue;
      Flag alt = assemble(other);
      if (is_kummer(alt, opts_)) {
        note(d, "(a):other-quotient");
        return alt;
      }
    }
    return std::nullopt;
  }

  // i_1(d) = 0: the lift is ♭ ⊕ L_d, placed by a splitting compatible with f and ♯.
  Flag branch_b(const Flag& f, const Flag& flat, const Flag& sharp) {
    note(f.dim(), "(b)");
    const int d = f.dim(), r = f.ring().exponent();
    const Ring& R = f.ring();
    const Ring R1 = flat.ring();
    auto vs = splitting_solutions(f, d);
    auto ws = splitting_solutions(sharp, d - 1);
    consistent(vs && ws, "Kummer lift (b): the last step does not split");
    const int ka = static_cast<int>(vs->kernel.size()), kb = static_cast<int>(ws->kernel.size());
    Matrix sys(R, d - 1, ka + kb);
    Vec rhs(d - 1);
    for (int i = 0; i < d - 1; ++i) {
      for (int a = 0; a < ka; ++a) sys.set(i, a, vs->kernel[a].vector[i + 1]);
      for (int b = 0; b < kb; ++b) sys.set(i, ka + b, -ws->kernel[b].vector[i]);
      rhs[i] = ws->particular[i] - vs->particular[i + 1];
    }
    auto sol = solve(sys, rhs);
    consistent(sol.has_value(), "Kummer lift (b): no splitting of f lifts to a splitting of the quotient lift");
    Vec v = vs->particular, w = ws->particular;
    for (int a = 0; a < ka; ++a) v = vec_add(R, v, vec_scale(R, sol->particular[a], vs->kernel[a].vector));
    for (int b = 0; b < kb; ++b) w = vec_add(R1, w, vec_scale(R1, sol->particular[ka + b], ws->kernel[b].vector));

    Matrix u = Matrix::identity(R1, d);
    u.set(0, d - 1, v[0]);
    for (int i = 0; i < d - 1; ++i) u.set(i + 1, d - 1, w[i]);
    std::vector<Matrix> acts;
    for (int s = 0; s < f.num_generators(); ++s) {
      Matrix m(R1, d, d);
      m.set_block(0, 0, flat.action(s));
      m.set(d - 1, d - 1, sharp.action(s)(d - 2, d - 2));
      acts.push_back(m);
    }
    (void)r;
    return conjugate(build_flag(R1, f.genus(), std::move(acts), "Kummer lift (b)"), inverse(u));
  }

  // i_1(d) = 1: L_d splits off V_{d/1}; lift the two-dimensional piece spanned by
  // V_1 and the split copy of L_d, then push out along ♭.
  Flag branch_c(const Flag& f, const Flag& flat, const Flag& sharp) {
    note(f.dim(), "(c)");
    const int d = f.dim(), r = f.ring().exponent();
    const Ring& R = f.ring();
    const Ring R1 = flat.ring();
    auto w = canonical_splitting(sharp, d - 1);
    consistent(w.has_value(), "Kummer lift (c): the quotient lift does not split at its last step");
    Matrix u = Matrix::identity(R1, d);
    for (int i = 0; i < d - 1; ++i) u.set(i + 1, d - 1, (*w)[i]);
    const Flag fc = conjugate(f, reduce(u, r));
    std::vector<Matrix> two;
    for (int s = 0; s < f.num_generators(); ++s) {
      for (int i = 1; i < d - 1; ++i)
        consistent(fc.action(s)(i, d - 1) == 0, "Kummer lift (c): splitting does not descend");
      two.push_back(Matrix::from_rows(R, {{fc.action(s)(0, 0), fc.action(s)(0, d - 1)}, {0, fc.action(s)(d - 1, d - 1)}}));
    }
    const Flag small = Flag::from_matrices(R, f.genus(), std::move(two));
    if (trace_) ++trace_->gluift_calls;
    ObstructedFlag g = gluift(small, subflag(flat, 0, 1), subflag(sharp, d - 2, d - 1));
    consistent(g.ok(), "Kummer lift (c): two-dimensional piece does not lift");

    std::vector<Matrix> acts;
    for (int s = 0; s < f.num_generators(); ++s) {
      Matrix m(R1, d, d);
      m.set_block(0, 0, flat.action(s));
      m.set(0, d - 1, g.flag->action(s)(0, 1));
      m.set(d - 1, d - 1, g.flag->action(s)(1, 1));
      acts.push_back(m);
    }
    return conjugate(build_flag(R1, f.genus(), std::move(acts), "Kummer lift (c)"), inverse(u));
  }

  // i = i_1(d) >= 2: gluift ♭ and ♯, adjusting ♭ by a Baer difference along
  // Hom(V_{d-1/i-1}, L_1) when the first attempt is obstructed.
  Flag branch_d(const Flag& f, const Flag& flat, const Flag& sharp, int i) {
    note(f.dim(), "(d)");
    const int d = f.dim(), r = f.ring().exponent();
    if (trace_) ++trace_->gluift_calls;
    ObstructedFlag g = gluift(f, flat, sharp);
    if (g.ok()) return *g.flag;

    const Flag fp = reduce(f, 1);
    const Ring& Rp = fp.ring();
    const GModule l1 = subquotient(fp, 0, 1);
    const GModule big = hom(subquotient(fp, i - 1, d), l1);
    const GModule small = hom(subquotient(fp, i - 1, d - 1), l1);
    const GModule top = hom(subquotient(fp, d - 1, d), l1);
    const int n = big.rank();
    Matrix incl(Rp, n, 1), proj(Rp, n - 1, n), sec(Rp, n, n - 1);
    incl.set(n - 1, 0, 1);
    for (int j = 0; j < n - 1; ++j) proj.set(j, j, 1), sec.set(j, j, 1);
    ExtensionData e{top, big, small, incl, proj, sec};
    e.validate();

    Vec c = solve_cup(e, vec_scale(Rp, -1, g.obstruction));
    const auto cs = split_cochain(small, c);
    const Residue pr = flat.ring().p_power(r);
    const GModule vj = subquotient(fp, i - 1, d - 1);
    Flag adjusted = perturb(
        flat,
        [&](int s, Matrix& m) {
          Vec tau = vj.action(s).transpose().apply(cs[s]);  // row vector c(s)·ρ_J(s)
          for (int j = 0; j < n - 1; ++j) m.add_to(0, i - 1 + j, pr * tau[j]);
        },
        "Kummer adjustment");

    if (trace_) ++trace_->gluift_calls;
    ObstructedFlag g2 = gluift(f, adjusted, sharp);
    Vec adjusted_class = class_coordinates(g2.coefficients, g2.obstruction);
    if (trace_) trace_->adjustments.push_back({d, g.obstruction, c, adjusted_class});
    consistent(g2.ok() && vec_is_zero(adjusted_class), "Kummer lift (d): adjusted obstruction does not vanish");
    return *g2.flag;
  }

  LiftTrace* trace_;
  KummerOptions opts_;
};

}  // namespace

Flag lift_kummer(const Flag& f, KummerMode mode, const std::optional<Flag>& data, LiftTrace* trace,
                 const KummerOptions& opts) {
  KummerVerdict v = is_kummer(f, opts);
  if (v.status == KummerVerdict::Status::Inconclusive) throw InconclusiveError("lift_kummer: " + v.violation);
  require(static_cast<bool>(v), "lift_kummer: input is not a Kummer flag (" + v.violation + ")");
  const int r = f.ring().exponent();
  if (data) {
    require(f.dim() >= 2 && data->dim() == f.dim() - 1, "lift_kummer: compatible data has the wrong dimension");
    require(data->ring() == next_ring(f.ring()), "lift_kummer: compatible data must live one level up");
    const Flag expect = mode == KummerMode::ExtendQuotient ? quotient_by_first(f) : truncate(f);
    require(reduce(*data, r) == expect, "lift_kummer: compatible data does not reduce to the input");
    KummerVerdict dv = is_kummer(*data, opts);
    require(static_cast<bool>(dv), "lift_kummer: compatible data is not Kummer");
  }
  KummerLifter lifter(trace, opts);
  if (mode == KummerMode::ExtendQuotient) return lifter.extend_quotient(f, data);
  std::optional<Flag> dual_data;
  if (data) dual_data = dual(*data);
  Flag out = dual(lifter.extend_quotient(dual(f), dual_data));
  consistent(reduce(out, r) == f, "lift_kummer: dual lift does not reduce to the input");
  if (data) consistent(truncate(out) == *data, "lift_kummer: dual lift is not compatible with the truncation");
  return out;
}

// --- extensions ---------------------------------------------------------------------

ExtensionData extension_from_class(const GModule& sub, const GModule& quotient, std::span<const Residue> cls) {
  require(sub.ring() == quotient.ring() && sub.genus() == quotient.genus(), "extension: incompatible modules");
  const Ring& R = sub.ring();
  const int na = sub.rank(), nc = quotient.rank();
  const auto vals = split_cochain(hom(quotient, sub), cls);
  std::vector<Matrix> acts;
  for (int s = 0; s < sub.num_generators(); ++s) {
    Matrix m(R, na + nc, na + nc);
    m.set_block(0, 0, sub.action(s));
    m.set_block(na, na, quotient.action(s));
    m.set_block(0, na, vec_to_map(R, vals[s], na, nc) * quotient.action(s));
    acts.push_back(m);
  }
  return ExtensionData::standard(GModule(R, sub.genus(), na + nc, std::move(acts)), na);
}

ExtensionData baer(const ExtensionData& a, const ExtensionData& b, int sign) {
  require(a.sub == b.sub && a.quotient == b.quotient, "baer: extensions have different sub or quotient modules");
  require(sign == 1 || sign == -1, "baer: sign must be +1 or -1");
  const Ring& R = a.total.ring();
  Vec cls = vec_add(R, extension_class(a), vec_scale(R, sign, extension_class(b)));
  return extension_from_class(a.sub, a.quotient, cls);
}

Vec lift_h1_class(const Flag& f, std::span<const Residue> c, LiftTrace* trace) {
  const int d = f.dim(), r = f.ring().exponent();
  const Flag fp = reduce(f, 1);
  const Ring& Rp = fp.ring();
  require(static_cast<int>(c.size()) == d * f.num_generators(), "lift_h1_class: cocycle has the wrong length");
  Vec cp = reduce_vec(f.ring(), c, 1);
  require(Cohomology(fp.module()).is_cocycle(cp), "lift_h1_class: input is not a cocycle");
  const auto vals = split_cochain(fp.module(), cp);
  std::vector<Matrix> acts;
  for (int s = 0; s < f.num_generators(); ++s) {
    Matrix m(Rp, d + 1, d + 1);
    m.set_block(0, 0, fp.action(s));
    for (int i = 0; i < d; ++i) m.set(i, d, vals[s][i]);
    m.set(d, d, 1);
    acts.push_back(m);
  }
  Flag big = build_flag(Rp, f.genus(), std::move(acts), "lift_h1_class");
  for (int j = 1; j < r; ++j) big = lift_kummer(big, KummerMode::ExtendTruncation, reduce(f, j + 1), trace);
  std::vector<Vec> out;
  for (int s = 0; s < f.num_generators(); ++s) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = big.action(s)(i, d);
    out.push_back(v);
  }
  return join_cochain(out);
}

}  // namespace surflift
