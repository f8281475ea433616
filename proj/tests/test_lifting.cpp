#include <algorithm>
#include <map>

#include "doctest.h"
#include "support.hpp"
#include "surflift/lifting.hpp"

using namespace surflift;
using oracle::FlagKind;
using testing_support::all_genus1_flags;
using testing_support::random_flag;

namespace {

const Ring F2(2, 1);

Flag flag_of(const Ring& R, std::vector<std::vector<std::vector<Residue>>> gens) {
  std::vector<Matrix> m;
  for (auto& g : gens) m.push_back(Matrix::from_rows(R, g));
  return Flag::from_matrices(R, static_cast<int>(m.size()) / 2, m);
}

bool contains(const std::vector<Flag>& v, const Flag& f) { return std::find(v.begin(), v.end(), f) != v.end(); }

Flag trivial_flag(const Ring& R, int genus, int d) {
  return Flag::from_matrices(R, genus, std::vector<Matrix>(2 * genus, Matrix::identity(R, d)));
}

// Class of a degree-2 cochain with the given coefficients.
Vec h2_class(const GModule& m, const Vec& c) { return Cohomology(m).class_of(2, c); }

}  // namespace

TEST_CASE("glue: split inputs give the direct sum") {
  Ring Z9(3, 2);
  Flag e = trivial_flag(Z9, 2, 2), f = trivial_flag(Z9, 2, 2);
  ObstructedFlag g = glue(e, f);
  REQUIRE(g.ok());
  CHECK(vec_is_zero(h2_class(g.coefficients, g.obstruction)));
  CHECK(truncate(*g.flag) == e);
  CHECK(quotient_by_first(*g.flag) == f);
}

TEST_CASE("glue: verdicts agree with brute force (g=1, F_2, exhaustive)") {
  int glued = 0, obstructed = 0;
  for (int d = 1; d <= 3; ++d) {
    const Vec ones(d, 1);
    for (const Flag& e : all_genus1_flags(F2, ones, ones))
      for (const Flag& f : all_genus1_flags(F2, ones, ones)) {
        if (d >= 2 && quotient_by_first(e) != truncate(f)) continue;
        ObstructedFlag g = glue(e, f);
        auto all = oracle::brute_glue(e, f);
        CHECK(g.ok() == !all.empty());
        CHECK(g.ok() == vec_is_zero(h2_class(g.coefficients, g.obstruction)));
        if (g.ok()) {
          ++glued;
          CHECK(contains(all, *g.flag));
          CHECK(truncate(*g.flag) == e);
          CHECK(quotient_by_first(*g.flag) == f);
        } else {
          ++obstructed;
        }
      }
  }
  CHECK(glued > 0);
  CHECK(obstructed > 0);
}

TEST_CASE("glue: obstruction is the cup product of the extension classes up to sign") {
  for (Residue p : {2, 3, 5}) {
    const Ring R(p, 1);
    int sign = 0, nonzero = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        // E: generator a acts by [[1,1],[0,1]]; F: generator b does
        auto unip = [&](int gen) {
          std::vector<Matrix> acts(2, Matrix::identity(R, 2));
          acts[gen].set(0, 1, 1);
          return Flag::from_matrices(R, 1, acts);
        };
        Flag e = unip(a), f = unip(b);
        ObstructedFlag g = glue(e, f);
        ExtensionData ee = step_extension(e, 0, 2), ef = step_extension(f, 0, 2);
        Vec cu = cup(hom(ee.quotient, ee.sub), hom(ef.quotient, ef.sub), extension_class(ee), extension_class(ef));
        Residue lhs = h2_class(g.coefficients, g.obstruction)[0];
        Residue rhs = h2_class(g.coefficients, cu)[0];
        if (rhs == 0) {
          CHECK(lhs == 0);
          continue;
        }
        ++nonzero;
        if (sign == 0) sign = lhs == rhs ? 1 : -1;
        CHECK(lhs == R.mul(R.reduce(sign), rhs));
      }
    CHECK(nonzero == 2);
  }
}

TEST_CASE("lift_rep: trivial and exhaustive verdicts") {
  Ring Z9(3, 2);
  ObstructedFlag t = lift_rep(trivial_flag(Z9, 2, 3));
  REQUIRE(t.ok());
  CHECK(*t.flag == trivial_flag(Ring(3, 3), 2, 3));

  int lifted = 0, obstructed = 0;
  for (int d = 1; d <= 3; ++d) {
    const Vec ones(d, 1);
    for (const Flag& f : all_genus1_flags(F2, ones, ones)) {
      ObstructedFlag l = lift_rep(f);
      auto all = oracle::brute_lift(f);
      CHECK(l.ok() == !all.empty());
      CHECK(l.ok() == vec_is_zero(h2_class(l.coefficients, l.obstruction)));
      if (l.ok()) {
        ++lifted;
        CHECK(reduce(*l.flag, 1) == f);
        CHECK(contains(all, *l.flag));
      } else {
        ++obstructed;
      }
    }
  }
  CHECK(lifted > 0);
  // over a surface group every mod-2 flag of this family lifts, so none is obstructed
  CHECK(obstructed == 0);

  // nontrivial obstructions occur mod 4 (genus 1, dimension 3)
  int obstructed4 = 0, total4 = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Flag f = random_flag(2, 2, 3, 1, FlagKind::Any, seed);
    ObstructedFlag l = lift_rep(f);
    auto all = oracle::brute_lift(f);
    CHECK(l.ok() == !all.empty());
    if (l.ok()) CHECK(contains(all, *l.flag));
    obstructed4 += !l.ok();
    ++total4;
  }
  CHECK(total4 == 60);
  MESSAGE("obstructed mod-4 lifts: " << obstructed4 << " of " << total4);
}

TEST_CASE("lift_rep: prescribed diagonal") {
  Ring F3(3, 1);
  Flag f = flag_of(F3, {{{2, 1}, {0, 1}}, {{1, 0}, {0, 1}}});
  ObstructedFlag l = lift_rep(f, {{8, 1}, {1, 1}});
  REQUIRE(l.ok());
  CHECK(l.flag->character(1, 0) == 8);
  CHECK(reduce(*l.flag, 1) == f);
  CHECK_THROWS_AS(lift_rep(f, {{7, 1}, {1, 1}}), InvalidInput);
}

TEST_CASE("gluift: obstruction equals the lifting obstruction in dimension 2") {
  int nonzero = 0, total = 0;
  for (Residue p : {2, 3})
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Flag f = random_flag(p, 1 + seed % 2, 2, 1 + seed % 2, FlagKind::Any, seed);
      const int r = f.ring().exponent();
      const Ring R1(p, r + 1);
      std::mt19937_64 rng(seed);
      // arbitrary lifts of the graded characters, the same for both constructions
      std::vector<Vec> chars(f.num_generators());
      std::vector<Matrix> l1, l2;
      for (int s = 0; s < f.num_generators(); ++s) {
        const Residue c1 = R1.reduce(f.character(1, s) + R1.p_power(r) * static_cast<Residue>(rng() % p));
        const Residue c2 = R1.reduce(f.character(2, s) + R1.p_power(r) * static_cast<Residue>(rng() % p));
        chars[s] = {c1, c2};
        l1.push_back(Matrix::from_rows(R1, {{c1}}));
        l2.push_back(Matrix::from_rows(R1, {{c2}}));
      }
      ObstructedFlag g = gluift(f, Flag::from_matrices(R1, f.genus(), l1), Flag::from_matrices(R1, f.genus(), l2));
      ObstructedFlag l = lift_rep(f, chars);
      CHECK(g.coefficients == l.coefficients);
      CHECK(h2_class(g.coefficients, g.obstruction) == h2_class(l.coefficients, l.obstruction));
      CHECK(g.ok() == l.ok());
      if (g.ok()) CHECK(reduce(*g.flag, r) == f);
      nonzero += !g.ok();
      ++total;
    }
  CHECK(nonzero > 0);
  CHECK(nonzero < total);
}

TEST_CASE("gluift: split and trivial") {
  Ring Z4(2, 2), Z8(2, 3);
  ObstructedFlag g = gluift(trivial_flag(Z4, 1, 3), trivial_flag(Z8, 1, 2), trivial_flag(Z8, 1, 2));
  REQUIRE(g.ok());
  CHECK(*g.flag == trivial_flag(Z8, 1, 3));
  CHECK_THROWS_AS(gluift(trivial_flag(Z4, 1, 3), trivial_flag(Z8, 1, 2), trivial_flag(Ring(2, 4), 1, 2)), InvalidInput);
}

TEST_CASE("lift_wound_kummer: small dimensions") {
  Ring F3(3, 1);
  Flag chi = flag_of(F3, {{{2}}, {{1}}});
  Flag l = lift_wound_kummer(chi);
  CHECK(l.character(1, 0) == 8);

  Flag w2 = flag_of(F2, {{{1, 1}, {0, 1}}, {{1, 0}, {0, 1}}});
  Flag l2 = lift_wound_kummer(w2);
  CHECK(contains(oracle::brute_lift(w2), l2));
  CHECK(is_wound_kummer(l2));

  CHECK_THROWS_AS(lift_wound_kummer(trivial_flag(F2, 1, 2)), InvalidInput);
}

TEST_CASE("lift_wound_kummer: random instances, including adjustments") {
  int adjusted = 0, total = 0;
  for (Residue p : {2, 3})
    for (int d = 1; d <= 4; ++d)
      for (std::uint64_t seed = 0; seed < 15; ++seed) {
        Flag f = random_flag(p, 1 + seed % 2, d, 1 + seed % 2, FlagKind::WoundKummer, seed * 31 + d);
        LiftTrace trace;
        Flag l = lift_wound_kummer(f, std::nullopt, &trace);
        ++total;
        CHECK(reduce(l, f.ring().exponent()) == f);
        CHECK(is_wound_kummer(l));
        for (const auto& a : trace.adjustments) {
          CHECK(vec_is_zero(a.c1_adjusted_class));
          adjusted += !vec_is_zero(h2_class(GModule::trivial(Ring(p, 1), f.genus(), 1), a.c1));
        }
        // with a prescribed compatible truncation
        if (d >= 2) {
          Flag flat = lift_wound_kummer(truncate(f));
          Flag l2 = lift_wound_kummer(f, flat);
          CHECK(truncate(l2) == flat);
          CHECK(reduce(l2, f.ring().exponent()) == f);
        }
      }
  CHECK(total == 120);
  CHECK(adjusted > 0);
}

TEST_CASE("lift_kummer: split, dimension 2, branches") {
  Ring Z9(3, 2);
  CHECK(lift_kummer(trivial_flag(Z9, 1, 3)) == trivial_flag(Ring(3, 3), 1, 3));

  Flag w2 = flag_of(F2, {{{1, 1}, {0, 1}}, {{1, 0}, {0, 1}}});
  Flag l2 = lift_kummer(w2);
  CHECK(contains(oracle::brute_lift(w2), l2));
  CHECK(is_kummer(l2));

  std::map<std::string, int> branches;
  for (Residue p : {2, 3})
    for (int d = 2; d <= 4; ++d)
      for (std::uint64_t seed = 0; seed < 25; ++seed) {
        Flag f = random_flag(p, 1 + seed % 2, d, 1 + seed % 2, FlagKind::Kummer, seed * 17 + d);
        LiftTrace trace;
        Flag l = lift_kummer(f, KummerMode::ExtendQuotient, std::nullopt, &trace);
        CHECK(reduce(l, f.ring().exponent()) == f);
        CHECK(is_kummer(l));
        for (const auto& b : trace.branches) branches[b.substr(b.find(':') + 1)]++;
      }
  for (const char* b : {"(a)", "(b)", "(c)", "(d)", "base", "base-split"}) {
    CAPTURE(b);
    CHECK(branches[b] > 0);
  }
}

TEST_CASE("lift_kummer: every mod-2 Kummer flag of dimension 3, genus 1") {
  // independent: brute force confirms a Kummer lift exists; the algorithm must find one
  int n = 0;
  for (const Flag& f : all_genus1_flags(F2, {1, 1, 1}, {1, 1, 1})) {
    REQUIRE(is_kummer(f));
    bool exists = false;
    for (const Flag& l : oracle::brute_lift(f)) exists = exists || bool(is_kummer(l));
    CHECK(exists);
    Flag l = lift_kummer(f);
    CHECK(contains(oracle::brute_lift(f), l));
    CHECK(is_kummer(l));
    ++n;
  }
  CHECK(n == 40);
}

TEST_CASE("lift_kummer: compatible data and duality") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Flag f = random_flag(seed % 2 ? 3 : 2, 1 + seed % 2, 3 + seed % 2, 1, FlagKind::Kummer, seed);
    const int r = f.ring().exponent();
    Flag sharp = lift_kummer(quotient_by_first(f));
    Flag a = lift_kummer(f, KummerMode::ExtendQuotient, sharp);
    CHECK(quotient_by_first(a) == sharp);
    CHECK(reduce(a, r) == f);

    Flag flat = lift_kummer(truncate(f));
    Flag b = lift_kummer(f, KummerMode::ExtendTruncation, flat);
    CHECK(truncate(b) == flat);
    CHECK(reduce(b, r) == f);
    CHECK(is_kummer(b));

    Flag via_dual = dual(lift_kummer(dual(f), KummerMode::ExtendQuotient, dual(flat)));
    CHECK(flag_isomorphism(b, via_dual).has_value());
  }
  Flag f = random_flag(2, 1, 3, 1, FlagKind::Kummer, 5);
  CHECK_THROWS_AS(lift_kummer(f, KummerMode::ExtendQuotient, truncate(lift_kummer(f))), InvalidInput);
  Flag bad = flag_of(Ring(2, 2), {{{1, 2}, {0, 1}}, {{1, 0}, {0, 1}}});
  CHECK_THROWS_AS(lift_kummer(bad), InvalidInput);
}

TEST_CASE("lift_kummer: any Kummer compatible data is accepted") {
  // independent: the admissible data come from brute force, not from the algorithm
  int runs = 0;
  for (std::uint64_t i = 0; i < 40; ++i) {
    Flag f = random_flag(i % 3 == 2 ? 3 : 2, 1 + static_cast<int>(i / 3 % 2), 3 + static_cast<int>(i % 2), 1,
                         FlagKind::Kummer, 50000 + i);
    const int r = f.ring().exponent();
    for (KummerMode mode : {KummerMode::ExtendQuotient, KummerMode::ExtendTruncation}) {
      const bool q = mode == KummerMode::ExtendQuotient;
      std::vector<Flag> data;
      for (const Flag& l : oracle::brute_lift(q ? quotient_by_first(f) : truncate(f)))
        if (is_kummer(l)) data.push_back(l);
      for (std::size_t j = 0; j < data.size() && j < 4; ++j) {
        const Flag& D = data[j * 7919 % data.size()];
        Flag l = lift_kummer(f, mode, D);
        CHECK(reduce(l, r) == f);
        CHECK((q ? quotient_by_first(l) : truncate(l)) == D);
        CHECK(is_kummer(l));
        ++runs;
      }
    }
  }
  CHECK(runs > 200);

  // a case where the recursively built lift of the split quotient is not usable
  Ring Z4(2, 2);
  Flag f = flag_of(Z4, {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{1, 0, 2}, {0, 1, 3}, {0, 0, 1}}});
  Flag big = flag_of(F2, {{{1, 0, 0, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}},
                          {{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}});
  int admissible = 0;
  for (const Flag& l : oracle::brute_lift(big)) admissible += truncate(l) == f && bool(is_kummer(l));
  CHECK(admissible == 4);
  Flag l = lift_kummer(big, KummerMode::ExtendTruncation, f);
  CHECK(truncate(l) == f);
  CHECK(is_kummer(l));
}

TEST_CASE("baer sum and difference") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Residue p = seed % 2 ? 3 : 2;
    GModule a = testing_support::random_module(p, 1 + seed % 2, 1, 1, seed);
    GModule c = testing_support::random_module(p, 1 + seed % 2, 1, 1, seed + 300);
    Cohomology h(hom(c, a));
    std::mt19937_64 rng(seed);
    auto random_class = [&] {
      Vec z(h.complex().d0.rows(), 0);
      for (const auto& k : h.cocycle_generators())
        z = vec_add(a.ring(), z, vec_scale(a.ring(), static_cast<Residue>(rng() % a.ring().modulus()), k.vector));
      return z;
    };
    Vec x = random_class(), y = random_class();
    ExtensionData ex = extension_from_class(a, c, x), ey = extension_from_class(a, c, y);
    CHECK(h.same_class(1, extension_class(baer(ex, ey, 1)), vec_add(a.ring(), x, y)));
    CHECK(h.same_class(1, extension_class(baer(ex, ey, -1)), vec_sub(a.ring(), x, y)));
    CHECK(splits(baer(ex, ex, -1)).has_value());
    ExtensionData split = extension_from_class(a, c, Vec(x.size(), 0));
    CHECK(h.same_class(1, extension_class(baer(ex, split, 1)), x));
  }
  Ring F3(3, 1);
  GModule one = GModule::trivial(F3, 1, 1), two = GModule::trivial(F3, 1, 2);
  CHECK_THROWS_AS(baer(extension_from_class(one, one, Vec(2, 0)), extension_from_class(one, two, Vec(4, 0)), 1),
                  InvalidInput);
}

TEST_CASE("lift_h1_class") {
  Ring Z8(2, 3);
  Flag one = trivial_flag(Z8, 2, 1);
  Cohomology hp(reduce(one.module(), 1));
  CHECK(vec_is_zero(lift_h1_class(one, Vec(4, 0))));
  // d = 1: every homomorphism Z^4 → F_2 lifts
  oracle::enumerate_vectors(F2, 4, oracle::SearchBudget{}, [&](const Vec& c) {
    Vec l = lift_h1_class(one, c);
    CHECK(Cohomology(one.module()).is_cocycle(l));
    CHECK(hp.same_class(1, reduce_vec(Z8, l, 1), c));
  });

  // d = 2, r = 2, g = 1, p = 2: the reduction map on H^1 is onto
  Ring Z4(2, 2);
  for (const Flag& f : {flag_of(Z4, {{{1, 1}, {0, 1}}, {{1, 0}, {0, 1}}}), trivial_flag(Z4, 1, 2),
                        flag_of(Z4, {{{1, 1}, {0, 1}}, {{1, 1}, {0, 1}}})}) {
    REQUIRE(is_kummer(f));
    auto [image, cocycles] = oracle::brute_h1_reduction_image(f.module());
    CHECK(image == cocycles);
    Cohomology h1(reduce(f.module(), 1)), hr(f.module());
    int checked = 0;
    oracle::enumerate_vectors(F2, 4, oracle::SearchBudget{}, [&](const Vec& c) {
      if (!h1.is_cocycle(c)) return;
      Vec l = lift_h1_class(f, c);
      CHECK(hr.is_cocycle(l));
      CHECK(h1.same_class(1, reduce_vec(Z4, l, 1), c));
      ++checked;
    });
    CHECK(checked == static_cast<int>(cocycles));
  }
  Flag f = trivial_flag(Z4, 1, 2);
  CHECK_THROWS_AS(lift_h1_class(f, Vec{1, 0, 0}), InvalidInput);
}
