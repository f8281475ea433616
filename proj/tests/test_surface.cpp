#include "doctest.h"
#include "support.hpp"
#include "surflift/surface.hpp"

using namespace surflift;
using testing_support::random_invertible;
using testing_support::random_module;
using testing_support::random_vec;

TEST_CASE("words reduce freely") {
  CHECK(Word({1, -1, 2}).letters() == std::vector<Letter>{2});
  CHECK(Word({1, 2, -2, -1}).empty());
  Word w({1, 2, -3});
  CHECK((w * w.inverse()).empty());
  CHECK(w.inverse().letters() == std::vector<Letter>{3, -2, -1});
}

TEST_CASE("relator of genus g") {
  CHECK(Presentation(1).relator() == std::vector<Letter>{1, 2, -1, -2});
  CHECK(Presentation(2).relator() == std::vector<Letter>{1, 2, -1, -2, 3, 4, -3, -4});
  CHECK(Presentation(2).generator_name(3) == "y2");
}

TEST_CASE("evaluate is a homomorphism") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GModule m = random_module(3, 2, 2, 3, seed);
    std::mt19937_64 rng(seed);
    auto rand_word = [&] {
      std::vector<Letter> l;
      for (int i = 0; i < 6; ++i) {
        Letter g = 1 + static_cast<int>(rng() % 4);
        l.push_back(rng() % 2 ? g : -g);
      }
      return Word(l);
    };
    Word a = rand_word(), b = rand_word();
    CHECK(m.evaluate(a * b) == m.evaluate(a) * m.evaluate(b));
    CHECK(m.evaluate(a.inverse()) == inverse(m.evaluate(a)));
    CHECK(m.evaluate(m.presentation().relator()).is_identity());
  }
}

TEST_CASE("relator violations are rejected with the defect") {
  Ring F2(2, 1);
  Matrix x = Matrix::from_rows(F2, {{1, 1}, {0, 1}});
  Matrix y = Matrix::from_rows(F2, {{1, 0}, {1, 1}});
  try {
    GModule(F2, 1, 2, {x, y});
    FAIL("expected RelatorDefect");
  } catch (const RelatorDefect& e) {
    // independent: the commutator computed directly, minus the identity
    CHECK(e.defect() == x * y * inverse(x) * inverse(y) - Matrix::identity(F2, 2));
  }
  CHECK_THROWS_AS(GModule(F2, 1, 2, {x}), InvalidInput);
  CHECK_THROWS_AS(GModule(F2, 1, 2, {x, Matrix::from_rows(F2, {{1, 1}, {1, 1}})}), InvalidInput);
}

TEST_CASE("crossed homomorphism law") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GModule m = random_module(2, 2, 1, 2, seed);
    std::mt19937_64 rng(seed + 100);
    std::vector<Vec> vals{random_vec(m.ring(), 2, rng), random_vec(m.ring(), 2, rng)};
    Word u({1, -2, 1}), v({2, 2, -1});
    Vec lhs = crossed_extend(m, vals, u * v);
    Vec rhs = vec_add(m.ring(), crossed_extend(m, vals, u), m.evaluate(u).apply(crossed_extend(m, vals, v)));
    CHECK(lhs == rhs);
    CHECK(vec_is_zero(crossed_extend(m, vals, Word())));
    CHECK(crossed_extend(m, vals, Word({-1})) == vec_scale(m.ring(), -1, m.action_inverse(0).apply(vals[0])));
  }
}

TEST_CASE("tensor, dual and hom") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    GModule a = random_module(3, 1, 1, 2, seed);
    GModule b = random_module(3, 1, 1, 3, seed + 50);
    GModule t = tensor(a, b);
    CHECK(t.rank() == 6);
    for (int s = 0; s < 2; ++s) {
      CHECK(t.action(s) == kronecker(a.action(s), b.action(s)));
      CHECK(dual(a).action(s) == inverse(a.action(s)).transpose());
    }
    CHECK(dual(dual(a)) == a);

    // g·f = ρ_B f ρ_A^-1 computed directly on random maps
    GModule h = hom(a, b);
    std::mt19937_64 rng(seed);
    Matrix f = testing_support::random_matrix(a.ring(), 3, 2, rng);
    for (int s = 0; s < 2; ++s) {
      Matrix direct = b.action(s) * f * a.action_inverse(s);
      CHECK(vec_to_map(a.ring(), h.action(s).apply(map_to_vec(f)), 3, 2) == direct);
    }
    CHECK(direct_sum(a, b).rank() == 5);
  }
}

TEST_CASE("reduce and trivial modules") {
  GModule m = random_module(2, 3, 2, 2, 7);
  CHECK(reduce(reduce(m, 2), 1) == reduce(m, 1));
  CHECK(GModule::trivial(Ring(5, 1), 3, 4).is_trivial());
  // conjugating a trivial module changes nothing; a nontrivial one stays nontrivial
  std::mt19937_64 rng(1);
  Ring F5(5, 1);
  Matrix u = random_invertible(F5, 2, rng);
  GModule triv = GModule::trivial(F5, 1, 2);
  CHECK(GModule(F5, 1, 2, {inverse(u) * triv.action(0) * u, triv.action(1)}).is_trivial());
  Matrix x = Matrix::from_rows(F5, {{2, 0}, {0, 3}});
  CHECK_FALSE(GModule(F5, 1, 2, {inverse(u) * x * u, triv.action(1)}).is_trivial());
}
