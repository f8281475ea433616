#include <filesystem>

#include "doctest.h"
#include "support.hpp"
#include "surflift/error.hpp"
#include "surflift/repfile.hpp"

using namespace surflift;

namespace {

const std::string fixtures = SURFLIFT_FIXTURES;

const std::string unipotent =
    "p = 2\n"
    "r = 1\n"
    "genus = 1\n"
    "dim = 2\n"
    "x1 = [[1,1],[0,1]]\n"
    "y1 = [[1,0],[0,1]]\n";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST_CASE("canonical fixtures round-trip bit-exactly") {
  for (const char* name : {"trivial_f2_g2.rep", "unipotent_d2.rep", "kummer_d3_z4.rep"}) {
    const std::string text = read_text_file(fixtures + "/" + name);
    CHECK(RepFile::parse(text).to_text() == text);
  }
  const std::string coc = read_text_file(fixtures + "/cocycle_d3.coc");
  CHECK(CocycleFile::parse(coc).to_text() == coc);
  CHECK(RepFile::parse(unipotent).to_text() == unipotent);
}

TEST_CASE("random modules round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "surflift_repfile_test";
  std::filesystem::create_directories(dir);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GModule m = testing_support::random_module(seed % 2 ? 3 : 2, 1 + static_cast<int>(seed % 3), 1 + static_cast<int>(seed % 2), 3, seed);
    for (bool chars : {false, true}) {
      RepFile f = RepFile::from_module(m, chars);
      const std::string path = (dir / "m.rep").string();
      f.save(path);
      RepFile g = RepFile::load(path);
      CHECK(g.module() == m);
      CHECK(g.to_text() == f.to_text());
      CHECK(g.characters.has_value() == chars);
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("comments and blank lines are ignored") {
  RepFile f = RepFile::load(fixtures + "/wound_kummer_d3.rep");
  CHECK(f.dim == 3);
  CHECK(f.flag().dim() == 3);
  CHECK(RepFile::parse("# c\n\n" + unipotent).to_text() == unipotent);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(RepFile::load(fixtures + "/malformed.rep"), InvalidInput);
  CHECK_THROWS_AS(RepFile::load(fixtures + "/does_not_exist.rep"), InvalidInput);
  CHECK_THROWS_AS(RepFile::parse(unipotent + "z1 = 3\n"), InvalidInput);         // unknown key
  CHECK_THROWS_AS(RepFile::parse(unipotent + "p = 2\n"), InvalidInput);          // duplicate
  CHECK_THROWS_AS(RepFile::parse(unipotent + "nonsense\n"), InvalidInput);       // no '='
  CHECK_THROWS_AS(RepFile::parse(replace(unipotent, "p = 2", "p = 4")), InvalidInput);
  CHECK_THROWS_AS(RepFile::parse(replace(unipotent, "r = 1", "r = one")), InvalidInput);
  CHECK_THROWS_AS(RepFile::parse(replace(unipotent, "[[1,1],[0,1]]", "[[1,2],[0,1]]")), InvalidInput);
  CHECK_THROWS_AS(RepFile::parse(replace(unipotent, "[[1,1],[0,1]]", "[[1,1,0],[0,1]]")), InvalidInput);
  CHECK_THROWS_AS(RepFile::parse(replace(unipotent, "y1 = [[1,0],[0,1]]\n", "")), InvalidInput);
  CHECK_THROWS_AS(RepFile::parse(replace(unipotent, "[[1,1],[0,1]]", "[[1,1],[1,1]]")).module(), InvalidInput);
  // characters must match the diagonal
  CHECK_THROWS_AS(RepFile::parse(unipotent + "characters = [[1,1],[1,0]]\n").module(), InvalidInput);
  CHECK_NOTHROW(RepFile::parse(unipotent + "characters = [[1,1],[1,1]]\n").module());
}

TEST_CASE("relator failures carry the defect") {
  RepFile f = RepFile::load(fixtures + "/bad_relator.rep");
  try {
    f.module();
    FAIL("expected RelatorDefect");
  } catch (const RelatorDefect& e) {
    const Matrix& x = f.generators[0];
    const Matrix& y = f.generators[1];
    CHECK(e.defect() == x * y * inverse(x) * inverse(y) - Matrix::identity(x.ring(), 2));
    CHECK_FALSE(e.defect().is_zero());
  }
  // flag() additionally wants upper triangular matrices
  CHECK_THROWS_AS(RepFile::parse(replace(unipotent, "y1 = [[1,0],[0,1]]", "y1 = [[1,0],[1,1]]")).flag(), InvalidInput);
}

TEST_CASE("cocycle files") {
  Ring Z9(3, 2);
  Vec c{1, 2, 3, 4, 5, 6, 7, 8};
  CocycleFile f = CocycleFile::from_flat(Z9, 2, 2, c);
  CHECK(f.values.size() == 4);
  CHECK(f.flat() == c);
  CocycleFile g = CocycleFile::parse(f.to_text());
  CHECK(g.flat() == c);
  CHECK(g.to_text() == f.to_text());
  CHECK_THROWS_AS(CocycleFile::parse(replace(f.to_text(), "[1,2]", "[1,9]")), InvalidInput);
  CHECK_THROWS_AS(CocycleFile::parse(replace(f.to_text(), "[1,2],", "")), InvalidInput);
  CHECK_THROWS_AS(CocycleFile::parse(f.to_text() + "x1 = [[1]]\n"), InvalidInput);
}
