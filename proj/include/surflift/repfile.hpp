#pragma once

// Text format for representations and cocycles:
//
//   # comment
//   p = 2
//   r = 1
//   genus = 1
//   dim = 3
//   x1 = [[1,0,1],[0,1,1],[0,0,1]]
//   y1 = [[1,0,0],[0,1,0],[0,0,1]]
//   characters = [[1,1,1],[1,1,1]]      (optional, one diagonal per generator)
//
// A cocycle file has p, r, genus, dim and `cocycle = [[...],[...],...]` with one
// value vector per generator. Saving is canonical, so save(load(text)) == text
// for any canonically written file.

#include <optional>
#include <string>
#include <vector>

#include "surflift/flags.hpp"
#include "surflift/surface.hpp"

namespace surflift {

struct RepFile {
  Residue p = 2;
  int r = 1;
  int genus = 1;
  int dim = 1;
  std::vector<Matrix> generators;
  std::optional<std::vector<Vec>> characters;

  /// Validates entries, invertibility and the relator (RelatorDefect on failure).
  GModule module() const;
  /// As module(), additionally requiring upper triangular generators.
  Flag flag() const;

  static RepFile from_module(const GModule& m, bool with_characters = false);
  static RepFile parse(const std::string& text);
  static RepFile load(const std::string& path);
  std::string to_text() const;
  void save(const std::string& path) const;
};

struct CocycleFile {
  Residue p = 2;
  int r = 1;
  int genus = 1;
  int dim = 1;
  std::vector<Vec> values;  // one per generator

  Vec flat() const;
  static CocycleFile from_flat(const Ring& ring, int genus, int dim, std::span<const Residue> c);
  static CocycleFile parse(const std::string& text);
  static CocycleFile load(const std::string& path);
  std::string to_text() const;
  void save(const std::string& path) const;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace surflift
