#include "surflift/repfile.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace surflift {

namespace {

using Json = nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Ordered key = value lines; duplicates and malformed lines are rejected.
std::map<std::string, std::string> parse_lines(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InvalidInput("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    if (!kv.emplace(key, trim(t.substr(eq + 1))).second)
      throw InvalidInput("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw InvalidInput("missing key '" + key + "'");
  return it->second;
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidInput("key '" + key + "': expected an integer, got '" + v + "'");
  }
}

std::vector<Vec> parse_rows(const std::string& key, const std::string& v, Residue modulus) {
  Json j;
  try {
    j = Json::parse(v);
  } catch (const Json::exception& e) {
    throw InvalidInput("key '" + key + "': " + e.what());
  }
  if (!j.is_array()) throw InvalidInput("key '" + key + "': expected a nested array");
  std::vector<Vec> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw InvalidInput("key '" + key + "': expected a nested array");
    Vec r;
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw InvalidInput("key '" + key + "': entries must be integers");
      const long long e = x.get<long long>();
      if (e < 0 || e >= modulus)
        throw InvalidInput("key '" + key + "': entry " + std::to_string(e) + " outside [0, " + std::to_string(modulus) + ")");
      r.push_back(e);
    }
    rows.push_back(r);
  }
  return rows;
}

std::string format_rows(const std::vector<Vec>& rows) {
  std::string s = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) s += ",";
    s += "[";
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (j) s += ",";
      s += std::to_string(rows[i][j]);
    }
    s += "]";
  }
  return s + "]";
}

struct Header {
  Residue p;
  int r, genus, dim;
};

Header parse_header(const std::map<std::string, std::string>& kv) {
  Header h{parse_int("p", need(kv, "p")), static_cast<int>(parse_int("r", need(kv, "r"))),
           static_cast<int>(parse_int("genus", need(kv, "genus"))), static_cast<int>(parse_int("dim", need(kv, "dim")))};
  if (!is_prime(h.p)) throw InvalidInput("p = " + std::to_string(h.p) + " is not prime");
  if (h.r < 1) throw InvalidInput("r must be at least 1");
  if (h.genus < 1) throw InvalidInput("genus must be at least 1");
  if (h.dim < 1) throw InvalidInput("dim must be at least 1");
  Ring(h.p, h.r);  // modulus range check
  return h;
}

std::string header_text(Residue p, int r, int genus, int dim) {
  return "p = " + std::to_string(p) + "\nr = " + std::to_string(r) + "\ngenus = " + std::to_string(genus) +
         "\ndim = " + std::to_string(dim) + "\n";
}

void check_keys(const std::map<std::string, std::string>& kv, const std::vector<std::string>& allowed) {
  for (const auto& [k, v] : kv) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == k;
    if (!ok) throw InvalidInput("unknown key '" + k + "'");
  }
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

GModule RepFile::module() const {
  const Ring ring(p, r);
  if (static_cast<int>(generators.size()) != 2 * genus) throw InvalidInput("expected 2g generator matrices");
  for (const auto& m : generators) {
    if (m.rows() != dim || m.cols() != dim) throw InvalidInput("generator matrix is not dim x dim");
    if (!is_invertible(m)) throw InvalidInput("generator matrix is not invertible over " + ring.name());
  }
  if (characters) {
    if (static_cast<int>(characters->size()) != 2 * genus) throw InvalidInput("characters: expected one row per generator");
    for (int s = 0; s < 2 * genus; ++s) {
      if (static_cast<int>((*characters)[s].size()) != dim) throw InvalidInput("characters: expected dim entries per row");
      for (int i = 0; i < dim; ++i)
        if ((*characters)[s][i] != generators[s](i, i))
          throw InvalidInput("characters: entry does not match the diagonal of " + Presentation(genus).generator_name(s));
    }
  }
  return GModule(ring, genus, dim, generators);
}

Flag RepFile::flag() const { return Flag(module()); }

RepFile RepFile::from_module(const GModule& m, bool with_characters) {
  RepFile f;
  f.p = m.ring().p();
  f.r = m.ring().exponent();
  f.genus = m.genus();
  f.dim = m.rank();
  f.generators = m.actions();
  if (with_characters) {
    std::vector<Vec> chars;
    for (const auto& a : m.actions()) {
      Vec c;
      for (int i = 0; i < m.rank(); ++i) c.push_back(a(i, i));
      chars.push_back(c);
    }
    f.characters = chars;
  }
  return f;
}

RepFile RepFile::parse(const std::string& text) {
  const auto kv = parse_lines(text);
  const Header h = parse_header(kv);
  const Presentation pres(h.genus);
  std::vector<std::string> allowed{"p", "r", "genus", "dim", "characters"};
  RepFile f;
  f.p = h.p, f.r = h.r, f.genus = h.genus, f.dim = h.dim;
  const Ring ring(h.p, h.r);
  for (int s = 0; s < pres.num_generators(); ++s) {
    const std::string name = pres.generator_name(s);
    allowed.push_back(name);
    auto rows = parse_rows(name, need(kv, name), ring.modulus());
    if (static_cast<int>(rows.size()) != h.dim) throw InvalidInput(name + ": expected " + std::to_string(h.dim) + " rows");
    for (const auto& row : rows)
      if (static_cast<int>(row.size()) != h.dim) throw InvalidInput(name + ": expected " + std::to_string(h.dim) + " columns");
    f.generators.push_back(Matrix::from_rows(ring, rows));
  }
  if (kv.count("characters")) f.characters = parse_rows("characters", kv.at("characters"), ring.modulus());
  check_keys(kv, allowed);
  return f;
}

RepFile RepFile::load(const std::string& path) { return parse(read_text_file(path)); }

std::string RepFile::to_text() const {
  std::string s = header_text(p, r, genus, dim);
  const Presentation pres(genus);
  for (int i = 0; i < static_cast<int>(generators.size()); ++i) {
    std::vector<Vec> rows;
    for (int k = 0; k < generators[i].rows(); ++k) rows.push_back(generators[i].row(k));
    s += pres.generator_name(i) + " = " + format_rows(rows) + "\n";
  }
  if (characters) s += "characters = " + format_rows(*characters) + "\n";
  return s;
}

void RepFile::save(const std::string& path) const { write_text_file(path, to_text()); }

Vec CocycleFile::flat() const { return join_cochain(values); }

CocycleFile CocycleFile::from_flat(const Ring& ring, int genus, int dim, std::span<const Residue> c) {
  CocycleFile f;
  f.p = ring.p(), f.r = ring.exponent(), f.genus = genus, f.dim = dim;
  for (int s = 0; s < 2 * genus; ++s) f.values.emplace_back(c.begin() + s * dim, c.begin() + (s + 1) * dim);
  return f;
}

CocycleFile CocycleFile::parse(const std::string& text) {
  const auto kv = parse_lines(text);
  check_keys(kv, {"p", "r", "genus", "dim", "cocycle"});
  const Header h = parse_header(kv);
  CocycleFile f;
  f.p = h.p, f.r = h.r, f.genus = h.genus, f.dim = h.dim;
  f.values = parse_rows("cocycle", need(kv, "cocycle"), Ring(h.p, h.r).modulus());
  if (static_cast<int>(f.values.size()) != 2 * h.genus) throw InvalidInput("cocycle: expected one row per generator");
  for (const auto& v : f.values)
    if (static_cast<int>(v.size()) != h.dim) throw InvalidInput("cocycle: expected dim entries per row");
  return f;
}

CocycleFile CocycleFile::load(const std::string& path) { return parse(read_text_file(path)); }

std::string CocycleFile::to_text() const {
  return header_text(p, r, genus, dim) + "cocycle = " + format_rows(values) + "\n";
}

void CocycleFile::save(const std::string& path) const { write_text_file(path, to_text()); }

}  // namespace surflift
