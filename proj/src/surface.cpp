#include "surflift/surface.hpp"

namespace surflift {

Word::Word(const std::vector<Letter>& letters) {
  for (Letter l : letters) {
    if (l == 0) throw InvalidInput("zero letter in word");
    if (!letters_.empty() && letters_.back() == -l)
      letters_.pop_back();
    else
      letters_.push_back(l);
  }
}

Word Word::operator*(const Word& o) const {
  std::vector<Letter> all = letters_;
  all.insert(all.end(), o.letters_.begin(), o.letters_.end());
  return Word(all);
}

Word Word::inverse() const {
  std::vector<Letter> inv(letters_.rbegin(), letters_.rend());
  for (auto& l : inv) l = -l;
  return Word(inv);
}

Presentation::Presentation(int g) : genus(g) {
  if (g < 1) throw InvalidInput("genus must be >= 1");
}

std::vector<Letter> Presentation::relator() const {
  std::vector<Letter> r;
  for (int i = 0; i < genus; ++i) {
    const Letter x = 2 * i + 1, y = 2 * i + 2;
    r.insert(r.end(), {x, y, -x, -y});
  }
  return r;
}

std::string Presentation::generator_name(int index) const {
  return (index % 2 == 0 ? "x" : "y") + std::to_string(index / 2 + 1);
}

GModule::GModule(Ring ring, int genus, int rank, std::vector<Matrix> actions)
    : ring_(ring), genus_(genus), rank_(rank), actions_(std::move(actions)) {
  if (genus < 1) throw InvalidInput("genus must be >= 1");
  if (static_cast<int>(actions_.size()) != 2 * genus)
    throw InvalidInput("expected " + std::to_string(2 * genus) + " generator matrices");
  for (const auto& a : actions_) {
    if (a.ring() != ring || a.rows() != rank || a.cols() != rank)
      throw InvalidInput("generator matrix has wrong size or ring");
    inverses_.push_back(inverse(a));
  }
  Matrix rel = evaluate(presentation().relator());
  if (!rel.is_identity())
    throw RelatorDefect("generator matrices violate the surface relator; defect " + (rel - Matrix::identity(ring, rank)).to_string(),
                        rel - Matrix::identity(ring, rank));
}

GModule GModule::trivial(Ring ring, int genus, int rank) {
  return GModule(ring, genus, rank, std::vector<Matrix>(2 * genus, Matrix::identity(ring, rank)));
}

Matrix GModule::evaluate(const std::vector<Letter>& letters) const {
  Matrix m = Matrix::identity(ring_, rank_);
  for (Letter l : letters) m = m * letter(l);
  return m;
}

Matrix GModule::evaluate(const Word& w) const { return evaluate(w.letters()); }

bool GModule::is_trivial() const {
  for (const auto& a : actions_)
    if (!a.is_identity()) return false;
  return true;
}

Vec crossed_extend(const GModule& m, const std::vector<Vec>& values, const std::vector<Letter>& w) {
  if (static_cast<int>(values.size()) != m.num_generators()) throw InvalidInput("one value per generator expected");
  const Ring& R = m.ring();
  Vec acc(m.rank(), 0);
  Matrix prefix = Matrix::identity(R, m.rank());
  for (Letter l : w) {
    const int s = letter_generator(l);
    Vec term = letter_inverted(l) ? vec_scale(R, -1, m.action_inverse(s).apply(values[s])) : values[s];
    acc = vec_add(R, acc, prefix.apply(term));
    prefix = prefix * m.letter(l);
  }
  return acc;
}

GModule tensor(const GModule& a, const GModule& b) {
  if (a.ring() != b.ring() || a.genus() != b.genus()) throw InvalidInput("tensor of incompatible modules");
  std::vector<Matrix> acts;
  for (int s = 0; s < a.num_generators(); ++s) acts.push_back(kronecker(a.action(s), b.action(s)));
  return GModule(a.ring(), a.genus(), a.rank() * b.rank(), std::move(acts));
}

GModule dual(const GModule& a) {
  std::vector<Matrix> acts;
  for (int s = 0; s < a.num_generators(); ++s) acts.push_back(a.action_inverse(s).transpose());
  return GModule(a.ring(), a.genus(), a.rank(), std::move(acts));
}

GModule hom(const GModule& a, const GModule& b) { return tensor(b, dual(a)); }

GModule direct_sum(const GModule& a, const GModule& b) {
  if (a.ring() != b.ring() || a.genus() != b.genus()) throw InvalidInput("direct sum of incompatible modules");
  std::vector<Matrix> acts;
  for (int s = 0; s < a.num_generators(); ++s) {
    Matrix m(a.ring(), a.rank() + b.rank(), a.rank() + b.rank());
    m.set_block(0, 0, a.action(s));
    m.set_block(a.rank(), a.rank(), b.action(s));
    acts.push_back(m);
  }
  return GModule(a.ring(), a.genus(), a.rank() + b.rank(), std::move(acts));
}

GModule reduce(const GModule& m, int s) {
  std::vector<Matrix> acts;
  for (const auto& a : m.actions()) acts.push_back(reduce(a, s));
  return GModule(m.ring().with_exponent(s), m.genus(), m.rank(), std::move(acts));
}

Matrix vec_to_map(const Ring& ring, std::span<const Residue> v, int rows, int cols) {
  if (static_cast<int>(v.size()) != rows * cols) throw InvalidInput("vector does not match map shape");
  Matrix f(ring, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) f.set(i, j, v[i * cols + j]);
  return f;
}

Vec map_to_vec(const Matrix& f) { return f.data(); }

}  // namespace surflift
