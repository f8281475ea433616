#include "surflift/cohomology.hpp"

namespace surflift {

namespace {

Matrix zero_columns(const Ring& ring, int rows) { return Matrix(ring, rows, 0); }

Vec outer(const Ring& ring, std::span<const Residue> a, std::span<const Residue> b) {
  Vec out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = ring.mul(a[i], b[j]);
  return out;
}

// Value of a crossed homomorphism on a single letter.
Vec letter_value(const GModule& m, const std::vector<Vec>& vals, Letter l) {
  const int s = letter_generator(l);
  if (!letter_inverted(l)) return vals[s];
  return vec_scale(m.ring(), -1, m.action_inverse(s).apply(vals[s]));
}

}  // namespace

CochainComplex::CochainComplex(const GModule& m) : module(m), d0(m.ring(), m.num_generators() * m.rank(), m.rank()), d1(m.ring(), m.rank(), m.num_generators() * m.rank()) {
  const Ring& R = m.ring();
  const int n = m.rank();
  const Matrix id = Matrix::identity(R, n);
  for (int s = 0; s < m.num_generators(); ++s) d0.set_block(s * n, 0, m.action(s) - id);

  // Fox derivatives of the relator: a letter s at position j contributes ρ(W_{j-1})
  // to block s, a letter s^-1 contributes -ρ(W_{j-1})ρ(s)^-1.
  Matrix prefix = id;
  for (Letter l : m.presentation().relator()) {
    const int s = letter_generator(l);
    Matrix term = letter_inverted(l) ? -(prefix * m.action_inverse(s)) : prefix;
    d1.set_block(0, s * n, d1.block(0, s * n, n, n) + term);
    prefix = prefix * m.letter(l);
  }
}

std::vector<Vec> split_cochain(const GModule& m, std::span<const Residue> flat) {
  const int n = m.rank();
  if (static_cast<int>(flat.size()) != n * m.num_generators()) throw InvalidInput("1-cochain has the wrong length");
  std::vector<Vec> out;
  for (int s = 0; s < m.num_generators(); ++s) out.emplace_back(flat.begin() + s * n, flat.begin() + (s + 1) * n);
  return out;
}

Vec join_cochain(const std::vector<Vec>& values) {
  Vec flat;
  for (const auto& v : values) flat.insert(flat.end(), v.begin(), v.end());
  return flat;
}

Cohomology::Cohomology(const GModule& m)
    : complex_(m),
      d0_solver_(std::make_shared<LinearSolver>(complex_.d0)),
      d1_solver_(std::make_shared<LinearSolver>(complex_.d1)),
      z1_(d1_solver_),
      h0_(Subquotient::of(kernel_matrix(complex_.d0), zero_columns(m.ring(), m.rank()))),
      h1_(Subquotient::of(kernel_matrix(complex_.d1), complex_.d0)),
      h2_(Subquotient::of(Matrix::identity(m.ring(), m.rank()), complex_.d1)) {}

bool Cohomology::is_cocycle(std::span<const Residue> c) const { return vec_is_zero(complex_.d1.apply(c)); }

std::optional<Vec> Cohomology::coboundary_witness(int degree, std::span<const Residue> c) const {
  if (degree == 1) return d0_solver_->particular(c);
  if (degree == 2) return d1_solver_->particular(c);
  throw InvalidInput("coboundary test only in degrees 1 and 2");
}

Vec Cohomology::class_of(int degree, std::span<const Residue> c) const {
  if (degree == 1) {
    if (!is_cocycle(c)) throw InvalidInput("1-cochain is not a cocycle");
    return h1_.coordinates(c);
  }
  if (degree == 2) return h2_.coordinates(c);
  if (degree == 0) return h0_.coordinates(c);
  throw InvalidInput("degree out of range");
}

bool Cohomology::same_class(int degree, std::span<const Residue> a, std::span<const Residue> b) const {
  return class_of(degree, a) == class_of(degree, b);
}

Vec Cohomology::canonical(int degree, std::span<const Residue> c) const {
  const Subquotient& q = degree == 1 ? h1_ : degree == 2 ? h2_ : h0_;
  return q.from_coordinates(class_of(degree, c));
}

Vec cup(const GModule& a, const GModule& b, std::span<const Residue> u, std::span<const Residue> v) {
  if (a.ring() != b.ring() || a.genus() != b.genus()) throw InvalidInput("cup of incompatible modules");
  const Ring& R = a.ring();
  if (!vec_is_zero(CochainComplex(a).d1.apply(u)) || !vec_is_zero(CochainComplex(b).d1.apply(v)))
    throw InvalidInput("cup product of a non-cocycle");
  const auto uv = split_cochain(a, u);
  const auto vv = split_cochain(b, v);
  const auto rel = a.presentation().relator();

  // Image of the relator 2-cell under the cellular-to-bar chain map:
  //   Σ_{j<n} [W_j | t_{j+1}]  -  Σ_{t_j = s^-1} W_{j-1}[s^-1 | s],
  // evaluated on the cocycle f(g, h) = u(g) ⊗ g·v(h).
  Vec acc(static_cast<std::size_t>(a.rank()) * b.rank(), 0);
  Vec u_prefix(a.rank(), 0);
  Matrix pa = Matrix::identity(R, a.rank());
  Matrix pb = Matrix::identity(R, b.rank());
  for (std::size_t j = 0; j < rel.size(); ++j) {
    const Letter l = rel[j];
    const int s = letter_generator(l);
    if (letter_inverted(l)) {
      Vec left = pa.apply(letter_value(a, uv, l));
      Vec right = pb.apply(b.action_inverse(s).apply(vv[s]));
      acc = vec_sub(R, acc, outer(R, left, right));
    }
    u_prefix = vec_add(R, u_prefix, pa.apply(letter_value(a, uv, l)));
    pa = pa * a.letter(l);
    pb = pb * b.letter(l);
    if (j + 1 < rel.size())
      acc = vec_add(R, acc, outer(R, u_prefix, pb.apply(letter_value(b, vv, rel[j + 1]))));
  }
  return acc;
}

void ExtensionData::validate() const {
  const int na = sub.rank(), nb = total.rank(), nc = quotient.rank();
  const Ring& R = total.ring();
  if (sub.ring() != R || quotient.ring() != R) throw InvalidInput("extension modules over different rings");
  if (na + nc != nb) throw InvalidInput("extension ranks do not add up");
  if (inclusion.rows() != nb || inclusion.cols() != na || projection.rows() != nc || projection.cols() != nb ||
      section.rows() != nb || section.cols() != nc)
    throw InvalidInput("extension maps have wrong shapes");
  if (!(projection * inclusion).is_zero()) throw InvalidInput("projection does not kill the inclusion");
  if (!(projection * section).is_identity()) throw InvalidInput("section is not a right inverse of the projection");
  for (int s = 0; s < total.num_generators(); ++s) {
    if (total.action(s) * inclusion != inclusion * sub.action(s)) throw InvalidInput("inclusion is not equivariant");
    if (projection * total.action(s) != quotient.action(s) * projection)
      throw InvalidInput("projection is not equivariant");
  }
  (void)retraction();
}

Matrix ExtensionData::retraction() const {
  const int na = sub.rank(), nb = total.rank();
  Matrix joint(total.ring(), nb, nb);
  joint.set_block(0, 0, inclusion);
  joint.set_block(0, na, section);
  if (!is_invertible(joint)) throw InvalidInput("inclusion and section do not span the total module");
  return inverse(joint).block(0, 0, na, nb);
}

ExtensionData ExtensionData::standard(const GModule& total, int sub_rank) {
  const int n = total.rank(), k = sub_rank;
  if (k < 0 || k > n) throw InvalidInput("sub rank out of range");
  const Ring& R = total.ring();
  std::vector<Matrix> sa, qa;
  for (const auto& m : total.actions()) {
    if (!m.block(k, 0, n - k, k).is_zero()) throw InvalidInput("leading block is not invariant");
    sa.push_back(m.block(0, 0, k, k));
    qa.push_back(m.block(k, k, n - k, n - k));
  }
  Matrix incl(R, n, k), proj(R, n - k, n), sec(R, n, n - k);
  for (int i = 0; i < k; ++i) incl.set(i, i, 1);
  for (int i = 0; i < n - k; ++i) proj.set(i, k + i, 1), sec.set(k + i, i, 1);
  return ExtensionData{GModule(R, total.genus(), k, sa), total, GModule(R, total.genus(), n - k, qa), incl, proj, sec};
}

Vec extension_class(const ExtensionData& e) {
  const Matrix retr = e.retraction();
  std::vector<Vec> vals;
  for (int s = 0; s < e.total.num_generators(); ++s) {
    Matrix twisted = e.total.action(s) * e.section * e.quotient.action_inverse(s) - e.section;
    vals.push_back(map_to_vec(retr * twisted));
  }
  return join_cochain(vals);
}

std::optional<Matrix> splits(const ExtensionData& e) {
  Cohomology h(hom(e.quotient, e.sub));
  auto m = h.coboundary_witness(1, extension_class(e));
  if (!m) return std::nullopt;
  Matrix f = vec_to_map(e.total.ring(), *m, e.sub.rank(), e.quotient.rank());
  return e.section - e.inclusion * f;
}

Vec connecting(const ExtensionData& e, std::span<const Residue> v) {
  const auto vals = split_cochain(e.quotient, v);
  std::vector<Vec> lifted;
  for (const auto& x : vals) lifted.push_back(e.section.apply(x));
  Vec w = crossed_extend(e.total, lifted, e.total.presentation().relator());
  if (!vec_is_zero(e.projection.apply(w))) throw InvalidInput("connecting map applied to a non-cocycle");
  return e.retraction().apply(w);
}

Vec solve_cup(const ExtensionData& e, std::span<const Residue> target) {
  const Ring& R = e.total.ring();
  if (R.exponent() != 1) throw InvalidInput("solve_cup expects coefficients modulo p");
  Cohomology hc(e.quotient);
  CochainComplex ca(e.sub);
  const auto& basis = hc.cocycle_generators();
  const int k = static_cast<int>(basis.size());
  const int na = e.sub.rank();
  Matrix sys(R, na, k + ca.d1.cols());
  for (int i = 0; i < k; ++i) {
    Vec c = connecting(e, basis[i].vector);
    for (int r = 0; r < na; ++r) sys.set(r, i, c[r]);
  }
  sys.set_block(0, k, ca.d1);
  auto sol = solve(sys, target);
  if (!sol) throw InconsistencyError("no 1-cocycle has the requested connecting image");

  Vec x(sol->particular.begin(), sol->particular.begin() + k);
  std::vector<Vec> free_dirs;
  for (const auto& g : sol->kernel) {
    Vec d(g.vector.begin(), g.vector.begin() + k);
    if (!vec_is_zero(d)) free_dirs.push_back(d);
  }
  if (!free_dirs.empty()) {
    Matrix rows(R, static_cast<int>(free_dirs.size()), k);
    for (std::size_t i = 0; i < free_dirs.size(); ++i)
      for (int j = 0; j < k; ++j) rows.set(static_cast<int>(i), j, free_dirs[i][j]);
    auto ech = echelonize(rows);
    for (std::size_t t = 0; t < ech.pivots.size(); ++t) {
      const int c = ech.pivots[t].column;
      x = vec_sub(R, x, vec_scale(R, x[c], ech.transformed.row(static_cast<int>(t))));
    }
  }
  Vec eps(e.quotient.rank() * e.quotient.num_generators(), 0);
  for (int i = 0; i < k; ++i) eps = vec_add(R, eps, vec_scale(R, x[i], basis[i].vector));

  Vec residual = vec_sub(R, connecting(e, eps), target);
  if (!LinearSolver(ca.d1).particular(residual))
    throw InconsistencyError("solve_cup post-check failed");
  return eps;
}

DemushkinReport demushkin_check(Residue p, int genus) {
  const Ring R(p, 1);
  GModule m = GModule::trivial(R, genus, 1);
  Cohomology h(m);
  const auto& gens = h.h1().generators();
  const int n = static_cast<int>(gens.size());
  Matrix gram(R, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec c = h.class_of(2, cup(m, m, gens[i], gens[j]));
      gram.set(i, j, c.empty() ? 0 : c[0]);
    }
  return DemushkinReport{static_cast<int>(p), genus, n, static_cast<int>(h.h2().generators().size()), gram,
                         diagonalize(gram).rank()};
}

}  // namespace surflift
