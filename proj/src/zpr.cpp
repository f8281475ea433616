#include "surflift/zpr.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>

#include "surflift/error.hpp"

namespace surflift {

bool is_prime(Residue n) {
  if (n < 2) return false;
  for (Residue q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

Ring::Ring(Residue p, int r) : p_(p), r_(r), mod_(1) {
  if (!is_prime(p)) throw InvalidInput("ring characteristic " + std::to_string(p) + " is not prime");
  if (r < 1) throw InvalidInput("ring exponent must be >= 1");
  for (int i = 0; i < r; ++i) {
    mod_ *= p;
    if (mod_ >= (Residue{1} << 30)) throw InvalidInput("modulus p^r exceeds 2^30");
  }
}

int Ring::valuation(Residue a) const {
  a = reduce(a);
  if (a == 0) return r_;
  int v = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

Residue Ring::power(Residue a, std::uint64_t e) const {
  Residue base = reduce(a), acc = reduce(1);
  while (e) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

Residue Ring::inverse(Residue a) const {
  a = reduce(a);
  if (a % p_ == 0) throw InvalidInput("inverse of a non-unit");
  // extended Euclid
  Residue old_r = a, rr = mod_, old_s = 1, s = 0;
  while (rr != 0) {
    Residue q = old_r / rr;
    std::tie(old_r, rr) = std::pair{rr, old_r - q * rr};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
  }
  return reduce(old_s);
}

Residue Ring::p_power(int k) const {
  if (k >= r_) return 0;
  Residue x = 1;
  for (int i = 0; i < k; ++i) x *= p_;
  return x;
}

std::string Ring::name() const {
  return r_ == 1 ? "F_" + std::to_string(p_) : "Z/" + std::to_string(p_) + "^" + std::to_string(r_);
}

// --- Matrix ----------------------------------------------------------------

Matrix::Matrix(Ring ring, int rows, int cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {
  if (rows < 0 || cols < 0) throw InvalidInput("negative matrix dimension");
}

Matrix Matrix::identity(Ring ring, int n) {
  Matrix m(ring, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

Matrix Matrix::from_rows(Ring ring, const std::vector<std::vector<Residue>>& rows) {
  const int nr = static_cast<int>(rows.size());
  const int nc = nr ? static_cast<int>(rows[0].size()) : 0;
  Matrix m(ring, nr, nc);
  for (int i = 0; i < nr; ++i) {
    if (static_cast<int>(rows[i].size()) != nc) throw InvalidInput("ragged matrix rows");
    for (int j = 0; j < nc; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

Matrix Matrix::column(Ring ring, std::span<const Residue> v) {
  Matrix m(ring, static_cast<int>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m.set(static_cast<int>(i), 0, v[i]);
  return m;
}

Matrix Matrix::from_columns(Ring ring, int rows, const std::vector<Vec>& cols) {
  Matrix m(ring, rows, static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (static_cast<int>(cols[j].size()) != rows) throw InvalidInput("column length mismatch");
    for (int i = 0; i < rows; ++i) m.set(i, static_cast<int>(j), cols[j][i]);
  }
  return m;
}

Vec Matrix::col(int j) const {
  Vec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vec Matrix::row(int i) const { return Vec(data_.begin() + index(i, 0), data_.begin() + index(i, 0) + cols_); }

static void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.ring() != b.ring() || a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidInput("matrix shape or ring mismatch");
}

Matrix Matrix::operator+(const Matrix& o) const {
  require_same_shape(*this, o);
  Matrix m(*this);
  for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = ring_.add(data_[k], o.data_[k]);
  return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
  require_same_shape(*this, o);
  Matrix m(*this);
  for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = ring_.sub(data_[k], o.data_[k]);
  return m;
}

Matrix Matrix::operator-() const { return scaled(-1); }

Matrix Matrix::operator*(const Matrix& o) const {
  if (ring_ != o.ring_ || cols_ != o.rows_) throw InvalidInput("matrix product shape or ring mismatch");
  Matrix m(ring_, rows_, o.cols_);
  const Residue mod = ring_.modulus();
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Residue a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        Residue& t = m.data_[m.index(i, j)];
        t = (t + a * o(k, j)) % mod;
      }
    }
  return m;
}

Matrix Matrix::scaled(Residue c) const {
  Matrix m(*this);
  for (auto& x : m.data_) x = ring_.mul(x, ring_.reduce(c));
  return m;
}

Vec Matrix::apply(std::span<const Residue> v) const {
  if (static_cast<int>(v.size()) != cols_) throw InvalidInput("matrix-vector shape mismatch");
  Vec out(rows_, 0);
  for (int i = 0; i < rows_; ++i) {
    Residue acc = 0;
    for (int j = 0; j < cols_; ++j) acc = (acc + (*this)(i, j) * ring_.reduce(v[j])) % ring_.modulus();
    out[i] = acc;
  }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix m(ring_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m.data_[m.index(j, i)] = (*this)(i, j);
  return m;
}

Matrix Matrix::block(int r0, int c0, int nr, int nc) const {
  if (r0 < 0 || c0 < 0 || nr < 0 || nc < 0 || r0 + nr > rows_ || c0 + nc > cols_)
    throw InvalidInput("block out of range");
  Matrix m(ring_, nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) m.data_[m.index(i, j)] = (*this)(r0 + i, c0 + j);
  return m;
}

void Matrix::set_block(int r0, int c0, const Matrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw InvalidInput("block out of range");
  for (int i = 0; i < b.rows_; ++i)
    for (int j = 0; j < b.cols_; ++j) set(r0 + i, c0 + j, b(i, j));
}

Matrix Matrix::without(int k) const {
  Matrix m(ring_, rows_ - 1, cols_ - 1);
  for (int i = 0, ii = 0; i < rows_; ++i) {
    if (i == k) continue;
    for (int j = 0, jj = 0; j < cols_; ++j) {
      if (j == k) continue;
      m.data_[m.index(ii, jj++)] = (*this)(i, j);
    }
    ++ii;
  }
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Residue x) { return x == 0; });
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if ((*this)(i, j) != (i == j ? ring_.reduce(1) : 0)) return false;
  return true;
}

bool Matrix::is_upper_triangular() const {
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < std::min(i, cols_); ++j)
      if ((*this)(i, j) != 0) return false;
  return true;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < rows_; ++i) {
    if (i) os << ", ";
    os << '[';
    for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) { return os << m.to_string(); }

Matrix reduce(const Matrix& m, int s) {
  if (s < 1 || s > m.ring().exponent()) throw InvalidInput("reduction exponent out of range");
  Ring target = m.ring().with_exponent(s);
  Matrix out(target, m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.set(i, j, m(i, j));
  return out;
}

Matrix lift(const Matrix& m, int s) {
  if (s < m.ring().exponent()) throw InvalidInput("lift exponent below current exponent");
  Ring target = m.ring().with_exponent(s);
  Matrix out(target, m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.set(i, j, m(i, j));
  return out;
}

Vec reduce_vec(const Ring& ring, std::span<const Residue> v, int s) {
  const Residue mod = ring.with_exponent(s).modulus();
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = ((v[i] % mod) + mod) % mod;
  return out;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  if (a.ring() != b.ring()) throw InvalidInput("kronecker ring mismatch");
  Matrix m(a.ring(), a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const Residue x = a(i, j);
      if (x == 0) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) m.set(i * b.rows() + k, j * b.cols() + l, x * b(k, l));
    }
  return m;
}

Vec vec_add(const Ring& ring, std::span<const Residue> a, std::span<const Residue> b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ring.add(a[i], b[i]);
  return out;
}

Vec vec_sub(const Ring& ring, std::span<const Residue> a, std::span<const Residue> b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ring.sub(a[i], b[i]);
  return out;
}

Vec vec_scale(const Ring& ring, Residue c, std::span<const Residue> a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ring.mul(c, a[i]);
  return out;
}

bool vec_is_zero(std::span<const Residue> v) {
  return std::all_of(v.begin(), v.end(), [](Residue x) { return x == 0; });
}

// --- elimination -------------------------------------------------------------

namespace {

void swap_rows(Matrix& m, int a, int b) {
  if (a == b) return;
  for (int j = 0; j < m.cols(); ++j) {
    Residue t = m(a, j);
    m.set(a, j, m(b, j));
    m.set(b, j, t);
  }
}

void swap_cols(Matrix& m, int a, int b) {
  if (a == b) return;
  for (int i = 0; i < m.rows(); ++i) {
    Residue t = m(i, a);
    m.set(i, a, m(i, b));
    m.set(i, b, t);
  }
}

// row_dst += c * row_src
void axpy_row(Matrix& m, int dst, int src, Residue c) {
  if (c == 0) return;
  for (int j = 0; j < m.cols(); ++j) m.add_to(dst, j, c * m(src, j));
}

void axpy_col(Matrix& m, int dst, int src, Residue c) {
  if (c == 0) return;
  for (int i = 0; i < m.rows(); ++i) m.add_to(i, dst, c * m(i, src));
}

void scale_row(Matrix& m, int i, Residue c) {
  for (int j = 0; j < m.cols(); ++j) m.set(i, j, m(i, j) * c);
}

}  // namespace

Diagonalization diagonalize(const Matrix& a) {
  const Ring& R = a.ring();
  const int m = a.rows(), n = a.cols();
  Diagonalization out{Matrix::identity(R, m), Matrix::identity(R, n), a, {}};
  Matrix& D = out.D;
  for (int t = 0; t < std::min(m, n); ++t) {
    int best_v = R.exponent(), bi = -1, bj = -1;
    for (int i = t; i < m && best_v > 0; ++i)
      for (int j = t; j < n; ++j) {
        int v = R.valuation(D(i, j));
        if (v < best_v) {
          best_v = v, bi = i, bj = j;
          if (v == 0) break;
        }
      }
    if (bi < 0) break;
    swap_rows(D, t, bi);
    swap_rows(out.P, t, bi);
    swap_cols(D, t, bj);
    swap_cols(out.Q, t, bj);
    const Residue pv = R.p_power(best_v);
    const Residue u = R.inverse(D(t, t) / pv);
    scale_row(D, t, u);
    scale_row(out.P, t, u);
    for (int i = t + 1; i < m; ++i) {
      const Residue q = D(i, t) / pv;
      axpy_row(D, i, t, -q);
      axpy_row(out.P, i, t, -q);
    }
    for (int j = t + 1; j < n; ++j) {
      const Residue q = D(t, j) / pv;
      axpy_col(D, j, t, -q);
      axpy_col(out.Q, j, t, -q);
    }
    out.valuations.push_back(best_v);
  }
  return out;
}

LinearSolver::LinearSolver(const Matrix& a) : a_(a), diag_(diagonalize(a)) {
  const Ring& R = a.ring();
  const int n = a.cols();
  for (int i = 0; i < n; ++i) {
    int v = i < diag_.rank() ? diag_.valuations[i] : 0;
    bool free_col = i >= diag_.rank();
    if (!free_col && v == 0) continue;
    Vec e(n, 0);
    e[i] = free_col ? 1 : R.p_power(R.exponent() - v);
    kernel_.push_back({diag_.Q.apply(e), free_col ? R.exponent() : v});
  }
}

std::optional<Vec> LinearSolver::particular(std::span<const Residue> b) const {
  const Ring& R = a_.ring();
  if (static_cast<int>(b.size()) != a_.rows()) throw InvalidInput("right-hand side length mismatch");
  Vec c = diag_.P.apply(b);
  Vec y(a_.cols(), 0);
  for (int i = 0; i < a_.rows(); ++i) {
    if (i < diag_.rank()) {
      const int v = diag_.valuations[i];
      if (R.valuation(c[i]) < v) return std::nullopt;
      y[i] = c[i] / R.p_power(v);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return diag_.Q.apply(y);
}

std::optional<Solution> LinearSolver::solve(std::span<const Residue> b) const {
  auto x = particular(b);
  if (!x) return std::nullopt;
  return Solution{std::move(*x), kernel_};
}

std::optional<Solution> solve(const Matrix& a, std::span<const Residue> b) { return LinearSolver(a).solve(b); }

std::vector<KernelGenerator> kernel(const Matrix& a) { return LinearSolver(a).kernel(); }

Matrix kernel_matrix(const Matrix& a) {
  std::vector<Vec> cols;
  for (auto& g : kernel(a)) cols.push_back(g.vector);
  return Matrix::from_columns(a.ring(), a.cols(), cols);
}

std::uint64_t solution_count(const Ring& ring, const Solution& sol) {
  constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max() / 1024;
  std::uint64_t count = 1;
  for (auto& g : sol.kernel)
    for (int e = 0; e < g.order_exponent; ++e) {
      count *= static_cast<std::uint64_t>(ring.p());
      if (count > cap) return cap;
    }
  return count;
}

EchelonResult echelonize(const Matrix& a) {
  const Ring& R = a.ring();
  const int m = a.rows(), n = a.cols();
  EchelonResult out{a, Matrix::identity(R, m), {}};
  Matrix& H = out.transformed;
  Matrix& T = out.transform;
  int t = 0;
  for (int c = 0; c < n && t < m; ++c) {
    int best_v = R.exponent(), bi = -1;
    for (int i = t; i < m; ++i) {
      int v = R.valuation(H(i, c));
      if (v < best_v) best_v = v, bi = i;
    }
    if (bi < 0) continue;
    swap_rows(H, t, bi);
    swap_rows(T, t, bi);
    const Residue pv = R.p_power(best_v);
    const Residue u = R.inverse(H(t, c) / pv);
    scale_row(H, t, u);
    scale_row(T, t, u);
    for (int i = 0; i < m; ++i) {
      if (i == t) continue;
      const Residue q = H(i, c) / pv;  // below: exact; above: floor, leaving the residue mod p^v
      axpy_row(H, i, t, -q);
      axpy_row(T, i, t, -q);
    }
    out.pivots.push_back({c, best_v});
    ++t;
  }
  return out;
}

Residue teichmuller(const Ring& ring, Residue a) {
  if (ring.reduce(a) % ring.p() == 0) throw InvalidInput("teichmuller of a non-unit");
  return ring.power(a, static_cast<std::uint64_t>(ring.modulus() / ring.p()));
}

Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("inverse of a non-square matrix");
  auto d = diagonalize(m);
  if (d.rank() != m.rows() || std::any_of(d.valuations.begin(), d.valuations.end(), [](int v) { return v != 0; }))
    throw InvalidInput("matrix is not invertible over " + m.ring().name());
  return d.Q * d.P;
}

bool is_invertible(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  auto d = diagonalize(m);
  return d.rank() == m.rows() &&
         std::all_of(d.valuations.begin(), d.valuations.end(), [](int v) { return v == 0; });
}

// --- Subquotient ---------------------------------------------------------------

Subquotient Subquotient::of(const Matrix& numerator, const Matrix& denominator) {
  const Ring& R = numerator.ring();
  if (denominator.ring() != R || denominator.rows() != numerator.rows())
    throw InvalidInput("subquotient shape mismatch");
  Subquotient sq(R, numerator.rows());
  sq.numerator_ = std::make_shared<LinearSolver>(numerator);
  const int a = numerator.cols(), b = denominator.cols();
  Matrix joint(R, numerator.rows(), a + b);
  joint.set_block(0, 0, numerator);
  joint.set_block(0, a, denominator);
  std::vector<Vec> rel;
  for (auto& g : kernel(joint)) rel.emplace_back(g.vector.begin(), g.vector.begin() + a);
  Matrix relations = Matrix::from_columns(R, a, rel);
  auto d = diagonalize(relations);
  Matrix pinv = inverse(d.P);
  std::vector<int> kept;
  for (int i = 0; i < a; ++i) {
    int e = i < d.rank() ? d.valuations[i] : R.exponent();
    if (e == 0) continue;
    kept.push_back(i);
    sq.generators_.push_back(numerator.apply(pinv.col(i)));
    sq.exponents_.push_back(e);
  }
  sq.coord_map_ = Matrix(R, static_cast<int>(kept.size()), a);
  for (std::size_t k = 0; k < kept.size(); ++k)
    for (int j = 0; j < a; ++j) sq.coord_map_.set(static_cast<int>(k), j, d.P(kept[k], j));
  return sq;
}

int Subquotient::log_order() const {
  int s = 0;
  for (int e : exponents_) s += e;
  return s;
}

bool Subquotient::in_numerator(std::span<const Residue> z) const { return numerator_->particular(z).has_value(); }

Vec Subquotient::coordinates(std::span<const Residue> z) const {
  auto x = numerator_->particular(z);
  if (!x) throw InvalidInput("element does not lie in the numerator module");
  Vec c = coord_map_.apply(*x);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] %= ring_.with_exponent(exponents_[i]).modulus();
  return c;
}

Vec Subquotient::from_coordinates(std::span<const Residue> coords) const {
  Vec z(ambient_, 0);
  for (std::size_t i = 0; i < generators_.size(); ++i)
    z = vec_add(ring_, z, vec_scale(ring_, coords[i], generators_[i]));
  return z;
}

Vec Subquotient::canonical(std::span<const Residue> z) const { return from_coordinates(coordinates(z)); }

}  // namespace surflift
