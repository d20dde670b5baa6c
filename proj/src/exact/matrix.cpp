#include "holospec/exact/matrix.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "holospec/errors.hpp"

namespace holospec {

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  d_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    d_.insert(d_.end(), r.begin(), r.end());
  }
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::diagonal(const QVector& d) {
  QMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

QMatrix QMatrix::from_columns(const std::vector<QVector>& cols, std::size_t rows) {
  QMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw DimensionMismatch("from_columns");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows, std::size_t cols) {
  QMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DimensionMismatch("from_rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

QVector QMatrix::row(std::size_t i) const {
  return QVector(d_.begin() + static_cast<long>(i * cols_),
                 d_.begin() + static_cast<long>((i + 1) * cols_));
}

QVector QMatrix::column(std::size_t j) const {
  QVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

QMatrix QMatrix::transpose() const {
  QMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

bool QMatrix::is_zero() const {
  return std::all_of(d_.begin(), d_.end(), [](const Rational& q) { return q == 0; });
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("QMatrix product");
  QMatrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += x * b(k, j);
    }
  return m;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("QMatrix sum");
  QMatrix m = a;
  for (std::size_t k = 0; k < m.d_.size(); ++k) m.d_[k] += b.d_[k];
  return m;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("QMatrix difference");
  QMatrix m = a;
  for (std::size_t k = 0; k < m.d_.size(); ++k) m.d_[k] -= b.d_[k];
  return m;
}

QMatrix operator*(const Rational& s, const QMatrix& a) {
  QMatrix m = a;
  for (auto& x : m.d_) x *= s;
  return m;
}

QVector QMatrix::operator*(const QVector& v) const {
  if (v.size() != cols_) throw DimensionMismatch("QMatrix * vector");
  QVector r(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (v[j] != 0) r[i] += (*this)(i, j) * v[j];
  return r;
}

QMatrix QMatrix::rref(std::vector<std::size_t>* pivots) const {
  QMatrix m = *this;
  std::size_t r = 0;
  if (pivots) pivots->clear();
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t p = r;
    while (p < rows_ && m(p, c) == 0) ++p;
    if (p == rows_) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols_; ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < cols_; ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < cols_; ++j) m(i, j) -= f * m(r, j);
    }
    if (pivots) pivots->push_back(c);
    ++r;
  }
  return m;
}

std::size_t QMatrix::rank() const {
  std::vector<std::size_t> piv;
  rref(&piv);
  return piv.size();
}

Rational QMatrix::det() const {
  if (!square()) throw DimensionMismatch("det of non-square matrix");
  QMatrix m = *this;
  Rational d = 1;
  for (std::size_t c = 0; c < rows_; ++c) {
    std::size_t p = c;
    while (p < rows_ && m(p, c) == 0) ++p;
    if (p == rows_) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < cols_; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    for (std::size_t i = c + 1; i < rows_; ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < cols_; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

QMatrix QMatrix::inverse() const {
  if (!square()) throw DimensionMismatch("inverse of non-square matrix");
  std::size_t n = rows_;
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1;
  }
  std::vector<std::size_t> piv;
  QMatrix r = aug.rref(&piv);
  if (piv.size() < n || piv[n - 1] != n - 1) throw std::domain_error("singular matrix");
  return r.block(0, n, n, n);
}

QMatrix QMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  QMatrix m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

Subspace Subspace::span(std::size_t ambient, const std::vector<QVector>& vectors) {
  Subspace s(ambient);
  if (vectors.empty()) return s;
  QMatrix m = QMatrix::from_rows(vectors, ambient);
  std::vector<std::size_t> piv;
  QMatrix r = m.rref(&piv);
  for (std::size_t i = 0; i < piv.size(); ++i) s.basis_.push_back(r.row(i));
  return s;
}

Subspace Subspace::full(std::size_t ambient) {
  std::vector<QVector> e(ambient, QVector(ambient));
  for (std::size_t i = 0; i < ambient; ++i) e[i][i] = 1;
  return span(ambient, e);
}

namespace {
std::size_t pivot_of(const QVector& v) {
  std::size_t j = 0;
  while (j < v.size() && v[j] == 0) ++j;
  return j;
}
}  // namespace

QVector Subspace::coordinates(const QVector& v) const {
  if (v.size() != n_) throw DimensionMismatch("Subspace::coordinates");
  QVector r = v, c(basis_.size());
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    std::size_t p = pivot_of(basis_[k]);
    c[k] = r[p];
    if (c[k] != 0)
      for (std::size_t j = p; j < n_; ++j) r[j] -= c[k] * basis_[k][j];
  }
  for (const auto& x : r)
    if (x != 0) throw std::domain_error("vector not in subspace");
  return c;
}

bool Subspace::contains(const QVector& v) const {
  if (v.size() != n_) throw DimensionMismatch("Subspace::contains");
  QVector r = v;
  for (const auto& b : basis_) {
    std::size_t p = pivot_of(b);
    if (r[p] == 0) continue;
    Rational f = r[p];
    for (std::size_t j = p; j < n_; ++j) r[j] -= f * b[j];
  }
  return std::all_of(r.begin(), r.end(), [](const Rational& q) { return q == 0; });
}

bool Subspace::contains(const Subspace& s) const {
  return std::all_of(s.basis_.begin(), s.basis_.end(), [this](const QVector& v) { return contains(v); });
}

Subspace operator+(const Subspace& a, const Subspace& b) {
  if (a.n_ != b.n_) throw DimensionMismatch("Subspace sum");
  std::vector<QVector> all = a.basis_;
  all.insert(all.end(), b.basis_.begin(), b.basis_.end());
  return Subspace::span(a.n_, all);
}

Subspace kernel(const QMatrix& a) {
  std::vector<std::size_t> piv;
  QMatrix r = a.rref(&piv);
  std::vector<bool> is_piv(a.cols(), false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<QVector> vecs;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_piv[f]) continue;
    QVector v(a.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r(i, f);
    vecs.push_back(std::move(v));
  }
  return Subspace::span(a.cols(), vecs);
}

Subspace column_space(const QMatrix& a) {
  std::vector<QVector> cols;
  for (std::size_t j = 0; j < a.cols(); ++j) cols.push_back(a.column(j));
  return Subspace::span(a.rows(), cols);
}

Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw DimensionMismatch("subspace_intersect: ambient mismatch");
  std::size_t n = a.ambient(), ka = a.dim(), kb = b.dim();
  if (ka == 0 || kb == 0) return Subspace(n);
  // (c, d) with sum c_i a_i = sum d_j b_j
  QMatrix m(n, ka + kb);
  for (std::size_t i = 0; i < ka; ++i)
    for (std::size_t r = 0; r < n; ++r) m(r, i) = a.basis()[i][r];
  for (std::size_t j = 0; j < kb; ++j)
    for (std::size_t r = 0; r < n; ++r) m(r, ka + j) = -b.basis()[j][r];
  Subspace k = kernel(m);
  std::vector<QVector> out;
  for (const auto& cd : k.basis()) {
    QVector v(n);
    for (std::size_t i = 0; i < ka; ++i)
      if (cd[i] != 0)
        for (std::size_t r = 0; r < n; ++r) v[r] += cd[i] * a.basis()[i][r];
    out.push_back(std::move(v));
  }
  return Subspace::span(n, out);
}

LinearSolution solve_linear(const QMatrix& a, const QVector& b) {
  if (b.size() != a.rows()) throw DimensionMismatch("solve_linear: rhs length");
  QMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  std::vector<std::size_t> piv;
  QMatrix r = aug.rref(&piv);
  LinearSolution s;
  s.kernel = kernel(a);
  if (!piv.empty() && piv.back() == a.cols()) return s;
  s.consistent = true;
  s.particular.assign(a.cols(), 0);
  for (std::size_t i = 0; i < piv.size(); ++i) s.particular[piv[i]] = r(i, a.cols());
  return s;
}

LinearSolution solve_linear(const LaurentMatrix& a, const QVector& b) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a(i, j).is_constant()) throw DimensionMismatch("solve_linear: non-scalar entry");
  return solve_linear(a.coeff(0), b);
}

LaurentPoly charpoly(const QMatrix& a) {
  if (!a.square()) throw DimensionMismatch("charpoly of non-square matrix");
  // Faddeev-LeVerrier
  std::size_t n = a.rows();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  QMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    QMatrix am = a * m;
    for (std::size_t i = 0; i < n; ++i) am(i, i) += c[n - k + 1];
    m = am;
    QMatrix t = a * m;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += t(i, i);
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return LaurentPoly::from_coeffs(0, c);
}

namespace {

std::vector<Integer> divisors(Integer n) {
  if (n < 0) n = -n;
  std::vector<Integer> small, large;
  if (n == 0) return {Integer(1)};
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
    if (d > 10000000) throw UnsupportedInput("rational root search: coefficient too large");
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

}  // namespace

std::vector<std::pair<Rational, int>> rational_roots(const LaurentPoly& p0, int* unresolved) {
  std::vector<std::pair<Rational, int>> out;
  if (p0.is_zero()) throw std::domain_error("roots of the zero polynomial");
  LaurentPoly p = p0.shifted(-p0.low());
  if (p0.low() > 0) out.push_back({Rational(0), static_cast<int>(p0.low())});
  if (p0.low() < 0) throw std::logic_error("rational_roots needs a polynomial");
  while (p.high() > 0) {
    // integer coefficients
    Integer l = 1;
    for (const auto& c : p.coeffs()) l = lcm(l, c.get_den());
    Integer a0 = Rational(p.coeff(0) * l).get_num(), an = Rational(p.leading() * l).get_num();
    bool found = false;
    for (const auto& q : divisors(an)) {
      for (const auto& r : divisors(a0)) {
        for (int sgn : {1, -1}) {
          Rational cand(sgn * r, q);
          cand.canonicalize();
          if (p.eval(cand) != 0) continue;
          LaurentPoly lin = LaurentPoly::monomial(1, 1) + LaurentPoly(-cand), quo, rem;
          int mult = 0;
          while (!p.is_zero() && p.high() > 0) {
            divmod(p, lin, quo, rem);
            if (!rem.is_zero()) break;
            p = quo;
            ++mult;
          }
          out.push_back({cand, mult});
          found = true;
          break;
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) break;
  }
  std::sort(out.begin(), out.end());
  // merge duplicates (zero root found twice cannot happen, but keep it tidy)
  std::vector<std::pair<Rational, int>> merged;
  for (auto& r : out) {
    if (!merged.empty() && merged.back().first == r.first) merged.back().second += r.second;
    else merged.push_back(r);
  }
  if (unresolved) *unresolved = static_cast<int>(p.high());
  return merged;
}

namespace {
QMatrix power(const QMatrix& a, int k) {
  QMatrix r = QMatrix::identity(a.rows());
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}
}  // namespace

std::vector<EigenBlock> rational_eigendata(const QMatrix& a) {
  if (!a.square()) throw DimensionMismatch("rational_eigendata: non-square");
  std::size_t n = a.rows();
  std::vector<EigenBlock> out;
  if (n == 0) return out;
  int rest = 0;
  auto roots = rational_roots(charpoly(a), &rest);
  if (rest != 0) throw IrrationalEigenvalue("characteristic polynomial has non-rational roots");
  for (const auto& [lam, mult] : roots) {
    QMatrix s = a - lam * QMatrix::identity(n);
    out.push_back({lam, kernel(power(s, mult))});
  }
  return out;
}

QMatrix spectral_projector(const QMatrix& a, const std::vector<EigenBlock>& blocks, std::size_t k) {
  std::size_t n = a.rows();
  std::vector<QVector> cols;
  std::size_t start = 0, len = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b == k) {
      start = cols.size();
      len = blocks[b].space.dim();
    }
    for (const auto& v : blocks[b].space.basis()) cols.push_back(v);
  }
  QMatrix p = QMatrix::from_columns(cols, n);
  QMatrix d(n, n);
  for (std::size_t i = start; i < start + len; ++i) d(i, i) = 1;
  return p * d * p.inverse();
}

QMatrix solve_sylvester(const QMatrix& a, const QMatrix& b, const QMatrix& c) {
  std::size_t m = a.rows(), n = b.rows();
  if (c.rows() != m || c.cols() != n) throw DimensionMismatch("solve_sylvester");
  // unknown X(i,j) at index i*n + j
  QMatrix k(m * n, m * n);
  QVector rhs(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t row = i * n + j;
      rhs[row] = c(i, j);
      for (std::size_t l = 0; l < m; ++l) k(row, l * n + j) += a(i, l);
      for (std::size_t l = 0; l < n; ++l) k(row, i * n + l) -= b(l, j);
    }
  LinearSolution s = solve_linear(k, rhs);
  if (!s.consistent || s.kernel.dim() != 0) throw std::domain_error("Sylvester equation not uniquely solvable");
  QMatrix x(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = s.particular[i * n + j];
  return x;
}

std::string to_string(const QMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << to_string(m(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace holospec
