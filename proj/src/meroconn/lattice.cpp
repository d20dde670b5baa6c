#include "holospec/meroconn/lattice.hpp"

#include <stdexcept>

#include "holospec/errors.hpp"

namespace holospec {

std::string dual_var(const std::string& v) {
  if (!v.empty() && v.back() == '\'') return v.substr(0, v.size() - 1);
  return v + "'";
}

namespace {

void swap_columns(LaurentMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// col_dst -= q * col_src
void axpy_column(LaurentMatrix& m, std::size_t dst, std::size_t src, const LaurentPoly& q) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!m(i, src).is_zero()) m(i, dst) -= q * m(i, src);
}

void scale_column(LaurentMatrix& m, std::size_t j, const Rational& s) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) *= s;
}

}  // namespace

LaurentMatrix column_hnf(const LaurentMatrix& gens, LaurentMatrix* transform,
                         std::vector<std::size_t>* pivot_rows) {
  const std::size_t m = gens.rows(), c = gens.cols();
  long s = gens.is_zero() ? 0 : -gens.low();
  LaurentMatrix h = gens.shifted(s);
  LaurentMatrix u = LaurentMatrix::identity(c, gens.var());
  std::vector<std::size_t> piv;
  std::size_t col = 0;
  for (std::size_t i = 0; i < m && col < c; ++i) {
    bool found = false;
    for (;;) {
      std::size_t best = c;
      for (std::size_t j = col; j < c; ++j)
        if (!h(i, j).is_zero() && (best == c || h(i, j).high() < h(i, best).high())) best = j;
      if (best == c) break;
      found = true;
      swap_columns(h, best, col);
      swap_columns(u, best, col);
      bool clean = true;
      for (std::size_t k = col + 1; k < c; ++k) {
        if (h(i, k).is_zero()) continue;
        LaurentPoly q, r;
        divmod(h(i, k), h(i, col), q, r);
        axpy_column(h, k, col, q);
        axpy_column(u, k, col, q);
        if (!h(i, k).is_zero()) clean = false;
      }
      if (clean) break;
    }
    if (!found) continue;
    Rational inv = 1 / h(i, col).leading();
    scale_column(h, col, inv);
    scale_column(u, col, inv);
    piv.push_back(i);
    ++col;
  }
  for (std::size_t p = 0; p < piv.size(); ++p) {
    std::size_t r = piv[p];
    for (std::size_t q = 0; q < p; ++q) {
      if (h(r, q).is_zero()) continue;
      LaurentPoly quo, rem;
      divmod(h(r, q), h(r, p), quo, rem);
      if (quo.is_zero()) continue;
      axpy_column(h, q, p, quo);
      axpy_column(u, q, p, quo);
    }
  }
  LaurentMatrix out(m, col, gens.var());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < col; ++j) out(i, j) = h(i, j).shifted(-s);
  if (transform) *transform = u;
  if (pivot_rows) *pivot_rows = piv;
  return out;
}

namespace {

// Inverse of a square lower-triangular matrix with monomial diagonal.
LaurentMatrix lower_inverse(const LaurentMatrix& h) {
  const std::size_t n = h.rows();
  LaurentMatrix x(n, n, h.var());
  for (std::size_t j = 0; j < n; ++j) {
    const LaurentPoly& d = h(j, j);
    x(j, j) = LaurentPoly::monomial(1 / d.leading(), -d.low());
    for (std::size_t i = j + 1; i < n; ++i) {
      LaurentPoly acc;
      for (std::size_t k = j; k < i; ++k)
        if (!h(i, k).is_zero() && !x(k, j).is_zero()) acc += h(i, k) * x(k, j);
      const LaurentPoly& di = h(i, i);
      x(i, j) = -(acc * LaurentPoly::monomial(1 / di.leading(), -di.low()));
    }
  }
  return x;
}

bool monomial_diagonal(const LaurentMatrix& h) {
  if (h.rows() != h.cols()) return false;
  for (std::size_t i = 0; i < h.rows(); ++i)
    if (!h(i, i).is_monomial()) return false;
  return true;
}

}  // namespace

LaurentMatrix laurent_inverse(const LaurentMatrix& p) {
  if (p.rows() != p.cols()) throw DimensionMismatch("laurent_inverse: non-square");
  LaurentMatrix u;
  std::vector<std::size_t> piv;
  LaurentMatrix h = column_hnf(p, &u, &piv);
  if (h.cols() != p.rows() || !monomial_diagonal(h)) throw std::domain_error("matrix not invertible over Laurent polynomials");
  LaurentMatrix r = u * lower_inverse(h);
  r.set_var(p.var());
  return r;
}

Lattice Lattice::from_ring(const LaurentMatrix& ring_gens, Side side, const std::string& var) {
  Lattice l;
  l.side_ = side;
  std::vector<std::size_t> piv;
  l.h_ = column_hnf(ring_gens, nullptr, &piv);
  if (l.h_.cols() != ring_gens.rows()) throw DimensionMismatch("lattice generators do not have full rank");
  l.basis_ = side == Side::AtZero ? l.h_ : l.h_.flipped();
  l.basis_.set_var(var);
  return l;
}

Lattice::Lattice(const LaurentMatrix& gens, Side side) {
  *this = from_ring(side == Side::AtZero ? gens : gens.flipped(), side, gens.var());
}

Lattice Lattice::standard(std::size_t n, Side side, const std::string& var) {
  return Lattice(LaurentMatrix::identity(n, var), side);
}

bool Lattice::is_lattice() const { return monomial_diagonal(h_); }

std::optional<LaurentVector> Lattice::coordinates(const LaurentVector& v0) const {
  const std::size_t n = rank();
  if (v0.size() != n) throw DimensionMismatch("Lattice::coordinates");
  LaurentVector w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = side_ == Side::AtZero ? v0[i] : v0[i].flipped();
  LaurentVector c(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (w[k].is_zero()) continue;
    LaurentPoly q;
    if (!laurent_divide(w[k], h_(k, k), q) || !q.is_polynomial()) return std::nullopt;
    c[k] = q;
    for (std::size_t i = k; i < n; ++i)
      if (!h_(i, k).is_zero()) w[i] -= q * h_(i, k);
  }
  if (side_ == Side::AtInfinity)
    for (auto& x : c) x = x.flipped();
  return c;
}

bool Lattice::contains(const LaurentVector& v) const { return coordinates(v).has_value(); }

bool Lattice::contains(const Lattice& o) const {
  if (o.side_ != side_) throw std::invalid_argument("Lattice::contains: side mismatch");
  for (std::size_t j = 0; j < o.rank(); ++j)
    if (!contains(o.basis_.column(j))) return false;
  return true;
}

Lattice Lattice::extended(const LaurentMatrix& gens) const {
  if (gens.rows() != rank()) throw DimensionMismatch("Lattice::extended");
  if (gens.cols() == 0) return *this;
  return from_ring(hcat(h_, side_ == Side::AtZero ? gens : gens.flipped()), side_, basis_.var());
}

Lattice Lattice::times_power(long k) const {
  return from_ring(h_.shifted(side_ == Side::AtZero ? k : -k), side_, basis_.var());
}

Lattice Lattice::flipped() const {
  Side s = side_ == Side::AtZero ? Side::AtInfinity : Side::AtZero;
  LaurentMatrix g = basis_.flipped();
  g.set_var(dual_var(basis_.var()));
  return Lattice(g, s);
}

Lattice Lattice::dual() const {
  if (!is_lattice()) throw std::domain_error("dual of a non-lattice module");
  LaurentMatrix d = lower_inverse(h_).transpose();
  return from_ring(d, side_, basis_.var());
}

Lattice operator+(const Lattice& a, const Lattice& b) {
  if (a.side_ != b.side_) throw std::invalid_argument("lattice sum: side mismatch");
  return Lattice::from_ring(hcat(a.h_, b.h_), a.side_, a.basis_.var());
}

Lattice intersect(const Lattice& a, const Lattice& b) {
  if (a.side_ != b.side_) throw std::invalid_argument("lattice intersection: side mismatch");
  return (a.dual() + b.dual()).dual();
}

long colength(const Lattice& big, const Lattice& small) {
  if (!big.contains(small)) throw std::invalid_argument("colength: not a sublattice");
  long d = 0;
  for (std::size_t i = 0; i < big.rank(); ++i) d += small.h_(i, i).high() - big.h_(i, i).high();
  return d;
}

}  // namespace holospec
