#include "holospec/exact/laurent.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "holospec/errors.hpp"
#include "holospec/exact/matrix.hpp"

namespace holospec {

LaurentPoly::LaurentPoly(const Rational& c) {
  if (c != 0) c_.push_back(c);
}

LaurentPoly LaurentPoly::monomial(const Rational& c, long e) {
  LaurentPoly p(c);
  if (!p.is_zero()) p.low_ = e;
  return p;
}

LaurentPoly LaurentPoly::from_coeffs(long low, std::vector<Rational> c) {
  LaurentPoly p;
  p.low_ = low;
  p.c_ = std::move(c);
  p.normalize();
  return p;
}

void LaurentPoly::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
  std::size_t lead = 0;
  while (lead < c_.size() && c_[lead] == 0) ++lead;
  if (lead) {
    c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
    low_ += static_cast<long>(lead);
  }
  if (c_.empty()) low_ = 0;
}

long LaurentPoly::low() const {
  if (is_zero()) throw std::logic_error("low() of zero Laurent polynomial");
  return low_;
}

long LaurentPoly::high() const {
  if (is_zero()) throw std::logic_error("high() of zero Laurent polynomial");
  return low_ + static_cast<long>(c_.size()) - 1;
}

Rational LaurentPoly::coeff(long e) const {
  if (is_zero() || e < low_ || e > high()) return 0;
  return c_[static_cast<std::size_t>(e - low_)];
}

LaurentPoly LaurentPoly::shifted(long k) const {
  LaurentPoly p = *this;
  if (!p.is_zero()) p.low_ += k;
  return p;
}

LaurentPoly LaurentPoly::flipped() const {
  if (is_zero()) return {};
  std::vector<Rational> c(c_.rbegin(), c_.rend());
  return from_coeffs(-high(), std::move(c));
}

LaurentPoly LaurentPoly::euler() const {
  LaurentPoly p = *this;
  for (std::size_t i = 0; i < p.c_.size(); ++i) p.c_[i] *= low_ + static_cast<long>(i);
  p.normalize();
  return p;
}

LaurentPoly LaurentPoly::truncated(long lo, long hi) const {
  if (is_zero() || hi < lo) return {};
  long a = std::max(lo, low_), b = std::min(hi, high());
  if (a > b) return {};
  std::vector<Rational> c(c_.begin() + (a - low_), c_.begin() + (b - low_) + 1);
  return from_coeffs(a, std::move(c));
}

LaurentPoly LaurentPoly::substitute_affine(const Rational& a, const Rational& b) const {
  if (!is_polynomial()) throw std::logic_error("substitute_affine on non-polynomial");
  LaurentPoly r, lin = LaurentPoly::monomial(a, 1) + LaurentPoly(b);
  if (is_zero()) return r;
  for (long e = high(); e >= 0; --e) r = r * lin + LaurentPoly(coeff(e));
  return r;
}

Rational LaurentPoly::eval(const Rational& x) const {
  if (is_zero()) return 0;
  if (x == 0) {
    if (low_ < 0) throw std::domain_error("evaluating negative power at 0");
    return coeff(0);
  }
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  Rational scale = 1;
  Rational base = low_ >= 0 ? x : Rational(1) / x;
  for (long i = 0; i < std::abs(low_); ++i) scale *= base;
  return acc * scale;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  long lo = std::min(low_, o.low_), hi = std::max(high(), o.high());
  std::vector<Rational> c(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t i = 0; i < c_.size(); ++i) c[static_cast<std::size_t>(low_ - lo) + i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) c[static_cast<std::size_t>(o.low_ - lo) + i] += o.c_[i];
  low_ = lo;
  c_ = std::move(c);
  normalize();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly& LaurentPoly::operator*=(const Rational& s) {
  if (s == 0) {
    c_.clear();
    low_ = 0;
    return *this;
  }
  for (auto& c : c_) c *= s;
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return LaurentPoly::from_coeffs(a.low_ + b.low_, std::move(c));
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p = *this;
  for (auto& c : p.c_) c = -c;
  return p;
}

void divmod(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly& q, LaurentPoly& r) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (!a.is_polynomial() || !b.is_polynomial()) throw std::logic_error("divmod needs polynomials");
  q = LaurentPoly();
  r = a;
  long db = b.high();
  Rational lb = b.leading();
  while (!r.is_zero() && r.high() >= db) {
    LaurentPoly t = LaurentPoly::monomial(r.leading() / lb, r.high() - db);
    q += t;
    r -= t * b;
  }
}

LaurentPoly monic(const LaurentPoly& p) {
  if (p.is_zero()) return p;
  return p * (Rational(1) / p.leading());
}

LaurentPoly poly_gcd(LaurentPoly a, LaurentPoly b) {
  while (!b.is_zero()) {
    LaurentPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

bool laurent_divide(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly& q) {
  if (b.is_zero()) return false;
  if (a.is_zero()) {
    q = LaurentPoly();
    return true;
  }
  LaurentPoly an = a.shifted(-a.low()), bn = b.shifted(-b.low()), r;
  divmod(an, bn, q, r);
  if (!r.is_zero()) return false;
  q = q.shifted(a.low() - b.low());
  return true;
}

std::string to_string(const LaurentPoly& p, const std::string& var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (long e = p.low(); e <= p.high(); ++e) {
    Rational c = p.coeff(e);
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    Rational a = abs(c);
    if (e == 0) {
      os << to_string(a);
      continue;
    }
    if (a != 1) os << to_string(a) << "*";
    os << var;
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

LaurentMatrix::LaurentMatrix(std::size_t rows, std::size_t cols, std::string var)
    : rows_(rows), cols_(cols), var_(std::move(var)), e_(rows * cols) {}

LaurentMatrix LaurentMatrix::identity(std::size_t n, std::string var) {
  LaurentMatrix m(n, n, std::move(var));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = LaurentPoly(1);
  return m;
}

LaurentMatrix LaurentMatrix::from_constant(const QMatrix& q, std::string var) {
  LaurentMatrix m(q.rows(), q.cols(), std::move(var));
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) m(i, j) = LaurentPoly(q(i, j));
  return m;
}

LaurentMatrix LaurentMatrix::from_columns(const std::vector<LaurentVector>& cols, std::size_t rows,
                                          std::string var) {
  LaurentMatrix m(rows, cols.size(), std::move(var));
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
  return m;
}

LaurentVector LaurentMatrix::column(std::size_t j) const {
  LaurentVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void LaurentMatrix::set_column(std::size_t j, const LaurentVector& v) {
  if (v.size() != rows_) throw DimensionMismatch("set_column: wrong length");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

bool LaurentMatrix::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const LaurentPoly& p) { return p.is_zero(); });
}

long LaurentMatrix::low() const {
  bool any = false;
  long lo = 0;
  for (const auto& p : e_)
    if (!p.is_zero()) {
      lo = any ? std::min(lo, p.low()) : p.low();
      any = true;
    }
  return lo;
}

long LaurentMatrix::high() const {
  bool any = false;
  long hi = 0;
  for (const auto& p : e_)
    if (!p.is_zero()) {
      hi = any ? std::max(hi, p.high()) : p.high();
      any = true;
    }
  return hi;
}

QMatrix LaurentMatrix::coeff(long e) const {
  QMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).coeff(e);
  return m;
}

namespace {
template <class F>
LaurentMatrix map_entries(const LaurentMatrix& a, F f) {
  LaurentMatrix m(a.rows(), a.cols(), a.var());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = f(a(i, j));
  return m;
}
}  // namespace

LaurentMatrix LaurentMatrix::shifted(long k) const {
  return map_entries(*this, [k](const LaurentPoly& p) { return p.shifted(k); });
}
LaurentMatrix LaurentMatrix::flipped() const {
  return map_entries(*this, [](const LaurentPoly& p) { return p.flipped(); });
}
LaurentMatrix LaurentMatrix::euler() const {
  return map_entries(*this, [](const LaurentPoly& p) { return p.euler(); });
}
LaurentMatrix LaurentMatrix::truncated(long lo, long hi) const {
  return map_entries(*this, [lo, hi](const LaurentPoly& p) { return p.truncated(lo, hi); });
}
LaurentMatrix LaurentMatrix::operator-() const {
  return map_entries(*this, [](const LaurentPoly& p) { return -p; });
}

LaurentMatrix LaurentMatrix::transpose() const {
  LaurentMatrix m(cols_, rows_, var_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("LaurentMatrix product");
  LaurentMatrix m(a.rows_, b.cols_, a.var_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const LaurentPoly& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) m(i, j) += x * b(k, j);
    }
  return m;
}

LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("LaurentMatrix sum");
  LaurentMatrix m = a;
  for (std::size_t k = 0; k < m.e_.size(); ++k) m.e_[k] += b.e_[k];
  return m;
}

LaurentMatrix operator-(const LaurentMatrix& a, const LaurentMatrix& b) { return a + (-b); }

LaurentMatrix operator*(const Rational& s, const LaurentMatrix& a) {
  return map_entries(a, [&s](const LaurentPoly& p) { return p * s; });
}

LaurentVector LaurentMatrix::operator*(const LaurentVector& v) const {
  if (v.size() != cols_) throw DimensionMismatch("LaurentMatrix * vector");
  LaurentVector r(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      if (!(*this)(i, k).is_zero() && !v[k].is_zero()) r[i] += (*this)(i, k) * v[k];
  return r;
}

LaurentMatrix hcat(const LaurentMatrix& a, const LaurentMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hcat");
  LaurentMatrix m(a.rows(), a.cols() + b.cols(), a.var());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

LaurentVector shifted(const LaurentVector& v, long k) {
  LaurentVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].shifted(k);
  return r;
}

LaurentVector euler(const LaurentVector& v) {
  LaurentVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].euler();
  return r;
}

LaurentVector add(const LaurentVector& a, const LaurentVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sum");
  LaurentVector r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

LaurentVector scale(const LaurentVector& v, const LaurentPoly& s) {
  LaurentVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * s;
  return r;
}

bool is_zero(const LaurentVector& v) {
  return std::all_of(v.begin(), v.end(), [](const LaurentPoly& p) { return p.is_zero(); });
}

long low(const LaurentVector& v) {
  bool any = false;
  long lo = 0;
  for (const auto& p : v)
    if (!p.is_zero()) {
      lo = any ? std::min(lo, p.low()) : p.low();
      any = true;
    }
  return lo;
}

long high(const LaurentVector& v) {
  bool any = false;
  long hi = 0;
  for (const auto& p : v)
    if (!p.is_zero()) {
      hi = any ? std::max(hi, p.high()) : p.high();
      any = true;
    }
  return hi;
}

}  // namespace holospec
