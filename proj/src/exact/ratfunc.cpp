#include "holospec/exact/ratfunc.hpp"

#include <stdexcept>

namespace holospec {

RatFunc::RatFunc(const LaurentPoly& p) : num_(p) {}

RatFunc::RatFunc(const LaurentPoly& num, const LaurentPoly& den) {
  if (den.is_zero()) throw std::domain_error("RatFunc: zero denominator");
  if (num.is_zero()) return;
  // pull monomial parts out so gcd sees polynomials with nonzero constant term
  long shift = num.low() - den.low();
  LaurentPoly n = num.shifted(-num.low()), d = den.shifted(-den.low());
  LaurentPoly g = poly_gcd(n, d), q, r;
  divmod(n, g, q, r);
  n = q;
  divmod(d, g, q, r);
  d = q;
  Rational lead = d.leading();
  num_ = (n * (1 / lead)).shifted(shift);
  den_ = d * (1 / lead);
}

long RatFunc::valuation() const {
  if (is_zero()) throw std::domain_error("valuation of zero");
  return num_.low() - den_.low();
}

RatFunc RatFunc::euler() const {
  // (n/d)' x = (n' d - n d') x / d^2
  return RatFunc(num_.euler() * den_ - num_ * den_.euler(), den_ * den_);
}

RatFunc RatFunc::translated(const Rational& c) const {
  if (is_zero()) return *this;
  LaurentPoly n = num_, d = den_;
  long k = n.low();
  n = n.shifted(-k).substitute_affine(1, c);
  d = d.substitute_affine(1, c);
  LaurentPoly lin = LaurentPoly::from_coeffs(0, {c, Rational(1)});
  for (long i = 0; i < (k < 0 ? -k : k); ++i) {
    if (k > 0) n = n * lin;
    else d = d * lin;
  }
  return RatFunc(n, d);
}

RatFunc RatFunc::flipped() const {
  if (is_zero()) return *this;
  return RatFunc(num_.flipped(), den_.flipped());
}

LaurentPoly RatFunc::jet(long order) const {
  if (is_zero()) return {};
  long lo = num_.low();
  if (order < lo) return {};
  // series of num / den with den(0) != 0
  const auto len = static_cast<std::size_t>(order - lo + 1);
  std::vector<Rational> out(len);
  const Rational d0 = den_.coeff(0);
  for (std::size_t k = 0; k < len; ++k) {
    Rational acc = num_.coeff(lo + static_cast<long>(k));
    for (std::size_t j = 1; j <= k; ++j) acc -= den_.coeff(static_cast<long>(j)) * out[k - j];
    out[k] = acc / d0;
  }
  return LaurentPoly::from_coeffs(lo, out);
}

Rational RatFunc::eval(const Rational& x) const {
  Rational d = den_.eval(x);
  if (d == 0) throw std::domain_error("RatFunc: evaluation at a pole");
  return num_.eval(x) / d;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
  return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

}  // namespace holospec
