#pragma once

#include "holospec/exact/laurent.hpp"

namespace holospec {

// Element of Q(x), kept as num/den with polynomial parts coprime and den monic.
class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(const LaurentPoly& p);  // NOLINT
  RatFunc(const LaurentPoly& num, const LaurentPoly& den);

  bool is_zero() const { return num_.is_zero(); }
  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  // x-adic valuation; throws on zero
  long valuation() const;
  RatFunc euler() const;  // x d/dx
  RatFunc translated(const Rational& c) const;  // x -> x + c
  RatFunc flipped() const;                      // x -> 1/x
  bool is_laurent() const { return den_ == LaurentPoly(1); }
  // Expansion at x = 0 keeping exponents <= order.
  LaurentPoly jet(long order) const;
  Rational eval(const Rational& x) const;  // throws if x is a pole

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc operator-() const { return RatFunc(-num_, den_); }
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

 private:
  LaurentPoly num_, den_ = LaurentPoly(1);
};

}  // namespace holospec
