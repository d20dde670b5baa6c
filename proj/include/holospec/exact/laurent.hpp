#pragma once

#include <string>
#include <vector>

#include "holospec/exact/rational.hpp"

namespace holospec {

class QMatrix;

// Finite Laurent polynomial  sum_k c_k x^k  with rational coefficients.
// Stored as a dense coefficient run starting at low(); zero has no run.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(const Rational& c);  // NOLINT: implicit constant
  LaurentPoly(long c) : LaurentPoly(Rational(c)) {}  // NOLINT

  static LaurentPoly monomial(const Rational& c, long e);
  static LaurentPoly from_coeffs(long low, std::vector<Rational> c);

  bool is_zero() const { return c_.empty(); }
  long low() const;   // throws on zero
  long high() const;  // throws on zero
  Rational coeff(long e) const;
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_monomial() const { return c_.size() == 1; }
  bool is_polynomial() const { return is_zero() || low_ >= 0; }
  bool is_constant() const { return is_zero() || (c_.size() == 1 && low_ == 0); }
  const Rational& leading() const { return c_.back(); }

  LaurentPoly shifted(long k) const;   // times x^k
  LaurentPoly flipped() const;         // x -> 1/x
  LaurentPoly euler() const;           // x d/dx
  LaurentPoly truncated(long lo, long hi) const;
  LaurentPoly substitute_affine(const Rational& a, const Rational& b) const;  // x -> a x + b, polynomial input only
  Rational eval(const Rational& x) const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const Rational& s);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, const Rational& s) { return a *= s; }
  friend LaurentPoly operator*(const Rational& s, LaurentPoly a) { return a *= s; }
  LaurentPoly operator-() const;
  bool operator==(const LaurentPoly& o) const { return low_ == o.low_ && c_ == o.c_; }
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

 private:
  void normalize();
  long low_ = 0;
  std::vector<Rational> c_;
};

// Polynomial division; a and b must be polynomials, b nonzero.
void divmod(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly& q, LaurentPoly& r);
LaurentPoly monic(const LaurentPoly& p);
LaurentPoly poly_gcd(LaurentPoly a, LaurentPoly b);  // monic, polynomials only
// Exact quotient in the Laurent ring, or false.
bool laurent_divide(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly& q);

std::string to_string(const LaurentPoly& p, const std::string& var = "x");

using LaurentVector = std::vector<LaurentPoly>;

class LaurentMatrix {
 public:
  LaurentMatrix() = default;
  LaurentMatrix(std::size_t rows, std::size_t cols, std::string var = "x");

  static LaurentMatrix identity(std::size_t n, std::string var = "x");
  static LaurentMatrix from_constant(const QMatrix& m, std::string var = "x");
  static LaurentMatrix from_columns(const std::vector<LaurentVector>& cols, std::size_t rows,
                                    std::string var = "x");

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::string& var() const { return var_; }
  void set_var(std::string v) { var_ = std::move(v); }

  LaurentPoly& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const LaurentPoly& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  LaurentVector column(std::size_t j) const;
  void set_column(std::size_t j, const LaurentVector& v);

  bool is_zero() const;
  long low() const;   // min exponent over nonzero entries; 0 if all zero
  long high() const;  // max exponent over nonzero entries; 0 if all zero
  QMatrix coeff(long e) const;

  LaurentMatrix shifted(long k) const;
  LaurentMatrix flipped() const;
  LaurentMatrix euler() const;
  LaurentMatrix truncated(long lo, long hi) const;
  LaurentMatrix transpose() const;
  LaurentMatrix operator-() const;

  friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b);
  friend LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b);
  friend LaurentMatrix operator-(const LaurentMatrix& a, const LaurentMatrix& b);
  friend LaurentMatrix operator*(const Rational& s, const LaurentMatrix& a);
  LaurentVector operator*(const LaurentVector& v) const;
  bool operator==(const LaurentMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::string var_ = "x";
  std::vector<LaurentPoly> e_;
};

LaurentMatrix hcat(const LaurentMatrix& a, const LaurentMatrix& b);

LaurentVector shifted(const LaurentVector& v, long k);
LaurentVector euler(const LaurentVector& v);
LaurentVector add(const LaurentVector& a, const LaurentVector& b);
LaurentVector scale(const LaurentVector& v, const LaurentPoly& s);
bool is_zero(const LaurentVector& v);
long low(const LaurentVector& v);   // 0 if zero
long high(const LaurentVector& v);  // 0 if zero

}  // namespace holospec
