#pragma once

#include <vector>

#include "holospec/exact/ratfunc.hpp"
#include "holospec/meroconn/connection.hpp"

namespace holospec {

// sum a t^i d_t^j, terms kept sorted by (i, j) with nonzero coefficients.
class DOperator {
 public:
  struct Term {
    long i = 0, j = 0;
    Rational a;
    bool operator==(const Term& o) const { return i == o.i && j == o.j && a == o.a; }
  };

  DOperator() = default;
  explicit DOperator(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  long order() const;     // highest power of d_t
  long t_degree() const;  // highest power of t
  // Coefficient of d_t^j as a polynomial in t.
  LaurentPoly coefficient(long j) const;

  // Composition d_t * this.
  DOperator dt_times() const;

  friend DOperator operator+(const DOperator& a, const DOperator& b);
  friend DOperator operator*(const LaurentPoly& c, const DOperator& a);  // c(t) * a
  bool operator==(const DOperator& o) const { return terms_ == o.terms_; }

 private:
  std::vector<Term> terms_;
};

enum class FiltrationMode { Unitary, Explicit };

struct FiltrationStep {
  long p = 0;
  std::vector<DOperator> generators;  // C[t]-generators of F^p M, as elements m = g [1]
};

// M = Q[t]<d_t>/(P) with a good filtration.
struct FilteredDModule {
  DOperator op;
  std::vector<Rational> singular_points;  // finite ones, ascending
  FiltrationMode mode = FiltrationMode::Explicit;
  std::vector<FiltrationStep> steps;  // ascending in p
  long p0 = 0;

  std::size_t rank() const { return static_cast<std::size_t>(op.order()); }
  // Generators of F^p M for any p, using F^{p0-l} = F^{p0} + ... + d_t^l F^{p0}.
  std::vector<DOperator> generators(long p) const;
};

// Builds and checks: P != 0, rational singular points, Fuchs condition at each
// of them and at infinity, decreasing and generated at p0.  For Unitary mode the
// steps are computed by unitary_filtration.
FilteredDModule make_module(const DOperator& op, FiltrationMode mode, std::vector<FiltrationStep> steps = {},
                            long p0 = 0);

// Element g [1] of M in the companion basis [1], [d_t], ..., over Q(t).
std::vector<RatFunc> companion_vector(const DOperator& op, const DOperator& g);

// Euler derivation of the companion system at a point, expanded to `order`:
// (t - c) d_t at c, and x d_x with x = 1/t at infinity.
MeroConnection local_companion(const DOperator& op, const Rational& c, long order);
MeroConnection local_companion_at_infinity(const DOperator& op, long order);

// V-filtration of the localized module at t = c, on the companion lattice
// coordinates in s = t - c.  Jumps in [window, window + 1).
VFiltration v_filtration_at_point(const FilteredDModule& m, const Rational& c, const Rational& window = 0);
VFiltration v_filtration_at_infinity(const FilteredDModule& m, const Rational& window = 0);

// F^0 = intersection of the V^{>-1} at the singular points, F^1 = 0, p0 = 0.
// First order operators only.
std::vector<FiltrationStep> unitary_filtration(const DOperator& op);

// For first order P: the index e with [1] in V^e and not in V^{>e}, at each
// finite singular point (coordinate t - c) and at infinity (coordinate 1/t).
struct LocalExponent {
  Rational point;
  bool at_infinity = false;
  Rational exponent;
};
std::vector<LocalExponent> first_order_exponents(const DOperator& op);

}  // namespace holospec
