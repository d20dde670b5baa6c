#pragma once

#include <vector>

#include "holospec/exact/laurent.hpp"
#include "holospec/meroconn/lattice.hpp"

namespace holospec {

// Which derivation the matrix presents: x d/dx, or x^2 d/dx.
enum class Derivation { Euler, Irregular };

enum class Point { Zero, Infinity };

// Free module over Q[x, 1/x] with a derivation D given on the standard basis:
// D e_j = sum_i matrix(i, j) e_i.
class MeroConnection {
 public:
  MeroConnection() = default;
  explicit MeroConnection(LaurentMatrix m, Derivation d = Derivation::Euler);

  std::size_t rank() const { return m_.rows(); }
  const LaurentMatrix& matrix() const { return m_; }
  Derivation derivation() const { return d_; }
  const std::string& var() const { return m_.var(); }

  LaurentVector apply(const LaurentVector& v) const;
  LaurentMatrix apply(const LaurentMatrix& b) const;  // columnwise

  // Matrix of D on the basis given by the columns of p (p invertible).
  MeroConnection gauge(const LaurentMatrix& p) const;
  // x^2 d/dx form converted to x d/dx.
  MeroConnection as_euler() const;
  // Euler form in the variable 1/x:  (1/x) d/d(1/x) = -x d/dx.
  MeroConnection flipped() const;
  MeroConnection direct_sum(const MeroConnection& o) const;

  bool operator==(const MeroConnection& o) const { return d_ == o.d_ && m_ == o.m_; }

 private:
  LaurentMatrix m_;
  Derivation d_ = Derivation::Euler;
};

// Matrix of D in the basis of L; L must be stable under D.
LaurentMatrix matrix_on(const MeroConnection& conn, const Lattice& l);

// Smallest lattice containing L and stable under the Euler derivation at `point`.
Lattice levelt_saturate(const MeroConnection& conn, const Lattice& l, Point point);

struct VJump {
  Rational gamma;
  std::size_t multiplicity;
  Lattice lattice;
};

// V-filtration at a regular singular point.  At 0 the index shift is by x, at
// infinity by 1/x.  On gr^gamma the Euler derivation at the point acts with the
// single eigenvalue gamma.
struct VFiltration {
  Point point = Point::Zero;
  Rational window;
  std::vector<VJump> jumps;  // ascending, all in [window, window + 1)

  Lattice at(const Rational& gamma) const;
  Lattice above(const Rational& gamma) const;  // V^{>gamma}
  // Smallest jump index strictly greater than gamma.
  Rational next_jump(const Rational& gamma) const;
  bool is_jump(const Rational& gamma) const;
};

VFiltration v_filtration(const MeroConnection& conn, Point point, const Rational& window);

// Tensor with the rank one object whose x^2 d/dx acts by +c.
MeroConnection exp_twist(const MeroConnection& conn, const Rational& c);

}  // namespace holospec
