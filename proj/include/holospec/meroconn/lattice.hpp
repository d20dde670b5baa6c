#pragma once

#include <optional>
#include <vector>

#include "holospec/exact/laurent.hpp"
#include "holospec/exact/matrix.hpp"

namespace holospec {

// Which polynomial ring spans the lattice: Q[x] (at 0) or Q[1/x] (at infinity).
enum class Side { AtZero, AtInfinity };

// Column Hermite form over Q[x] of the module spanned by the columns of `gens`
// (Laurent entries allowed).  Lower echelon, monic pivots, entries left of a
// pivot reduced modulo it.  Zero columns are dropped.  If `transform` is given
// it receives a square U, invertible over Q[x], with gens * U = [H | 0].
LaurentMatrix column_hnf(const LaurentMatrix& gens, LaurentMatrix* transform = nullptr,
                         std::vector<std::size_t>* pivot_rows = nullptr);

// Inverse over the Laurent ring; throws std::domain_error if det is not a monomial.
LaurentMatrix laurent_inverse(const LaurentMatrix& p);

class Lattice {
 public:
  Lattice() = default;
  // Span of the columns of `gens` over the ring selected by `side`.  The span must
  // have full rank over Q(x).
  Lattice(const LaurentMatrix& gens, Side side);
  static Lattice standard(std::size_t n, Side side, const std::string& var = "x");

  Side side() const { return side_; }
  std::size_t rank() const { return h_.rows(); }
  // Canonical basis, in the original variable.
  const LaurentMatrix& basis() const { return basis_; }
  // True when the span is a lattice in the Laurent module (det is a monomial).
  bool is_lattice() const;

  bool contains(const LaurentVector& v) const;
  bool contains(const Lattice& o) const;
  // Ring coefficients of v in basis(); empty if v is not in the lattice.
  std::optional<LaurentVector> coordinates(const LaurentVector& v) const;

  // Span of L together with the columns of `gens`.
  Lattice extended(const LaurentMatrix& gens) const;
  Lattice times_power(long k) const;  // x^k L
  // Same module viewed with the variable inverted.
  Lattice flipped() const;
  Lattice dual() const;

  bool operator==(const Lattice& o) const { return side_ == o.side_ && h_ == o.h_; }
  bool operator!=(const Lattice& o) const { return !(*this == o); }

  friend Lattice operator+(const Lattice& a, const Lattice& b);
  friend Lattice intersect(const Lattice& a, const Lattice& b);
  // dim_Q big/small, for small contained in big on the same side.
  friend long colength(const Lattice& big, const Lattice& small);

 private:
  static Lattice from_ring(const LaurentMatrix& ring_gens, Side side, const std::string& var);
  Side side_ = Side::AtZero;
  LaurentMatrix h_;      // Hermite form in the ring variable (1/x when at infinity)
  LaurentMatrix basis_;  // same, in the original variable
};

Lattice intersect(const Lattice& a, const Lattice& b);
long colength(const Lattice& big, const Lattice& small);

std::string dual_var(const std::string& v);

}  // namespace holospec
