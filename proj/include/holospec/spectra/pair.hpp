#pragma once

#include "holospec/meroconn/connection.hpp"

namespace holospec {

// (G, G0): G is a connection over Q[theta, 1/theta] presented by its
// theta d/dtheta matrix; G0 is a Q[1/theta]-lattice (theta' = 1/theta).
struct LatticePair {
  MeroConnection conn;  // Euler form in theta
  Lattice g0;           // Side::AtInfinity

  std::size_t rank() const { return conn.rank(); }
  // z^2 d/dz on G0 in the variable z = theta' (matrix polynomial in z when G0 is t-stable).
  MeroConnection z_connection() const;
  Lattice g0_in_z() const;  // G0 as a Q[z]-lattice
};

// Checks shapes, that G0 is a lattice, and that it is stable under z^2 d/dz.
// Throws HypothesisViolation otherwise.
void validate(const LatticePair& p);

LatticePair direct_sum(const LatticePair& a, const LatticePair& b);

// theta d/dtheta = diag(q) on the standard basis, G0 the standard Q[1/theta]-lattice.
LatticePair hodge_diagonal_pair(const std::vector<Rational>& q);

}  // namespace holospec
