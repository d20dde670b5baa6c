#include "holospec/spectra/pair.hpp"

#include "holospec/errors.hpp"
#include "holospec/exact/matrix.hpp"

namespace holospec {

MeroConnection LatticePair::z_connection() const {
  MeroConnection e = conn.as_euler().flipped();
  return MeroConnection(e.matrix().shifted(1), Derivation::Irregular);
}

Lattice LatticePair::g0_in_z() const { return g0.flipped(); }

void validate(const LatticePair& p) {
  if (p.conn.derivation() != Derivation::Euler) throw HypothesisViolation("pair connection must be given by theta d/dtheta");
  if (p.g0.side() != Side::AtInfinity) throw HypothesisViolation("G0 must be a lattice over Q[1/theta]");
  if (p.g0.rank() != p.conn.rank()) throw DimensionMismatch("G0 rank differs from connection rank");
  if (!p.g0.is_lattice()) throw HypothesisViolation("G0 does not generate G");
  LaurentMatrix m = matrix_on(p.z_connection(), p.g0_in_z());
  if (!m.is_zero() && m.low() < 0) throw HypothesisViolation("G0 is not stable under t = z^2 d/dz");
}

LatticePair direct_sum(const LatticePair& a, const LatticePair& b) {
  std::size_t n = a.rank(), m = b.rank();
  LaurentMatrix g(n + m, n + m, a.conn.var());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = a.g0.basis()(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g(n + i, n + j) = b.g0.basis()(i, j);
  return {a.conn.direct_sum(b.conn), Lattice(g, Side::AtInfinity)};
}

LatticePair hodge_diagonal_pair(const std::vector<Rational>& q) {
  MeroConnection c(LaurentMatrix::from_constant(QMatrix::diagonal(q), "theta"));
  return {c, Lattice::standard(q.size(), Side::AtInfinity, "theta")};
}

}  // namespace holospec
