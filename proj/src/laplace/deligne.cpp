#include "holospec/laplace/deligne.hpp"

#include "holospec/errors.hpp"

namespace holospec {

namespace {

// Smallest K with x^K Q[x]^n inside l.
long inner_power(const Lattice& l) {
  const std::size_t n = l.rank();
  long k = l.basis().is_zero() ? 0 : l.basis().low();
  for (;; ++k) {
    bool all = true;
    for (std::size_t i = 0; i < n && all; ++i) {
      LaurentVector e(n);
      e[i] = LaurentPoly::monomial(1, k);
      all = l.contains(e);
    }
    if (all) return k;
  }
}

long low_of(const LaurentMatrix& m) { return m.is_zero() ? 0 : m.low(); }

// (d_x + x^{-2}) v = x^{-1} (x d_x v) + x^{-2} v on the expanded system.
LaurentVector twisted_d(const MeroConnection& conn, const LaurentVector& v) {
  LaurentVector xd = add(euler(v), conn.matrix() * v);
  return add(shifted(xd, -1), shifted(v, -2));
}

}  // namespace

DeligneLattice deligne_filtration_lattice(const FilteredDModule& m, const Rational& gamma) {
  if (m.mode != FiltrationMode::Unitary)
    throw UnsupportedInput("Deligne lattices need the filtration near infinity (unitary mode only)");
  DeligneLattice out;
  out.gamma = gamma;
  const long p = ceil_long(gamma);
  const Rational beta = gamma - p;
  if (p >= 1) {
    out.zero = true;
    return out;
  }
  const std::size_t n = m.rank();
  VFiltration v = v_filtration_at_infinity(m, Rational(0));
  Lattice vb = v.at(beta);
  const long kmax = -p;
  const long floor_power = inner_power(vb) - 1;
  const long order = floor_power + 2 * kmax + 4 - (low_of(vb.basis()) - 1) + 8 * static_cast<long>(n);
  MeroConnection conn = local_companion_at_infinity(m.op, std::max(order, 8L));
  std::vector<LaurentVector> gens;
  for (std::size_t j = 0; j < n; ++j) {
    LaurentVector g = shifted(vb.basis().column(j), -1);
    for (long k = 0; k <= kmax; ++k) {
      gens.push_back(g);
      g = twisted_d(conn, g);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    LaurentVector e(n);
    e[i] = LaurentPoly::monomial(1, floor_power);
    gens.push_back(e);
  }
  out.lattice = Lattice(LaurentMatrix::from_columns(gens, n, "x"), Side::AtZero);
  return out;
}

bool deligne_contains(const DeligneLattice& big, const DeligneLattice& small) {
  if (small.zero) return true;
  if (big.zero) return false;
  return big.lattice.contains(small.lattice);
}

bool deligne_transversal(const FilteredDModule& m, const DeligneLattice& f, const DeligneLattice& lower) {
  if (f.zero) return true;
  if (lower.zero) return false;
  const long floor_power = inner_power(lower.lattice);
  const long order = floor_power + 4 - low_of(f.lattice.basis()) + 8 * static_cast<long>(m.rank());
  MeroConnection conn = local_companion_at_infinity(m.op, std::max(order, 8L));
  for (std::size_t j = 0; j < f.lattice.rank(); ++j)
    if (!lower.lattice.contains(twisted_d(conn, f.lattice.basis().column(j)))) return false;
  return true;
}

}  // namespace holospec
