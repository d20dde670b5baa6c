#pragma once

#include "holospec/laplace/dmodule.hpp"

namespace holospec {

// F_Del^gamma near t = infinity, as a Q[x]-lattice in the companion basis, x = 1/t.
// Only the germ at x = 0 is meaningful.
struct DeligneLattice {
  Rational gamma;
  bool zero = false;
  Lattice lattice;
};

// sum_{k>=0} (d_x + x^{-2})^k x^{-1} F^{[gamma]+k} V^{gamma-[gamma]}, with F^p V^beta = V^beta
// for p <= 0 and 0 for p >= 1 (unitary filtrations only).
DeligneLattice deligne_filtration_lattice(const FilteredDModule& m, const Rational& gamma);

bool deligne_contains(const DeligneLattice& big, const DeligneLattice& small);

// (d_x + x^{-2}) F_Del^gamma inside F_Del^{gamma-1}, tested on the basis of F_Del^gamma.
bool deligne_transversal(const FilteredDModule& m, const DeligneLattice& f, const DeligneLattice& lower);

}  // namespace holospec
