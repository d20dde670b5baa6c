#pragma once

#include <string>
#include <vector>

#include "holospec/meroconn/connection.hpp"

namespace holospec {

struct FormalFactor {
  Rational c;                    // eigenvalue of the leading z^2 d/dz matrix on this block
  MeroConnection regular_part;   // z d/dz matrix of the untwisted block, truncated
  Lattice lattice;               // the block of the split lattice
  std::vector<Rational> residue_eigenvalues;  // of the Levelt saturation, with repetition
  std::size_t order = 0;         // truncation order K
};

struct FormalDecomposition {
  std::vector<FormalFactor> factors;
  // Frame of the split lattice in the coordinates of the input lattice, mod z^{K+1}.
  LaurentMatrix gauge;
  // z^2 d/dz matrix in that frame, recomputed from the gauge and truncated at z^K.
  LaurentMatrix gauged;
  std::vector<std::size_t> block_sizes;
};

std::size_t default_truncation(std::size_t rank);

// Splits a z^2 d/dz connection at z = 0 along the eigenvalues of its leading
// matrix.  `l` must be stable under z^2 d/dz.
FormalDecomposition formal_decompose(const MeroConnection& conn, const Lattice& l, std::size_t order);

// Runs formal_decompose at K and 2K and throws TruncationInstability if the
// exponential factors or residue spectra differ.
FormalDecomposition formal_decompose_stable(const MeroConnection& conn, const Lattice& l);

struct RamificationReport {
  bool ok = false;
  std::vector<Rational> slopes;  // distinct Newton polygon slopes; {0} when regular
  std::string diagnostic;
};

RamificationReport check_no_ramification(const MeroConnection& conn);

}  // namespace holospec
