#pragma once

#include "holospec/rescale/rescale.hpp"
#include "holospec/spectra/birkhoff.hpp"

namespace holospec {

// theta d/dtheta on the basis of G0 ∩ G'0 is -(a1 + theta a0); the frame is then moved
// so that a1 is diagonal.  Throws UnsupportedInput when the matrix has other powers of
// theta or a1 is not diagonalizable over Q.
struct ExactNormalForm {
  QMatrix a0, a1;  // a1 diagonal, ascending
  BirkhoffNormalForm numeric() const;
};

ExactNormalForm normal_form(const LatticePair& pair, const BirkhoffSolution& solution);

}  // namespace holospec
