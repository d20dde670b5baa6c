#pragma once

#include <vector>

#include "holospec/spectra/spectrum.hpp"

namespace holospec {

struct BirkhoffPiece {
  Rational gamma;
  std::size_t dim_total = 0;           // dim G0 ∩ V^gamma
  std::vector<std::size_t> dim_parts;  // dim G0 ∩ G'0 ∩ V^{gamma+j}, j = 0, 1, ...
};

struct BirkhoffSolution {
  Lattice gprime0;                        // Q[theta]-lattice stable under theta d/dtheta
  std::vector<LaurentVector> g0_basis;    // a basis of G0 ∩ G'0
  std::vector<BirkhoffPiece> certificate; // direct sum decomposition checked per gamma
};

// Filtration data on one graded piece psi^beta, in coordinates of the frame at theta = 0.
struct GradedHodgeData {
  Rational beta;
  Subspace space;                          // E_beta
  QMatrix nilpotent;                       // N = -(R - beta), on the ambient coordinates
  std::vector<std::pair<long, Subspace>> f;  // (p, F^p), decreasing, from full to zero
};

std::vector<GradedHodgeData> graded_hodge_data(const LatticePair& pair);

// Throws NoSolutionFound when no opposite N-stable filtration is found or the
// candidate fails verification.
BirkhoffSolution birkhoff_v_solution(const LatticePair& pair);

// Exact check of the V-solution conditions; returns the per-gamma certificate or throws NoSolutionFound.
std::vector<BirkhoffPiece> verify_v_solution(const LatticePair& pair, const Lattice& gprime0);

}  // namespace holospec
