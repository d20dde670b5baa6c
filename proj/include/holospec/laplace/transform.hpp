#pragma once

#include "holospec/laplace/dmodule.hpp"
#include "holospec/spectra/spectrum.hpp"

namespace holospec {

using RatVector = std::vector<RatFunc>;

// G = M[d_t^{-1}] in the variable theta (d_t acts as theta, t as -d_theta).
struct LaplaceTransform {
  std::size_t rank = 0;
  bool degenerate = false;           // rank zero
  std::vector<LaurentPoly> hat;      // coefficients of d_theta^m in the transformed operator
  std::vector<RatVector> frame;      // free basis of G, columns in the companion basis d_theta^m [1]
  MeroConnection conn;               // theta d/dtheta on the frame
  int saturation_rounds = 0;         // rounds needed to remove apparent singularities
};

// Throws ApparentSingularityResidue if a finite nonzero singular point of the
// transformed operator is not apparent, IrregularSingularity if theta = 0 is not regular.
LaplaceTransform laplace_transform(const FilteredDModule& m);

// Image of g [1] in G, in frame coordinates.
LaurentVector loc(const LaplaceTransform& lt, const DOperator& g);
// t acting on frame coordinates: -d/dtheta.
LaurentVector t_action(const LaplaceTransform& lt, const LaurentVector& v);

// d_t^p G_0^{(F^p)} for a generation index p <= p0.  Throws NonRegularAtInfinity if the
// t-closure does not stabilize.
Lattice brieskorn_lattice(const FilteredDModule& m, const LaplaceTransform& lt, long p, int* rounds = nullptr);

// (G, G_0^{(F)}), with the inclusions loc(F^p M) in theta'^p G_0 checked on the supplied steps.
LatticePair brieskorn(const FilteredDModule& m);

// True when loc of every generator of F^p lies in theta'^p G_0, for the supplied steps.
bool check_loc_inclusions(const FilteredDModule& m, const LaplaceTransform& lt, const Lattice& g0);

// t acting on G0 / theta' G0.
QMatrix u_matrix(const LatticePair& pair);

// C[theta, 1/theta] (G0 ∩ V^gamma); generators are a Q-basis of G0 ∩ V^gamma.
struct FDelG {
  Rational gamma;
  std::vector<LaurentVector> generators;
  std::size_t rank = 0;
};

// Throws HypothesisViolation when t F^gamma is not inside F^{gamma-1}.
FDelG fdel_on_G(const LatticePair& pair, const Rational& gamma);

// Membership in the Q[theta, 1/theta]-span.
bool laurent_span_contains(const std::vector<LaurentVector>& gens, const LaurentVector& v);

// Graded dimensions of the filtration induced by F_Del^{beta + p} G on psi^beta at theta = 0.
std::vector<BigradedEntry> fdel_limit_table(const LatticePair& pair);

}  // namespace holospec
