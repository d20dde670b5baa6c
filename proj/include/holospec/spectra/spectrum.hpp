#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "holospec/meroconn/formal.hpp"
#include "holospec/spectra/pair.hpp"

namespace holospec {

enum class SpectrumKind { Infinity, Zero, Susy };

// Monic polynomial stored through its roots in T.  SP^inf keeps the gammas,
// SP^0 keeps the -gammas.
struct SpectralPolynomial {
  SpectrumKind kind = SpectrumKind::Infinity;
  std::vector<std::pair<Rational, std::size_t>> roots;  // ascending, multiplicity > 0

  std::size_t degree() const;
  LaurentPoly polynomial() const;
  void add_root(const Rational& r, std::size_t mult);
  bool same_roots(const SpectralPolynomial& o) const { return roots == o.roots; }
};

SpectralPolynomial multiply(const SpectralPolynomial& a, const SpectralPolynomial& b);

// Q-basis of L0 ∩ Linf for a Q[theta]-lattice L0 and a Q[1/theta]-lattice Linf.
std::vector<LaurentVector> finite_intersection(const Lattice& at_zero, const Lattice& at_inf);

std::size_t nu_gamma(const LatticePair& pair, const Rational& gamma, const Rational& z_o = 1);
std::size_t nu_gamma(const LatticePair& pair, const VFiltration& v, const Rational& gamma, const Rational& z_o);

// Pairs (gamma, nu_gamma) with nu_gamma > 0, ascending; sums to the rank.
std::vector<std::pair<Rational, std::size_t>> spectrum_at_infinity(const LatticePair& pair, const Rational& z_o = 1);
SpectralPolynomial sp_infinity(const LatticePair& pair);

struct LocalSpectrum {
  Rational c;
  std::vector<std::pair<Rational, std::size_t>> mu;  // (gamma, mu_{i,gamma})
};

// (gamma, mu) for a regular Euler connection at z = 0 and a Q[z]-lattice H.
std::vector<std::pair<Rational, std::size_t>> local_mu(const MeroConnection& regular, const Lattice& h);

std::vector<LocalSpectrum> spectrum_at_origin(const LatticePair& pair, std::size_t order);
// Runs at K = 4 rank + 4 and at 2K; throws TruncationInstability on disagreement.
SpectralPolynomial sp_zero(const LatticePair& pair);
SpectralPolynomial sp_zero(const LatticePair& pair, std::size_t order);

struct LocalBrieskorn {
  Lattice lattice;      // the factor's lattice in the split frame
  LaurentMatrix frame;  // its basis in the coordinates of G0 (over Q[z]), truncated at z^K
};

LocalBrieskorn local_brieskorn(const FormalDecomposition& d, std::size_t factor);

// Characteristic polynomial of the Hermitian Q; U and the weight do not enter.
struct SusyResult {
  std::vector<double> roots;                 // ascending
  std::optional<SpectralPolynomial> exact;   // when Q is rational with rational spectrum
};

SusyResult susy_poly(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& q, int weight = 0, double tol = 1e-10);
SusyResult susy_poly_exact(const QMatrix& q);

struct BigradedEntry {
  std::size_t factor = 0;  // index of the exponential factor; 0 on the infinity side
  Rational beta;           // in (-1, 0]
  long p = 0;
  std::size_t dim = 0;
};

// Side infinity: nu_{beta,p} with G^p = theta'^p G0.
std::vector<BigradedEntry> bigraded_infinity(const LatticePair& pair);
// Side zero: mu_{i,beta,p} with G_i^p = theta'^p H_i.
std::vector<BigradedEntry> bigraded_zero(const LatticePair& pair);

// prod (T - beta - p)^nu and prod (T + beta - p)^mu.
SpectralPolynomial product_infinity(const std::vector<BigradedEntry>& t);
SpectralPolynomial product_zero(const std::vector<BigradedEntry>& t);

struct DeRhamFiber {
  std::size_t dimension = 0;
  // gamma at each jump of the image filtration, with dim of the image of G0 ∩ V^gamma
  std::vector<std::pair<Rational, std::size_t>> v_dims;
  // dimension of gr^gamma of the image filtration
  std::vector<std::pair<Rational, std::size_t>> gr_dims;
  // images at theta' = 1 of G0 ∩ V^gamma, in coordinates of the G0 basis, per v_dims entry
  std::vector<Subspace> images;
};

DeRhamFiber derham_fiber(const LatticePair& pair);

}  // namespace holospec
