#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace holospec {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

struct Tolerances {
  double hermitian = 1e-12;       // relative, on construction of HarmonicData
  double transport = 1e-10;       // local error target of the integrator
  double factorization = 1e-8;    // relative sup-norm residual of the Birkhoff factors
  double selfadjoint = 1e-8;
  double spectrum = 1e-8;         // spec(U_tau) against tau spec(U)
  double aliasing = 1e-9;         // relative size of the top Fourier band
  double condition = 1e12;        // Toeplitz condition estimate
  double index_threshold = 1e-7;  // relative singular value cutoff for kernel counts
  double fourier_stability = 1e-6;
  double march_ratio = 1.25;      // largest ratio of one rescaling substep
  double march_growth = 6.0;      // bound on 4 |log ratio| |U| per substep
  double decouple = 1e-5;         // coupling below which a growing march splits into rank one pieces
};

// Frame is h-orthonormal.
struct HarmonicData {
  CMatrix u, q;
  int weight = 0;

  std::size_t dim() const { return static_cast<std::size_t>(u.rows()); }
  // Throws NonHermitian or DimensionMismatch.
  static HarmonicData make(CMatrix u, CMatrix q, int weight = 0, const Tolerances& tol = {});
};

// Samples at z_k = exp(2 pi i k / N).
class LoopMatrix {
 public:
  LoopMatrix() = default;
  LoopMatrix(std::size_t n, std::vector<CMatrix> samples);

  std::size_t size() const { return samples_.size(); }
  std::size_t dim() const { return n_; }
  const std::vector<CMatrix>& samples() const { return samples_; }
  static cplx node(std::size_t k, std::size_t count);

  // Coefficient of z^k, |k| < N/2.
  const CMatrix& coefficient(long k) const;
  // Largest coefficient norm over 3N/8 <= |k| < N/2, relative to the largest overall.
  double aliasing_estimate() const;
  double sup_norm() const;

 private:
  std::size_t n_ = 0;
  std::vector<CMatrix> samples_;
  std::vector<CMatrix> coeffs_;  // index k mod N
};

struct RescaledMatrix {
  CMatrix a0, a1, a2;  // z^2 d/dz acts by a0 + a1 z + a2 z^2
};

RescaledMatrix rescaled_matrix(const HarmonicData& data, cplx tau);

// Transport matrices S(z) from the fibre over tau to the one over 1 / conj(tau),
// along the straight segment in the tau' = 1/tau direction.  Identity when |tau| = 1.
LoopMatrix pairing_transport(const HarmonicData& data, cplx tau, std::size_t samples, const Tolerances& tol = {});

struct BirkhoffFactors {
  std::vector<int> partial_indices;  // ascending
  bool trivial = false;              // all indices zero; factors below are filled only then
  LoopMatrix minus, plus;            // T = minus * plus, minus(inf) = I
  std::vector<CMatrix> plus_inverse; // Taylor coefficients of plus^{-1}
  double residual = 0;
  double condition = 0;
};

// Throws NonInvertibleSample, IllConditioned.
BirkhoffFactors birkhoff_factorize(const LoopMatrix& t, const Tolerances& tol = {});

struct RescaleResult {
  cplx tau;
  bool pure = false;
  CMatrix u, q, h;  // u, q in an h-orthonormal frame; h on the global sections before orthonormalizing
  std::vector<int> partial_indices;
  double factor_residual = 0;
  double hermitian_residual = 0;    // of h
  double selfadjoint_residual = 0;  // of q
  double aliasing = 0;
  int substeps = 0;
  double decoupled_at = 0;  // |tau| of the split into rank one pieces, 0 if none
  std::string failure;
};

// One direct application of the rescaling, no substeps.
RescaleResult rescale_step(const HarmonicData& data, cplx tau, std::size_t fourier_order, const Tolerances& tol = {});

// Composes substeps along the ray to tau, each within march_ratio and march_growth.
RescaleResult rescaled_harmonic_data(const HarmonicData& data, cplx tau, std::size_t fourier_order,
                                     const Tolerances& tol = {});

std::vector<double> susy_roots(const CMatrix& q);

// Birkhoff normal form: z^2 d/dz acts by a0 + z diag(a).
struct BirkhoffNormalForm {
  CMatrix a0;
  std::vector<double> a;
};

// Harmonic data at tau = 1 of the twistor structure with the pairing that kills the
// two recessive solutions at z = 0 on opposite rays.  Rank two with distinct eigenvalues
// of a0 and a[0] - a[1] not an integer, or rank one.
struct StokesPairing {
  std::vector<double> c;  // pairing diag(c_j exp(i pi a_j)) on the solutions at infinity
  double imaginary_defect = 0;
};
StokesPairing stokes_pairing(const BirkhoffNormalForm& bnf);
HarmonicData harmonic_from_bnf(const BirkhoffNormalForm& bnf, const StokesPairing& pairing,
                               std::size_t fourier_order, const Tolerances& tol = {});

}  // namespace holospec
