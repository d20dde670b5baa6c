#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "holospec/errors.hpp"
#include "holospec/rescale/rescale.hpp"

namespace holospec {

namespace {

constexpr double kPi = std::numbers::pi;

void check_bnf(const BirkhoffNormalForm& b) {
  const Eigen::Index n = b.a0.rows();
  if (b.a0.cols() != n || static_cast<Eigen::Index>(b.a.size()) != n || n == 0)
    throw DimensionMismatch("normal form: a0 and a disagree in size");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = b.a[static_cast<std::size_t>(i)] - b.a[static_cast<std::size_t>(j)];
      if (i != j && std::abs(d - std::round(d)) < 1e-12 && std::round(d) != 0)
        throw UnsupportedInput("normal form: resonant exponents at infinity");
    }
}

// H(w) = sum H_k w^k with k H_k - [A, H_k] = a0 H_{k-1}, A = diag(a); the flat frame at
// z is H(1/z) z^{-A}.
CMatrix h_series(const BirkhoffNormalForm& b, cplx w) {
  const Eigen::Index n = b.a0.rows();
  CMatrix h = CMatrix::Identity(n, n), hk = h;
  cplx wk = 1.0;
  for (int k = 1; k < 2000; ++k) {
    CMatrix r = b.a0 * hk;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        hk(i, j) = r(i, j) / (k - b.a[static_cast<std::size_t>(i)] + b.a[static_cast<std::size_t>(j)]);
    wk *= w;
    const CMatrix term = wk * hk;
    h += term;
    if (k > 10 && term.norm() < 1e-18 * std::max(1.0, h.norm())) return h;
  }
  throw TruncationInstability("normal form: series for the flat frame did not converge");
}

// Flat frame at z with arg z = phase.
CMatrix flat_frame(const BirkhoffNormalForm& b, double modulus, double phase) {
  const Eigen::Index n = b.a0.rows();
  const cplx z = std::polar(modulus, phase);
  CMatrix d = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    d(j, j) = std::exp(-b.a[static_cast<std::size_t>(j)] * cplx(std::log(modulus), phase));
  return h_series(b, 1.0 / z) * d;
}

// Coordinates in the flat frame at direction +1 or -1 of the solution recessive at z = 0
// along that ray.
Eigen::VectorXcd recessive(const BirkhoffNormalForm& b, double direction) {
  namespace ode = boost::numeric::odeint;
  const Eigen::Index n = b.a0.rows();
  Eigen::ComplexEigenSolver<CMatrix> es(b.a0);
  Eigen::Index k = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if ((es.eigenvalues()(i) * direction).real() < (es.eigenvalues()(k) * direction).real()) k = i;
  CMatrix a1 = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a1(j, j) = b.a[static_cast<std::size_t>(j)];
  // Starting on the eigenvector at small |z| and moving out, the recessive solution dominates.
  const double x0 = 0.02;
  Eigen::VectorXcd y0 = es.eigenvectors().col(k);
  std::vector<cplx> s(y0.data(), y0.data() + n);
  auto system = [&](const std::vector<cplx>& x, std::vector<cplx>& dx, double t) {
    const double zeta = direction * t;
    Eigen::Map<const Eigen::VectorXcd> xv(x.data(), n);
    Eigen::Map<Eigen::VectorXcd> dv(dx.data(), n);
    dv = -direction * ((b.a0 / (zeta * zeta) + a1 / zeta) * xv);
  };
  auto stepper = ode::make_controlled<ode::runge_kutta_fehlberg78<std::vector<cplx>>>(1e-13, 1e-13);
  ode::integrate_adaptive(stepper, system, s, x0, 1.0, 1e-4);
  Eigen::Map<Eigen::VectorXcd> y(s.data(), n);
  const CMatrix f = flat_frame(b, 1.0, direction > 0 ? 0.0 : kPi);
  return f.partialPivLu().solve(Eigen::VectorXcd(y));
}

CMatrix pairing_matrix(const BirkhoffNormalForm& b, const std::vector<double>& c) {
  const Eigen::Index n = b.a0.rows();
  CMatrix k = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    k(j, j) = c[static_cast<std::size_t>(j)] * std::polar(1.0, kPi * b.a[static_cast<std::size_t>(j)]);
  return k;
}

}  // namespace

StokesPairing stokes_pairing(const BirkhoffNormalForm& b) {
  check_bnf(b);
  if (b.a0.rows() == 1) return {{1.0}, 0.0};
  if (b.a0.rows() != 2) throw UnsupportedInput("stokes_pairing: rank one or two only");
  Eigen::ComplexEigenSolver<CMatrix> es(b.a0);
  if (std::abs(es.eigenvalues()(0) - es.eigenvalues()(1)) < 1e-9)
    throw UnsupportedInput("stokes_pairing: a0 needs distinct eigenvalues");
  const Eigen::VectorXcd vr = recessive(b, 1.0), vl = recessive(b, -1.0);
  const CMatrix k = pairing_matrix(b, {1.0, 1.0});
  // conj(vl)^T K vr = 0 with K = diag(1, c) diag(e^{i pi a}).
  const cplx ratio = -(std::conj(vl(0)) * k(0, 0) * vr(0)) / (std::conj(vl(1)) * k(1, 1) * vr(1));
  StokesPairing p;
  p.c = {1.0, ratio.real()};
  p.imaginary_defect = std::abs(ratio.imag()) / std::abs(ratio);
  return p;
}

HarmonicData harmonic_from_bnf(const BirkhoffNormalForm& b, const StokesPairing& pairing, std::size_t fourier_order,
                               const Tolerances& tol) {
  check_bnf(b);
  const Eigen::Index n = b.a0.rows();
  auto attempt = [&](double sign) -> std::optional<HarmonicData> {
    std::vector<double> c = pairing.c;
    for (double& x : c) x *= sign;
    const CMatrix k = pairing_matrix(b, c);
    std::vector<CMatrix> samples;
    for (std::size_t i = 0; i < fourier_order; ++i) {
      const double phi = 2 * kPi * static_cast<double>(i) / static_cast<double>(fourier_order);
      const CMatrix f = flat_frame(b, 1.0, phi);
      const CMatrix fm = flat_frame(b, 1.0, phi + kPi);
      samples.push_back(fm.inverse().adjoint() * k * f.inverse());
    }
    BirkhoffFactors fac = birkhoff_factorize(LoopMatrix(static_cast<std::size_t>(n), std::move(samples)), tol);
    if (!fac.trivial) return std::nullopt;
    CMatrix a1 = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) a1(j, j) = b.a[static_cast<std::size_t>(j)];
    const CMatrix& g0 = fac.plus_inverse[0];
    const CMatrix& g1 = fac.plus_inverse[1];
    const CMatrix gi = g0.inverse();
    const CMatrix un = gi * b.a0 * g0;
    const CMatrix qn = -(gi * (a1 * g0 + b.a0 * g1) - gi * g1 * gi * b.a0 * g0);
    const CMatrix h = (g0 + g0.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (es.eigenvalues().minCoeff() <= 0) return std::nullopt;
    const CMatrix w = es.operatorInverseSqrt(), w_inv = es.operatorSqrt();
    CMatrix q = w_inv * qn * w;
    return HarmonicData{w_inv * un * w, (q + q.adjoint()) / 2.0, 0};
  };
  if (auto d = attempt(1.0)) return *d;
  if (auto d = attempt(-1.0)) return *d;
  throw NoSolutionFound("harmonic_from_bnf: the pairing is not positive on global sections");
}

}  // namespace holospec
