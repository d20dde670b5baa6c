#include "holospec/rescale/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/FFT>

#include "holospec/errors.hpp"

namespace holospec {

namespace {

constexpr double kPi = std::numbers::pi;

using State = std::vector<cplx>;

// Solves dY/dt = f(t) Y from t0 to t1 with Y(t0) = y0.
template <class Rhs>
CMatrix integrate_linear(Rhs rhs, CMatrix y0, double t0, double t1, double tol) {
  namespace ode = boost::numeric::odeint;
  const Eigen::Index n = y0.rows(), m = y0.cols();
  State s(y0.data(), y0.data() + y0.size());
  auto system = [&](const State& x, State& dx, double t) {
    Eigen::Map<const CMatrix> xm(x.data(), n, m);
    Eigen::Map<CMatrix> dm(dx.data(), n, m);
    dm = rhs(t) * xm;
  };
  auto stepper = ode::make_controlled<ode::runge_kutta_fehlberg78<State>>(tol, tol);
  ode::integrate_adaptive(stepper, system, s, t0, t1, (t1 - t0) / 64);
  return Eigen::Map<const CMatrix>(s.data(), n, m);
}

CMatrix hermitian_part(const CMatrix& m) { return (m + m.adjoint()) / 2.0; }

// Positive square root of a Hermitian positive matrix and its inverse.
bool sqrt_inverse(const CMatrix& h, CMatrix& w, CMatrix& w_inv) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.eigenvalues().minCoeff() <= 0) return false;
  const auto& v = es.eigenvectors();
  Eigen::VectorXd s = es.eigenvalues().cwiseSqrt();
  w = v * s.cwiseInverse().asDiagonal() * v.adjoint();
  w_inv = v * s.asDiagonal() * v.adjoint();
  return true;
}

}  // namespace

HarmonicData HarmonicData::make(CMatrix u, CMatrix q, int weight, const Tolerances& tol) {
  if (u.rows() != u.cols() || q.rows() != q.cols() || u.rows() != q.rows() || u.rows() == 0)
    throw DimensionMismatch("harmonic data: U and Q must be square of the same positive size");
  const double defect = (q - q.adjoint()).norm();
  if (defect > tol.hermitian * q.norm()) throw NonHermitian("harmonic data: Q is not Hermitian");
  return HarmonicData{std::move(u), hermitian_part(q), weight};
}

LoopMatrix::LoopMatrix(std::size_t n, std::vector<CMatrix> samples) : n_(n), samples_(std::move(samples)) {
  const std::size_t count = samples_.size();
  if (count < 8 || (count & (count - 1)) != 0)
    throw DimensionMismatch("loop matrix: sample count must be a power of two >= 8");
  for (const auto& s : samples_)
    if (static_cast<std::size_t>(s.rows()) != n_ || static_cast<std::size_t>(s.cols()) != n_)
      throw DimensionMismatch("loop matrix: sample of wrong size");
  coeffs_.assign(count, CMatrix::Zero(n_, n_));
  Eigen::FFT<double> fft;
  std::vector<cplx> in(count), out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t k = 0; k < count; ++k) in[k] = samples_[k](i, j);
      fft.inv(out, in);  // sum_k in_k exp(+2 pi i jk/N) / N; the coefficient of z^{-j}
      for (std::size_t k = 0; k < count; ++k) coeffs_[(count - k) % count](i, j) = out[k];
    }
}

cplx LoopMatrix::node(std::size_t k, std::size_t count) {
  return std::polar(1.0, 2 * kPi * static_cast<double>(k) / static_cast<double>(count));
}

const CMatrix& LoopMatrix::coefficient(long k) const {
  const long count = static_cast<long>(samples_.size());
  if (2 * std::abs(k) >= count) throw DimensionMismatch("loop matrix: coefficient index out of band");
  return coeffs_[static_cast<std::size_t>(((k % count) + count) % count)];
}

double LoopMatrix::aliasing_estimate() const {
  const long count = static_cast<long>(samples_.size());
  double top = 0, all = 0;
  for (long k = -count / 2 + 1; k < count / 2; ++k) {
    const double c = coefficient(k).norm();
    all = std::max(all, c);
    if (8 * std::abs(k) >= 3 * count) top = std::max(top, c);
  }
  return all > 0 ? top / all : 0.0;
}

double LoopMatrix::sup_norm() const {
  double s = 0;
  for (const auto& m : samples_) s = std::max(s, m.operatorNorm());
  return s;
}

RescaledMatrix rescaled_matrix(const HarmonicData& data, cplx tau) {
  if (tau == 0.0) throw DimensionMismatch("rescaled_matrix: tau = 0");
  return {tau * data.u, -data.q, -data.u.adjoint() / tau};
}

LoopMatrix pairing_transport(const HarmonicData& data, cplx tau, std::size_t samples, const Tolerances& tol) {
  if (tau == 0.0) throw SegmentThroughZero("pairing_transport: tau = 0");
  const Eigen::Index n = static_cast<Eigen::Index>(data.dim());
  const cplx start = 1.0 / std::conj(tau), end = tau;
  std::vector<CMatrix> out;
  out.reserve(samples);
  const bool trivial = std::abs(std::abs(tau) - 1.0) < 1e-15;
  const CMatrix ud = data.u.adjoint();
  for (std::size_t k = 0; k < samples; ++k) {
    if (trivial) {
      out.push_back(CMatrix::Identity(n, n));
      continue;
    }
    const cplx z = LoopMatrix::node(k, samples);
    // s runs over the segment [1/conj(tau), tau]; flat sections over eta = -z s.
    auto rhs = [&](double t) -> CMatrix {
      const cplx s = start + t * (end - start);
      const cplx eta = -z * s;
      const CMatrix a = data.u / (eta * eta) - data.q / eta - ud;
      return (z * (end - start)) * a;
    };
    out.push_back(integrate_linear(rhs, CMatrix::Identity(n, n), 0.0, 1.0, tol.transport * 1e-2).adjoint());
  }
  return LoopMatrix(static_cast<std::size_t>(n), std::move(out));
}

namespace {

// Block Toeplitz section [T_{k-j}], k in [k0, k1], j in [0, jmax].
CMatrix toeplitz_section(const LoopMatrix& t, long k0, long k1, long jmax) {
  const Eigen::Index n = static_cast<Eigen::Index>(t.dim());
  CMatrix m(n * (k1 - k0 + 1), n * (jmax + 1));
  for (long k = k0; k <= k1; ++k)
    for (long j = 0; j <= jmax; ++j) m.block(n * (k - k0), n * j, n, n) = t.coefficient(k - j);
  return m;
}

// Partial indices from dim{f in H+ : T f has no powers above m} = sum max(0, m - kappa + 1).
std::vector<int> partial_indices(const LoopMatrix& t, const Tolerances& tol) {
  const long count = static_cast<long>(t.size());
  const long n = static_cast<long>(t.dim());
  const long span = std::max(1L, std::min(4L, count / 16));
  const long deg = count / 4;
  auto kernel_dim = [&](long m) -> long {
    CMatrix sec = toeplitz_section(t, m + 1, deg + count / 4 - 1, deg);
    Eigen::BDCSVD<CMatrix> svd(sec);
    const auto& s = svd.singularValues();
    const double cut = tol.index_threshold * s(0);
    long null = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) < cut) ++null;
    return null;
  };
  // N(-1) = 0 and N(0) = n force every index to vanish.
  if (kernel_dim(-1) == 0 && kernel_dim(0) == n) return std::vector<int>(static_cast<std::size_t>(n), 0);
  // dims[m] for m in [-span - 2, span]; below(j) = #{kappa <= j} = dims[j] - dims[j - 1].
  std::vector<long> dims;
  for (long m = -span - 2; m <= span; ++m) dims.push_back(kernel_dim(m));
  auto below = [&](long j) { return dims[static_cast<std::size_t>(j + span + 2)] - dims[static_cast<std::size_t>(j + span + 1)]; };
  std::vector<int> out;
  for (long i = 0; i < std::min(below(-span - 1), n); ++i) out.push_back(static_cast<int>(-span - 1));
  for (long j = -span; j <= span; ++j)
    for (long i = 0; i < below(j) - below(j - 1) && static_cast<long>(out.size()) < n; ++i)
      out.push_back(static_cast<int>(j));
  while (static_cast<long>(out.size()) < n) out.push_back(static_cast<int>(span + 1));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BirkhoffFactors birkhoff_factorize(const LoopMatrix& t, const Tolerances& tol) {
  const std::size_t count = t.size();
  const Eigen::Index n = static_cast<Eigen::Index>(t.dim());
  for (const auto& s : t.samples()) {
    const auto sv = s.jacobiSvd().singularValues();
    if (!(sv(n - 1) > 1e-14 * sv(0))) throw NonInvertibleSample("birkhoff_factorize: singular sample");
  }
  BirkhoffFactors f;
  f.partial_indices = partial_indices(t, tol);
  f.trivial = std::all_of(f.partial_indices.begin(), f.partial_indices.end(), [](int k) { return k == 0; });
  if (!f.trivial) return f;

  // Taylor coefficients y_j of plus^{-1}: (T y)_k = delta_{k0} I for k = 0..K.
  const long kmax = static_cast<long>(count) / 2 - 1;
  CMatrix sec = toeplitz_section(t, 0, kmax, kmax);
  Eigen::PartialPivLU<CMatrix> lu(sec);
  f.condition = 1.0 / lu.rcond();
  if (!(f.condition < tol.condition)) throw IllConditioned("birkhoff_factorize: Toeplitz section ill-conditioned");
  CMatrix rhs = CMatrix::Zero(sec.rows(), n);
  rhs.topRows(n).setIdentity();
  CMatrix y = lu.solve(rhs);
  f.plus_inverse.resize(static_cast<std::size_t>(kmax + 1));
  for (long j = 0; j <= kmax; ++j) f.plus_inverse[static_cast<std::size_t>(j)] = y.middleRows(n * j, n);

  std::vector<CMatrix> ginv(count), tg(count);
  for (std::size_t k = 0; k < count; ++k) {
    const cplx z = LoopMatrix::node(k, count);
    CMatrix g = CMatrix::Zero(n, n);
    cplx zp = 1.0;
    for (long j = 0; j <= kmax; ++j, zp *= z) g += zp * f.plus_inverse[static_cast<std::size_t>(j)];
    ginv[k] = g.inverse();
    tg[k] = t.samples()[k] * g;
  }
  // minus = nonpositive part of T g.
  LoopMatrix prod(static_cast<std::size_t>(n), tg);
  std::vector<CMatrix> minus(count, CMatrix::Zero(n, n));
  for (std::size_t k = 0; k < count; ++k) {
    const cplx z = LoopMatrix::node(k, count);
    cplx zp = 1.0;
    for (long j = 0; j <= kmax; ++j, zp /= z) minus[k] += zp * prod.coefficient(-j);
  }
  double res = 0;
  for (std::size_t k = 0; k < count; ++k) res = std::max(res, (t.samples()[k] - minus[k] * ginv[k]).operatorNorm());
  f.residual = res / t.sup_norm();
  f.minus = LoopMatrix(static_cast<std::size_t>(n), std::move(minus));
  f.plus = LoopMatrix(static_cast<std::size_t>(n), std::move(ginv));
  return f;
}

std::vector<double> susy_roots(const CMatrix& q) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(q));
  std::vector<double> r(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(r.begin(), r.end());
  return r;
}

namespace {

// Extraction from the Taylor coefficients g0, g1 of the frame change; b0 + z b1 is the
// z^2 d/dz matrix in the original frame.
void extract(RescaleResult& r, const CMatrix& b0, const CMatrix& b1, const CMatrix& g0, const CMatrix& g1,
             const Tolerances& tol) {
  const CMatrix gi = g0.inverse();
  const CMatrix un = gi * b0 * g0;
  const CMatrix qn = -(gi * (b1 * g0 + b0 * g1) - gi * g1 * gi * b0 * g0);
  const CMatrix h = g0.adjoint();
  r.hermitian_residual = (h - h.adjoint()).norm() / h.norm();
  r.h = hermitian_part(h);
  r.selfadjoint_residual = (r.h * qn - qn.adjoint() * r.h).norm() / (r.h.norm() * std::max(qn.norm(), 1.0));
  CMatrix w, w_inv;
  if (!sqrt_inverse(r.h, w, w_inv) || r.hermitian_residual > tol.selfadjoint)
    throw NonHermitian("rescale: pairing on global sections is not positive at zero partial indices");
  r.u = w_inv * un * w;
  r.q = hermitian_part(w_inv * qn * w);
}

}  // namespace

RescaleResult rescale_step(const HarmonicData& data, cplx tau, std::size_t fourier_order, const Tolerances& tol) {
  RescaleResult r;
  r.tau = tau;
  r.substeps = 1;
  LoopMatrix p = pairing_transport(data, tau, fourier_order, tol);
  r.aliasing = p.aliasing_estimate();
  BirkhoffFactors f = birkhoff_factorize(p, tol);
  r.partial_indices = f.partial_indices;
  if (!f.trivial) {
    r.failure = "nonzero partial indices";
    return r;
  }
  r.factor_residual = f.residual;
  const RescaledMatrix a = rescaled_matrix(data, tau);
  extract(r, a.a0, a.a1, f.plus_inverse[0], f.plus_inverse[1], tol);
  r.pure = true;
  return r;
}

namespace {

// When U has simple, well separated eigenvalues whose eigenlines are orthogonal and
// Q-orthogonal up to the decoupling tolerance, the structure is numerically a sum of
// rank one pieces; returns them in an orthonormal basis of approximate eigenvectors.
std::optional<HarmonicData> split_rank_one(const HarmonicData& d, double tolerance, double& coupling) {
  const Eigen::Index n = d.u.rows();
  const double un = d.u.operatorNorm();
  if (n < 2 || un == 0) return std::nullopt;
  Eigen::ComplexEigenSolver<CMatrix> es(d.u);
  const auto& ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(ev(i) - ev(j)) < 1e-3 * un) return std::nullopt;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return ev(x).real() != ev(y).real() ? ev(x).real() < ev(y).real() : ev(x).imag() < ev(y).imag();
  });
  CMatrix vecs(n, n);
  for (Eigen::Index i = 0; i < n; ++i) vecs.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  Eigen::HouseholderQR<CMatrix> qr(vecs);
  const CMatrix b = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix u = b.adjoint() * d.u * b, q = b.adjoint() * d.q * b;
  coupling = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) coupling = std::max({coupling, std::abs(u(i, j)) / un, std::abs(q(i, j)) / std::max(1.0, q.norm())});
  if (coupling > tolerance) return std::nullopt;
  return HarmonicData{CMatrix(u.diagonal().asDiagonal()), CMatrix(q.diagonal().real().cast<cplx>().asDiagonal()),
                      d.weight};
}

// U normal and commuting with Q: an exact orthogonal sum of rank one pieces, each of which
// rescales to (tau u, q).
bool splits_exactly(const HarmonicData& d, double tolerance) {
  const Eigen::Index n = d.u.rows();
  if (n < 2) return false;
  const double scale = std::max({1.0, d.u.operatorNorm(), d.q.operatorNorm()});
  const CMatrix uh = d.u.adjoint();
  return (d.u * uh - uh * d.u).cwiseAbs().maxCoeff() <= tolerance * scale * scale &&
         (d.u * d.q - d.q * d.u).cwiseAbs().maxCoeff() <= tolerance * scale * scale;
}

}  // namespace

RescaleResult rescaled_harmonic_data(const HarmonicData& data, cplx tau, std::size_t fourier_order,
                                     const Tolerances& tol) {
  if (tau == 0.0) throw SegmentThroughZero("rescale: tau = 0");
  const double lr = std::log(std::abs(tau));
  const cplx phase = tau / std::abs(tau);
  const Eigen::Index n = static_cast<Eigen::Index>(data.dim());

  RescaleResult acc;
  acc.tau = tau;
  acc.pure = true;
  acc.partial_indices.assign(data.dim(), 0);
  acc.h = CMatrix::Identity(n, n);
  if (splits_exactly(data, tol.hermitian)) {
    acc.decoupled_at = 1.0;
    acc.u = tau * data.u;
    acc.q = data.q;
    return acc;
  }
  // Tensoring with the rank one piece (c, 0) commutes with rescaling.
  const cplx center = data.u.trace() / static_cast<double>(n);
  HarmonicData cur{data.u - center * CMatrix::Identity(n, n), data.q, data.weight};
  auto absorb = [&](const RescaleResult& s) {
    acc.factor_residual = std::max(acc.factor_residual, s.factor_residual);
    acc.hermitian_residual = std::max(acc.hermitian_residual, s.hermitian_residual);
    acc.selfadjoint_residual = std::max(acc.selfadjoint_residual, s.selfadjoint_residual);
    acc.aliasing = std::max(acc.aliasing, s.aliasing);
    acc.substeps += 1;
    acc.h = s.h;
    if (!s.pure) {
      acc.pure = false;
      acc.partial_indices = s.partial_indices;
      acc.failure = s.failure;
      return false;
    }
    cur = HarmonicData{s.u, s.q, data.weight};
    return true;
  };
  // The transport over one step grows like exp(4 |log ratio| |U|).
  double done = 0;
  while (std::abs(lr - done) > 1e-14) {
    if (lr > done) {
      double coupling = 0;
      if (auto pieces = split_rank_one(cur, tol.decouple, coupling)) {
        acc.decoupled_at = std::exp(done);
        cur = *pieces;
        cur.u *= std::exp(lr - done);
        acc.h = CMatrix::Identity(n, n);
        break;
      }
    }
    const double cap = tol.march_growth / (4 * cur.u.operatorNorm() + cur.q.operatorNorm() + 1e-300);
    const double len = std::min({std::abs(lr - done), std::log(tol.march_ratio), cap});
    const double step = lr > done ? len : -len;
    if (!absorb(rescale_step(cur, std::exp(step), fourier_order, tol))) return acc;
    done += step;
  }
  cur.u += std::abs(tau) * center * CMatrix::Identity(n, n);
  if (std::abs(phase - 1.0) > 0)
    if (!absorb(rescale_step(cur, phase, fourier_order, tol))) return acc;
  acc.u = cur.u;
  acc.q = cur.q;
  return acc;
}

}  // namespace holospec
