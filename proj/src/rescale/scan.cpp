#include "holospec/rescale/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "holospec/errors.hpp"

namespace holospec {

namespace {

bool positive_real(cplx t) { return t.imag() == 0 && t.real() > 0; }

ScanPoint point_from(const RescaleResult& r) {
  ScanPoint p;
  p.tau = r.tau;
  p.ok = r.pure;
  p.residual = r.factor_residual;
  p.index_sum = std::accumulate(r.partial_indices.begin(), r.partial_indices.end(), 0);
  p.failure = r.failure;
  if (r.pure) p.roots = susy_roots(r.q);
  return p;
}

ScanPoint failed_point(cplx tau, const std::string& what) {
  ScanPoint p;
  p.tau = tau;
  p.failure = what;
  return p;
}

}  // namespace

ScanReport susy_scan(const HarmonicData& data, const std::vector<cplx>& grid, std::size_t fourier_order,
                     const Tolerances& tol) {
  ScanReport report;
  report.points.resize(grid.size());
  for (auto t : grid)
    if (t == 0.0) throw SegmentThroughZero("susy_scan: grid contains 0");

  std::vector<std::size_t> up, down, other;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!positive_real(grid[i])) other.push_back(i);
    else if (grid[i].real() >= 1) up.push_back(i);
    else down.push_back(i);
  }
  std::sort(up.begin(), up.end(), [&](auto a, auto b) { return grid[a].real() < grid[b].real(); });
  std::sort(down.begin(), down.end(), [&](auto a, auto b) { return grid[a].real() > grid[b].real(); });

  for (const auto* chain : {&up, &down}) {
    HarmonicData cur = data;
    double at = 1.0;
    bool alive = true;
    for (std::size_t i : *chain) {
      const double t = grid[i].real();
      if (!alive) {
        report.points[i] = failed_point(grid[i], "an earlier point on this ray failed");
        continue;
      }
      try {
        RescaleResult r = rescaled_harmonic_data(cur, t / at, fourier_order, tol);
        r.tau = grid[i];
        report.points[i] = point_from(r);
        if (r.pure) {
          cur = HarmonicData{r.u, r.q, data.weight};
          at = t;
        } else {
          alive = false;
        }
      } catch (const Error& e) {
        report.points[i] = failed_point(grid[i], e.what());
        alive = false;
      }
    }
  }
  for (std::size_t i : other) {
    try {
      report.points[i] = point_from(rescaled_harmonic_data(data, grid[i], fourier_order, tol));
    } catch (const Error& e) {
      report.points[i] = failed_point(grid[i], e.what());
    }
  }

  for (std::size_t i = 1; i < report.points.size(); ++i) {
    const auto& a = report.points[i - 1];
    const auto& b = report.points[i];
    if (!a.ok || !b.ok) continue;
    for (std::size_t k = 0; k < a.roots.size(); ++k)
      report.max_jump = std::max(report.max_jump, std::abs(a.roots[k] - b.roots[k]));
  }
  return report;
}

void write_scan_csv(std::ostream& out, const ScanReport& report) {
  out << "tau_re,tau_im,root_index,root_re,root_im,index_sum,residual\n";
  char buf[256];
  for (const auto& p : report.points) {
    if (!p.ok) {
      std::snprintf(buf, sizeof buf, "%.12e,%.12e,-1,nan,nan,%d,%.6e\n", p.tau.real(), p.tau.imag(), p.index_sum,
                    p.residual);
      out << buf;
      continue;
    }
    for (std::size_t k = 0; k < p.roots.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.12e,%.12e,%zu,%.12e,%.12e,%d,%.6e\n", p.tau.real(), p.tau.imag(), k,
                    p.roots[k], 0.0, p.index_sum, p.residual);
      out << buf;
    }
  }
}

std::vector<cplx> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0 && hi > 0) || count == 0) throw DimensionMismatch("log_grid: needs positive bounds and count");
  std::vector<cplx> g;
  if (count == 1) return {lo};
  for (std::size_t i = 0; i < count; ++i)
    g.emplace_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(i) /
                                               static_cast<double>(count - 1)));
  return g;
}

namespace {

double max_root_error(const std::vector<double>& got, const std::vector<double>& want, std::vector<double>* per) {
  double m = 0;
  for (std::size_t k = 0; k < want.size(); ++k) {
    const double e = std::abs(got[k] - want[k]);
    if (per) per->push_back(e);
    m = std::max(m, e);
  }
  return m;
}

void evaluate_side(LimitSide& side, const HarmonicData& data, double tau, double factor, std::vector<double> expected,
                   const LimitOptions& opts, const Tolerances& tol) {
  std::sort(expected.begin(), expected.end());
  side.tau = tau;
  side.expected = expected;
  // Three points along the ray, composed from the first.
  HarmonicData cur = data;
  double at = 1.0;
  for (int i = 0; i < 3; ++i) {
    const double t = tau * std::pow(factor, i);
    RescaleResult r = rescaled_harmonic_data(cur, t / at, opts.fourier_order, tol);
    if (!r.pure) {
      side.pass = false;
      side.err[i] = INFINITY;
      return;
    }
    const auto roots = susy_roots(r.q);
    if (i == 0) {
      side.roots = roots;
      side.max_error = max_root_error(roots, expected, &side.errors);
    }
    side.err[i] = max_root_error(roots, expected, nullptr);
    cur = HarmonicData{r.u, r.q, data.weight};
    at = t;
  }
  side.at_floor = std::all_of(std::begin(side.err), std::end(side.err), [&](double e) { return e < opts.floor; });
  side.rate = side.at_floor ? 0.0 : 0.5 * std::log2(side.err[0] / side.err[2]);
  const bool monotone = side.err[1] < side.err[0] && side.err[2] < side.err[1];
  side.pass = side.max_error < opts.tolerance && (side.at_floor || (monotone && side.rate > 0));
}

}  // namespace

LimitReport verify_limits(const HarmonicData& data, const std::vector<double>& sp_infinity_roots,
                          const std::vector<double>& sp_zero_roots, const LimitOptions& opts, const Tolerances& tol) {
  if (sp_infinity_roots.size() != data.dim() || sp_zero_roots.size() != data.dim())
    throw DimensionMismatch("verify_limits: spectral polynomial degree differs from the rank");
  LimitReport rep;
  evaluate_side(rep.zero, data, opts.tau_small, 0.5, sp_infinity_roots, opts, tol);
  evaluate_side(rep.infinity, data, opts.tau_large, 2.0, sp_zero_roots, opts, tol);
  rep.pass = rep.zero.pass && rep.infinity.pass;
  return rep;
}

InvariantReport invariant_suite(const HarmonicData& data, const std::vector<double>& taus, std::size_t fourier_order,
                                const Tolerances& tol) {
  double residual = 0, impure = 0, hmin = INFINITY, selfadjoint = 0, spectrum = 0, circle = 0, doubling = 0;
  Eigen::ComplexEigenSolver<CMatrix> e0(data.u);
  const auto& base = e0.eigenvalues();
  const double rho = base.cwiseAbs().maxCoeff();
  for (double tau : taus) {
    RescaleResult r = rescaled_harmonic_data(data, tau, fourier_order, tol);
    if (!r.pure) {
      impure += 1;
      continue;
    }
    residual = std::max(residual, r.factor_residual);
    selfadjoint = std::max(selfadjoint, r.selfadjoint_residual);
    Eigen::SelfAdjointEigenSolver<CMatrix> hs(r.h);
    hmin = std::min(hmin, hs.eigenvalues().minCoeff());
    // matched greedily; eigenvalues are simple or the match is exact anyway
    Eigen::ComplexEigenSolver<CMatrix> e1(r.u);
    std::vector<bool> used(static_cast<std::size_t>(base.size()), false);
    for (Eigen::Index i = 0; i < base.size(); ++i) {
      double best = INFINITY;
      Eigen::Index at = 0;
      for (Eigen::Index j = 0; j < base.size(); ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double d = std::abs(e1.eigenvalues()(j) - tau * base(i));
        if (d < best) best = d, at = j;
      }
      used[static_cast<std::size_t>(at)] = true;
      spectrum = std::max(spectrum, best / std::max(1.0, tau * rho));
    }
    RescaleResult fine = rescaled_harmonic_data(data, tau, 2 * fourier_order, tol);
    if (fine.pure) doubling = std::max(doubling, (fine.q - r.q).cwiseAbs().maxCoeff());
    else impure += 1;
  }
  for (double phi : {0.5, 1.7, 3.0, 4.4}) {
    const cplx t = std::polar(1.0, phi);
    RescaleResult r = rescaled_harmonic_data(data, t, fourier_order, tol);
    if (!r.pure) {
      impure += 1;
      continue;
    }
    circle = std::max({circle, (r.q - data.q).cwiseAbs().maxCoeff(), (r.u - t * data.u).cwiseAbs().maxCoeff()});
  }
  InvariantReport rep;
  rep.checks = {
      {"factorization residual", residual, tol.factorization, residual < tol.factorization},
      {"points with nonzero partial indices", impure, 0, impure == 0},
      {"smallest eigenvalue of h", hmin, 0, hmin > 0},
      {"Q h-selfadjoint residual", selfadjoint, tol.selfadjoint, selfadjoint < tol.selfadjoint},
      {"spec(U_tau) - tau spec(U)", spectrum, tol.spectrum, spectrum < tol.spectrum},
      {"|tau| = 1 constancy", circle, tol.spectrum, circle < tol.spectrum},
      {"Fourier order doubling", doubling, tol.fourier_stability, doubling < tol.fourier_stability},
  };
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const InvariantCheck& c) { return c.pass; });
  return rep;
}

}  // namespace holospec
