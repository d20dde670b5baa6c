#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "holospec/rescale/rescale.hpp"

namespace holospec {

struct ScanPoint {
  cplx tau;
  bool ok = false;
  std::vector<double> roots;  // ascending
  int index_sum = 0;
  double residual = 0;
  std::string failure;
};

struct ScanReport {
  std::vector<ScanPoint> points;  // in grid order
  double max_jump = 0;            // largest root change between adjacent successful points
};

// Positive real points are reached by composing rescalings outward from tau = 1, so a
// failure at one point does not stop the others.
ScanReport susy_scan(const HarmonicData& data, const std::vector<cplx>& grid, std::size_t fourier_order,
                     const Tolerances& tol = {});

// Columns tau_re,tau_im,root_index,root_re,root_im,index_sum,residual.
void write_scan_csv(std::ostream& out, const ScanReport& report);

// count points from lo to hi, geometric.
std::vector<cplx> log_grid(double lo, double hi, std::size_t count);

struct LimitSide {
  double tau = 0;
  std::vector<double> expected, roots;  // ascending
  std::vector<double> errors;           // per root
  double max_error = 0;
  // errors at tau, tau moved one and two doublings further from 1
  double err[3] = {0, 0, 0};
  double rate = 0;        // log2 of the error ratio per doubling, averaged over the two doublings
  bool at_floor = false;  // all three errors below the noise floor
  bool pass = false;
};

struct LimitReport {
  LimitSide zero, infinity;  // tau -> 0 against SP^inf, tau -> inf against SP^0
  bool pass = false;
};

struct LimitOptions {
  double tau_small = 1e-3, tau_large = 1e3;
  double tolerance = 1e-2;
  double floor = 1e-8;
  std::size_t fourier_order = 128;
};

LimitReport verify_limits(const HarmonicData& data, const std::vector<double>& sp_infinity_roots,
                          const std::vector<double>& sp_zero_roots, const LimitOptions& opts = {},
                          const Tolerances& tol = {});

struct InvariantCheck {
  std::string name;
  double value = 0;  // worst case over the sampled tau
  double bound = 0;
  bool pass = false;
};

struct InvariantReport {
  std::vector<InvariantCheck> checks;
  bool pass = false;
};

// Factorization residual, zero partial indices, positivity of h, self-adjointness of Q,
// spec(U_tau) = tau spec(U) (relative to max(1, |tau| |spec U|)), constancy on |tau| = 1,
// and stability of Q under doubling the Fourier order.
InvariantReport invariant_suite(const HarmonicData& data, const std::vector<double>& taus, std::size_t fourier_order,
                                const Tolerances& tol = {});

}  // namespace holospec
