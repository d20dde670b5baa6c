#pragma once

#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "holospec/errors.hpp"
#include "holospec/laplace/dmodule.hpp"
#include "holospec/meroconn/serialize.hpp"
#include "holospec/rescale/scan.hpp"

namespace holospec {

// Malformed input (CLI exit code 2).
struct ParseError : Error {
  using Error::Error;
};

inline constexpr int kSchemaVersion = 1;

struct NumericParams {
  std::size_t fourier_order = 128;
  std::string tau_grid = "log:1e-3:1e3:41";
  bool allow_complex = false;
  std::vector<double> invariant_taus = {0.1, 0.5, 2.0, 10.0};
  LimitOptions limits;
  Tolerances tol;
};

struct JobSpec {
  std::optional<FilteredDModule> module;
  std::optional<HarmonicData> harmonic;
  NumericParams numeric;
  std::vector<Rational> gammas;
  // roots of SP^inf and SP^0 for verify without a module
  std::optional<std::pair<std::vector<double>, std::vector<double>>> expected;
};

// Schema:
//   {"version": 1,
//    "module": {"operator": [[i, j, "a"], ...], "filtration": "unitary" | "explicit",
//               "steps": [{"p": p, "generators": [[[i, j, "a"], ...], ...]}], "p0": p0},
//    "harmonic": {"U": [[[re, im], ...], ...], "Q": ..., "weight": w},
//    "numeric": {"fourier_order": n, "tau_grid": "...", "allow_complex": b,
//                "tau_small": x, "tau_large": x, "tolerance": x, "invariant_taus": [x, ...]},
//    "deligne": {"gamma": ["p/q", ...]},
//    "expected": {"sp_infinity": ["p/q", ...], "sp_zero": [...]}}
// Reports carry the same keys, so they parse back as jobs.
// Throws ParseError; UnsupportedInput from module construction passes through.
JobSpec parse_job(const json& j);
JobSpec parse_job_text(const std::string& text);

// "log:lo:hi:n", "lin:lo:hi:n", "list:a,b,...", "circle:r:n" (complex, needs allow_complex).
std::vector<cplx> parse_tau_grid(const std::string& spec, bool allow_complex);

json operator_to_json(const DOperator& op);
DOperator operator_from_json(const json& j);
json harmonic_to_json(const HarmonicData& d);
HarmonicData harmonic_from_json(const json& j);

// Given harmonic data, or the one derived from the module through its Birkhoff normal form.
HarmonicData job_harmonic(const JobSpec& job);

json run_spectral(const JobSpec& job);
ScanReport run_scan(const JobSpec& job);
json run_verify(const JobSpec& job, bool& pass);
json run_deligne(const JobSpec& job);

// Fixed precision for every float written to a report.
double report_double(double x);

}  // namespace holospec
