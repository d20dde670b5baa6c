#include "holospec/cli/job.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "holospec/laplace/deligne.hpp"
#include "holospec/laplace/transform.hpp"
#include "holospec/rescale/bridge.hpp"
#include "holospec/spectra/birkhoff.hpp"

namespace holospec {

namespace {

template <class F>
auto parsing(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(what + ": " + e.what());
  } catch (const DimensionMismatch& e) {
    throw ParseError(what + ": " + e.what());
  }
}

double parse_number(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) throw ParseError("not a number: '" + s + "'");
  return x;
}

std::size_t parse_count(const std::string& s) {
  const double x = parse_number(s);
  if (x < 0 || x != std::floor(x)) throw ParseError("not a count: '" + s + "'");
  return static_cast<std::size_t>(x);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

json complex_to_json(cplx z) { return json::array({report_double(z.real()), report_double(z.imag())}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_array() || j.size() != 2) throw ParseError("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json cmatrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

CMatrix cmatrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty nested array");
  const std::size_t n = j.size();
  CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw ParseError("matrix must be square");
    for (std::size_t k = 0; k < n; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from_json(j[i][k]);
  }
  return m;
}

json roots_to_json(const std::vector<std::pair<Rational, std::size_t>>& roots) {
  json out = json::array();
  for (const auto& [g, m] : roots) out.push_back(json::array({rational_to_json(g), m}));
  return out;
}

json sp_to_json(const SpectralPolynomial& p) {
  return {{"roots", roots_to_json(p.roots)}, {"polynomial", to_string(p.polynomial(), "T")}};
}

json bigraded_to_json(const std::vector<BigradedEntry>& t) {
  json out = json::array();
  for (const auto& e : t)
    out.push_back({{"factor", e.factor}, {"beta", rational_to_json(e.beta)}, {"p", e.p}, {"dim", e.dim}});
  return out;
}

std::vector<double> expanded_roots(const SpectralPolynomial& p) {
  std::vector<double> r;
  for (const auto& [g, m] : p.roots)
    for (std::size_t k = 0; k < m; ++k) r.push_back(to_double(g));
  return r;
}

json doubles_to_json(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(report_double(x));
  return out;
}

json module_to_json(const FilteredDModule& m) {
  json j = {{"operator", operator_to_json(m.op)},
            {"filtration", m.mode == FiltrationMode::Unitary ? "unitary" : "explicit"},
            {"p0", m.p0}};
  if (m.mode == FiltrationMode::Explicit) {
    json steps = json::array();
    for (const auto& s : m.steps) {
      json gens = json::array();
      for (const auto& g : s.generators) gens.push_back(operator_to_json(g));
      steps.push_back({{"p", s.p}, {"generators", gens}});
    }
    j["steps"] = steps;
  }
  return j;
}

const FilteredDModule& require_module(const JobSpec& job, const char* mode) {
  if (!job.module) throw ParseError(std::string(mode) + " needs a \"module\" entry");
  return *job.module;
}

json base_report(const JobSpec& job, const char* mode) {
  json r = {{"version", kSchemaVersion}, {"mode", mode}};
  if (job.module) r["module"] = module_to_json(*job.module);
  return r;
}

}  // namespace

double report_double(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0 ? 0.0 : r;
}

json operator_to_json(const DOperator& op) {
  json out = json::array();
  for (const auto& t : op.terms()) out.push_back(json::array({t.i, t.j, rational_to_json(t.a)}));
  return out;
}

DOperator operator_from_json(const json& j) {
  return parsing("operator", [&] {
    if (!j.is_array()) throw ParseError("operator must be a list of [i, j, a] terms");
    std::vector<DOperator::Term> terms;
    for (const auto& t : j) {
      if (!t.is_array() || t.size() != 3) throw ParseError("operator term must be [i, j, a]");
      const long i = t[0].get<long>(), k = t[1].get<long>();
      if (i < 0 || k < 0) throw ParseError("operator exponents must be nonnegative");
      terms.push_back({i, k, rational_from_json(t[2])});
    }
    return DOperator(std::move(terms));
  });
}

json harmonic_to_json(const HarmonicData& d) {
  return {{"U", cmatrix_to_json(d.u)}, {"Q", cmatrix_to_json(d.q)}, {"weight", d.weight}};
}

HarmonicData harmonic_from_json(const json& j) {
  return parsing("harmonic", [&] {
    if (!j.is_object() || !j.contains("U") || !j.contains("Q")) throw ParseError("harmonic needs U and Q");
    const CMatrix u = cmatrix_from_json(j.at("U")), q = cmatrix_from_json(j.at("Q"));
    if (u.rows() != q.rows()) throw ParseError("U and Q differ in size");
    try {
      return HarmonicData::make(u, q, j.value("weight", 0));
    } catch (const NonHermitian& e) {
      throw ParseError(e.what());
    }
  });
}

std::vector<cplx> parse_tau_grid(const std::string& spec, bool allow_complex) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw ParseError("empty tau grid");
  const std::string& kind = parts[0];
  std::vector<cplx> grid;
  if (kind == "log" || kind == "lin") {
    if (parts.size() != 4) throw ParseError("tau grid must be " + kind + ":lo:hi:count");
    const double lo = parse_number(parts[1]), hi = parse_number(parts[2]);
    const std::size_t count = parse_count(parts[3]);
    if (!(lo > 0 && hi > 0)) throw ParseError("tau grid bounds must be positive");
    if (kind == "log" && count > 0) {
      grid = log_grid(lo, hi, count);
    } else {
      for (std::size_t i = 0; i < count; ++i)
        grid.emplace_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
  } else if (kind == "list") {
    if (parts.size() != 2) throw ParseError("tau grid must be list:a,b,...");
    for (const auto& s : split(parts[1], ','))
      if (!s.empty()) grid.emplace_back(parse_number(s));
    for (auto t : grid)
      if (t.real() <= 0) throw ParseError("tau grid entries must be positive");
  } else if (kind == "circle") {
    if (!allow_complex) throw ParseError("complex tau grids need --complex");
    if (parts.size() != 3) throw ParseError("tau grid must be circle:radius:count");
    const double r = parse_number(parts[1]);
    const std::size_t count = parse_count(parts[2]);
    if (!(r > 0)) throw ParseError("circle radius must be positive");
    for (std::size_t i = 0; i < count; ++i)
      grid.push_back(std::polar(r, 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count)));
  } else {
    throw ParseError("unknown tau grid kind '" + kind + "'");
  }
  if (grid.empty()) throw ParseError("tau grid has no points");
  return grid;
}

JobSpec parse_job(const json& j) {
  JobSpec job;
  parsing("job", [&] {
    if (!j.is_object()) throw ParseError("input must be a JSON object");
    if (!j.contains("version")) throw ParseError("missing \"version\"");
    if (!j.at("version").is_number_integer() || j.at("version").get<int>() != kSchemaVersion)
      throw ParseError("unsupported version " + j.at("version").dump());
    if (j.contains("module")) {
      const json& m = j.at("module");
      const DOperator op = operator_from_json(m.at("operator"));
      const std::string mode = m.value("filtration", "unitary");
      std::vector<FiltrationStep> steps;
      FiltrationMode fm;
      if (mode == "unitary") {
        fm = FiltrationMode::Unitary;
      } else if (mode == "explicit") {
        fm = FiltrationMode::Explicit;
        for (const auto& s : m.at("steps")) {
          FiltrationStep step;
          step.p = s.at("p").get<long>();
          for (const auto& g : s.at("generators")) step.generators.push_back(operator_from_json(g));
          steps.push_back(std::move(step));
        }
      } else {
        throw ParseError("filtration must be unitary or explicit");
      }
      job.module = make_module(op, fm, std::move(steps), m.value("p0", 0L));
    }
    if (j.contains("harmonic")) job.harmonic = harmonic_from_json(j.at("harmonic"));
    if (j.contains("numeric")) {
      const json& n = j.at("numeric");
      NumericParams& p = job.numeric;
      p.fourier_order = n.value("fourier_order", p.fourier_order);
      p.tau_grid = n.value("tau_grid", p.tau_grid);
      p.allow_complex = n.value("allow_complex", p.allow_complex);
      p.limits.tau_small = n.value("tau_small", p.limits.tau_small);
      p.limits.tau_large = n.value("tau_large", p.limits.tau_large);
      p.limits.tolerance = n.value("tolerance", p.limits.tolerance);
      if (n.contains("invariant_taus")) p.invariant_taus = n.at("invariant_taus").get<std::vector<double>>();
    }
    NumericParams& p = job.numeric;
    if (p.fourier_order < 8 || p.fourier_order > 4096 || (p.fourier_order & (p.fourier_order - 1)) != 0)
      throw ParseError("fourier_order must be a power of two in [8, 4096]");
    if (!(p.limits.tau_small > 0 && p.limits.tau_small < 1 && p.limits.tau_large > 1))
      throw ParseError("need 0 < tau_small < 1 < tau_large");
    if (!(p.limits.tolerance > 0)) throw ParseError("tolerance must be positive");
    for (double t : p.invariant_taus)
      if (!(t > 0)) throw ParseError("invariant_taus must be positive");
    p.limits.fourier_order = p.fourier_order;
    if (j.contains("deligne"))
      for (const auto& g : j.at("deligne").at("gamma")) job.gammas.push_back(rational_from_json(g));
    if (j.contains("expected")) {
      const json& e = j.at("expected");
      std::vector<double> inf, zero;
      for (const auto& r : e.at("sp_infinity")) inf.push_back(to_double(rational_from_json(r)));
      for (const auto& r : e.at("sp_zero")) zero.push_back(to_double(rational_from_json(r)));
      job.expected = std::make_pair(inf, zero);
    }
    if (!job.module && !job.harmonic) throw ParseError("input needs \"module\" or \"harmonic\"");
    return 0;
  });
  return job;
}

JobSpec parse_job_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_job(j);
}

HarmonicData job_harmonic(const JobSpec& job) {
  if (job.harmonic) return *job.harmonic;
  const FilteredDModule& m = require_module(job, "harmonic data");
  const LatticePair pair = brieskorn(m);
  const BirkhoffNormalForm bnf = normal_form(pair, birkhoff_v_solution(pair)).numeric();
  return harmonic_from_bnf(bnf, stokes_pairing(bnf), job.numeric.fourier_order, job.numeric.tol);
}

json run_spectral(const JobSpec& job) {
  const FilteredDModule& m = require_module(job, "spectral");
  const LatticePair pair = brieskorn(m);
  json r = base_report(job, "spectral");
  const SpectralPolynomial inf = sp_infinity(pair), zero = sp_zero(pair);
  r["sp_infinity"] = sp_to_json(inf);
  r["sp_zero"] = sp_to_json(zero);
  r["nu"] = roots_to_json(spectrum_at_infinity(pair));
  json mu = json::array();
  for (const auto& s : spectrum_at_origin(pair, 4 * pair.rank() + 4))
    mu.push_back({{"c", rational_to_json(s.c)}, {"mu", roots_to_json(s.mu)}});
  r["mu"] = mu;
  r["nu_bigraded"] = bigraded_to_json(bigraded_infinity(pair));
  r["mu_bigraded"] = bigraded_to_json(bigraded_zero(pair));
  r["U"] = qmatrix_to_json(u_matrix(pair));
  // Susy at tau = 1 needs harmonic data, which is only derived in low rank.
  try {
    const HarmonicData h = job_harmonic(job);
    r["harmonic"] = harmonic_to_json(h);
    r["susy"] = {{"roots", doubles_to_json(susy_roots(h.q))}};
  } catch (const Error& e) {
    r["susy"] = {{"roots", nullptr}, {"reason", e.what()}};
  }
  return r;
}

ScanReport run_scan(const JobSpec& job) {
  const auto grid = parse_tau_grid(job.numeric.tau_grid, job.numeric.allow_complex);
  return susy_scan(job_harmonic(job), grid, job.numeric.fourier_order, job.numeric.tol);
}

json run_verify(const JobSpec& job, bool& pass) {
  std::vector<double> inf, zero;
  json r = base_report(job, "verify");
  if (job.expected) {
    std::tie(inf, zero) = *job.expected;
  } else {
    const LatticePair pair = brieskorn(require_module(job, "verify"));
    const SpectralPolynomial a = sp_infinity(pair), b = sp_zero(pair);
    r["sp_infinity"] = sp_to_json(a);
    r["sp_zero"] = sp_to_json(b);
    inf = expanded_roots(a);
    zero = expanded_roots(b);
  }
  const HarmonicData h = job_harmonic(job);
  r["harmonic"] = harmonic_to_json(h);

  const LimitReport lim = verify_limits(h, inf, zero, job.numeric.limits, job.numeric.tol);
  auto side = [](const LimitSide& s) {
    return json{{"tau", report_double(s.tau)},
                {"expected", doubles_to_json(s.expected)},
                {"roots", doubles_to_json(s.roots)},
                {"max_error", report_double(s.max_error)},
                {"errors_along_ray", doubles_to_json({s.err[0], s.err[1], s.err[2]})},
                {"rate", report_double(s.rate)},
                {"at_floor", s.at_floor},
                {"pass", s.pass}};
  };
  r["limits"] = {{"zero", side(lim.zero)}, {"infinity", side(lim.infinity)}, {"pass", lim.pass}};

  const InvariantReport inv = invariant_suite(h, job.numeric.invariant_taus, job.numeric.fourier_order, job.numeric.tol);
  json checks = json::array();
  for (const auto& c : inv.checks)
    checks.push_back(
        {{"name", c.name}, {"value", report_double(c.value)}, {"bound", report_double(c.bound)}, {"pass", c.pass}});
  r["invariants"] = {{"checks", checks}, {"pass", inv.pass}};
  pass = lim.pass && inv.pass;
  r["pass"] = pass;
  return r;
}

json run_deligne(const JobSpec& job) {
  const FilteredDModule& m = require_module(job, "deligne");
  if (job.gammas.empty()) throw ParseError("deligne needs at least one gamma");
  json r = base_report(job, "deligne");
  r["deligne"] = {{"gamma", json::array()}};
  json lattices = json::array();
  for (const auto& g : job.gammas) {
    r["deligne"]["gamma"].push_back(rational_to_json(g));
    const DeligneLattice d = deligne_filtration_lattice(m, g);
    json e = {{"gamma", rational_to_json(g)}, {"zero", d.zero}};
    e["lattice"] = d.zero ? json(nullptr) : lattice_to_json(d.lattice);
    lattices.push_back(e);
  }
  r["lattices"] = lattices;
  return r;
}

}  // namespace holospec
