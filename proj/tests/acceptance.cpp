// Acceptance runner: one PASS/FAIL line per criterion, JSON report next to the binary's cwd.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"

#include "holospec/errors.hpp"
#include "holospec/laplace/deligne.hpp"
#include "holospec/laplace/transform.hpp"
#include "holospec/meroconn/connection.hpp"
#include "holospec/rescale/bridge.hpp"
#include "holospec/rescale/scan.hpp"
#include "holospec/spectra/birkhoff.hpp"

using namespace holospec;
using json = nlohmann::json;
using Roots = std::vector<std::pair<Rational, std::size_t>>;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

DOperator e1_operator(const Rational& alpha) { return DOperator({{1, 1, 1}, {0, 0, -alpha}}); }

DOperator e3_operator() {
  return DOperator({{2, 1, 1}, {1, 1, -1}, {1, 0, Rational(-5, 6)}, {0, 0, Rational(1, 3)}});
}

const std::vector<Rational> kAlphas{Rational(1, 3), Rational(1, 2), Rational(2, 5)};

LatticePair pair_of(const DOperator& op) { return brieskorn(make_module(op, FiltrationMode::Unitary)); }

HarmonicData harmonic_of(const LatticePair& pair, std::size_t fourier_order) {
  const BirkhoffNormalForm bnf = normal_form(pair, birkhoff_v_solution(pair)).numeric();
  return harmonic_from_bnf(bnf, stokes_pairing(bnf), fourier_order);
}

Rational random_rational(std::mt19937& g, int num, int den) {
  std::uniform_int_distribution<int> n(-num, num), d(1, den);
  return Rational(n(g), d(g));
}

std::vector<Rational> random_hodge_diagonal(std::mt19937& g) {
  std::uniform_int_distribution<int> rank(1, 4);
  std::vector<Rational> q;
  for (int i = rank(g); i > 0; --i) q.push_back(random_rational(g, 12, 6));
  return q;
}

LaurentPoly mono(Rational c, long e) { return LaurentPoly::monomial(c, e); }

LaurentMatrix random_unimodular(std::mt19937& g, std::size_t n) {
  std::uniform_int_distribution<int> c(-2, 2), e(-1, 1), idx(0, static_cast<int>(n) - 1);
  LaurentMatrix p = LaurentMatrix::identity(n, "theta");
  for (int k = 0; k < 3; ++k) {
    const auto i = static_cast<std::size_t>(idx(g)), j = static_cast<std::size_t>(idx(g));
    if (i == j) continue;
    LaurentMatrix el = LaurentMatrix::identity(n, "theta");
    el(i, j) = mono(c(g), e(g));
    p = p * el;
  }
  return p;
}

Lattice diag_lattice(const std::vector<long>& exps) {
  LaurentMatrix m(exps.size(), exps.size(), "theta");
  for (std::size_t i = 0; i < exps.size(); ++i) m(i, i) = mono(1, exps[i]);
  return Lattice(m, Side::AtZero);
}

// theta d/dtheta = Q - U theta on the standard Q[1/theta]-lattice
LatticePair uq_pair(const QMatrix& u, const QMatrix& q) {
  LaurentMatrix m = LaurentMatrix::from_constant(q, "theta") - LaurentMatrix::from_constant(u, "theta").shifted(1);
  return {MeroConnection(m), Lattice::standard(q.rows(), Side::AtInfinity, "theta")};
}

// Q = P diag(d) P^{-1} with a unipotent P, so the residue has rational spectrum.
LatticePair random_uq_pair(std::mt19937& g) {
  const Rational d0 = random_rational(g, 6, 4), d1 = random_rational(g, 6, 4);
  const Rational s = random_rational(g, 3, 3);
  QMatrix p{{1, s}, {0, 1}}, pinv{{1, -s}, {0, 1}};
  QMatrix q = p * QMatrix::diagonal({d0, d1}) * pinv;
  std::uniform_int_distribution<int> ui(1, 3);
  return uq_pair(QMatrix::diagonal({0, Rational(ui(g))}), q);
}

// (t - a)(t - b) d_t - c (t - b) - d (t - a) with local exponents c, d in (0, 1), or t d_t - c.
DOperator random_first_order(std::mt19937& g) {
  std::uniform_int_distribution<int> pt(-3, 3), den(2, 7), coin(0, 3);
  auto frac = [&] {
    const int d = den(g);
    std::uniform_int_distribution<int> n(1, d - 1);
    return Rational(n(g), d);
  };
  if (coin(g) == 0) return DOperator({{1, 1, 1}, {0, 0, -frac()}});
  const Rational a = pt(g);
  Rational b = pt(g);
  while (b == a) b = pt(g);
  const Rational c = frac(), d = frac();
  return DOperator({{2, 1, 1}, {1, 1, -(a + b)}, {0, 1, a * b}, {1, 0, -(c + d)}, {0, 0, c * b + d * a}});
}

// 100 instances of one property over random draws; draws outside the supported class are redrawn.
void property(Outcome& o, const std::string& name, std::mt19937& g, const std::function<bool(std::mt19937&)>& f) {
  int done = 0, skipped = 0;
  while (done < 100) {
    try {
      o.require(f(g), name);
      ++done;
    } catch (const UnsupportedInput&) {
      if (++skipped > 1000) {
        o.require(false, name + ": too many unsupported draws");
        return;
      }
    }
  }
  o.detail << name << " 100/100";
  if (skipped) o.detail << " (" << skipped << " redrawn)";
  o.detail << "; ";
}

void criterion1(Outcome& o) {
  for (const auto& alpha : kAlphas) {
    const LatticePair pair = pair_of(e1_operator(alpha));
    o.require(spectrum_at_infinity(pair) == Roots{{-alpha, 1}}, "spectrum at alpha " + to_string(alpha));
    o.require(nu_gamma(pair, -alpha) == 1, "nu at -alpha");
    for (const Rational& g : std::vector<Rational>{0, -alpha + 1, -alpha - 1, alpha, Rational(-1, 7)})
      o.require(nu_gamma(pair, g) == 0, "nu away from -alpha");
  }
  o.detail << "nu_{-alpha} = 1 for alpha = 1/3, 1/2, 2/5";
}

void criterion2(Outcome& o) {
  std::mt19937 g(20);
  for (int k = 0; k < 20; ++k) {
    const auto q = random_hodge_diagonal(g);
    const LatticePair p = hodge_diagonal_pair(q);
    const auto inf = sp_infinity(p), zero = sp_zero(p);
    const auto susy = susy_poly_exact(QMatrix::diagonal(q));
    o.require(susy.exact.has_value(), "exact susy polynomial");
    if (!susy.exact) return;
    o.require(inf.roots == zero.roots && zero.roots == susy.exact->roots, "triple equality");
    o.require(inf.polynomial() == susy.exact->polynomial(), "polynomials");
  }
  o.detail << "20 random inputs, ranks 1 to 4";
}

void criterion3(Outcome& o) {
  for (const auto& alpha : kAlphas) {
    const auto m = make_module(e1_operator(alpha), FiltrationMode::Unitary);
    const VFiltration vinf = v_filtration_at_infinity(m);
    for (const Rational& beta : std::vector<Rational>{0, -alpha, Rational(-1, 3), Rational(-7, 8)})
      for (long p = -3; p <= 2; ++p) {
        const DeligneLattice f = deligne_filtration_lattice(m, beta + p);
        if (p >= 1) o.require(f.zero, "F_Del vanishes for p >= 1");
        else o.require(!f.zero && f.lattice == vinf.at(beta).times_power(2 * p - 1), "F_Del = x^{2p-1} V^beta");
      }
  }
  // alpha = 1/3: F_Del^{-1/3-p} is generated by t'^{2p+1}, F_Del^{-p} by t'^{2p}, with x = 1/t'
  const auto m = make_module(e1_operator(Rational(1, 3)), FiltrationMode::Unitary);
  for (long p = 0; p <= 3; ++p) {
    const Lattice odd(LaurentMatrix::identity(1, "x").shifted(-(2 * p + 1)), Side::AtZero);
    const Lattice even(LaurentMatrix::identity(1, "x").shifted(-2 * p), Side::AtZero);
    o.require(deligne_filtration_lattice(m, Rational(-1, 3) - p).lattice == odd, "generator t'^{2p+1}");
    o.require(deligne_filtration_lattice(m, Rational(-p)).lattice == even, "generator t'^{2p}");
  }
  o.detail << "3 alphas x 4 betas x p in [-3, 2], explicit generators at alpha = 1/3";
}

void criterion4(Outcome& o) {
  std::vector<DOperator> ops;
  for (const auto& a : kAlphas) ops.push_back(e1_operator(a));
  ops.push_back(e3_operator());
  for (const auto& op : ops) {
    const LatticePair pair = pair_of(op);
    o.require(product_infinity(bigraded_infinity(pair)).polynomial() == sp_infinity(pair).polynomial(),
              "prod (T - beta - p)^nu = SP^inf");
    o.require(product_zero(bigraded_zero(pair)).polynomial() == sp_zero(pair).polynomial(),
              "prod (T + beta - p)^mu = SP^0");
  }
  o.detail << "E1 (3 alphas) and E3";
}

void criterion5(Outcome& o) {
  std::vector<DOperator> ops;
  for (const auto& a : kAlphas) ops.push_back(e1_operator(a));
  ops.push_back(e3_operator());
  for (const auto& op : ops) {
    const LatticePair pair = pair_of(op);
    const BirkhoffSolution s = birkhoff_v_solution(pair);
    o.require(s.g0_basis.size() == pair.rank(), "solution rank");
    const auto cert = verify_v_solution(pair, s.gprime0);
    o.require(!cert.empty(), "certificate");
    const DeRhamFiber fib = derham_fiber(pair);
    o.require(fib.dimension == pair.rank(), "fiber dimension");
    o.require(fib.gr_dims == spectrum_at_infinity(pair), "dim gr_V^gamma = nu_gamma");
  }
  o.detail << "E1 (3 alphas) and E3";
}

void criterion6(Outcome& o, json& extra) {
  const LatticePair pair = pair_of(e3_operator());
  const HarmonicData h = harmonic_of(pair, 128);
  std::vector<double> inf, zero;
  for (const auto& [g, m] : sp_infinity(pair).roots) inf.insert(inf.end(), m, to_double(g));
  for (const auto& [g, m] : sp_zero(pair).roots) zero.insert(zero.end(), m, to_double(g));
  const LimitReport lim = verify_limits(h, inf, zero);
  const ScanReport scan = susy_scan(h, log_grid(1e-3, 1e3, 41), 128);
  int ok = 0;
  for (const auto& p : scan.points) ok += p.ok;
  o.require(ok == 41, "all 41 scan points pure");
  o.require(lim.zero.max_error < 1e-2, "tau = 1e-3 against SP^inf within 1e-2");
  o.require(lim.infinity.max_error < 1e-2, "tau = 1e3 against SP^0 within 1e-2");
  o.require(lim.zero.pass && lim.infinity.pass, "convergence trend");
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "tau=1e-3 roots (%.6f, %.6f) vs (%.6f, %.6f) err %.3e rate %.3f; "
                "tau=1e3 roots (%.6f, %.6f) vs (%.6f, %.6f) err %.3e; scan %d/41 pure",
                lim.zero.roots[0], lim.zero.roots[1], inf[0], inf[1], lim.zero.max_error, lim.zero.rate,
                lim.infinity.roots[0], lim.infinity.roots[1], zero[0], zero[1], lim.infinity.max_error, ok);
  o.detail << buf;
  extra = {{"zero_errors", {lim.zero.err[0], lim.zero.err[1], lim.zero.err[2]}},
           {"zero_rate", lim.zero.rate},
           {"infinity_errors", {lim.infinity.err[0], lim.infinity.err[1], lim.infinity.err[2]}}};
}

void criterion7(Outcome& o) {
  std::vector<std::pair<std::string, HarmonicData>> inputs;
  for (const auto& a : kAlphas) inputs.push_back({"E1 alpha " + to_string(a), harmonic_of(pair_of(e1_operator(a)), 128)});
  inputs.push_back({"E3", harmonic_of(pair_of(e3_operator()), 128)});
  std::mt19937 g(20);
  for (int k = 0; k < 3; ++k) {
    const auto q = random_hodge_diagonal(g);
    CMatrix qm = CMatrix::Zero(static_cast<Eigen::Index>(q.size()), static_cast<Eigen::Index>(q.size()));
    for (std::size_t i = 0; i < q.size(); ++i) qm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = to_double(q[i]);
    inputs.push_back({"Hodge diagonal " + std::to_string(k), HarmonicData::make(CMatrix::Zero(qm.rows(), qm.cols()), qm)});
  }
  const std::vector<double> taus{1e-3, 1e-1, 0.5, 2.0, 10.0, 1e3};
  for (const auto& [name, h] : inputs) {
    const InvariantReport rep = invariant_suite(h, taus, 128);
    for (const auto& c : rep.checks) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "%s: %s = %.3e", name.c_str(), c.name.c_str(), c.value);
      o.require(c.pass, buf);
    }
  }
  o.detail << inputs.size() << " inputs, tau in {1e-3, 0.1, 0.5, 2, 10, 1e3} and 4 points on |tau| = 1";
}

void criterion8(Outcome& o) {
  std::mt19937 g(8);
  property(o, "saturation idempotence", g, [](std::mt19937& r) {
    MeroConnection base(LaurentMatrix::from_constant(
        QMatrix{{random_rational(r, 4, 3), 1}, {0, random_rational(r, 4, 3)}}, "theta"));
    const MeroConnection c = base.gauge(random_unimodular(r, 2));
    const Lattice l = Lattice::standard(2, Side::AtZero, "theta");
    const Lattice s = levelt_saturate(c, l, Point::Zero);
    return levelt_saturate(c, s, Point::Zero) == s && s.contains(l);
  });
  property(o, "V-shift", g, [](std::mt19937& r) {
    const std::vector<Rational> lams{random_rational(r, 6, 4), random_rational(r, 6, 4)};
    const MeroConnection c =
        MeroConnection(LaurentMatrix::from_constant(QMatrix::diagonal(lams), "theta")).gauge(random_unimodular(r, 2));
    const VFiltration f = v_filtration(c, Point::Zero, Rational(-1, 2));
    for (int num = -6; num <= 6; num += 3) {
      const Rational gam(num, 4);
      if (!(f.at(gam + 1) == f.at(gam).times_power(1))) return false;
    }
    return true;
  });
  property(o, "direct-sum multiplicativity", g, [](std::mt19937& r) {
    const LatticePair a = random_uq_pair(r), b = hodge_diagonal_pair(random_hodge_diagonal(r));
    const LatticePair s = direct_sum(a, b);
    return sp_infinity(s).roots == multiply(sp_infinity(a), sp_infinity(b)).roots &&
           sp_zero(s).roots == multiply(sp_zero(a), sp_zero(b)).roots;
  });
  property(o, "z_o independence", g, [](std::mt19937& r) {
    const LatticePair p = random_uq_pair(r);
    const auto base = spectrum_at_infinity(p, 1);
    std::uniform_int_distribution<int> z(2, 9);
    return spectrum_at_infinity(p, z(r)) == base && spectrum_at_infinity(p, Rational(-z(r), 3)) == base;
  });
  std::vector<DOperator> ops;
  property(o, "generation-index independence", g, [&](std::mt19937& r) {
    const DOperator op = random_first_order(r);
    const auto m = make_module(op, FiltrationMode::Unitary);
    const LaplaceTransform lt = laplace_transform(m);
    const Lattice g0 = brieskorn_lattice(m, lt, 0);
    ops.push_back(op);
    return brieskorn_lattice(m, lt, -1) == g0 && brieskorn_lattice(m, lt, -2) == g0;
  });
  std::size_t next = 0;
  property(o, "loc inclusions", g, [&](std::mt19937& r) {
    const DOperator op = next < ops.size() ? ops[next++] : random_first_order(r);
    const auto m = make_module(op, FiltrationMode::Unitary);
    const LaplaceTransform lt = laplace_transform(m);
    return check_loc_inclusions(m, lt, brieskorn_lattice(m, lt, 0));
  });
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* title;
    double budget;  // seconds
    std::function<void(Outcome&, json&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "E1 exact reproduction", 1, [](Outcome& o, json&) { criterion1(o); }},
      {2, "Hodge-diagonal triple equality", 1, [](Outcome& o, json&) { criterion2(o); }},
      {3, "Deligne lattices of unitary one-jump inputs", 1, [](Outcome& o, json&) { criterion3(o); }},
      {4, "bigraded product identities", 5, [](Outcome& o, json&) { criterion4(o); }},
      {5, "Birkhoff V-solution and de Rham fiber dimensions", 5, [](Outcome& o, json&) { criterion5(o); }},
      {6, "tau -> 0 and tau -> inf limits on E3", 60, criterion6},
      {7, "numeric invariant suite", 60, [](Outcome& o, json&) { criterion7(o); }},
      {8, "exact property suite", 30, [](Outcome& o, json&) { criterion8(o); }},
  };
  json report = {{"criteria", json::array()}};
  bool all = true;
  for (const auto& c : criteria) {
    Outcome o;
    json extra;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o, extra);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs < c.budget, "runtime over budget");
    all = all && o.pass;
    std::printf("criterion %d %s: %s (%.2f s, budget %.0f s) %s\n", c.id, c.title, o.pass ? "PASS" : "FAIL", secs,
                c.budget, o.detail.str().c_str());
    std::fflush(stdout);
    json entry = {{"id", c.id}, {"title", c.title}, {"pass", o.pass}, {"seconds", secs}, {"detail", o.detail.str()}};
    if (!extra.is_null()) entry["data"] = extra;
    report["criteria"].push_back(entry);
  }
  report["pass"] = all;
  std::ofstream(argc > 1 ? argv[1] : "acceptance_report.json") << report.dump(2) << "\n";
  return all ? 0 : 1;
}
