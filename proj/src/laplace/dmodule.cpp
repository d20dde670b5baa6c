#include "holospec/laplace/dmodule.hpp"

#include <algorithm>
#include <map>

#include "holospec/errors.hpp"
#include "holospec/exact/matrix.hpp"
#include "holospec/meroconn/lattice.hpp"

namespace holospec {

DOperator::DOperator(std::vector<Term> terms) {
  std::map<std::pair<long, long>, Rational> acc;
  for (const auto& t : terms) {
    if (t.i < 0 || t.j < 0) throw std::invalid_argument("operator exponents must be nonnegative");
    acc[{t.i, t.j}] += t.a;
  }
  for (const auto& [k, a] : acc)
    if (a != 0) terms_.push_back({k.first, k.second, a});
}

long DOperator::order() const {
  long o = -1;
  for (const auto& t : terms_) o = std::max(o, t.j);
  return o;
}

long DOperator::t_degree() const {
  long d = -1;
  for (const auto& t : terms_) d = std::max(d, t.i);
  return d;
}

LaurentPoly DOperator::coefficient(long j) const {
  LaurentPoly c;
  for (const auto& t : terms_)
    if (t.j == j) c += LaurentPoly::monomial(t.a, t.i);
  return c;
}

DOperator DOperator::dt_times() const {
  // d_t t^i d^j = t^i d^{j+1} + i t^{i-1} d^j
  std::vector<Term> out;
  for (const auto& t : terms_) {
    out.push_back({t.i, t.j + 1, t.a});
    if (t.i > 0) out.push_back({t.i - 1, t.j, t.a * t.i});
  }
  return DOperator(out);
}

DOperator operator+(const DOperator& a, const DOperator& b) {
  std::vector<DOperator::Term> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return DOperator(t);
}

DOperator operator*(const LaurentPoly& c, const DOperator& a) {
  std::vector<DOperator::Term> out;
  if (!c.is_zero() && c.low() < 0) throw std::invalid_argument("operator coefficients must be polynomials");
  if (c.is_zero()) return {};
  for (long e = 0; e <= c.high(); ++e)
    if (c.coeff(e) != 0)
      for (const auto& t : a.terms()) out.push_back({t.i + e, t.j, t.a * c.coeff(e)});
  return DOperator(out);
}

namespace {

const LaurentPoly kT = LaurentPoly::monomial(1, 1);

long order_at(const LaurentPoly& p, const Rational& c) {
  if (p.is_zero()) return 1L << 40;
  return RatFunc(p).translated(c).valuation();
}

RatFunc derivative(const RatFunc& f) { return f.euler() / RatFunc(kT); }

// Q[t]-module spanned by vectors over Q(t): Hermite form after clearing a common denominator.
LaurentMatrix span_hnf(const std::vector<std::vector<RatFunc>>& vs, std::size_t n, const LaurentPoly& den) {
  LaurentMatrix m(n, vs.size(), "t");
  for (std::size_t j = 0; j < vs.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) {
      RatFunc x = vs[j][i] * RatFunc(den);
      if (!x.is_laurent()) throw std::logic_error("span_hnf: denominator does not clear");
      m(i, j) = x.num();
    }
  return column_hnf(m);
}

LaurentPoly common_denominator(const std::vector<std::vector<RatFunc>>& vs) {
  LaurentPoly d(1);
  for (const auto& v : vs)
    for (const auto& x : v) {
      LaurentPoly g = poly_gcd(d, x.den()), q, r;
      divmod(x.den(), g, q, r);
      d = d * q;
    }
  return d;
}

std::vector<std::vector<RatFunc>> as_vectors(const DOperator& op, const std::vector<DOperator>& gens) {
  std::vector<std::vector<RatFunc>> out;
  for (const auto& g : gens) out.push_back(companion_vector(op, g));
  return out;
}

bool module_contains(const DOperator& op, const std::vector<DOperator>& big, const std::vector<DOperator>& small) {
  auto b = as_vectors(op, big), s = as_vectors(op, small);
  std::vector<std::vector<RatFunc>> all = b;
  all.insert(all.end(), s.begin(), s.end());
  LaurentPoly d = common_denominator(all);
  const auto n = static_cast<std::size_t>(op.order());
  return span_hnf(b, n, d) == span_hnf(all, n, d);
}

void check_fuchs(const DOperator& op, const std::vector<Rational>& points) {
  const long n = op.order();
  const LaurentPoly an = op.coefficient(n);
  for (const auto& c : points) {
    long on = order_at(an, c);
    for (long j = 0; j < n; ++j) {
      LaurentPoly aj = op.coefficient(j);
      if (!aj.is_zero() && order_at(aj, c) < on - (n - j))
        throw IrregularSingularity("Fuchs condition fails at t = " + c.get_str());
    }
  }
  const long dn = an.high() - n;
  for (long j = 0; j < n; ++j) {
    LaurentPoly aj = op.coefficient(j);
    if (!aj.is_zero() && aj.high() - j > dn) throw NonRegularAtInfinity("Fuchs condition fails at infinity");
  }
}

std::vector<Rational> singular_points_of(const DOperator& op) {
  LaurentPoly an = op.coefficient(op.order());
  std::vector<Rational> pts;
  if (an.high() == 0) return pts;
  int unresolved = 0;
  for (const auto& [r, m] : rational_roots(an, &unresolved)) pts.push_back(r);
  if (unresolved) throw UnsupportedInput("singular points must be rational");
  return pts;
}

// s d_s matrix of the companion system in local coordinate, as rational functions of t.
std::vector<std::vector<RatFunc>> euler_companion(const DOperator& op, const RatFunc& factor) {
  const long n = op.order();
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::vector<RatFunc>> a(un, std::vector<RatFunc>(un));
  RatFunc an(op.coefficient(n));
  for (std::size_t m = 0; m + 1 < un; ++m) a[m + 1][m] = factor;
  for (std::size_t m = 0; m < un; ++m)
    a[m][un - 1] = -(factor * RatFunc(op.coefficient(static_cast<long>(m)))) / an;
  return a;
}

MeroConnection jet_connection(const std::vector<std::vector<RatFunc>>& a, long order, const std::string& var) {
  const std::size_t n = a.size();
  LaurentMatrix m(n, n, var);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a[i][j].jet(order);
  return MeroConnection(m, Derivation::Euler);
}

bool same_filtration(const VFiltration& a, const VFiltration& b) {
  if (a.jumps.size() != b.jumps.size()) return false;
  for (std::size_t k = 0; k < a.jumps.size(); ++k)
    if (a.jumps[k].gamma != b.jumps[k].gamma || a.jumps[k].multiplicity != b.jumps[k].multiplicity ||
        a.jumps[k].lattice != b.jumps[k].lattice)
      return false;
  return true;
}

template <class Build>
VFiltration stable_v(const DOperator& op, Build build, Point point, const Rational& window) {
  long order = 8 * op.order() + 8;
  VFiltration prev = v_filtration(build(order), point, window);
  for (int round = 0; round < 4; ++round) {
    order *= 2;
    VFiltration next = v_filtration(build(order), point, window);
    if (same_filtration(prev, next)) return next;
    prev = std::move(next);
  }
  throw TruncationInstability("local V-filtration depends on the expansion order");
}

// u a + v b = 1 for coprime polynomials.
void bezout(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly& u, LaurentPoly& v) {
  LaurentPoly r0 = a, r1 = b, s0(1), s1, t0, t1(1);
  while (!r1.is_zero()) {
    LaurentPoly q, r;
    divmod(r0, r1, q, r);
    r0 = r1, r1 = r;
    LaurentPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = s1, s1 = s2, t0 = t1, t1 = t2;
  }
  if (r0.high() != 0) throw HypothesisViolation("coefficients of P share a factor");
  Rational c = r0.coeff(0);
  u = s0 * (1 / c);
  v = t0 * (1 / c);
}

}  // namespace

std::vector<RatFunc> companion_vector(const DOperator& op, const DOperator& g) {
  const long n = op.order();
  const auto un = static_cast<std::size_t>(n);
  RatFunc an(op.coefficient(n));
  std::vector<RatFunc> tail(un);
  for (std::size_t m = 0; m < un; ++m) tail[m] = -RatFunc(op.coefficient(static_cast<long>(m))) / an;
  std::vector<RatFunc> out(un);
  std::vector<RatFunc> cur(un);
  cur[0] = RatFunc(LaurentPoly(1));
  long jmax = g.order();
  for (long j = 0; j <= jmax; ++j) {
    for (const auto& t : g.terms())
      if (t.j == j) {
        RatFunc c(LaurentPoly::monomial(t.a, t.i));
        for (std::size_t m = 0; m < un; ++m) out[m] = out[m] + c * cur[m];
      }
    // cur <- d_t cur
    std::vector<RatFunc> nxt(un);
    for (std::size_t m = 0; m < un; ++m) nxt[m] = derivative(cur[m]);
    for (std::size_t m = 0; m + 1 < un; ++m) nxt[m + 1] = nxt[m + 1] + cur[m];
    for (std::size_t m = 0; m < un; ++m) nxt[m] = nxt[m] + cur[un - 1] * tail[m];
    cur = std::move(nxt);
  }
  return out;
}

std::vector<DOperator> FilteredDModule::generators(long p) const {
  if (steps.empty()) return {};
  if (p > steps.back().p) return {};
  if (p >= steps.front().p) {
    for (const auto& s : steps)
      if (s.p == p) return s.generators;
  }
  std::vector<DOperator> base;
  for (const auto& s : steps)
    if (s.p == p0) base = s.generators;
  std::vector<DOperator> out = base, layer = base;
  for (long l = 1; l <= p0 - p; ++l) {
    for (auto& g : layer) g = g.dt_times();
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

FilteredDModule make_module(const DOperator& op, FiltrationMode mode, std::vector<FiltrationStep> steps, long p0) {
  if (op.is_zero()) throw std::invalid_argument("P must be nonzero");
  if (op.order() < 1) throw UnsupportedInput("P must involve d_t");
  FilteredDModule m;
  m.op = op;
  m.singular_points = singular_points_of(op);
  check_fuchs(op, m.singular_points);
  m.mode = mode;
  if (mode == FiltrationMode::Unitary) {
    m.steps = unitary_filtration(op);
    m.p0 = 0;
    return m;
  }
  std::sort(steps.begin(), steps.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
  if (steps.empty()) throw std::invalid_argument("explicit filtration needs at least one step");
  for (std::size_t k = 1; k < steps.size(); ++k)
    if (steps[k].p != steps[k - 1].p + 1) throw std::invalid_argument("filtration steps must be consecutive");
  bool has_p0 = false;
  for (const auto& s : steps) {
    if (s.generators.empty()) throw std::invalid_argument("empty filtration step");
    has_p0 = has_p0 || s.p == p0;
  }
  if (!has_p0) throw std::invalid_argument("generation index must be one of the steps");
  m.steps = std::move(steps);
  m.p0 = p0;
  for (std::size_t k = 1; k < m.steps.size(); ++k) {
    const auto& lo = m.steps[k - 1].generators;
    const auto& hi = m.steps[k].generators;
    if (!module_contains(op, lo, hi)) throw HypothesisViolation("filtration is not decreasing");
    std::vector<DOperator> dhi;
    for (const auto& g : hi) dhi.push_back(g.dt_times());
    if (!module_contains(op, lo, dhi)) throw HypothesisViolation("d_t F^p is not contained in F^{p-1}");
  }
  for (const auto& s : m.steps)
    if (s.p < p0) {
      FilteredDModule gen = m;
      gen.steps = {};
      for (const auto& t : m.steps)
        if (t.p >= p0) gen.steps.push_back(t);
      auto want = gen.generators(s.p);
      if (!module_contains(op, want, s.generators) || !module_contains(op, s.generators, want))
        throw HypothesisViolation("filtration is not generated at p0");
    }
  return m;
}

MeroConnection local_companion(const DOperator& op, const Rational& c, long order) {
  RatFunc factor(LaurentPoly::from_coeffs(0, {-c, Rational(1)}));
  auto a = euler_companion(op, factor);
  for (auto& row : a)
    for (auto& x : row) x = x.translated(c);
  return jet_connection(a, order, "s");
}

MeroConnection local_companion_at_infinity(const DOperator& op, long order) {
  auto a = euler_companion(op, RatFunc(-kT));
  for (auto& row : a)
    for (auto& x : row) x = x.flipped();
  return jet_connection(a, order, "x");
}

VFiltration v_filtration_at_point(const FilteredDModule& m, const Rational& c, const Rational& window) {
  return stable_v(m.op, [&](long k) { return local_companion(m.op, c, k); }, Point::Zero, window);
}

VFiltration v_filtration_at_infinity(const FilteredDModule& m, const Rational& window) {
  return stable_v(m.op, [&](long k) { return local_companion_at_infinity(m.op, k); }, Point::Zero, window);
}

std::vector<LocalExponent> first_order_exponents(const DOperator& op) {
  if (op.order() != 1) throw UnsupportedInput("first order operator expected");
  LaurentPoly a1 = op.coefficient(1), a0 = op.coefficient(0);
  std::vector<LocalExponent> out;
  // [1] behaves like f with f'/f = -a0/a1
  RatFunc w = -RatFunc(a0) / RatFunc(a1);
  for (const auto& c : singular_points_of(op)) {
    RatFunc local = (w * RatFunc(LaurentPoly::from_coeffs(0, {-c, Rational(1)}))).translated(c);
    if (local.valuation() < 0) throw IrregularSingularity("pole of order > 1 at t = " + c.get_str());
    out.push_back({c, false, local.valuation() > 0 ? Rational(0) : local.eval(0)});
  }
  RatFunc inf = (-(w * RatFunc(kT))).flipped();
  if (!inf.is_zero() && inf.valuation() < 0) throw NonRegularAtInfinity("pole of order > 1 at infinity");
  out.push_back({0, true, inf.is_zero() || inf.valuation() > 0 ? Rational(0) : inf.eval(0)});
  return out;
}

std::vector<FiltrationStep> unitary_filtration(const DOperator& op) {
  if (op.order() != 1) throw UnsupportedInput("unitary filtration is implemented for first order operators");
  for (const auto& e : first_order_exponents(op))
    if (!e.at_infinity && (e.exponent <= 0 || e.exponent >= 1))
      throw HypothesisViolation("exponent at t = " + e.point.get_str() + " is not in (0, 1)");
  LaurentPoly a1 = op.coefficient(1), a0 = op.coefficient(0), u, v;
  // (u + v d_t)[1] = (u a1 - v a0) / a1 [1] = [1] / a1
  bezout(a1, a0, u, v);
  v = -v;
  DOperator g = u * DOperator({{0, 0, 1}}) + v * DOperator({{0, 1, 1}});
  return {{0, {g}}};
}

}  // namespace holospec
