#include "holospec/laplace/transform.hpp"

#include <algorithm>

#include "holospec/errors.hpp"

namespace holospec {

namespace {

constexpr int kRoundLimit = 64;

const LaurentPoly kTheta = LaurentPoly::monomial(1, 1);

Rational binom(long n, long k) {
  Rational r = 1;
  for (long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

Rational falling(long j, long k) {
  Rational r = 1;
  for (long i = 0; i < k; ++i) r *= (j - i);
  return r;
}

// (-d_theta)^i theta^j = (-1)^i sum_k C(i,k) (j)_k theta^{j-k} d_theta^{i-k}
std::vector<LaurentPoly> hat_coefficients(const DOperator& op) {
  const long d = op.t_degree();
  std::vector<LaurentPoly> c(static_cast<std::size_t>(d + 1));
  for (const auto& t : op.terms())
    for (long k = 0; k <= t.i && k <= t.j; ++k) {
      Rational a = t.a * binom(t.i, k) * falling(t.j, k);
      if (t.i % 2) a = -a;
      c[static_cast<std::size_t>(t.i - k)] += LaurentPoly::monomial(a, t.j - k);
    }
  return c;
}

// theta d/dtheta on companion coordinates.
RatVector euler_apply(const LaplaceTransform& lt, const RatVector& v) {
  const std::size_t d = lt.rank;
  RatVector out(d);
  RatFunc th(kTheta), cd(lt.hat[d]);
  for (std::size_t m = 0; m < d; ++m) out[m] = v[m].euler();
  for (std::size_t m = 0; m + 1 < d; ++m) out[m + 1] = out[m + 1] + th * v[m];
  for (std::size_t m = 0; m < d; ++m)
    out[m] = out[m] - th * RatFunc(lt.hat[m]) / cd * v[d - 1];
  return out;
}

LaurentPoly common_denominator(const std::vector<RatVector>& vs) {
  LaurentPoly d(1);
  for (const auto& v : vs)
    for (const auto& x : v) {
      LaurentPoly g = poly_gcd(d, x.den()), q, r;
      divmod(x.den(), g, q, r);
      d = d * q;
    }
  return d;
}

struct Span {
  std::vector<RatVector> basis;
  RatFunc det;
};

Span make_span(const std::vector<RatVector>& gens, std::size_t n) {
  LaurentPoly den = common_denominator(gens);
  LaurentMatrix m(n, gens.size(), "theta");
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = (gens[j][i] * RatFunc(den)).num();
  std::vector<std::size_t> piv;
  LaurentMatrix h = column_hnf(m, nullptr, &piv);
  if (h.cols() != n) throw UnsupportedInput("transformed module is not free of the expected rank");
  Span s;
  LaurentPoly detnum(1), detden(1);
  for (std::size_t j = 0; j < n; ++j) {
    RatVector col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = RatFunc(h(i, j), den);
    s.basis.push_back(std::move(col));
    detnum = detnum * h(piv[j], j);
    detden = detden * den;
  }
  s.det = RatFunc(detnum, detden);
  return s;
}

// Solves F X = B over Q(theta); F square invertible.
std::vector<RatVector> ratfunc_solve(std::vector<RatVector> f, std::vector<RatVector> b) {
  // f and b given by columns
  const std::size_t n = f.size();
  const std::size_t m = b.size();
  std::vector<std::vector<RatFunc>> a(n, std::vector<RatFunc>(n + m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = f[j][i];
    for (std::size_t j = 0; j < m; ++j) a[i][n + j] = b[j][i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && a[r][c].is_zero()) ++r;
    if (r == n) throw std::domain_error("singular frame");
    std::swap(a[r], a[c]);
    RatFunc inv = RatFunc(LaurentPoly(1)) / a[c][c];
    for (auto& x : a[c]) x = x * inv;
    for (std::size_t i = 0; i < n; ++i)
      if (i != c && !a[i][c].is_zero()) {
        RatFunc k = a[i][c];
        for (std::size_t j = c; j < n + m; ++j) a[i][j] = a[i][j] - k * a[c][j];
      }
  }
  std::vector<RatVector> x(m, RatVector(n));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) x[j][i] = a[i][n + j];
  return x;
}

LaurentPoly to_laurent(const RatFunc& f, const char* what) {
  if (!f.is_laurent()) throw std::logic_error(what);
  return f.num();
}

LaurentVector flip(const LaurentVector& v) {
  LaurentVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].flipped();
  return out;
}

LaurentMatrix columns_matrix(const std::vector<LaurentVector>& cols, std::size_t n, const std::string& var) {
  return LaurentMatrix::from_columns(cols, n, var);
}

std::vector<LaurentVector> columns_of(const LaurentMatrix& m) {
  std::vector<LaurentVector> out;
  for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.column(j));
  return out;
}

Rational beta_of(const Rational& g) { return g - Rational(ceil_of(g)); }

// Fibre at theta = 0 of the saturation of the Laurent span at theta = 0.
Subspace limit_space(const std::vector<LaurentVector>& gens, std::size_t n) {
  std::vector<LaurentVector> nz;
  for (const auto& g : gens)
    if (!is_zero(g)) nz.push_back(g);
  if (nz.empty()) return Subspace(n);
  std::vector<LaurentVector> w = columns_of(column_hnf(columns_matrix(nz, n, "theta")));
  for (auto& c : w) c = shifted(c, -low(c));
  for (int guard = 0;; ++guard) {
    if (guard > 100000) throw std::logic_error("limit_space did not terminate");
    std::vector<QVector> at0;
    for (const auto& c : w) {
      QVector x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = c[i].coeff(0);
      at0.push_back(std::move(x));
    }
    Subspace ker = kernel(QMatrix::from_columns(at0, n));
    if (ker.dim() == 0) return Subspace::span(n, at0);
    const QVector& c = ker.basis()[0];
    std::size_t k = 0;
    for (std::size_t l = 0; l < c.size(); ++l)
      if (c[l] != 0) k = l;
    LaurentVector s(n);
    for (std::size_t l = 0; l < c.size(); ++l)
      if (c[l] != 0) s = add(s, scale(w[l], LaurentPoly(c[l])));
    w[k] = shifted(s, -low(s));
  }
}

}  // namespace

LaplaceTransform laplace_transform(const FilteredDModule& m) {
  LaplaceTransform lt;
  if (m.op.t_degree() <= 0) {
    lt.degenerate = true;
    return lt;
  }
  lt.hat = hat_coefficients(m.op);
  lt.rank = lt.hat.size() - 1;
  const std::size_t d = lt.rank;
  std::vector<RatVector> std_basis;
  for (std::size_t j = 0; j < d; ++j) {
    RatVector e(d);
    e[j] = RatFunc(LaurentPoly(1));
    std_basis.push_back(std::move(e));
  }
  Span span = make_span(std_basis, d);
  for (int round = 0;; ++round) {
    if (round >= kRoundLimit)
      throw ApparentSingularityResidue("saturation at a finite nonzero singular point does not terminate");
    std::vector<RatVector> gens = span.basis;
    for (const auto& b : span.basis) gens.push_back(euler_apply(lt, b));
    Span next = make_span(gens, d);
    RatFunc ratio = next.det / span.det;
    if (ratio.is_laurent() && ratio.num().is_monomial()) break;
    span = std::move(next);
    lt.saturation_rounds = round + 1;
  }
  lt.frame = span.basis;
  std::vector<RatVector> ef;
  for (const auto& b : lt.frame) ef.push_back(euler_apply(lt, b));
  auto a = ratfunc_solve(lt.frame, ef);
  LaurentMatrix mat(d, d, "theta");
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i)
      mat(i, j) = to_laurent(a[j][i], "connection matrix has a pole away from 0 and infinity");
  lt.conn = MeroConnection(mat, Derivation::Euler);
  levelt_saturate(lt.conn, Lattice::standard(d, Side::AtZero, "theta"), Point::Zero);
  return lt;
}

LaurentVector loc(const LaplaceTransform& lt, const DOperator& g) {
  const std::size_t d = lt.rank;
  RatVector acc(d);
  RatFunc inv_theta(LaurentPoly::monomial(1, -1));
  for (const auto& t : g.terms()) {
    RatVector v(d);
    v[0] = RatFunc(LaurentPoly::monomial(t.a, t.j));
    for (long k = 0; k < t.i; ++k) {
      v = euler_apply(lt, v);
      for (auto& x : v) x = -(inv_theta * x);
    }
    for (std::size_t i = 0; i < d; ++i) acc[i] = acc[i] + v[i];
  }
  auto c = ratfunc_solve(lt.frame, {acc});
  LaurentVector out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = to_laurent(c[0][i], "loc: element outside the frame span");
  return out;
}

LaurentVector t_action(const LaplaceTransform& lt, const LaurentVector& v) {
  LaurentVector w = add(euler(v), lt.conn.matrix() * v);
  return scale(w, LaurentPoly::monomial(-1, -1));
}

Lattice brieskorn_lattice(const FilteredDModule& m, const LaplaceTransform& lt, long p, int* rounds) {
  if (p > m.p0) throw std::invalid_argument("brieskorn_lattice: p must be a generation index (p <= p0)");
  const std::size_t d = lt.rank;
  std::vector<LaurentVector> gens;
  for (const auto& g : m.generators(p)) gens.push_back(flip(loc(lt, g)));
  LaurentMatrix cur = column_hnf(columns_matrix(gens, d, "z"));
  int r = 0;
  for (;; ++r) {
    if (r >= kRoundLimit) throw NonRegularAtInfinity("t-closure of the Brieskorn lattice does not stabilize");
    std::vector<LaurentVector> next = columns_of(cur);
    for (const auto& c : columns_of(cur)) next.push_back(flip(t_action(lt, flip(c))));
    LaurentMatrix h = column_hnf(columns_matrix(next, d, "z"));
    if (h == cur) break;
    cur = std::move(h);
  }
  if (rounds) *rounds = r;
  if (cur.cols() != d) throw HypothesisViolation("F^p does not generate M over C[d_t]");
  std::vector<LaurentVector> back;
  for (const auto& c : columns_of(cur)) back.push_back(flip(c));
  return Lattice(columns_matrix(back, d, "theta"), Side::AtInfinity).times_power(p);
}

bool check_loc_inclusions(const FilteredDModule& m, const LaplaceTransform& lt, const Lattice& g0) {
  for (const auto& s : m.steps) {
    Lattice target = g0.times_power(-s.p);
    for (const auto& g : s.generators)
      if (!target.contains(loc(lt, g))) return false;
  }
  return true;
}

LatticePair brieskorn(const FilteredDModule& m) {
  LaplaceTransform lt = laplace_transform(m);
  if (lt.degenerate) throw HypothesisViolation("Laplace transform has rank zero");
  LatticePair pair{lt.conn, brieskorn_lattice(m, lt, m.p0)};
  validate(pair);
  if (!check_loc_inclusions(m, lt, pair.g0)) throw HypothesisViolation("loc(F^p M) is not inside theta'^p G0");
  return pair;
}

QMatrix u_matrix(const LatticePair& pair) { return pair.z_connection().matrix().coeff(0); }

bool laurent_span_contains(const std::vector<LaurentVector>& gens, const LaurentVector& v) {
  if (is_zero(v)) return true;
  if (gens.empty()) return false;
  const std::size_t n = v.size();
  std::vector<std::size_t> piv;
  LaurentMatrix h = column_hnf(columns_matrix(gens, n, "theta"), nullptr, &piv);
  LaurentVector res = v;
  for (std::size_t k = 0; k < h.cols(); ++k) {
    LaurentPoly q;
    if (res[piv[k]].is_zero()) continue;
    if (!laurent_divide(res[piv[k]], h(piv[k], k), q)) return false;
    res = add(res, scale(h.column(k), -q));
  }
  return is_zero(res);
}

FDelG fdel_on_G(const LatticePair& pair, const Rational& gamma) {
  VFiltration v = v_filtration(pair.conn, Point::Zero, Rational(0));
  FDelG f;
  f.gamma = gamma;
  f.generators = finite_intersection(v.at(gamma), pair.g0);
  if (!f.generators.empty())
    f.rank = column_hnf(columns_matrix(f.generators, pair.rank(), "theta")).cols();
  auto lower = finite_intersection(v.at(gamma - 1), pair.g0);
  for (const auto& g : f.generators) {
    LaurentVector tg = scale(add(euler(g), pair.conn.matrix() * g), LaurentPoly::monomial(-1, -1));
    if (!laurent_span_contains(lower, tg)) throw HypothesisViolation("t F_Del^gamma is not inside F_Del^{gamma-1}");
  }
  return f;
}

std::vector<BigradedEntry> fdel_limit_table(const LatticePair& pair) {
  const std::size_t n = pair.rank();
  VFiltration v = v_filtration(pair.conn, Point::Zero, Rational(0));
  auto spec = spectrum_at_infinity(pair);
  long plo = floor_long(spec.front().first) - 1, phi = ceil_long(spec.back().first) + 1;
  std::vector<Rational> betas;
  for (const auto& j : v.jumps) betas.push_back(beta_of(j.gamma));
  std::sort(betas.begin(), betas.end());
  betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
  std::vector<BigradedEntry> out;
  for (const auto& beta : betas) {
    Lattice vb = v.at(beta);
    LaurentMatrix binv = laurent_inverse(vb.basis());
    LaurentMatrix above = binv * v.above(beta).basis();
    Subspace k = column_space(above.coeff(0));
    std::vector<std::size_t> dims;
    for (long p = plo; p <= phi + 1; ++p) {
      std::vector<LaurentVector> w;
      for (const auto& g : finite_intersection(v.at(beta + p), pair.g0)) w.push_back(binv * g);
      dims.push_back((limit_space(w, n) + k).dim() - k.dim());
    }
    for (std::size_t i = 0; i + 1 < dims.size(); ++i)
      if (dims[i] > dims[i + 1]) out.push_back({0, beta, plo + static_cast<long>(i), dims[i] - dims[i + 1]});
  }
  return out;
}

}  // namespace holospec
