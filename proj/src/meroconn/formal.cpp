#include "holospec/meroconn/formal.hpp"

#include <algorithm>
#include <random>

#include "holospec/errors.hpp"
#include "holospec/exact/matrix.hpp"
#include "holospec/exact/ratfunc.hpp"

namespace holospec {

std::size_t default_truncation(std::size_t rank) { return 4 * rank + 4; }

namespace {

struct Blocks {
  std::vector<std::size_t> off, size;
  std::size_t of(std::size_t i) const {
    for (std::size_t b = 0; b < off.size(); ++b)
      if (i < off[b] + size[b]) return b;
    return off.size();
  }
};

QMatrix block_diagonal_part(const QMatrix& m, const Blocks& bl) {
  QMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (bl.of(i) == bl.of(j)) r(i, j) = m(i, j);
  return r;
}

LaurentMatrix series(const std::vector<QMatrix>& c, const std::string& var) {
  LaurentMatrix m = LaurentMatrix::from_constant(c[0], var);
  for (std::size_t k = 1; k < c.size(); ++k)
    m = m + LaurentMatrix::from_constant(c[k], var).shifted(static_cast<long>(k));
  return m;
}

std::vector<Rational> spectrum_with_repetition(const QMatrix& r) {
  std::vector<Rational> out;
  for (const auto& b : rational_eigendata(r))
    for (std::size_t k = 0; k < b.space.dim(); ++k) out.push_back(b.value);
  return out;
}

}  // namespace

FormalDecomposition formal_decompose(const MeroConnection& conn0, const Lattice& l, std::size_t order) {
  MeroConnection conn = conn0.derivation() == Derivation::Irregular
                            ? conn0
                            : MeroConnection(conn0.matrix().shifted(1), Derivation::Irregular);
  const std::size_t n = conn.rank();
  const long K = static_cast<long>(order);
  LaurentMatrix b = matrix_on(conn, l);
  if (!b.is_zero() && b.low() < 0) throw HypothesisViolation("lattice is not stable under z^2 d/dz");
  const std::string var = b.var();

  auto eig = rational_eigendata(b.coeff(0));
  std::vector<QVector> cols;
  Blocks bl;
  for (const auto& e : eig) {
    bl.off.push_back(cols.size());
    bl.size.push_back(e.space.dim());
    for (const auto& v : e.space.basis()) cols.push_back(v);
  }
  QMatrix p0 = QMatrix::from_columns(cols, n), p0i = p0.inverse();

  std::vector<QMatrix> bk(order + 1), t(order + 1), bp(order + 1);
  for (long k = 0; k <= K; ++k) bk[k] = p0i * b.coeff(k) * p0;
  t[0] = QMatrix::identity(n);
  bp[0] = bk[0];
  for (long k = 1; k <= K; ++k) {
    QMatrix r = bk[k] + Rational(k - 1) * t[k - 1];
    for (long j = 1; j < k; ++j) r = r + bk[j] * t[k - j] - t[k - j] * bp[j];
    bp[k] = block_diagonal_part(r, bl);
    QMatrix tk(n, n);
    for (std::size_t bi = 0; bi < eig.size(); ++bi)
      for (std::size_t bj = 0; bj < eig.size(); ++bj) {
        if (bi == bj) continue;
        QMatrix a = bk[0].block(bl.off[bi], bl.off[bi], bl.size[bi], bl.size[bi]);
        QMatrix c = bk[0].block(bl.off[bj], bl.off[bj], bl.size[bj], bl.size[bj]);
        QMatrix rhs = Rational(-1) * r.block(bl.off[bi], bl.off[bj], bl.size[bi], bl.size[bj]);
        QMatrix x = solve_sylvester(a, c, rhs);
        for (std::size_t i = 0; i < bl.size[bi]; ++i)
          for (std::size_t j = 0; j < bl.size[bj]; ++j) tk(bl.off[bi] + i, bl.off[bj] + j) = x(i, j);
      }
    t[k] = tk;
  }

  FormalDecomposition out;
  out.block_sizes = bl.size;
  LaurentMatrix tz = series(t, var);
  out.gauge = LaurentMatrix::from_constant(p0, var) * tz;

  // inverse of I + N as a truncated geometric series
  LaurentMatrix nz = tz - LaurentMatrix::identity(n, var);
  LaurentMatrix inv = LaurentMatrix::identity(n, var), pw = inv;
  for (long m = 1; m <= K; ++m) {
    pw = (-(pw * nz)).truncated(0, K);
    inv = inv + pw;
  }
  LaurentMatrix g = out.gauge;
  LaurentMatrix ginv = inv * LaurentMatrix::from_constant(p0i, var);
  out.gauged = (ginv * (b * g + g.euler().shifted(1))).truncated(0, K);

  for (std::size_t bi = 0; bi < eig.size(); ++bi) {
    std::size_t s = bl.size[bi], o = bl.off[bi];
    LaurentMatrix reg(s, s, var);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) {
        LaurentPoly e = out.gauged(o + i, o + j);
        if (i == j) e -= LaurentPoly(eig[bi].value);
        reg(i, j) = e.shifted(-1);
      }
    MeroConnection rc(reg, Derivation::Euler);
    Lattice std_l = Lattice::standard(s, Side::AtZero, var);
    Lattice sat;
    try {
      sat = levelt_saturate(rc, std_l, Point::Zero);
    } catch (const IrregularSingularity&) {
      throw RamificationRequired("block with leading eigenvalue " + to_string(eig[bi].value) +
                                 " is not regular after untwisting");
    }
    FormalFactor f{eig[bi].value, rc, std_l, spectrum_with_repetition(matrix_on(rc, sat).coeff(0)), order};
    out.factors.push_back(std::move(f));
  }
  return out;
}

FormalDecomposition formal_decompose_stable(const MeroConnection& conn, const Lattice& l) {
  std::size_t k = default_truncation(conn.rank());
  FormalDecomposition a = formal_decompose(conn, l, k), b = formal_decompose(conn, l, 2 * k);
  bool same = a.factors.size() == b.factors.size();
  for (std::size_t i = 0; same && i < a.factors.size(); ++i)
    same = a.factors[i].c == b.factors[i].c &&
           a.factors[i].residue_eigenvalues == b.factors[i].residue_eigenvalues;
  if (!same) throw TruncationInstability("formal decomposition changes between K and 2K");
  return a;
}

namespace {

using RVec = std::vector<RatFunc>;

RVec step(const MeroConnection& e, const RVec& v) {
  const std::size_t n = v.size();
  RVec r(n);
  for (std::size_t i = 0; i < n; ++i) {
    RatFunc acc = v[i].euler();
    for (std::size_t j = 0; j < n; ++j)
      if (!e.matrix()(i, j).is_zero() && !v[j].is_zero()) acc = acc + RatFunc(e.matrix()(i, j)) * v[j];
    r[i] = acc;
  }
  return r;
}

// Solves sum_k a_k cols[k] = rhs over Q(x); false if cols are dependent.
bool solve_ratfunc(std::vector<RVec> cols, RVec rhs, RVec& a) {
  const std::size_t n = rhs.size();
  // rows of the augmented system
  std::vector<RVec> m(n, RVec(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) m[i][k] = cols[k][i];
    m[i][n] = rhs[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c].is_zero()) ++p;
    if (p == n) return false;
    std::swap(m[p], m[c]);
    RatFunc inv = RatFunc(LaurentPoly(1)) / m[c][c];
    for (std::size_t j = c; j <= n; ++j) m[c][j] = m[c][j] * inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c].is_zero()) continue;
      RatFunc f = m[i][c];
      for (std::size_t j = c; j <= n; ++j) m[i][j] = m[i][j] - f * m[c][j];
    }
  }
  a.assign(n, RatFunc());
  for (std::size_t i = 0; i < n; ++i) a[i] = m[i][n];
  return true;
}

std::vector<LaurentVector> cyclic_candidates(std::size_t n) {
  std::vector<LaurentVector> c;
  for (std::size_t i = 0; i < n; ++i) {
    LaurentVector e(n);
    e[i] = 1;
    c.push_back(e);
  }
  LaurentVector powers(n);
  for (std::size_t i = 0; i < n; ++i) powers[i] = LaurentPoly::monomial(1, static_cast<long>(i));
  c.push_back(powers);
  std::mt19937 g(97);
  std::uniform_int_distribution<int> d(-5, 5), e(0, static_cast<int>(n));
  for (int t = 0; t < 30; ++t) {
    LaurentVector v(n);
    for (auto& x : v) x = LaurentPoly::monomial(d(g), e(g)) + LaurentPoly(d(g));
    c.push_back(v);
  }
  return c;
}

}  // namespace

RamificationReport check_no_ramification(const MeroConnection& conn) {
  RamificationReport rep;
  MeroConnection e = conn.as_euler();
  const std::size_t n = e.rank();
  if (n == 0) {
    rep.ok = true;
    rep.slopes = {0};
    return rep;
  }
  RVec coeffs;
  bool have = false;
  for (const auto& cand : cyclic_candidates(n)) {
    std::vector<RVec> chain;
    RVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = RatFunc(cand[i]);
    for (std::size_t k = 0; k <= n; ++k) {
      chain.push_back(v);
      v = step(e, v);
    }
    RVec last = chain.back();
    chain.pop_back();
    if (solve_ratfunc(chain, last, coeffs)) {
      have = true;
      break;
    }
  }
  if (!have) {
    rep.diagnostic = "no cyclic vector found among candidates";
    return rep;
  }
  // operator delta^n - sum a_k delta^k; points (k, val)
  std::vector<std::pair<long, long>> pts;
  for (std::size_t k = 0; k < n; ++k)
    if (!coeffs[k].is_zero()) pts.push_back({static_cast<long>(k), coeffs[k].valuation()});
  pts.push_back({static_cast<long>(n), 0});
  // lower convex hull, left to right
  std::vector<std::pair<long, long>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      auto [x1, y1] = hull[hull.size() - 2];
      auto [x2, y2] = hull.back();
      // drop middle point if it is not strictly below the chord
      if ((y2 - y1) * (p.first - x1) >= (p.second - y1) * (x2 - x1)) hull.pop_back();
      else break;
    }
    hull.push_back(p);
  }
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    Rational s(hull[i + 1].second - hull[i].second, hull[i + 1].first - hull[i].first);
    s.canonicalize();
    if (s > 0 && std::find(rep.slopes.begin(), rep.slopes.end(), s) == rep.slopes.end()) rep.slopes.push_back(s);
  }
  std::sort(rep.slopes.begin(), rep.slopes.end());
  if (rep.slopes.empty()) rep.slopes = {0};
  for (const auto& s : rep.slopes)
    if (s != 0 && s != 1) {
      rep.diagnostic = "slope " + to_string(s) + " needs ramification";
      return rep;
    }
  try {
    formal_decompose(conn, Lattice::standard(n, Side::AtZero, conn.var()), default_truncation(n));
  } catch (const Error& ex) {
    rep.diagnostic = std::string("formal decomposition failed: ") + ex.what();
    return rep;
  }
  rep.ok = true;
  return rep;
}

}  // namespace holospec
