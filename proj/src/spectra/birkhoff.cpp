#include "holospec/spectra/birkhoff.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "holospec/errors.hpp"

namespace holospec {

namespace {

constexpr long kLeafLimit = 200000;

Rational beta_of(const Rational& g) { return g - Rational(ceil_of(g)); }

std::size_t span_dim(const std::vector<LaurentVector>& vs) {
  if (vs.empty()) return 0;
  const std::size_t n = vs[0].size();
  long lo = 0, hi = 0;
  bool first = true;
  for (const auto& v : vs)
    if (!is_zero(v)) {
      lo = first ? low(v) : std::min(lo, low(v));
      hi = first ? high(v) : std::max(hi, high(v));
      first = false;
    }
  if (first) return 0;
  const auto w = static_cast<std::size_t>(hi - lo + 1);
  std::vector<QVector> flat;
  for (const auto& v : vs) {
    QVector q(n * w);
    for (std::size_t i = 0; i < n; ++i)
      for (long e = lo; e <= hi; ++e) q[i * w + static_cast<std::size_t>(e - lo)] = v[i].coeff(e);
    flat.push_back(std::move(q));
  }
  return Subspace::span(n * w, flat).dim();
}

LaurentVector as_laurent(const QVector& x) {
  LaurentVector v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = LaurentPoly(x[i]);
  return v;
}

QMatrix power(const QMatrix& a, std::size_t k) {
  QMatrix r = QMatrix::identity(a.rows());
  for (std::size_t i = 0; i < k; ++i) r = r * a;
  return r;
}

// Frame at theta = 0: L = V^{beta_min} with theta d/dtheta matrix R + sum D_k theta^k.
struct Frame {
  VFiltration v;
  Lattice l;
  QMatrix r;
  std::vector<QMatrix> d;  // d[k] for k >= 1, d[0] unused
  std::vector<EigenBlock> blocks;
};

Frame make_frame(const LatticePair& pair) {
  Frame f;
  f.v = v_filtration(pair.conn, Point::Zero, Rational(0));
  Rational bmin = 0;
  for (const auto& j : f.v.jumps) bmin = std::min(bmin, beta_of(j.gamma));
  f.l = f.v.at(bmin);
  LaurentMatrix a = matrix_on(pair.conn, f.l);
  if (!a.is_zero() && a.low() < 0) throw HypothesisViolation("V-lattice is not stable");
  f.r = a.coeff(0);
  long h = a.is_zero() ? 0 : a.high();
  f.d.resize(static_cast<std::size_t>(std::max(h, 0L)) + 1);
  for (long k = 1; k <= h; ++k) f.d[static_cast<std::size_t>(k)] = a.coeff(k);
  f.blocks = rational_eigendata(f.r);
  return f;
}

// Formal gauge P = sum P_k theta^k with P^-1 (A P + theta P') = R, truncated at theta^m.
LaurentMatrix formal_gauge(const Frame& f, long m) {
  const std::size_t n = f.r.rows();
  std::vector<QMatrix> p{QMatrix::identity(n)};
  for (long k = 1; k <= m; ++k) {
    QMatrix rhs(n, n);
    for (long j = 1; j <= k && j < static_cast<long>(f.d.size()); ++j)
      rhs = rhs - f.d[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(k - j)];
    QMatrix shifted_r = f.r + Rational(k) * QMatrix::identity(n);
    p.push_back(solve_sylvester(shifted_r, f.r, rhs));
  }
  LaurentMatrix out(n, n, f.l.basis().var());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Rational> c;
      for (const auto& pk : p) c.push_back(pk(i, j));
      out(i, j) = LaurentPoly::from_coeffs(0, c);
    }
  return out;
}

std::pair<long, long> p_range(const LatticePair& pair) {
  auto spec = spectrum_at_infinity(pair);
  return {floor_long(spec.front().first) - 1, ceil_long(spec.back().first) + 1};
}

std::vector<GradedHodgeData> graded_data(const LatticePair& pair, const Frame& f) {
  const std::size_t n = pair.rank();
  auto [plo, phi] = p_range(pair);
  LaurentMatrix binv = laurent_inverse(f.l.basis());
  std::vector<GradedHodgeData> out;
  for (std::size_t k = 0; k < f.blocks.size(); ++k) {
    GradedHodgeData g;
    g.beta = f.blocks[k].value;
    g.space = f.blocks[k].space;
    g.nilpotent = g.beta * QMatrix::identity(n) - f.r;
    QMatrix proj = spectral_projector(f.r, f.blocks, k);
    Lattice vb = f.v.at(g.beta);
    for (long p = plo; p <= phi; ++p) {
      std::vector<QVector> imgs;
      for (const auto& x : finite_intersection(vb, pair.g0.times_power(-p))) {
        LaurentVector c = binv * x;
        QVector c0(n);
        for (std::size_t i = 0; i < n; ++i) c0[i] = c[i].coeff(0);
        imgs.push_back(proj * c0);
      }
      g.f.emplace_back(p, Subspace::span(n, imgs));
    }
    if (g.f.front().second != g.space || g.f.back().second.dim() != 0)
      throw WindowTooSmall("Hodge filtration range not exhausted");
    out.push_back(std::move(g));
  }
  return out;
}

Subspace f_at(const GradedHodgeData& g, long p) {
  if (p < g.f.front().first) return g.space;
  if (p > g.f.back().first) return Subspace(g.space.ambient());
  return g.f[static_cast<std::size_t>(p - g.f.front().first)].second;
}

// Jordan chains of N on E, preferring tops in deep pieces of F.
std::vector<std::vector<QVector>> jordan_chains(const GradedHodgeData& g) {
  const std::size_t n = g.space.ambient();
  std::vector<Subspace> ker{Subspace(n)};
  while (ker.back() != g.space) {
    Subspace k = subspace_intersect(kernel(power(g.nilpotent, ker.size())), g.space);
    if (k.dim() == ker.back().dim()) throw HypothesisViolation("N is not nilpotent on a graded piece");
    ker.push_back(k);
  }
  std::vector<std::vector<QVector>> chains;
  for (std::size_t i = ker.size() - 1; i >= 1; --i) {
    std::vector<QVector> have;
    for (const auto& c : chains)
      for (const auto& x : c)
        if (ker[i].contains(x)) have.push_back(x);
    Subspace w = ker[i - 1] + Subspace::span(n, have);
    std::vector<QVector> cands;
    for (auto it = g.f.rbegin(); it != g.f.rend(); ++it) {
      Subspace deep = subspace_intersect(it->second, ker[i]);
      for (const auto& x : deep.basis()) cands.push_back(x);
    }
    for (const auto& x : ker[i].basis()) cands.push_back(x);
    for (const auto& x : cands) {
      if (w.contains(x)) continue;
      std::vector<QVector> chain{x};
      for (std::size_t s = 1; s < i; ++s) chain.push_back(g.nilpotent * chain.back());
      w = w + Subspace::span(n, {x});
      chains.push_back(std::move(chain));
    }
  }
  return chains;
}

// Increasing N-stable filtration opposite to F, as the pieces I^p = F^p ∩ Ftilde_p.
std::map<long, Subspace> opposite_splitting(const GradedHodgeData& g) {
  const std::size_t n = g.space.ambient();
  auto chains = jordan_chains(g);
  struct Slot {
    QVector x;
    bool head;
  };
  std::vector<Slot> slots;
  for (const auto& c : chains)
    for (std::size_t s = 0; s < c.size(); ++s) slots.push_back({c[s], s == 0});
  const long plo = g.f.front().first, phi = g.f.back().first;
  std::map<long, long> remaining;
  for (long p = plo; p <= phi; ++p)
    remaining[p] = static_cast<long>(f_at(g, p).dim()) - static_cast<long>(f_at(g, p + 1).dim());
  std::vector<long> level(slots.size());
  long leaves = 0;
  std::map<long, Subspace> result;

  auto tilde = [&](long p) {
    std::vector<QVector> vs;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (level[i] <= p) vs.push_back(slots[i].x);
    return Subspace::span(n, vs);
  };
  auto opposite = [&]() {
    for (long p = plo; p <= phi + 1; ++p)
      if (subspace_intersect(f_at(g, p), tilde(p - 1)).dim() != 0) return false;
    return true;
  };

  std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
    if (i == slots.size()) {
      if (++leaves > kLeafLimit) throw NoSolutionFound("opposite filtration search exhausted its budget");
      return opposite();
    }
    long cap = slots[i].head ? phi : level[i - 1];
    for (long p = cap; p >= plo; --p) {
      if (remaining[p] == 0) continue;
      --remaining[p];
      level[i] = p;
      bool ok = dfs(i + 1);
      ++remaining[p];
      if (ok) return true;
    }
    return false;
  };
  if (!dfs(0)) throw NoSolutionFound("no N-stable filtration opposite to F on psi^beta");
  for (long p = plo; p <= phi; ++p) {
    Subspace piece = subspace_intersect(f_at(g, p), tilde(p));
    if (piece.dim()) result.emplace(p, piece);
  }
  return result;
}

}  // namespace

std::vector<GradedHodgeData> graded_hodge_data(const LatticePair& pair) {
  validate(pair);
  return graded_data(pair, make_frame(pair));
}

std::vector<BirkhoffPiece> verify_v_solution(const LatticePair& pair, const Lattice& gp) {
  const std::size_t n = pair.rank();
  if (gp.side() != Side::AtZero || gp.rank() != n || !gp.is_lattice())
    throw NoSolutionFound("candidate is not a Q[theta]-lattice of full rank");
  LaurentMatrix a = matrix_on(pair.conn, gp);
  if (!a.is_zero() && a.low() < 0) throw NoSolutionFound("candidate is not stable under theta d/dtheta");
  if (span_dim(finite_intersection(gp, pair.g0)) != n)
    throw NoSolutionFound("G0 ∩ G'0 does not have the rank as dimension");

  VFiltration v = v_filtration(pair.conn, Point::Zero, Rational(0));
  auto spec = spectrum_at_infinity(pair);
  const Rational lo = spec.front().first - 1, hi = spec.back().first + 1;
  std::vector<Rational> gammas;
  for (const auto& j : v.jumps)
    for (long k = floor_long(lo - j.gamma); j.gamma + k <= hi; ++k)
      if (j.gamma + k >= lo) gammas.push_back(j.gamma + k);
  std::sort(gammas.begin(), gammas.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());

  std::vector<BirkhoffPiece> cert;
  for (const auto& gamma : gammas) {
    BirkhoffPiece piece;
    piece.gamma = gamma;
    auto s = finite_intersection(v.at(gamma), pair.g0);
    piece.dim_total = span_dim(s);
    std::vector<LaurentVector> all;
    std::size_t sum = 0;
    for (long j = 0;; ++j) {
      auto t = finite_intersection(intersect(gp, v.at(gamma + j)), pair.g0);
      std::size_t d = span_dim(t);
      if (d == 0) break;
      piece.dim_parts.push_back(d);
      sum += d;
      for (const auto& x : t) all.push_back(shifted(x, -j));
      if (j > 100000) throw WindowTooSmall("G'0 ∩ V^gamma never vanishes");
    }
    std::vector<LaurentVector> joined = all;
    joined.insert(joined.end(), s.begin(), s.end());
    if (sum != piece.dim_total || span_dim(all) != sum || span_dim(joined) != piece.dim_total)
      throw NoSolutionFound("G0 ∩ V^gamma is not the direct sum of the G'0 pieces");
    cert.push_back(std::move(piece));
  }
  return cert;
}

BirkhoffSolution birkhoff_v_solution(const LatticePair& pair) {
  validate(pair);
  const std::size_t n = pair.rank();
  Frame f = make_frame(pair);
  auto data = graded_data(pair, f);

  std::vector<std::pair<long, QVector>> pieces;
  for (const auto& g : data)
    for (const auto& [p, sp] : opposite_splitting(g))
      for (const auto& x : sp.basis()) pieces.emplace_back(p, x);
  long pmin = pieces.front().first, pmax = pmin;
  for (const auto& pc : pieces) pmin = std::min(pmin, pc.first), pmax = std::max(pmax, pc.first);

  LaurentMatrix y = f.l.basis() * formal_gauge(f, pmax - pmin + 1);
  std::vector<LaurentVector> gens;
  for (const auto& [p, x] : pieces) gens.push_back(shifted(y * as_laurent(x), p));
  LaurentMatrix tail = f.l.basis().shifted(pmax);
  for (std::size_t j = 0; j < n; ++j) gens.push_back(tail.column(j));

  BirkhoffSolution sol;
  sol.gprime0 = Lattice(LaurentMatrix::from_columns(gens, n, f.l.basis().var()), Side::AtZero);
  sol.certificate = verify_v_solution(pair, sol.gprime0);
  sol.g0_basis = finite_intersection(sol.gprime0, pair.g0);
  return sol;
}

}  // namespace holospec
