#include "holospec/spectra/spectrum.hpp"

#include <algorithm>
#include <map>

#include "holospec/errors.hpp"

namespace holospec {

std::size_t SpectralPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& r : roots) d += r.second;
  return d;
}

LaurentPoly SpectralPolynomial::polynomial() const {
  LaurentPoly p(1), t = LaurentPoly::monomial(1, 1);
  for (const auto& [r, m] : roots)
    for (std::size_t k = 0; k < m; ++k) p = p * (t - LaurentPoly(r));
  return p;
}

void SpectralPolynomial::add_root(const Rational& r, std::size_t mult) {
  if (mult == 0) return;
  auto it = std::lower_bound(roots.begin(), roots.end(), r, [](const auto& e, const Rational& x) { return e.first < x; });
  if (it != roots.end() && it->first == r) it->second += mult;
  else roots.insert(it, {r, mult});
}

SpectralPolynomial multiply(const SpectralPolynomial& a, const SpectralPolynomial& b) {
  SpectralPolynomial r = a;
  for (const auto& [x, m] : b.roots) r.add_root(x, m);
  return r;
}

std::vector<LaurentVector> finite_intersection(const Lattice& at_zero, const Lattice& at_inf) {
  if (at_zero.side() != Side::AtZero || at_inf.side() != Side::AtInfinity)
    throw std::invalid_argument("finite_intersection: expects a lattice at 0 and one at infinity");
  const std::size_t n = at_zero.rank();
  const LaurentMatrix& hv = at_zero.basis();
  const LaurentMatrix& h0 = at_inf.basis();
  // v = hv p with p polynomial in theta; v in G0 forces deg p <= high(hv^-1 h0)
  LaurentMatrix w = laurent_inverse(h0) * hv;
  long pdeg = std::max(0L, (laurent_inverse(hv) * h0).high());
  long wh = w.is_zero() ? 0 : w.high();
  const std::size_t unknowns = n * static_cast<std::size_t>(pdeg + 1);
  long emax = wh + pdeg;
  std::vector<QVector> rows;
  for (long e = 1; e <= emax; ++e)
    for (std::size_t i = 0; i < n; ++i) {
      QVector r(unknowns);
      bool any = false;
      for (std::size_t j = 0; j < n; ++j)
        for (long d = 0; d <= pdeg; ++d) {
          Rational c = w(i, j).coeff(e - d);
          if (c != 0) {
            r[j * static_cast<std::size_t>(pdeg + 1) + static_cast<std::size_t>(d)] = c;
            any = true;
          }
        }
      if (any) rows.push_back(std::move(r));
    }
  Subspace sol = rows.empty() ? Subspace::full(unknowns) : kernel(QMatrix::from_rows(rows, unknowns));
  std::vector<LaurentVector> out;
  for (const auto& s : sol.basis()) {
    LaurentVector p(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Rational> cs(s.begin() + static_cast<long>(j * (pdeg + 1)),
                               s.begin() + static_cast<long>((j + 1) * (pdeg + 1)));
      p[j] = LaurentPoly::from_coeffs(0, cs);
    }
    out.push_back(hv * p);
  }
  return out;
}

namespace {

// Flattens Laurent vectors over a common exponent window.
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
  const std::size_t w = static_cast<std::size_t>(hi - lo + 1);
  std::vector<QVector> flat;
  for (const auto& v : vs) {
    QVector q(n * w);
    for (std::size_t i = 0; i < n; ++i)
      for (long e = lo; e <= hi; ++e) q[i * w + static_cast<std::size_t>(e - lo)] = v[i].coeff(e);
    flat.push_back(std::move(q));
  }
  return Subspace::span(n * w, flat).dim();
}

class InfinitySide {
 public:
  InfinitySide(const LatticePair& p) : pair_(p), v_(v_filtration(p.conn, Point::Zero, Rational(0))) {}

  const VFiltration& vfil() const { return v_; }

  const std::vector<LaurentVector>& s(const Rational& gamma) {
    auto it = cache_.find(gamma);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(gamma, finite_intersection(v_.at(gamma), pair_.g0)).first->second;
  }

  std::size_t nu(const Rational& gamma, const Rational& z_o) {
    if (z_o == 0) throw std::invalid_argument("z_o must be nonzero");
    std::vector<LaurentVector> sub = s(v_.next_jump(gamma));
    for (const auto& x : s(gamma + 1)) {
      LaurentVector y = shifted(x, -1);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= z_o * x[i];
      sub.push_back(std::move(y));
    }
    return span_dim(s(gamma)) - span_dim(sub);
  }

  Rational prev_jump(const Rational& gamma) const {
    Rational best;
    bool have = false;
    for (const auto& j : v_.jumps) {
      Rational cand = j.gamma + Rational(ceil_of(gamma - j.gamma) - 1);
      if (!have || cand > best) best = cand, have = true;
    }
    return best;
  }

  // Highest jump value with G0 ∩ V^gamma = 0 at the next jump above it.
  Rational top() {
    Rational g = v_.jumps.front().gamma;
    for (int guard = 0; !s(g).empty(); ++guard) {
      if (guard > 100000) throw WindowTooSmall("G0 ∩ V^gamma never vanishes");
      g += 1;
    }
    return g;
  }

 private:
  const LatticePair& pair_;
  VFiltration v_;
  std::map<Rational, std::vector<LaurentVector>> cache_;
};

constexpr int kScanLimit = 100000;

}  // namespace

std::size_t nu_gamma(const LatticePair& pair, const VFiltration& v, const Rational& gamma, const Rational& z_o) {
  if (z_o == 0) throw std::invalid_argument("z_o must be nonzero");
  std::vector<LaurentVector> a = finite_intersection(v.at(gamma), pair.g0);
  std::vector<LaurentVector> sub = finite_intersection(v.above(gamma), pair.g0);
  for (const auto& x : finite_intersection(v.at(gamma + 1), pair.g0)) {
    LaurentVector y = shifted(x, -1);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= z_o * x[i];
    sub.push_back(std::move(y));
  }
  return span_dim(a) - span_dim(sub);
}

std::size_t nu_gamma(const LatticePair& pair, const Rational& gamma, const Rational& z_o) {
  return nu_gamma(pair, v_filtration(pair.conn, Point::Zero, Rational(0)), gamma, z_o);
}

std::vector<std::pair<Rational, std::size_t>> spectrum_at_infinity(const LatticePair& pair, const Rational& z_o) {
  InfinitySide side(pair);
  std::vector<std::pair<Rational, std::size_t>> out;
  std::size_t total = 0;
  Rational g = side.top();
  for (int guard = 0; total < pair.rank(); ++guard) {
    if (guard > kScanLimit) throw WindowTooSmall("spectrum at infinity did not reach the rank");
    g = side.prev_jump(g);
    std::size_t nu = side.nu(g, z_o);
    if (nu) out.insert(out.begin(), {g, nu});
    total += nu;
  }
  if (total != pair.rank()) throw std::logic_error("spectrum at infinity exceeds the rank");
  return out;
}

SpectralPolynomial sp_infinity(const LatticePair& pair) {
  SpectralPolynomial sp;
  sp.kind = SpectrumKind::Infinity;
  for (const auto& [g, m] : spectrum_at_infinity(pair)) sp.add_root(g, m);
  return sp;
}

std::vector<std::pair<Rational, std::size_t>> local_mu(const MeroConnection& reg, const Lattice& h) {
  VFiltration v = v_filtration(reg, Point::Zero, Rational(0));
  Rational g = v.jumps.front().gamma;
  for (int guard = 0; !v.at(g).contains(h); ++guard) {
    if (guard > kScanLimit) throw WindowTooSmall("V^gamma never contains the lattice");
    g -= 1;
  }
  std::vector<std::pair<Rational, std::size_t>> out;
  std::size_t total = 0;
  for (int guard = 0; total < h.rank(); ++guard) {
    if (guard > kScanLimit) throw WindowTooSmall("local spectrum did not reach the rank");
    Lattice a = intersect(h, v.at(g));
    Lattice b = intersect(h, v.above(g)) + intersect(h, v.at(g - 1)).times_power(1);
    std::size_t mu = static_cast<std::size_t>(colength(a, b));
    if (mu) out.push_back({g, mu});
    total += mu;
    g = v.next_jump(g);
  }
  return out;
}

std::vector<LocalSpectrum> spectrum_at_origin(const LatticePair& pair, std::size_t order) {
  FormalDecomposition d = formal_decompose(pair.z_connection(), pair.g0_in_z(), order);
  std::vector<LocalSpectrum> out;
  for (const auto& f : d.factors) out.push_back({f.c, local_mu(f.regular_part, f.lattice)});
  return out;
}

SpectralPolynomial sp_zero(const LatticePair& pair, std::size_t order) {
  SpectralPolynomial sp;
  sp.kind = SpectrumKind::Zero;
  for (const auto& ls : spectrum_at_origin(pair, order))
    for (const auto& [g, m] : ls.mu) sp.add_root(-g, m);
  return sp;
}

SpectralPolynomial sp_zero(const LatticePair& pair) {
  std::size_t k = default_truncation(pair.rank());
  auto a = spectrum_at_origin(pair, k), b = spectrum_at_origin(pair, 2 * k);
  bool same = a.size() == b.size();
  for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].c == b[i].c && a[i].mu == b[i].mu;
  if (!same) throw TruncationInstability("spectrum at the origin changes between K and 2K");
  SpectralPolynomial sp;
  sp.kind = SpectrumKind::Zero;
  for (const auto& ls : a)
    for (const auto& [g, m] : ls.mu) sp.add_root(-g, m);
  return sp;
}

LocalBrieskorn local_brieskorn(const FormalDecomposition& d, std::size_t factor) {
  if (factor >= d.factors.size()) throw std::out_of_range("local_brieskorn: factor index");
  std::size_t off = 0;
  for (std::size_t i = 0; i < factor; ++i) off += d.block_sizes[i];
  std::size_t s = d.block_sizes[factor];
  LaurentMatrix frame(d.gauge.rows(), s, d.gauge.var());
  for (std::size_t i = 0; i < d.gauge.rows(); ++i)
    for (std::size_t j = 0; j < s; ++j) frame(i, j) = d.gauge(i, off + j);
  return {d.factors[factor].lattice, frame};
}

SusyResult susy_poly(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& q, int /*weight*/, double tol) {
  if (q.rows() != q.cols()) throw DimensionMismatch("Q must be square");
  if (u.size() && (u.rows() != q.rows() || u.cols() != q.cols())) throw DimensionMismatch("U and Q differ in size");
  double scale = std::max(1.0, q.norm());
  if ((q - q.adjoint()).norm() > tol * scale) throw NonHermitian("Q is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q);
  SusyResult r;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r.roots.push_back(es.eigenvalues()(i));
  std::sort(r.roots.begin(), r.roots.end());
  return r;
}

SusyResult susy_poly_exact(const QMatrix& q) {
  if (!q.square()) throw DimensionMismatch("Q must be square");
  if (q != q.transpose()) throw NonHermitian("rational Q must be symmetric");
  SusyResult r;
  SpectralPolynomial sp;
  sp.kind = SpectrumKind::Susy;
  for (const auto& b : rational_eigendata(q)) {
    sp.add_root(b.value, b.space.dim());
    for (std::size_t k = 0; k < b.space.dim(); ++k) r.roots.push_back(to_double(b.value));
  }
  r.exact = sp;
  return r;
}

namespace {

Rational beta_of(const Rational& g) { return g - Rational(ceil_of(g)); }

std::vector<Rational> betas(const VFiltration& v) {
  std::vector<Rational> b;
  for (const auto& j : v.jumps) {
    Rational x = beta_of(j.gamma);
    if (std::find(b.begin(), b.end(), x) == b.end()) b.push_back(x);
  }
  std::sort(b.begin(), b.end());
  return b;
}

}  // namespace

std::vector<BigradedEntry> bigraded_infinity(const LatticePair& pair) {
  auto spec = spectrum_at_infinity(pair);
  VFiltration v = v_filtration(pair.conn, Point::Zero, Rational(0));
  long plo = floor_long(spec.front().first) - 1, phi = ceil_long(spec.back().first) + 1;
  std::vector<BigradedEntry> out;
  for (const auto& beta : betas(v))
    for (long p = plo; p <= phi; ++p) {
      Lattice gp = pair.g0.times_power(-p), gp1 = pair.g0.times_power(-p - 1);
      auto a = finite_intersection(v.at(beta), gp);
      auto sub = finite_intersection(v.above(beta), gp);
      for (auto& x : finite_intersection(v.at(beta), gp1)) sub.push_back(std::move(x));
      std::size_t d = span_dim(a) - span_dim(sub);
      if (d) out.push_back({0, beta, p, d});
    }
  return out;
}

std::vector<BigradedEntry> bigraded_zero(const LatticePair& pair) {
  std::size_t k = default_truncation(pair.rank());
  FormalDecomposition d = formal_decompose(pair.z_connection(), pair.g0_in_z(), k);
  std::vector<BigradedEntry> out;
  for (std::size_t i = 0; i < d.factors.size(); ++i) {
    const auto& f = d.factors[i];
    auto mu = local_mu(f.regular_part, f.lattice);
    VFiltration v = v_filtration(f.regular_part, Point::Zero, Rational(0));
    // gamma = beta - p
    long plo = floor_long(-mu.back().first) - 1, phi = ceil_long(-mu.front().first) + 1;
    for (const auto& beta : betas(v))
      for (long p = plo; p <= phi; ++p) {
        Lattice hp = f.lattice.times_power(p), hp1 = f.lattice.times_power(p + 1);
        Lattice a = intersect(v.at(beta), hp);
        Lattice b = intersect(v.above(beta), hp) + intersect(v.at(beta), hp1);
        auto dim = static_cast<std::size_t>(colength(a, b));
        if (dim) out.push_back({i, beta, p, dim});
      }
  }
  return out;
}

SpectralPolynomial product_infinity(const std::vector<BigradedEntry>& t) {
  SpectralPolynomial sp;
  sp.kind = SpectrumKind::Infinity;
  for (const auto& e : t) sp.add_root(e.beta + e.p, e.dim);
  return sp;
}

SpectralPolynomial product_zero(const std::vector<BigradedEntry>& t) {
  SpectralPolynomial sp;
  sp.kind = SpectrumKind::Zero;
  for (const auto& e : t) sp.add_root(Rational(e.p) - e.beta, e.dim);
  return sp;
}

DeRhamFiber derham_fiber(const LatticePair& pair) {
  InfinitySide side(pair);
  const std::size_t n = pair.rank();
  LaurentMatrix h0inv = laurent_inverse(pair.g0.basis());
  auto image = [&](const Rational& g) {
    std::vector<QVector> vs;
    for (const auto& v : side.s(g)) {
      LaurentVector q = h0inv * v;
      QVector x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = q[i].eval(1);
      vs.push_back(x);
    }
    return Subspace::span(n, vs);
  };
  DeRhamFiber f;
  f.dimension = n;
  Rational g = side.top();
  Subspace above = image(g);
  for (int guard = 0; above.dim() < n; ++guard) {
    if (guard > kScanLimit) throw WindowTooSmall("de Rham fiber filtration did not exhaust");
    g = side.prev_jump(g);
    Subspace cur = image(g);
    if (cur.dim() > above.dim()) {
      f.v_dims.insert(f.v_dims.begin(), {g, cur.dim()});
      f.gr_dims.insert(f.gr_dims.begin(), {g, cur.dim() - above.dim()});
      f.images.insert(f.images.begin(), cur);
    }
    above = cur;
  }
  return f;
}

}  // namespace holospec
