#include "holospec/meroconn/connection.hpp"

#include <algorithm>

#include "holospec/errors.hpp"
#include "holospec/exact/matrix.hpp"

namespace holospec {

MeroConnection::MeroConnection(LaurentMatrix m, Derivation d) : m_(std::move(m)), d_(d) {
  if (m_.rows() != m_.cols()) throw DimensionMismatch("connection matrix must be square");
}

namespace {

LaurentPoly delta(const LaurentPoly& p, Derivation d) {
  return d == Derivation::Euler ? p.euler() : p.euler().shifted(1);
}

LaurentMatrix delta(const LaurentMatrix& b, Derivation d) {
  return d == Derivation::Euler ? b.euler() : b.euler().shifted(1);
}

}  // namespace

LaurentVector MeroConnection::apply(const LaurentVector& v) const {
  LaurentVector r = m_ * v;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += delta(v[i], d_);
  return r;
}

LaurentMatrix MeroConnection::apply(const LaurentMatrix& b) const { return m_ * b + delta(b, d_); }

MeroConnection MeroConnection::gauge(const LaurentMatrix& p) const {
  LaurentMatrix r = laurent_inverse(p) * apply(p);
  r.set_var(var());
  return MeroConnection(r, d_);
}

MeroConnection MeroConnection::as_euler() const {
  if (d_ == Derivation::Euler) return *this;
  return MeroConnection(m_.shifted(-1), Derivation::Euler);
}

MeroConnection MeroConnection::flipped() const {
  LaurentMatrix f = -as_euler().m_.flipped();
  f.set_var(dual_var(var()));
  return MeroConnection(f, Derivation::Euler);
}

MeroConnection MeroConnection::direct_sum(const MeroConnection& o) const {
  if (o.d_ != d_) throw std::invalid_argument("direct_sum: derivation mismatch");
  std::size_t n = rank(), m = o.rank();
  LaurentMatrix s(n + m, n + m, var());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = m_(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) s(n + i, n + j) = o.m_(i, j);
  return MeroConnection(s, d_);
}

LaurentMatrix matrix_on(const MeroConnection& conn, const Lattice& l) {
  if (l.rank() != conn.rank()) throw DimensionMismatch("matrix_on: rank mismatch");
  LaurentMatrix r = laurent_inverse(l.basis()) * conn.apply(l.basis());
  r.set_var(conn.var());
  return r;
}

namespace {

bool polynomial(const LaurentMatrix& m) { return m.is_zero() || m.low() >= 0; }

Lattice saturate_at_zero(const MeroConnection& e, Lattice l) {
  LaurentMatrix m = matrix_on(e, l);
  if (polynomial(m)) return l;
  long pole = -m.low();
  long limit = static_cast<long>(e.rank()) * (pole + 1);
  for (long it = 0; it < limit; ++it) {
    l = l.extended(e.apply(l.basis()));
    if (polynomial(matrix_on(e, l))) return l;
  }
  throw IrregularSingularity("lattice saturation does not terminate: singularity is irregular");
}

}  // namespace

Lattice levelt_saturate(const MeroConnection& conn, const Lattice& l, Point point) {
  if (point == Point::Zero) {
    if (l.side() != Side::AtZero) throw std::invalid_argument("levelt_saturate: lattice at 0 expected");
    return saturate_at_zero(conn.as_euler(), l);
  }
  if (l.side() != Side::AtInfinity) throw std::invalid_argument("levelt_saturate: lattice at infinity expected");
  return saturate_at_zero(conn.flipped(), l.flipped()).flipped();
}

namespace {

LaurentMatrix lift(const Lattice& l, const std::vector<QVector>& vs) {
  LaurentMatrix cols(l.rank(), vs.size(), l.basis().var());
  for (std::size_t j = 0; j < vs.size(); ++j) {
    LaurentVector c = l.basis() * LaurentVector(vs[j].begin(), vs[j].end());
    cols.set_column(j, c);
  }
  return cols;
}

std::vector<QVector> gather(const std::vector<EigenBlock>& blocks, auto pred) {
  std::vector<QVector> out;
  for (const auto& b : blocks)
    if (pred(b.value))
      for (const auto& v : b.space.basis()) out.push_back(v);
  return out;
}

Lattice with_lift(const Lattice& base, const Lattice& frame, const std::vector<QVector>& vs, long shift) {
  if (vs.empty()) return base;
  return base.extended(lift(frame, vs).shifted(shift));
}

}  // namespace

VFiltration v_filtration(const MeroConnection& conn, Point point, const Rational& window) {
  MeroConnection e = point == Point::Zero ? conn.as_euler() : conn.flipped();
  Lattice l = saturate_at_zero(e, Lattice::standard(e.rank(), Side::AtZero, e.var()));
  const Rational hi = window + 1;
  std::vector<EigenBlock> blocks;
  for (;;) {
    blocks = rational_eigendata(matrix_on(e, l).coeff(0));
    auto bad = std::find_if(blocks.begin(), blocks.end(),
                            [&](const EigenBlock& b) { return b.value >= hi || b.value < window; });
    if (bad == blocks.end()) break;
    Rational lam = bad->value;
    if (lam >= hi) {
      l = with_lift(l, l, gather(blocks, [&](const Rational& v) { return v == lam; }), -1);
    } else {
      l = with_lift(l.times_power(1), l, gather(blocks, [&](const Rational& v) { return v != lam; }), 0);
    }
  }
  VFiltration f;
  f.point = point;
  f.window = window;
  Lattice xl = l.times_power(1);
  for (const auto& b : blocks) {
    Lattice v = with_lift(xl, l, gather(blocks, [&](const Rational& x) { return x >= b.value; }), 0);
    if (point == Point::Infinity) v = v.flipped();
    f.jumps.push_back({b.value, b.space.dim(), v});
  }
  return f;
}

Rational VFiltration::next_jump(const Rational& gamma) const {
  if (jumps.empty()) throw std::logic_error("empty V-filtration");
  Rational best;
  bool have = false;
  for (const auto& j : jumps) {
    Rational cand = j.gamma + Rational(floor_of(gamma - j.gamma) + 1);
    if (!have || cand < best) best = cand, have = true;
  }
  return best;
}

bool VFiltration::is_jump(const Rational& gamma) const {
  return std::any_of(jumps.begin(), jumps.end(), [&](const VJump& j) { return is_integer(gamma - j.gamma); });
}

Lattice VFiltration::at(const Rational& gamma) const {
  if (jumps.empty()) throw std::logic_error("empty V-filtration");
  long n = floor_long(gamma - window);
  Rational g = gamma - n;
  auto it = std::find_if(jumps.begin(), jumps.end(), [&](const VJump& j) { return j.gamma >= g; });
  Lattice base = it == jumps.end() ? jumps.front().lattice : it->lattice;
  if (it == jumps.end()) ++n;
  return base.times_power(point == Point::Zero ? n : -n);
}

Lattice VFiltration::above(const Rational& gamma) const { return at(next_jump(gamma)); }

MeroConnection exp_twist(const MeroConnection& conn, const Rational& c) {
  LaurentMatrix m = conn.matrix();
  long e = conn.derivation() == Derivation::Euler ? -1 : 0;
  for (std::size_t i = 0; i < conn.rank(); ++i) m(i, i) += LaurentPoly::monomial(c, e);
  return MeroConnection(m, conn.derivation());
}

}  // namespace holospec
