#include <random>

#include "doctest.h"
#include "holospec/errors.hpp"
#include "holospec/meroconn/connection.hpp"
#include "holospec/meroconn/formal.hpp"
#include "holospec/meroconn/serialize.hpp"

using namespace holospec;

namespace {

LaurentPoly mono(Rational c, long e) { return LaurentPoly::monomial(c, e); }

LaurentMatrix lm(std::initializer_list<std::initializer_list<LaurentPoly>> rows, const std::string& var = "theta") {
  std::size_t r = rows.size(), c = rows.begin()->size(), i = 0;
  LaurentMatrix m(r, c, var);
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (const auto& e : row) m(i, j++) = e;
    ++i;
  }
  return m;
}

Lattice diag_lattice(std::vector<long> exps, Side side = Side::AtZero) {
  LaurentMatrix m(exps.size(), exps.size(), "theta");
  for (std::size_t i = 0; i < exps.size(); ++i) m(i, i) = mono(1, exps[i]);
  return Lattice(m, side);
}

LaurentMatrix random_unimodular(std::mt19937& g, std::size_t n) {
  // product of elementary matrices with Laurent entries
  std::uniform_int_distribution<int> c(-2, 2), e(-1, 1), idx(0, static_cast<int>(n) - 1);
  LaurentMatrix p = LaurentMatrix::identity(n, "theta");
  for (int k = 0; k < 3; ++k) {
    std::size_t i = static_cast<std::size_t>(idx(g)), j = static_cast<std::size_t>(idx(g));
    if (i == j) continue;
    LaurentMatrix el = LaurentMatrix::identity(n, "theta");
    el(i, j) = mono(c(g), e(g));
    p = p * el;
  }
  return p;
}

}  // namespace

TEST_CASE("hermite form is canonical") {
  // same module, two generating sets
  Lattice a(lm({{1, mono(1, 1)}, {0, 1}}), Side::AtZero);
  CHECK(a == Lattice::standard(2, Side::AtZero, "theta"));
  Lattice b(lm({{mono(1, 1), 0, mono(1, 2)}, {mono(1, 1), mono(1, 2), 0}}), Side::AtZero);
  Lattice c(lm({{mono(1, 1), 0}, {mono(1, 1), mono(1, 2)}}), Side::AtZero);
  CHECK(b == c);
  CHECK(b.contains(LaurentVector{mono(1, 2), 0}));
  CHECK_FALSE(b.contains(LaurentVector{mono(1, 1), 0}));
}

TEST_CASE("lattice at infinity") {
  Lattice l = diag_lattice({1, -2}, Side::AtInfinity);
  CHECK(l.contains(LaurentVector{mono(1, 0), mono(1, -3)}));
  CHECK_FALSE(l.contains(LaurentVector{mono(1, 2), 0}));
  CHECK(l.times_power(-1) == diag_lattice({0, -3}, Side::AtInfinity));
  CHECK(l.flipped().side() == Side::AtZero);
  CHECK(l.flipped().flipped() == l);
}

TEST_CASE("laurent_inverse") {
  std::mt19937 g(5);
  for (int t = 0; t < 30; ++t) {
    LaurentMatrix p = random_unimodular(g, 3);
    LaurentMatrix d = LaurentMatrix::identity(3, "theta");
    d(1, 1) = mono(2, 3);
    p = p * d;
    CHECK(p * laurent_inverse(p) == LaurentMatrix::identity(3, "theta"));
  }
  CHECK_THROWS_AS(laurent_inverse(lm({{mono(1, 0) + mono(1, 1)}})), std::domain_error);
}

TEST_CASE("property: lattice sum and intersection") {
  std::mt19937 g(99);
  for (int t = 0; t < 40; ++t) {
    Lattice a(random_unimodular(g, 3) * diag_lattice({0, 1, -1}).basis(), Side::AtZero);
    Lattice b(random_unimodular(g, 3) * diag_lattice({1, 0, 2}).basis(), Side::AtZero);
    Lattice s = a + b, i = intersect(a, b);
    CHECK(s.contains(a));
    CHECK(s.contains(b));
    CHECK(a.contains(i));
    CHECK(b.contains(i));
    CHECK(intersect(b, a) == i);
    CHECK(a.dual().dual() == a);
    // second isomorphism theorem
    CHECK(colength(s, a) == colength(b, i));
    CHECK(intersect(a, s) == a);
  }
}

TEST_CASE("levelt_saturate examples") {
  MeroConnection r1(lm({{Rational(-1, 3)}}));
  Lattice std1 = Lattice::standard(1, Side::AtZero, "theta");
  CHECK(levelt_saturate(r1, std1, Point::Zero) == std1);

  MeroConnection c(lm({{0, mono(1, -1)}, {0, 0}}));
  Lattice sat = levelt_saturate(c, Lattice::standard(2, Side::AtZero, "theta"), Point::Zero);
  CHECK(sat == diag_lattice({-1, 0}));
  // change-of-basis oracle: P = diag(1/theta, 1), P^{-1}(A P + theta P')
  LaurentMatrix p = lm({{mono(1, -1), 0}, {0, 1}});
  LaurentMatrix pinv = lm({{mono(1, 1), 0}, {0, 1}});
  LaurentMatrix direct = pinv * (c.matrix() * p + p.euler());
  CHECK(direct == lm({{-1, 1}, {0, 0}}));
  CHECK(matrix_on(c, sat) == direct);

  MeroConnection irr(LaurentMatrix::from_constant(QMatrix{{1, 0}, {0, 0}}, "z"), Derivation::Irregular);
  CHECK_THROWS_AS(levelt_saturate(irr, Lattice::standard(2, Side::AtZero, "z"), Point::Zero), IrregularSingularity);
}

TEST_CASE("levelt_saturate at infinity") {
  // theta d/dtheta = [[0, theta],[0,0]] is the same shape at infinity
  MeroConnection c(lm({{0, mono(1, 1)}, {0, 0}}));
  Lattice sat = levelt_saturate(c, Lattice::standard(2, Side::AtInfinity, "theta"), Point::Infinity);
  CHECK(sat == diag_lattice({1, 0}, Side::AtInfinity));
}

TEST_CASE("property: saturation is idempotent") {
  std::mt19937 g(3);
  MeroConnection base(lm({{Rational(1, 3), mono(1, -1)}, {0, Rational(1, 2)}}));
  for (int t = 0; t < 10; ++t) {
    MeroConnection c = base.gauge(random_unimodular(g, 2));
    Lattice l = Lattice::standard(2, Side::AtZero, "theta");
    Lattice s = levelt_saturate(c, l, Point::Zero);
    CHECK(levelt_saturate(c, s, Point::Zero) == s);
    CHECK(s.contains(l));
  }
}

TEST_CASE("v_filtration examples") {
  MeroConnection e1(lm({{Rational(-1, 3)}}));
  auto f = v_filtration(e1, Point::Zero, Rational(-1, 2));
  REQUIRE(f.jumps.size() == 1);
  CHECK(f.jumps[0].gamma == Rational(-1, 3));
  CHECK(f.jumps[0].multiplicity == 1);
  CHECK(f.jumps[0].lattice == Lattice::standard(1, Side::AtZero, "theta"));

  auto z = v_filtration(MeroConnection(LaurentMatrix(2, 2, "theta")), Point::Zero, Rational(-1, 2));
  REQUIRE(z.jumps.size() == 1);
  CHECK(z.jumps[0].gamma == 0);
  CHECK(z.jumps[0].multiplicity == 2);

  MeroConnection d(LaurentMatrix::from_constant(QMatrix::diagonal({Rational(-1, 3), Rational(1, 2)}), "theta"));
  auto w1 = v_filtration(d, Point::Zero, Rational(-1, 2));
  REQUIRE(w1.jumps.size() == 2);
  CHECK(w1.jumps[0].gamma == Rational(-1, 2));
  CHECK(w1.jumps[1].gamma == Rational(-1, 3));
  auto w2 = v_filtration(d, Point::Zero, Rational(-1, 3));
  REQUIRE(w2.jumps.size() == 2);
  CHECK(w2.jumps[0].gamma == Rational(-1, 3));
  CHECK(w2.jumps[1].gamma == Rational(1, 2));
  for (Rational g : {Rational(-1), Rational(-1, 3), Rational(0), Rational(1, 2), Rational(7, 3)})
    CHECK(w1.at(g) == w2.at(g));
}

TEST_CASE("v_filtration at infinity") {
  MeroConnection e1(lm({{Rational(-1, 3)}}));
  auto f = v_filtration(e1, Point::Infinity, Rational(0));
  REQUIRE(f.jumps.size() == 1);
  CHECK(f.jumps[0].gamma == Rational(1, 3));
  CHECK(f.at(Rational(4, 3)) == diag_lattice({-1}, Side::AtInfinity));
}

TEST_CASE("property: v_filtration against solution growth") {
  // For diag(l_i) on e_i, theta^k e_i has exponent l_i + k, so
  // V^g = span{theta^k e_i : l_i + k >= g}.  Transport by random gauges.
  std::mt19937 g(17);
  std::vector<Rational> lams{Rational(-1, 3), Rational(1, 2), Rational(5, 3)};
  MeroConnection d(LaurentMatrix::from_constant(QMatrix::diagonal(lams), "theta"));
  for (int t = 0; t < 12; ++t) {
    LaurentMatrix p = random_unimodular(g, 3);
    MeroConnection c = d.gauge(p);
    auto f = v_filtration(c, Point::Zero, Rational(-1, 2));
    std::vector<std::pair<Rational, std::size_t>> jumps;
    for (const auto& j : f.jumps) jumps.push_back({j.gamma, j.multiplicity});
    CHECK(jumps == std::vector<std::pair<Rational, std::size_t>>{{Rational(-1, 2), 1}, {Rational(-1, 3), 2}});
    LaurentMatrix pinv = laurent_inverse(p);
    for (int num = -7; num <= 7; ++num) {
      Rational gam(num, 6);
      std::vector<long> ex;
      for (const auto& l : lams) ex.push_back(ceil_long(gam - l));
      Lattice oracle(pinv * diag_lattice(ex).basis(), Side::AtZero);
      CHECK(f.at(gam) == oracle);
      CHECK(f.at(gam + 1) == f.at(gam).times_power(1));
      // residue of theta d/dtheta on V^gam lies in [gam, gam + 1)
      for (const auto& b : rational_eigendata(matrix_on(c, f.at(gam)).coeff(0))) {
        CHECK(b.value >= gam);
        CHECK(b.value < gam + 1);
      }
    }
  }
}

TEST_CASE("v_filtration of a direct sum is the union") {
  MeroConnection a(lm({{Rational(-1, 3)}})), b(lm({{0, mono(1, -1)}, {0, Rational(1, 4)}}));
  auto fa = v_filtration(a, Point::Zero, Rational(-1, 2)), fb = v_filtration(b, Point::Zero, Rational(-1, 2));
  auto fs = v_filtration(a.direct_sum(b), Point::Zero, Rational(-1, 2));
  std::vector<std::pair<Rational, std::size_t>> u, s;
  for (const auto* f : {&fa, &fb})
    for (const auto& j : f->jumps) u.push_back({j.gamma, j.multiplicity});
  for (const auto& j : fs.jumps) s.push_back({j.gamma, j.multiplicity});
  std::sort(u.begin(), u.end());
  CHECK(u == s);
}

TEST_CASE("exp_twist") {
  MeroConnection zero(LaurentMatrix(1, 1, "z"));
  CHECK(exp_twist(zero, 0) == zero);
  MeroConnection t = exp_twist(zero, 1);
  CHECK(t.matrix()(0, 0) == mono(1, -1));
  CHECK(exp_twist(t, -1) == zero);
  MeroConnection irr(LaurentMatrix(1, 1, "z"), Derivation::Irregular);
  CHECK(exp_twist(irr, 3).matrix()(0, 0) == LaurentPoly(3));

  // E1 twisted at z = 1/theta keeps its V-filtration at theta = 0
  MeroConnection e1(lm({{Rational(-1, 3)}}));
  MeroConnection tw = exp_twist(e1.flipped(), 2).flipped();
  CHECK(tw.matrix()(0, 0) == LaurentPoly(Rational(-1, 3)) + mono(-2, 1));
  auto f0 = v_filtration(e1, Point::Zero, Rational(-1, 2)), f1 = v_filtration(tw, Point::Zero, Rational(-1, 2));
  REQUIRE(f1.jumps.size() == 1);
  CHECK(f1.jumps[0].gamma == f0.jumps[0].gamma);
  CHECK(f1.jumps[0].lattice == f0.jumps[0].lattice);
  CHECK_THROWS_AS(v_filtration(tw, Point::Infinity, 0), IrregularSingularity);
}

TEST_CASE("formal_decompose split diagonal") {
  MeroConnection c(LaurentMatrix::from_constant(QMatrix::diagonal({0, 1}), "z"), Derivation::Irregular);
  auto d = formal_decompose(c, Lattice::standard(2, Side::AtZero, "z"), 8);
  REQUIRE(d.factors.size() == 2);
  CHECK(d.factors[0].c == 0);
  CHECK(d.factors[1].c == 1);
  for (const auto& f : d.factors) {
    CHECK(f.regular_part.rank() == 1);
    CHECK(f.residue_eigenvalues == std::vector<Rational>{0});
  }
}

TEST_CASE("formal_decompose coupled example") {
  LaurentMatrix b = lm({{0, mono(1, 1)}, {mono(1, 1), 1}}, "z");
  MeroConnection c(b, Derivation::Irregular);
  auto d = formal_decompose(c, Lattice::standard(2, Side::AtZero, "z"), 8);
  REQUIRE(d.factors.size() == 2);
  CHECK(d.factors[0].c == 0);
  CHECK(d.factors[1].c == 1);
  // hand solution of the recursion through z^2
  CHECK(d.gauge.truncated(0, 2) ==
        lm({{1, mono(1, 1) + mono(1, 2)}, {mono(-1, 1) + mono(1, 2), 1}}, "z"));
  CHECK(d.gauged(0, 0).truncated(0, 2) == mono(-1, 2));
  CHECK(d.gauged(1, 1).truncated(0, 2) == LaurentPoly(1) + mono(1, 2));
  // coupling vanishes through z^8
  CHECK(d.gauged(0, 1).is_zero());
  CHECK(d.gauged(1, 0).is_zero());
  // B T + z^2 T' = T B' mod z^9, checked without inverting T
  LaurentMatrix lhs = b * d.gauge + d.gauge.euler().shifted(1);
  CHECK((lhs - d.gauge * d.gauged).truncated(0, 8).is_zero());
  auto s = formal_decompose_stable(c, Lattice::standard(2, Side::AtZero, "z"));
  CHECK(s.factors.size() == 2);
}

TEST_CASE("formal_decompose needs no ramification") {
  MeroConnection c(lm({{0, 1}, {mono(1, 1), 0}}, "z"), Derivation::Irregular);
  CHECK_THROWS_AS(formal_decompose(c, Lattice::standard(2, Side::AtZero, "z"), 8), RamificationRequired);
}

TEST_CASE("property: formal_decompose of direct sums and ranks") {
  MeroConnection a(lm({{0, mono(1, 1)}, {mono(1, 1), 1}}, "z"), Derivation::Irregular);
  MeroConnection b(lm({{Rational(-2), mono(1, 2)}, {0, Rational(-2) + mono(Rational(1, 2), 1)}}, "z"), Derivation::Irregular);
  auto s = formal_decompose_stable(a.direct_sum(b), Lattice::standard(4, Side::AtZero, "z"));
  std::vector<Rational> cs;
  std::size_t total = 0;
  for (const auto& f : s.factors) {
    cs.push_back(f.c);
    total += f.regular_part.rank();
  }
  CHECK(cs == std::vector<Rational>{-2, 0, 1});
  CHECK(total == 4);
  CHECK(s.factors[0].residue_eigenvalues == std::vector<Rational>{0, Rational(1, 2)});
}

TEST_CASE("check_no_ramification") {
  auto r1 = check_no_ramification(
      MeroConnection(LaurentMatrix::from_constant(QMatrix::diagonal({0, 1}), "z"), Derivation::Irregular));
  CHECK(r1.ok);
  CHECK(r1.slopes == std::vector<Rational>{1});
  auto r2 = check_no_ramification(MeroConnection(lm({{0, 1}, {mono(1, 1), 0}}, "z"), Derivation::Irregular));
  CHECK_FALSE(r2.ok);
  CHECK(r2.slopes == std::vector<Rational>{Rational(1, 2)});
  auto r3 = check_no_ramification(MeroConnection(LaurentMatrix(2, 2, "z"), Derivation::Irregular));
  CHECK(r3.ok);
  CHECK(r3.slopes == std::vector<Rational>{0});
}

TEST_CASE("serialization round trip") {
  MeroConnection c(lm({{Rational(-1, 3), mono(2, -1) + mono(Rational(1, 7), 2)}, {0, 0}}));
  json j = connection_to_json(c);
  CHECK(j["rank"] == 2);
  CHECK(j["derivation"] == "euler");
  CHECK(connection_from_json(j) == c);
  CHECK(connection_from_json(json::parse(j.dump())) == c);
  Lattice l = diag_lattice({1, -2}, Side::AtInfinity);
  CHECK(lattice_from_json(lattice_to_json(l)) == l);
  CHECK(qmatrix_from_json(qmatrix_to_json(QMatrix{{Rational(1, 2), 3}})) == QMatrix{{Rational(1, 2), 3}});
}
