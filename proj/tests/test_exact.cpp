#include <random>

#include "doctest.h"
#include "holospec/errors.hpp"
#include "holospec/exact/laurent.hpp"
#include "holospec/exact/matrix.hpp"
#include "holospec/exact/rational.hpp"

using namespace holospec;

TEST_CASE("rational parse and print") {
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("-3")) == "-3");
  CHECK_THROWS_AS(parse_rational("2/-4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK(floor_of(Rational(-1, 3)) == -1);
  CHECK(ceil_of(Rational(-1, 3)) == 0);
}

TEST_CASE("solve_linear on identity") {
  auto s = solve_linear(QMatrix::identity(2), QVector{1, 2});
  REQUIRE(s.consistent);
  CHECK(s.particular == QVector{1, 2});
  CHECK(s.kernel.dim() == 0);
}

TEST_CASE("solve_linear rank one") {
  QMatrix a{{1, 1}, {2, 2}};
  auto s = solve_linear(a, QVector{1, 2});
  REQUIRE(s.consistent);
  CHECK(s.particular == QVector{1, 0});
  CHECK(s.kernel == Subspace::span(2, {{1, -1}}));
  CHECK_FALSE(solve_linear(a, QVector{1, 3}).consistent);
  CHECK_THROWS_AS(solve_linear(a, QVector{1, 2, 3}), DimensionMismatch);
}

TEST_CASE("solve_linear over scalar laurent matrix") {
  LaurentMatrix a = LaurentMatrix::from_constant(QMatrix{{2, 0}, {0, 4}}, "theta");
  auto s = solve_linear(a, QVector{1, 1});
  REQUIRE(s.consistent);
  CHECK(s.particular == QVector{Rational(1, 2), Rational(1, 4)});
}

TEST_CASE("subspace_intersect examples") {
  CHECK(subspace_intersect(Subspace::span(2, {{1, 0}}), Subspace::span(2, {{0, 1}})).dim() == 0);
  CHECK(subspace_intersect(Subspace::full(2), Subspace::span(2, {{1, 1}})) == Subspace::span(2, {{1, 1}}));
  auto s = subspace_intersect(Subspace::span(3, {{1, 1, 0}, {0, 0, 1}}), Subspace::span(3, {{1, 1, 1}}));
  CHECK(s == Subspace::span(3, {{1, 1, 1}}));
  CHECK_THROWS_AS(subspace_intersect(Subspace::full(2), Subspace::full(3)), DimensionMismatch);
}

TEST_CASE("rational_eigendata examples") {
  auto d = rational_eigendata(QMatrix::diagonal({0, 1}));
  REQUIRE(d.size() == 2);
  CHECK(d[0].value == 0);
  CHECK(d[0].space == Subspace::span(2, {{1, 0}}));
  CHECK(d[1].value == 1);
  CHECK(d[1].space == Subspace::span(2, {{0, 1}}));

  auto n = rational_eigendata(QMatrix{{0, 1}, {0, 0}});
  REQUIRE(n.size() == 1);
  CHECK(n[0].value == 0);
  CHECK(n[0].space.dim() == 2);

  auto s = rational_eigendata(QMatrix{{0, 1}, {1, 0}});
  REQUIRE(s.size() == 2);
  CHECK(s[0].value == -1);
  CHECK(s[0].space == Subspace::span(2, {{1, -1}}));
  CHECK(s[1].value == 1);
  CHECK(s[1].space == Subspace::span(2, {{1, 1}}));

  CHECK_THROWS_AS(rational_eigendata(QMatrix{{0, 2}, {1, 0}}), IrrationalEigenvalue);
}

TEST_CASE("charpoly and roots") {
  // T^2 - 1
  auto p = charpoly(QMatrix{{0, 1}, {1, 0}});
  CHECK(p == LaurentPoly::from_coeffs(0, {-1, 0, 1}));
  // (T - 1/2)^2 (T + 3)
  LaurentPoly t = LaurentPoly::monomial(1, 1);
  LaurentPoly q = (t - LaurentPoly(Rational(1, 2))) * (t - LaurentPoly(Rational(1, 2))) * (t + LaurentPoly(3));
  int rest = -1;
  auto r = rational_roots(q, &rest);
  CHECK(rest == 0);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == std::pair<Rational, int>{-3, 1});
  CHECK(r[1] == std::pair<Rational, int>{Rational(1, 2), 2});
}

TEST_CASE("sylvester and projector") {
  QMatrix a = QMatrix::diagonal({1, 2}), b = QMatrix::diagonal({Rational(-1, 2)});
  QMatrix c{{3}, {5}};
  QMatrix x = solve_sylvester(a, b, c);
  CHECK(a * x - x * b == c);
  QMatrix m{{2, 1}, {0, 3}};
  auto blocks = rational_eigendata(m);
  QMatrix p0 = spectral_projector(m, blocks, 0), p1 = spectral_projector(m, blocks, 1);
  CHECK(p0 * p0 == p0);
  CHECK(p0 + p1 == QMatrix::identity(2));
  CHECK(p0 * m == m * p0);
}

namespace {

Rational small(std::mt19937& g) {
  std::uniform_int_distribution<int> d(-3, 3);
  return d(g);
}

std::vector<QVector> random_vectors(std::mt19937& g, std::size_t n, std::size_t k) {
  std::vector<QVector> v(k, QVector(n));
  for (auto& x : v)
    for (auto& c : x) c = small(g);
  return v;
}

// Oracle: v lies in S1 ∩ S2 iff it is orthogonal to every annihilator of S1 and of S2.
Subspace intersect_oracle(std::size_t n, const std::vector<QVector>& a, const std::vector<QVector>& b) {
  std::vector<QVector> rows;
  for (const auto* gens : {&a, &b}) {
    if (gens->empty()) {
      for (std::size_t i = 0; i < n; ++i) {
        QVector e(n);
        e[i] = 1;
        rows.push_back(e);
      }
      continue;
    }
    QMatrix m = QMatrix::from_rows(*gens, n);
    Subspace ann = kernel(m);
    for (const auto& w : ann.basis()) rows.push_back(w);
  }
  if (rows.empty()) return Subspace::full(n);
  return kernel(QMatrix::from_rows(rows, n));
}

}  // namespace

TEST_CASE("property: echelonization idempotent") {
  std::mt19937 g(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto v = random_vectors(g, 4, 3);
    Subspace s = Subspace::span(4, v);
    CHECK(Subspace::span(4, s.basis()) == s);
    for (const auto& x : v) CHECK(s.contains(x));
  }
}

TEST_CASE("property: intersection matches annihilator oracle") {
  std::mt19937 g(2024);
  std::uniform_int_distribution<int> kd(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 4;
    auto a = random_vectors(g, n, static_cast<std::size_t>(kd(g)));
    auto b = random_vectors(g, n, static_cast<std::size_t>(kd(g)));
    Subspace sa = Subspace::span(n, a), sb = Subspace::span(n, b);
    Subspace i1 = subspace_intersect(sa, sb), i2 = subspace_intersect(sb, sa);
    CHECK(i1 == i2);
    CHECK(i1 == intersect_oracle(n, a, b));
    CHECK(i1.dim() <= std::min(sa.dim(), sb.dim()));
    CHECK(sa.contains(i1));
    CHECK(sb.contains(i1));
  }
}

TEST_CASE("property: eigendata of triangular matrices") {
  std::mt19937 g(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 4;
    QMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) u(i, j) = small(g);
    // conjugate by a unimodular matrix so the answer is not read off the diagonal
    QMatrix s = QMatrix::identity(n);
    for (std::size_t i = 0; i + 1 < n; ++i) s(i + 1, i) = small(g);
    QMatrix a = s * u * s.inverse();
    auto blocks = rational_eigendata(a);
    std::size_t total = 0;
    for (const auto& b : blocks) {
      total += b.space.dim();
      QMatrix shifted = a - b.value * QMatrix::identity(n);
      for (const auto& v : b.space.basis()) {
        QVector w = v;
        for (std::size_t k = 0; k < n; ++k) w = shifted * w;
        CHECK(std::all_of(w.begin(), w.end(), [](const Rational& q) { return q == 0; }));
        CHECK(b.space.contains(shifted * v));
      }
      std::size_t diag_count = 0;
      for (std::size_t i = 0; i < n; ++i) diag_count += (u(i, i) == b.value);
      CHECK(b.space.dim() == diag_count);
    }
    CHECK(total == n);
  }
}

TEST_CASE("laurent basics") {
  LaurentPoly x = LaurentPoly::monomial(1, 1);
  LaurentPoly p = x * x + LaurentPoly::monomial(1, -1);
  CHECK(p.low() == -1);
  CHECK(p.high() == 2);
  CHECK(p.flipped().low() == -2);
  CHECK(p.euler() == LaurentPoly::monomial(2, 2) + LaurentPoly::monomial(-1, -1));
  LaurentPoly q, r;
  divmod(x * x - LaurentPoly(1), x - LaurentPoly(1), q, r);
  CHECK(q == x + LaurentPoly(1));
  CHECK(r.is_zero());
  CHECK(poly_gcd(x * x - LaurentPoly(1), x * x + x * LaurentPoly(2) + LaurentPoly(1)) == x + LaurentPoly(1));
}
