#include "holospec/rescale/bridge.hpp"

#include <algorithm>

#include "holospec/errors.hpp"

namespace holospec {

BirkhoffNormalForm ExactNormalForm::numeric() const {
  const std::size_t n = a0.rows();
  BirkhoffNormalForm b;
  b.a0 = CMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    b.a.push_back(a1(i, i).get_d());
    for (std::size_t j = 0; j < n; ++j)
      b.a0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a0(i, j).get_d();
  }
  return b;
}

ExactNormalForm normal_form(const LatticePair& pair, const BirkhoffSolution& solution) {
  const std::size_t n = pair.conn.rank();
  const LaurentMatrix e = LaurentMatrix::from_columns(solution.g0_basis, n, pair.conn.var());
  const LaurentMatrix c = pair.conn.gauge(e).matrix();
  if (!c.is_zero() && (c.low() < 0 || c.high() > 1))
    throw UnsupportedInput("normal_form: connection on the solution basis is not of the form a1 + theta a0");
  const QMatrix a1 = Rational(-1) * c.coeff(0), a0 = Rational(-1) * c.coeff(1);

  auto blocks = rational_eigendata(a1);
  std::sort(blocks.begin(), blocks.end(), [](const EigenBlock& x, const EigenBlock& y) { return x.value < y.value; });
  std::vector<QVector> cols;
  for (const auto& b : blocks) {
    for (const auto& v : b.space.basis()) {
      QVector w = a1 * v;
      for (std::size_t i = 0; i < n; ++i) w[i] -= b.value * v[i];
      if (std::any_of(w.begin(), w.end(), [](const Rational& x) { return x != 0; }))
        throw UnsupportedInput("normal_form: residue at infinity is not semisimple");
      cols.push_back(v);
    }
  }
  if (cols.size() != n) throw IrrationalEigenvalue("normal_form: residue at infinity has irrational eigenvalues");
  const QMatrix p = QMatrix::from_columns(cols, n);
  const QMatrix pi = p.inverse();
  return {pi * a0 * p, pi * a1 * p};
}

}  // namespace holospec
