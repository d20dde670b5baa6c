#pragma once

#include <initializer_list>
#include <optional>
#include <vector>

#include "holospec/exact/laurent.hpp"
#include "holospec/exact/rational.hpp"

namespace holospec {

using QVector = std::vector<Rational>;

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), d_(rows * cols) {}
  QMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static QMatrix identity(std::size_t n);
  static QMatrix diagonal(const QVector& d);
  static QMatrix from_columns(const std::vector<QVector>& cols, std::size_t rows);
  static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return d_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return d_[i * cols_ + j]; }

  QVector row(std::size_t i) const;
  QVector column(std::size_t j) const;

  QMatrix transpose() const;
  bool is_zero() const;

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator*(const Rational& s, const QMatrix& a);
  QVector operator*(const QVector& v) const;
  bool operator==(const QMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && d_ == o.d_;
  }
  bool operator!=(const QMatrix& o) const { return !(*this == o); }

  // Reduced row echelon form; pivots chosen leftmost column, lowest row index first.
  QMatrix rref(std::vector<std::size_t>* pivots = nullptr) const;
  std::size_t rank() const;
  Rational det() const;
  QMatrix inverse() const;  // throws on singular
  QMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> d_;
};

// A linear subspace of Q^n, stored as a reduced echelon basis.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : n_(ambient) {}
  static Subspace span(std::size_t ambient, const std::vector<QVector>& vectors);
  static Subspace full(std::size_t ambient);

  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<QVector>& basis() const { return basis_; }

  bool contains(const QVector& v) const;
  bool contains(const Subspace& s) const;
  bool operator==(const Subspace& o) const { return n_ == o.n_ && basis_ == o.basis_; }
  bool operator!=(const Subspace& o) const { return !(*this == o); }

  friend Subspace operator+(const Subspace& a, const Subspace& b);
  // Coordinates of v in the echelon basis; v must lie in the space.
  QVector coordinates(const QVector& v) const;

 private:
  std::size_t n_ = 0;
  std::vector<QVector> basis_;
};

Subspace subspace_intersect(const Subspace& a, const Subspace& b);
Subspace kernel(const QMatrix& a);
Subspace column_space(const QMatrix& a);

struct LinearSolution {
  bool consistent = false;
  QVector particular;
  Subspace kernel;
};

LinearSolution solve_linear(const QMatrix& a, const QVector& b);
// Same, for a LaurentMatrix whose entries are all constants.
LinearSolution solve_linear(const LaurentMatrix& a, const QVector& b);

// Characteristic polynomial det(T - A) as a polynomial in T.
LaurentPoly charpoly(const QMatrix& a);

// Rational roots with multiplicities, ascending.  Remaining degree is returned
// through `unresolved` (nonzero means some roots are irrational).
std::vector<std::pair<Rational, int>> rational_roots(const LaurentPoly& p, int* unresolved = nullptr);

struct EigenBlock {
  Rational value;
  Subspace space;  // generalized eigenspace
};

// Throws IrrationalEigenvalue if the spectrum is not rational.
std::vector<EigenBlock> rational_eigendata(const QMatrix& a);

// Projector onto the generalized eigenspace of `value` along the others.
QMatrix spectral_projector(const QMatrix& a, const std::vector<EigenBlock>& blocks, std::size_t k);

// Unique X with A X - X B = C, for A and B with disjoint spectra.
QMatrix solve_sylvester(const QMatrix& a, const QMatrix& b, const QMatrix& c);

std::string to_string(const QMatrix& m);

}  // namespace holospec
