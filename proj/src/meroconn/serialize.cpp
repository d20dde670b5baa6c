#include "holospec/meroconn/serialize.hpp"

#include "holospec/errors.hpp"

namespace holospec {

json rational_to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument("rational must be a string \"p/q\" or an integer: " + j.dump());
}

json qmatrix_to_json(const QMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(rational_to_json(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

QMatrix qmatrix_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("matrix must be a nested array");
  std::size_t r = j.size(), c = r ? j[0].size() : 0;
  QMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c) throw DimensionMismatch("ragged matrix in input");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = rational_from_json(j[i][k]);
  }
  return m;
}

json laurent_entries_to_json(const LaurentMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const LaurentPoly& p = m(i, j);
      if (p.is_zero()) continue;
      json cs = json::array();
      for (const auto& c : p.coeffs()) cs.push_back(rational_to_json(c));
      out.push_back(json::array({i, j, cs, p.low()}));
    }
  return out;
}

LaurentMatrix laurent_entries_from_json(const json& entries, std::size_t rows, std::size_t cols,
                                        const std::string& var) {
  LaurentMatrix m(rows, cols, var);
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 4) throw std::invalid_argument("entry must be [row, col, coeffs, min_exponent]");
    auto i = e[0].get<std::size_t>(), k = e[1].get<std::size_t>();
    if (i >= rows || k >= cols) throw DimensionMismatch("entry index out of range");
    std::vector<Rational> cs;
    for (const auto& c : e[2]) cs.push_back(rational_from_json(c));
    m(i, k) += LaurentPoly::from_coeffs(e[3].get<long>(), cs);
  }
  return m;
}

json connection_to_json(const MeroConnection& c) {
  return {{"variable", c.var()},
          {"derivation", c.derivation() == Derivation::Euler ? "euler" : "irregular"},
          {"rank", c.rank()},
          {"entries", laurent_entries_to_json(c.matrix())}};
}

MeroConnection connection_from_json(const json& j) {
  std::string var = j.value("variable", "theta");
  std::string d = j.value("derivation", "euler");
  if (d != "euler" && d != "irregular") throw std::invalid_argument("derivation must be euler or irregular");
  auto r = j.at("rank").get<std::size_t>();
  return MeroConnection(laurent_entries_from_json(j.at("entries"), r, r, var),
                        d == "euler" ? Derivation::Euler : Derivation::Irregular);
}

json lattice_to_json(const Lattice& l) {
  return {{"side", l.side() == Side::AtZero ? "zero" : "infinity"},
          {"variable", l.basis().var()},
          {"rank", l.rank()},
          {"entries", laurent_entries_to_json(l.basis())}};
}

Lattice lattice_from_json(const json& j) {
  std::string s = j.at("side").get<std::string>();
  if (s != "zero" && s != "infinity") throw std::invalid_argument("side must be zero or infinity");
  auto r = j.at("rank").get<std::size_t>();
  return Lattice(laurent_entries_from_json(j.at("entries"), r, r, j.value("variable", "theta")),
                 s == "zero" ? Side::AtZero : Side::AtInfinity);
}

}  // namespace holospec
