#pragma once

#include "json.hpp"

#include "holospec/exact/matrix.hpp"
#include "holospec/meroconn/connection.hpp"

namespace holospec {

using json = nlohmann::json;

json rational_to_json(const Rational& q);
Rational rational_from_json(const json& j);  // accepts "p/q" strings and integers

json qmatrix_to_json(const QMatrix& m);
QMatrix qmatrix_from_json(const json& j);

// Sparse entries [[row, col, [coefficients], min_exponent], ...].
json laurent_entries_to_json(const LaurentMatrix& m);
LaurentMatrix laurent_entries_from_json(const json& entries, std::size_t rows, std::size_t cols,
                                        const std::string& var);

// {variable, derivation: "euler" | "irregular", rank, entries}
json connection_to_json(const MeroConnection& c);
MeroConnection connection_from_json(const json& j);

// {side: "zero" | "infinity", variable, rank, entries}
json lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const json& j);

}  // namespace holospec
