#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "proxframe/types.hpp"

namespace proxframe {

// Plain CSV (no header) and {"rows": n, "cols": d, "data": [row-major]}.
// Numbers are written with 17 significant digits so values round-trip
// bit-exactly. Parse errors throw Error(InvalidInput).

Matrix read_csv_matrix(std::istream& in);
void write_csv_matrix(std::ostream& out, const Matrix& m);

Matrix matrix_from_json(const nlohmann::json& j);
std::string matrix_to_json(const Matrix& m);

/// Dispatches on extension (.csv, otherwise JSON). A JSON document with an
/// "operator" member is unwrapped.
Matrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const Matrix& m);

std::string format_double(double v);

}  // namespace proxframe
