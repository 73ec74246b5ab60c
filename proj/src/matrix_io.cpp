#include "proxframe/matrix_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "proxframe/errors.hpp"

namespace proxframe {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& token, std::size_t line) {
  const std::string t = trim(token);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    std::ostringstream msg;
    msg << "line " << line << ": not a number: '" << t << "'";
    throw Error(ErrorKind::InvalidInput, msg.str());
  }
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Matrix read_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_number(cell, line_no));
    if (!line.empty() && line.back() == ',') {
      throw Error(ErrorKind::InvalidInput, "trailing comma on line " + std::to_string(line_no));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::InvalidInput, "ragged CSV at line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::InvalidInput, "empty CSV matrix");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_csv_matrix(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix matrix_from_json(const nlohmann::json& j) {
  try {
    const auto rows = j.at("rows").get<std::int64_t>();
    const auto cols = j.at("cols").get<std::int64_t>();
    const auto& data = j.at("data");
    if (rows < 1 || cols < 1) throw Error(ErrorKind::InvalidInput, "rows and cols must be positive");
    if (!data.is_array() || static_cast<std::int64_t>(data.size()) != rows * cols) {
      throw Error(ErrorKind::InvalidInput, "data must hold rows·cols numbers");
    }
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index k = 0; k < cols; ++k) {
        const auto& e = data[static_cast<std::size_t>(i * cols + k)];
        if (!e.is_number()) throw Error(ErrorKind::InvalidInput, "non-numeric matrix entry");
        m(i, k) = e.get<double>();
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("matrix JSON: ") + e.what());
  }
}

std::string matrix_to_json(const Matrix& m) {
  std::ostringstream out;
  out << "{\"rows\": " << m.rows() << ", \"cols\": " << m.cols() << ", \"data\": [";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (i || j) out << ", ";
      out << format_double(m(i, j));
    }
  }
  out << "]}";
  return out.str();
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  if (ends_with(path, ".csv")) return read_csv_matrix(in);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, "'" + path + "': " + e.what());
  }
  if (j.is_object() && j.contains("operator")) return matrix_from_json(j.at("operator"));
  return matrix_from_json(j);
}

void save_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  if (ends_with(path, ".csv")) {
    write_csv_matrix(out, m);
  } else {
    out << matrix_to_json(m) << '\n';
  }
}

}  // namespace proxframe
