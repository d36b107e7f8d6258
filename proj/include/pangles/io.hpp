#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pangles/numkit.hpp"

namespace pangles {

// Matrix files: CSV with one row per line, or JSON
// {"rows": n, "cols": k, "data": [row-major values]}. Format follows the
// extension (.json, anything else is CSV).

inline bool is_json_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

inline Matrix parse_csv_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t", used) != std::string::npos)
        throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": trailing characters in '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::Parse, "empty matrix file");
  Matrix A(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j) A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return A;
}

inline nlohmann::json matrix_to_json(const Matrix& A) {
  nlohmann::json data = nlohmann::json::array();
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j) data.push_back(A(i, j));
  return {{"rows", A.rows()}, {"cols", A.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  try {
    const auto rows = j.at("rows").get<Index>();
    const auto cols = j.at("cols").get<Index>();
    const auto& data = j.at("data");
    if (rows < 0 || cols < 0 || !data.is_array() || static_cast<Index>(data.size()) != rows * cols)
      throw Error(ErrorCode::Parse, "JSON matrix: data length does not match rows * cols");
    Matrix A(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index c = 0; c < cols; ++c) A(i, c) = data.at(static_cast<std::size_t>(i * cols + c)).get<double>();
    return A;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("JSON matrix: ") + e.what());
  }
}

inline Matrix parse_json_matrix(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("JSON matrix: ") + e.what());
  }
  return matrix_from_json(j);
}

inline Matrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return is_json_path(path) ? parse_json_matrix(buf.str()) : parse_csv_matrix(buf.str());
}

inline std::string format_csv_matrix(const Matrix& A) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) out << (j ? "," : "") << A(i, j);
    out << '\n';
  }
  return out.str();
}

inline void write_matrix(const std::string& path, const Matrix& A) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path);
  if (is_json_path(path))
    out << matrix_to_json(A).dump() << '\n';
  else
    out << format_csv_matrix(A);
}

}  // namespace pangles
