#include "ladderlab/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ladderlab/errors.hpp"

namespace ladderlab {

Json complex_to_json(Complex z) {
  Json j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

Complex complex_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 2 || !j.contains("re") || !j.contains("im")) {
    throw ConfigError("complex value must be an object with exactly the keys re, im");
  }
  if (!j["re"].is_number() || !j["im"].is_number()) {
    throw ConfigError("complex value: re and im must be numbers");
  }
  const Complex z(j["re"].get<double>(), j["im"].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw ConfigError("complex value must be finite");
  }
  return z;
}

Json complex_list_to_json(const std::vector<Complex>& values) {
  Json arr = Json::array();
  for (const auto& z : values) arr.push_back(complex_to_json(z));
  return arr;
}

Json real_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
  if (std::isnan(x)) return Json("nan");
  return Json(x);
}

Json real_list_to_json(const std::vector<double>& values) {
  Json arr = Json::array();
  for (double x : values) arr.push_back(real_to_json(x));
  return arr;
}

Json matrix_to_json(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("matrix_to_json: matrix must be square");
  Json j;
  j["dim"] = m.rows();
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 2 || !j.contains("dim") || !j.contains("rows")) {
    throw ConfigError("matrix JSON must have exactly the keys dim, rows");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
    throw ConfigError("matrix JSON: dim must be a positive integer");
  }
  const auto dim = j["dim"].get<long long>();
  const auto& rows = j["rows"];
  if (!rows.is_array() || static_cast<long long>(rows.size()) != dim) {
    throw ConfigError("matrix JSON: rows must be an array of length dim");
  }
  Matrix m(dim, dim);
  for (long long i = 0; i < dim; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<long long>(row.size()) != dim) {
      std::ostringstream msg;
      msg << "matrix JSON: row " << i << " must have length dim";
      throw ConfigError(msg.str());
    }
    for (long long k = 0; k < dim; ++k) m(i, k) = complex_from_json(row[k]);
  }
  return m;
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << matrix_to_json(m).dump() << '\n';
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("matrix file " + path.string() + ": " + e.what());
  }
  return matrix_from_json(j);
}

}  // namespace ladderlab
