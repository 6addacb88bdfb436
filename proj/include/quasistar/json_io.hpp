// json_io.hpp: complex numbers as [re, im] pairs, vectors and matrices as nested arrays.

#pragma once

#include "quasistar/common.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace quasistar::io {

using nlohmann::json;

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("expected complex number as [re, im], got " + j.dump());
  }
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected array of complex numbers");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = complex_from_json(j.at(static_cast<size_t>(i)));
  return v;
}

inline json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected nested array for matrix");
  const auto rows = static_cast<Index>(j.size());
  const auto cols = rows == 0 ? Index{0} : static_cast<Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<size_t>(r));
    if (static_cast<Index>(row.size()) != cols) throw std::invalid_argument("ragged matrix rows");
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row.at(static_cast<size_t>(c)));
  }
  return m;
}

inline json real_vector_to_json(const RealVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace quasistar::io
