#pragma once

// JSON encoding of complex scalars and dense matrices:
//   {"dim": N, "rows": [[{"re": .., "im": ..}, ...], ...]}
// Doubles are written in shortest round-trip form, so export/import is lossless.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ladderlab/operator_space.hpp"

namespace ladderlab {

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex z);
// Throws ConfigError unless `j` is exactly {"re": number, "im": number}.
Complex complex_from_json(const Json& j);

Json complex_list_to_json(const std::vector<Complex>& values);
Json real_list_to_json(const std::vector<double>& values);

// Finite doubles as numbers, infinities as the strings "inf" / "-inf".
Json real_to_json(double x);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

void write_matrix_file(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_file(const std::filesystem::path& path);

}  // namespace ladderlab
