#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "warpfock/common.hpp"

namespace warpfock {

std::string sha256_hex(const std::string& data);
// Sorted keys, no whitespace, floats at 17 significant digits.
std::string canonical_dump(const nlohmann::json& j);
std::string format_double(double x);

nlohmann::json complex_json(cplx z);
cplx complex_from_json(const nlohmann::json& j);
nlohmann::json vector_json(const Vec& v);
Vec vector_from_json(const nlohmann::json& j);
nlohmann::json matrix_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j);

std::string csv_escape(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace warpfock
