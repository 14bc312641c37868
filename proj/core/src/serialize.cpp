#include "warpfock/serialize.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace warpfock {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void dump(const nlohmann::json& j, std::ostringstream& os) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        os << nlohmann::json(it.key()).dump() << ':';
        dump(it.value(), os);
      }
      os << '}';
      break;
    }
    case nlohmann::json::value_t::array: {
      os << '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        dump(j[i], os);
      }
      os << ']';
      break;
    }
    case nlohmann::json::value_t::number_float: os << format_double(j.get<double>()); break;
    default: os << j.dump(); break;
  }
}

}  // namespace

std::string canonical_dump(const nlohmann::json& j) {
  std::ostringstream os;
  dump(j, os);
  return os.str();
}

nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ConfigError("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json vector_json(const Vec& v) {
  auto a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("expected a numeric array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

nlohmann::json matrix_json(const Mat& m) {
  auto a = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vector_json(m.row(r).transpose()));
  return a;
}

Mat matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a matrix (array of rows)");
  Mat m(j.size(), j[0].size());
  for (size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != j[0].size()) throw ConfigError("ragged matrix");
    for (size_t c = 0; c < j[r].size(); ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  return out + "\n";
}

}  // namespace warpfock
