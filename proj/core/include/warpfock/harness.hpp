#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "warpfock/locality.hpp"
#include "warpfock/nc_spacetime.hpp"

namespace warpfock {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct GridSpec {
  std::string mode = "rapidity";
  double theta_max = 4.0;
  int n_theta = 64;
  double perp_max = 1.0;
  int n_perp = 1;
  double p_max = 0.0;
  int n_p = 0;
  double log_min = -3.0;
  double log_max = 3.0;
  int n_log = 32;
};

struct RunConfig {
  int dimension = 2;
  double mass = 1.0;
  GridSpec grid;
  int n_max = 3;
  ThetaMatrix theta = ThetaMatrix::from_params(2, 0.5, 0.0);
  OneParticleUnitary V;
  std::vector<TestFunction> test_functions;
  std::vector<std::string> suites;
  std::map<std::string, double> tolerances;
  std::string output_dir = ".";
  uint64_t seed = 0;
  int locality_n_theta = 256;
  int scatter_n_theta = 256;
  std::vector<double> scatter_lambdas{0.0, 0.05, 0.1};

  // Throws ConfigError (or a module error) describing the violated precondition.
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
  GridPtr build_grid() const;
  double tolerance(const std::string& key, double fallback) const;
};

std::vector<std::string> known_suites();

struct CaseRecord {
  std::string case_id;
  std::string suite;
  std::string operation;
  std::string inputs_digest;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string error;
  nlohmann::json inputs;
  nlohmann::json extra;

  nlohmann::json to_json() const;
};

struct SuiteReport {
  std::vector<CaseRecord> cases;
  std::string config_digest;
  std::string version = kToolkitVersion;
  std::map<std::string, std::vector<std::vector<std::string>>> tables;

  int passed() const;
  int failed() const;
  bool pass() const { return failed() == 0; }
  nlohmann::json to_json() const;
  std::string digest() const;
};

// Thread count from WARPFOCK_THREADS (default 1).
int thread_count();

SuiteReport run_suite(const RunConfig& config);

enum class TableFormat { Csv, Json };
// Returns the written paths.
std::vector<std::string> emit_tables(const SuiteReport& report, const std::string& dir, TableFormat format);
std::string cases_csv(const SuiteReport& report);
std::vector<std::string> table_header(const std::string& table);

}  // namespace warpfock
