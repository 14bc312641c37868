#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "warpfock/harness.hpp"
#include "warpfock/serialize.hpp"

using namespace warpfock;

namespace {

int cmd_run(const std::string& config_path, const std::vector<std::string>& suites, const std::string& out,
            const std::optional<uint64_t>& seed) {
  std::ifstream is(config_path);
  if (!is) {
    std::cerr << "error: cannot open config " << config_path << "\n";
    return 2;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const std::exception& e) {
    std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
    return 2;
  }
  if (!suites.empty()) j["suites"] = suites;
  if (!out.empty()) j["output_dir"] = out;
  if (seed) j["seed"] = *seed;
  RunConfig cfg;
  try {
    cfg = RunConfig::from_json(j);
  } catch (const std::exception& e) {
    std::cerr << "config validation failed: " << e.what() << "\n";
    return 2;
  }
  const SuiteReport rep = run_suite(cfg);
  emit_tables(rep, cfg.output_dir, TableFormat::Json);
  emit_tables(rep, cfg.output_dir, TableFormat::Csv);
  for (const auto& c : rep.cases)
    std::printf("%-4s %-40s measured=%.3e tol=%.1e%s%s\n", c.pass ? "ok" : "FAIL", c.case_id.c_str(), c.measured,
                c.tolerance, c.error.empty() ? "" : " error=", c.error.c_str());
  std::printf("%d passed, %d failed; digest %s\n", rep.passed(), rep.failed(), rep.digest().c_str());
  return rep.pass() ? 0 : 1;
}

int cmd_theta(double lambda, double eta, int d) {
  if (d < 2 || d > 4) {
    std::cerr << "error: --dim must be 2, 3 or 4\n";
    return 2;
  }
  if (d < 4 && eta != 0.0) {
    std::cerr << "error: eta requires d = 4\n";
    return 2;
  }
  const ThetaMatrix th = ThetaMatrix::from_params(d, lambda, eta);
  nlohmann::json j;
  j["dimension"] = d;
  j["lambda"] = lambda;
  j["eta"] = eta;
  j["matrix"] = matrix_json(th.entries);
  j["antisymmetric"] = th.is_antisymmetric();
  j["admissible"] = is_admissible(th, d);
  std::cout << canonical_dump(j) << "\n";
  return j["admissible"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warped-convolution Fock space toolkit"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run verification suites from a config file");
  std::string config, out;
  std::vector<std::string> suites;
  uint64_t seed_value = 0;
  run->add_option("--config", config, "config JSON")->required();
  run->add_option("--suite", suites, "suite name (repeatable)");
  run->add_option("--out", out, "output directory");
  auto* seed_opt = run->add_option("--seed", seed_value, "rng seed");

  auto* tc = app.add_subcommand("theta-check", "print and check a deformation matrix");
  double lambda = 0.0, eta = 0.0;
  int dim = 2;
  tc->add_option("--lambda", lambda)->required();
  tc->add_option("--eta", eta);
  tc->add_option("--dim", dim);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) {
      std::optional<uint64_t> seed;
      if (*seed_opt) seed = seed_value;
      return cmd_run(config, suites, out, seed);
    }
    if (*tc) return cmd_theta(lambda, eta, dim);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
