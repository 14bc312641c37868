#include "warpfock/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "warpfock/serialize.hpp"

namespace warpfock {

using nlohmann::json;

namespace {

json test_function_json(const TestFunction& f) {
  return {{"center", vector_json(f.center)},
          {"half_widths", vector_json(f.half_widths)},
          {"k_mod", vector_json(f.k_mod)},
          {"amplitude", complex_json(f.amplitude)}};
}

TestFunction test_function_from_json(const json& j, int d) {
  const Vec c = vector_from_json(j.at("center"));
  const Vec h = vector_from_json(j.at("half_widths"));
  const Vec k = j.contains("k_mod") ? vector_from_json(j.at("k_mod")) : Vec::Zero(d);
  const cplx a = j.contains("amplitude") ? complex_from_json(j.at("amplitude")) : cplx(1.0);
  if (c.size() != d) throw ConfigError("test function center must have d components");
  return TestFunction::modulated(c, h, k, a);
}

}  // namespace

std::vector<std::string> known_suites() {
  return {"covariance", "rieffel", "bounds", "locality", "scatter", "npoint", "twist"};
}

double RunConfig::tolerance(const std::string& key, double fallback) const {
  auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.dimension = j.value("dimension", 2);
  if (c.dimension < 2 || c.dimension > 4) throw ConfigError("dimension must be 2, 3 or 4");
  c.mass = j.value("mass", 1.0);
  if (j.contains("grid")) {
    const json& g = j["grid"];
    c.grid.mode = g.value("mode", "rapidity");
    c.grid.theta_max = g.value("theta_max", c.grid.theta_max);
    c.grid.n_theta = g.value("n_theta", g.value("n_nodes", c.grid.n_theta));
    c.grid.perp_max = g.value("perp_max", c.grid.perp_max);
    c.grid.n_perp = g.value("n_perp", c.grid.n_perp);
    c.grid.p_max = g.value("p_max", c.grid.p_max);
    c.grid.n_p = g.value("n_p", g.value("n_nodes", c.grid.n_p));
    c.grid.log_min = g.value("log_min", c.grid.log_min);
    c.grid.log_max = g.value("log_max", c.grid.log_max);
    c.grid.n_log = g.value("n_log", c.grid.n_log);
  }
  c.n_max = j.value("n_max", 3);
  if (j.contains("theta")) {
    const json& t = j["theta"];
    if (t.contains("matrix")) {
      c.theta = ThetaMatrix::from_matrix(matrix_from_json(t["matrix"]));
    } else {
      c.theta = ThetaMatrix::from_params(c.dimension, t.value("lambda", 0.5), t.value("eta", 0.0));
    }
  } else {
    c.theta = ThetaMatrix::from_params(c.dimension, 0.5, 0.0);
  }
  if (j.contains("V")) c.V = OneParticleUnitary::from_json(j["V"]);
  if (j.contains("test_functions"))
    for (const auto& f : j["test_functions"]) c.test_functions.push_back(test_function_from_json(f, c.dimension));
  if (j.contains("suites")) c.suites = j["suites"].get<std::vector<std::string>>();
  if (j.contains("tolerances"))
    for (auto it = j["tolerances"].begin(); it != j["tolerances"].end(); ++it)
      c.tolerances[it.key()] = it.value().get<double>();
  c.output_dir = j.value("output_dir", std::string("."));
  c.seed = j.value("seed", static_cast<uint64_t>(0));
  c.locality_n_theta = j.value("locality_n_theta", c.locality_n_theta);
  c.scatter_n_theta = j.value("scatter_n_theta", c.scatter_n_theta);
  if (j.contains("scatter_lambdas")) c.scatter_lambdas = j["scatter_lambdas"].get<std::vector<double>>();
  c.validate();
  return c;
}

json RunConfig::to_json() const {
  json j;
  j["dimension"] = dimension;
  j["mass"] = mass;
  j["grid"] = {{"mode", grid.mode},         {"theta_max", grid.theta_max}, {"n_theta", grid.n_theta},
               {"perp_max", grid.perp_max}, {"n_perp", grid.n_perp},       {"p_max", grid.p_max},
               {"n_p", grid.n_p},           {"log_min", grid.log_min},     {"log_max", grid.log_max},
               {"n_log", grid.n_log}};
  j["n_max"] = n_max;
  j["theta"] = {{"matrix", matrix_json(theta.entries)}};
  j["V"] = V.to_json();
  auto tf = json::array();
  for (const auto& f : test_functions) tf.push_back(test_function_json(f));
  j["test_functions"] = tf;
  j["suites"] = suites;
  json tol = json::object();
  for (const auto& [k, v] : tolerances) tol[k] = v;
  j["tolerances"] = tol;
  j["output_dir"] = output_dir;
  j["seed"] = seed;
  j["locality_n_theta"] = locality_n_theta;
  j["scatter_n_theta"] = scatter_n_theta;
  j["scatter_lambdas"] = scatter_lambdas;
  return j;
}

GridPtr RunConfig::build_grid() const {
  if (grid.mode == "rapidity")
    return MassShellGrid::rapidity(mass, dimension, grid.theta_max, grid.n_theta, grid.perp_max, grid.n_perp);
  if (grid.mode == "momentum") {
    if (dimension != 2) throw ConfigError("momentum-uniform grids require d = 2");
    return MassShellGrid::momentum(mass, grid.p_max, grid.n_p);
  }
  if (grid.mode == "log" || grid.mode == "log_momentum") {
    if (dimension != 2 || mass != 0.0) throw ConfigError("log-momentum grids require d = 2 and mass 0");
    return MassShellGrid::log_momentum(grid.log_min, grid.log_max, grid.n_log);
  }
  throw ConfigError("unknown grid mode '" + grid.mode + "'");
}

void RunConfig::validate() const {
  if (dimension < 2 || dimension > 4) throw ConfigError("dimension must be 2, 3 or 4");
  if (mass < 0.0) throw ConfigError("mass must be non-negative");
  if (n_max < 1 || n_max > 4) throw ConfigError("n_max must lie in [1, 4]");
  if (theta.dim() != dimension) throw ConfigError("theta dimension differs from the configured dimension");
  if (!theta.is_antisymmetric()) throw ConfigError("theta violates the antisymmetry invariant theta^{mu nu} = -theta^{nu mu}");
  if (locality_n_theta < 8) throw ConfigError("locality_n_theta must be at least 8");
  if (scatter_n_theta < 8) throw ConfigError("scatter_n_theta must be at least 8");
  const auto known = known_suites();
  for (const auto& s : suites)
    if (std::find(known.begin(), known.end(), s) == known.end())
      throw ConfigError("unknown suite '" + s + "'");
  for (const auto& f : test_functions)
    if (f.dim() != dimension) throw ConfigError("test function dimension differs from the configured dimension");
  const GridPtr g = build_grid();
  realize(V, g);
}

json CaseRecord::to_json() const {
  return {{"case_id", case_id}, {"suite", suite},       {"operation", operation}, {"inputs_digest", inputs_digest},
          {"measured", measured}, {"tolerance", tolerance}, {"pass", pass},        {"error", error},
          {"inputs", inputs},   {"extra", extra}};
}

int SuiteReport::passed() const {
  return static_cast<int>(std::count_if(cases.begin(), cases.end(), [](const auto& c) { return c.pass; }));
}
int SuiteReport::failed() const { return static_cast<int>(cases.size()) - passed(); }

json SuiteReport::to_json() const {
  json j;
  j["version"] = version;
  j["config_digest"] = config_digest;
  j["summary"] = {{"total", cases.size()}, {"passed", passed()}, {"failed", failed()}};
  auto arr = json::array();
  for (const auto& c : cases) arr.push_back(c.to_json());
  j["cases"] = arr;
  json t = json::object();
  for (const auto& [name, rows] : tables) t[name] = rows;
  j["tables"] = t;
  return j;
}

std::string SuiteReport::digest() const { return sha256_hex(canonical_dump(to_json())); }

int thread_count() {
  const char* env = std::getenv("WARPFOCK_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n >= 1 ? std::min(n, 256) : 1;
}

namespace {

struct Task {
  std::string suite;
  std::string case_id;
  std::string operation;
  json inputs;
  double tolerance = 0.0;
  // returns measured value; may fill extra and a pass override
  std::function<double(json& extra, std::optional<bool>& pass)> run;
};

uint64_t stable_hash(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::mt19937_64 rng_for(uint64_t seed, const std::string& case_id) {
  const uint64_t h = stable_hash(case_id);
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(h),
                    static_cast<uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Window {
  int lo, hi;
};

Window middle(const GridPtr& g) {
  const int n = g->n_theta;
  const int lo = n / 4, hi = n - n / 4;
  if (g->mode != GridMode::Rapidity || g->d == 2) return {lo, hi};
  return {0, g->size()};
}

OpPtr random_letter(const GridPtr& g, std::mt19937_64& rng, int which) {
  const Window w = middle(g);
  const CVec c = random_coefficients(g->size(), w.lo, w.hi, rng);
  const CVec h = random_coefficients(g->size(), w.lo, w.hi, rng);
  switch (which % 3) {
    case 0: return creator(c);
    case 1: return annihilator(h);
    default: return field(c, h);
  }
}

SmearedFieldDescriptor random_descriptor(const GridPtr& g, std::mt19937_64& rng) {
  const Window w = middle(g);
  OnShellFunction fp = OnShellFunction::zeros(g, +1), fm = OnShellFunction::zeros(g, -1);
  fp.values = random_coefficients(g->size(), w.lo, w.hi, rng) * 0.3;
  fm.values = random_coefficients(g->size(), w.lo, w.hi, rng) * 0.3;
  return {fp, fm};
}

std::vector<TestFunction> default_roster(int d) {
  auto v = [d](std::initializer_list<double> l) {
    Vec x = Vec::Zero(d);
    int i = 0;
    for (double a : l) x(i++) = a;
    return x;
  };
  Vec hw = Vec::Constant(d, 0.5);
  std::vector<TestFunction> out;
  Vec h1 = hw;
  h1(0) = 0.5;
  h1(1) = 0.8;
  Vec h2 = hw;
  h2(0) = 0.6;
  h2(1) = 0.9;
  out.push_back(TestFunction::bump(v({0.2, 1.6}), h1));
  out.push_back(TestFunction::bump(v({-0.1, -1.7}), h2));
  out.push_back(TestFunction::bump(v({1.2, 3.0}), h1));
  out.push_back(TestFunction::modulated(v({0.0, 0.7}), hw, v({0.3, 0.1}), cplx(0.8, 0.2)));
  return out;
}

void add_covariance(const RunConfig& cfg, const GridPtr& g, std::vector<Task>& tasks) {
  const double tol = cfg.tolerance("covariance", 1e-12);
  const int d = cfg.dimension;
  auto make = [&](const std::string& id, int kind, int idx) {
    Task t;
    t.suite = "covariance";
    t.case_id = id;
    t.operation = "covariance_transport";
    t.tolerance = tol;
    t.inputs = {{"seed", cfg.seed}, {"case", id}, {"kind", kind}, {"index", idx}};
    t.run = [=, &cfg](json& extra, std::optional<bool>&) {
      auto rng = rng_for(cfg.seed, id);
      const Window w = middle(g);
      const OpPtr A = random_letter(g, rng, idx);
      const FockState psi = random_state(g, cfg.n_max, cfg.n_max - 1, w.lo, w.hi, rng);
      const Generator X = Generator::momentum(g);
      Conjugation W;
      Mat M = Mat::Identity(d, d);
      if (kind == 0) {
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        Vec a(d);
        for (int mu = 0; mu < d; ++mu) a(mu) = u(rng);
        W.v = realize(OneParticleUnitary::translation(a), g).op;
        extra["a"] = vector_json(a);
      } else if (kind == 1) {
        const double chi = (idx % 2 == 0 ? 1.0 : -2.0) * g->step();
        W.v = realize(OneParticleUnitary::boost(chi), g).op;
        M = LorentzTransform::boost01(d, chi).matrix;
        extra["chi"] = chi;
      } else {
        W.v = ScaledPermutation::identity(g->size());
        W.antiunitary = true;
        M = -Mat::Identity(d, d);
      }
      const CovarianceResult r = covariance_transport(W, M, A, cfg.theta, X, psi, 1e-10);
      extra["intertwining_defect"] = r.intertwining_defect;
      return r.deviation;
    };
    tasks.push_back(t);
  };
  for (int i = 0; i < 4; ++i) make("covariance/translation/" + std::to_string(i), 0, i);
  if (g->mode == GridMode::Rapidity)
    for (int i = 0; i < 3; ++i) make("covariance/boost/" + std::to_string(i), 1, i);
  for (int i = 0; i < 4; ++i) make("covariance/antiunitary/" + std::to_string(i), 2, i);
}

void add_rieffel(const RunConfig& cfg, const GridPtr& g, std::vector<Task>& tasks) {
  for (int i = 0; i < 5; ++i) {
    Task t;
    t.suite = "rieffel";
    t.case_id = "rieffel/creators/" + std::to_string(i);
    t.operation = "rieffel_product";
    t.tolerance = cfg.tolerance("rieffel", 1e-12);
    t.inputs = {{"seed", cfg.seed}, {"case", t.case_id}};
    const std::string id = t.case_id;
    t.run = [=, &cfg](json&, std::optional<bool>&) {
      auto rng = rng_for(cfg.seed, id);
      const Window w = middle(g);
      const OpPtr A = creator(random_coefficients(g->size(), w.lo, w.hi, rng));
      const OpPtr B = creator(random_coefficients(g->size(), w.lo, w.hi, rng));
      const Generator X = Generator::momentum(g);
      const FockState om = FockState::vacuum(g, std::max(2, cfg.n_max));
      const FockState lhs = warp_spectral(A, cfg.theta, X, warp_spectral(B, cfg.theta, X, om));
      const FockState rhs = warp_spectral(rieffel_operator(A, B, cfg.theta, X), cfg.theta, X, om);
      return (lhs - rhs).norm();
    };
    tasks.push_back(t);
  }
}

void add_bounds(const RunConfig& cfg, const GridPtr& g, std::vector<Task>& tasks) {
  auto base = [&](const std::string& id, const std::string& op, double tol) {
    Task t;
    t.suite = "bounds";
    t.case_id = id;
    t.operation = op;
    t.tolerance = tol;
    t.inputs = {{"seed", cfg.seed}, {"case", id}, {"V", cfg.V.to_json()}};
    return t;
  };
  for (int i = 0; i < 3; ++i) {
    Task t = base("bounds/vacuum/" + std::to_string(i), "deformed_field_direct", 0.0);
    const std::string id = t.case_id;
    t.run = [=, &cfg](json&, std::optional<bool>&) {
      auto rng = rng_for(cfg.seed, id);
      const auto desc = random_descriptor(g, rng);
      const FockState om = FockState::vacuum(g, cfg.n_max);
      return deformed_field_direct({desc, cfg.theta, cfg.V}, om).max_abs_diff(free_field_apply(desc, om));
    };
    tasks.push_back(t);
  }
  for (int i = 0; i < 3; ++i) {
    Task t = base("bounds/hermiticity/" + std::to_string(i), "adjoint_deformed", cfg.tolerance("hermiticity", 1e-12));
    const std::string id = t.case_id;
    t.run = [=, &cfg](json&, std::optional<bool>&) {
      auto rng = rng_for(cfg.seed, id);
      const Window w = middle(g);
      const auto desc = random_descriptor(g, rng);
      std::vector<FockState> states;
      for (int k = 0; k < 3; ++k) states.push_back(random_state(g, cfg.n_max, cfg.n_max - 1, w.lo, w.hi, rng));
      return adjoint_deformed({desc, cfg.theta, cfg.V}, states).max_deviation;
    };
    tasks.push_back(t);
  }
  {
    Task t = base("bounds/tempered", "tempered_bound", 0.0);
    const std::string id = t.case_id;
    t.run = [=, &cfg](json& extra, std::optional<bool>&) {
      auto rng = rng_for(cfg.seed, id);
      const Window w = middle(g);
      const auto desc = random_descriptor(g, rng);
      const FockState psi = random_state(g, cfg.n_max, cfg.n_max - 1, w.lo, w.hi, rng);
      std::normal_distribution<double> nd(0.0, 3.0);
      std::vector<Vec> xs;
      for (int k = 0; k < 20; ++k) {
        Vec x(g->d);
        for (int mu = 0; mu < g->d; ++mu) x(mu) = nd(rng);
        xs.push_back(x);
      }
      double worst = -1e300;
      for (const auto& b : tempered_bound({desc, cfg.theta, cfg.V}, psi, xs)) worst = std::max(worst, b.lhs - b.rhs);
      extra["samples"] = 20;
      return std::max(worst, 0.0);
    };
    tasks.push_back(t);
  }
  {
    Task t = base("bounds/continuity", "continuity_surrogate", 0.0);
    const std::string id = t.case_id;
    t.run = [=, &cfg](json& extra, std::optional<bool>&) {
      auto rng = rng_for(cfg.seed, id);
      const Window w = middle(g);
      const auto desc = random_descriptor(g, rng);
      const FockState psi = random_state(g, cfg.n_max, cfg.n_max - 1, w.lo, w.hi, rng);
      Vec x0 = Vec::Zero(g->d);
      x0(0) = 0.3;
      x0(1) = 0.2;
      const auto seq = continuity_surrogate({desc, cfg.theta, cfg.V}, psi, x0, 20);
      int violations = 0;
      for (size_t k = 1; k < seq.size(); ++k)
        if (!(seq[k] < seq[k - 1])) ++violations;
      extra["first"] = seq.front();
      extra["last"] = seq.back();
      return static_cast<double>(violations);
    };
    tasks.push_back(t);
  }
}

void add_locality(const RunConfig& cfg, std::vector<Task>& tasks,
                  std::map<std::string, std::vector<std::vector<std::string>>>& tables) {
  if (cfg.dimension != 2) return;
  const auto roster = cfg.test_functions.size() >= 3 ? cfg.test_functions : default_roster(2);
  const GridPtr rap = MassShellGrid::rapidity(cfg.mass, 2, cfg.grid.theta_max, cfg.locality_n_theta);
  const GridPtr mom = MassShellGrid::momentum(cfg.mass, std::sinh(cfg.grid.theta_max), cfg.locality_n_theta);
  Vec k(1);
  k(0) = 3.0 * mom->step();
  struct VCase {
    std::string name;
    OneParticleUnitary v;
    GridPtr grid;
  };
  std::vector<VCase> vs{{"identity", OneParticleUnitary::identity(), rap},
                        {"boost", OneParticleUnitary::boost(rap->step()), rap},
                        {"momentum_shift", OneParticleUnitary::momentum_shift(k), mom}};
  const double tol = cfg.tolerance("locality", 1e-6);
  Vec z(2);
  z << 1.0, 0.3;
  tables["locality"];
  for (const auto& vc : vs) {
    Task t;
    t.suite = "locality";
    t.case_id = "locality/" + vc.name;
    t.operation = "commutator_residual";
    t.tolerance = tol;
    t.inputs = {{"V", vc.v.to_json()},
                {"grid", vc.grid->descriptor()},
                {"f", test_function_json(roster[0])},
                {"g", test_function_json(roster[1])},
                {"control", test_function_json(roster[2])},
                {"theta", matrix_json(cfg.theta.entries)},
                {"z", vector_json(z)}};
    t.run = [=, &cfg](json& extra, std::optional<bool>& pass) {
      const Vec zero = Vec::Zero(2);
      const auto pos = commutator_residual(roster[0], roster[1], cfg.theta, vc.v, vc.grid, z, zero);
      const auto neg = commutator_residual(roster[0], roster[2], cfg.theta, vc.v, vc.grid, z, zero);
      extra["control"] = neg.relative;
      if (pos.contour_gap) extra["contour_gap"] = *pos.contour_gap;
      pass = pos.relative <= tol && pos.relative <= 1e-4 * neg.relative;
      return pos.relative;
    };
    tasks.push_back(t);
  }
}

void add_scatter(const RunConfig& cfg, std::vector<Task>& tasks) {
  if (cfg.dimension != 2 || cfg.mass <= 0.0) return;
  const GridPtr g = MassShellGrid::rapidity(cfg.mass, 2, cfg.grid.theta_max, cfg.scatter_n_theta);
  for (size_t i = 0; i < cfg.scatter_lambdas.size(); ++i) {
    const double lam = cfg.scatter_lambdas[i];
    Task t;
    t.suite = "scatter";
    t.case_id = "scatter/lambda/" + std::to_string(i);
    t.operation = "s_matrix_phase";
    t.tolerance = cfg.tolerance("scatter", 1e-3);
    t.inputs = {{"lambda", lam}, {"V", cfg.V.to_json()}, {"grid", g->descriptor()}};
    t.run = [=, &cfg](json& extra, std::optional<bool>&) {
      auto nearest = [&](double th) {
        int best = 0;
        for (int j = 0; j < g->n_theta; ++j)
          if (std::abs(g->rapidity(j) - th) < std::abs(g->rapidity(best) - th)) best = j;
        return best;
      };
      const int ip = nearest(-0.5), iq = nearest(0.5);
      const ThetaMatrix th = ThetaMatrix::from_params(2, lam, 0.0);
      const auto r = s_matrix_phase(sharp_packet(g, ip), sharp_packet(g, iq), th, cfg.V);
      const cplx expected = std::exp(cplx(0.0, 2.0 * th.contract(g->nodes[ip], g->nodes[iq])));
      extra["s"] = complex_json(r.s);
      extra["expected"] = complex_json(expected);
      return std::abs(r.s - expected);
    };
    tasks.push_back(t);
  }
}

void add_npoint(const RunConfig& cfg, const GridPtr& g, std::vector<Task>& tasks) {
  for (int i = 0; i < 2; ++i) {
    Task t;
    t.suite = "npoint";
    t.case_id = "npoint/" + std::to_string(i);
    t.operation = "isomorphism_check";
    t.tolerance = cfg.tolerance("npoint", 1e-12);
    t.inputs = {{"seed", cfg.seed}, {"case", t.case_id}, {"V", cfg.V.to_json()}};
    const std::string id = t.case_id;
    t.run = [=, &cfg](json& extra, std::optional<bool>&) {
      auto rng = rng_for(cfg.seed, id);
      std::vector<SmearedFieldDescriptor> fields;
      for (int k = 0; k < 4; ++k) fields.push_back(random_descriptor(g, rng));
      const auto rep = isomorphism_check(fields, cfg.theta, cfg.V);
      extra["n4_lhs"] = complex_json(rep.lhs.back());
      return rep.max_deviation;
    };
    tasks.push_back(t);
  }
}

void add_twist(const RunConfig& cfg, const GridPtr& g, std::vector<Task>& tasks) {
  if (cfg.dimension != 2) return;
  const auto roster = cfg.test_functions.size() >= 2 ? cfg.test_functions : default_roster(2);
  Task t;
  t.suite = "twist";
  t.case_id = "twist/product_equivalence";
  t.operation = "twisted_product_equivalence";
  t.tolerance = cfg.tolerance("twist", 1e-6);
  t.inputs = {{"f1", test_function_json(roster[0])}, {"f2", test_function_json(roster[1])}, {"grid", g->descriptor()}};
  t.run = [=, &cfg](json&, std::optional<bool>&) {
    return twisted_product_equivalence(roster[0], roster[1], cfg.theta, g).relative;
  };
  tasks.push_back(t);
  Task m;
  m.suite = "twist";
  m.case_id = "twist/moyal_plane_wave";
  m.operation = "moyal_star";
  m.tolerance = cfg.tolerance("moyal", 1e-6);
  m.inputs = {{"theta", matrix_json(cfg.theta.entries)}};
  m.run = [=, &cfg](json& extra, std::optional<bool>&) {
    MomentumLattice lat{2, 24, 0.25};
    Vec c = Vec::Zero(2), h = Vec::Constant(2, 10.0), p(2), q(2);
    p << 0.5, 0.25;
    q << -0.25, 0.75;
    const TestFunction f1 = TestFunction::modulated(c, h, p);
    const TestFunction f2 = TestFunction::modulated(c, h, q);
    const CVec out = moyal_star(f1, f2, cfg.theta, lat, 1e-2);
    const int64_t at = lat.flat({static_cast<int>(std::lround((p(0) + q(0)) / lat.spacing)),
                                 static_cast<int>(std::lround((p(1) + q(1)) / lat.spacing))});
    const double expected = -cfg.theta.contract(p, q);
    double diff = std::arg(out(at)) - expected;
    diff = std::remainder(diff, 2.0 * kPi);
    extra["arg"] = std::arg(out(at));
    extra["expected"] = expected;
    return std::abs(diff);
  };
  tasks.push_back(m);
}

}  // namespace

SuiteReport run_suite(const RunConfig& config) {
  config.validate();
  SuiteReport rep;
  nlohmann::json digest_view = config.to_json();
  digest_view.erase("output_dir");
  rep.config_digest = sha256_hex(canonical_dump(digest_view));
  const GridPtr g = config.build_grid();
  std::vector<Task> tasks;
  for (const auto& name : known_suites()) {
    if (std::find(config.suites.begin(), config.suites.end(), name) == config.suites.end()) continue;
    if (name == "covariance") add_covariance(config, g, tasks);
    if (name == "rieffel") add_rieffel(config, g, tasks);
    if (name == "bounds") add_bounds(config, g, tasks);
    if (name == "locality") add_locality(config, tasks, rep.tables);
    if (name == "scatter") add_scatter(config, tasks);
    if (name == "npoint") add_npoint(config, g, tasks);
    if (name == "twist") add_twist(config, g, tasks);
  }
  std::vector<CaseRecord> out(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      CaseRecord c;
      c.case_id = t.case_id;
      c.suite = t.suite;
      c.operation = t.operation;
      c.inputs = t.inputs;
      c.inputs_digest = sha256_hex(canonical_dump(t.inputs));
      c.tolerance = t.tolerance;
      c.extra = json::object();
      try {
        std::optional<bool> verdict;
        c.measured = t.run(c.extra, verdict);
        c.pass = verdict ? *verdict : (std::isfinite(c.measured) && c.measured <= c.tolerance);
      } catch (const std::exception& e) {
        c.pass = false;
        c.measured = std::nan("");
        c.error = e.what();
      }
      out[i] = std::move(c);
    }
  };
  const int nt = std::max(1, std::min<int>(thread_count(), static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < nt; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  rep.cases = std::move(out);
  for (const auto& c : rep.cases) {
    if (c.suite == "locality")
      rep.tables["locality"].push_back({c.case_id, fmt(config.theta.lambda), fmt(config.theta.eta),
                                        c.inputs.at("V").dump(), fmt(c.measured),
                                        c.extra.contains("control") ? fmt(c.extra["control"].get<double>()) : "",
                                        c.pass ? "true" : "false"});
    if (c.suite == "scatter" && c.extra.contains("s"))
      rep.tables["scatter"].push_back({c.case_id, fmt(c.inputs.at("lambda").get<double>()),
                                       fmt(c.extra["s"][0].get<double>()), fmt(c.extra["s"][1].get<double>()),
                                       fmt(c.extra["expected"][0].get<double>()),
                                       fmt(c.extra["expected"][1].get<double>()), fmt(c.measured),
                                       c.pass ? "true" : "false"});
  }
  return rep;
}

std::vector<std::string> table_header(const std::string& table) {
  if (table == "locality") return {"case_id", "lambda", "eta", "V", "residual", "control_residual", "pass"};
  if (table == "scatter") return {"case_id", "lambda", "s_re", "s_im", "expected_re", "expected_im", "deviation", "pass"};
  return {"case_id", "suite", "operation", "inputs_digest", "measured", "tolerance", "pass", "error"};
}

std::string cases_csv(const SuiteReport& report) {
  std::string s = csv_row(table_header("cases"));
  for (const auto& c : report.cases)
    s += csv_row({c.case_id, c.suite, c.operation, c.inputs_digest, fmt(c.measured), fmt(c.tolerance),
                  c.pass ? "true" : "false", c.error});
  return s;
}

std::vector<std::string> emit_tables(const SuiteReport& report, const std::string& dir, TableFormat format) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  auto write = [&](const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path);
    os << content;
    if (!os) throw Error("write failed for " + path);
    paths.push_back(path);
  };
  if (format == TableFormat::Json) {
    write("report.json", canonical_dump(report.to_json()) + "\n");
    return paths;
  }
  write("cases.csv", cases_csv(report));
  for (const auto& [name, rows] : report.tables) {
    std::string s = csv_row(table_header(name));
    for (const auto& r : rows) s += csv_row(r);
    write(name + ".csv", s);
  }
  return paths;
}

}  // namespace warpfock
