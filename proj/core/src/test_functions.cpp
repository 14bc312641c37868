#include "warpfock/test_functions.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "warpfock/quadrature.hpp"

namespace warpfock {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Midpoints of [-a, a] split into n cells.
double midpoint(double a, int n, int j) { return -a + (j + 0.5) * (2.0 * a / n); }

}  // namespace

GridPtr MassShellGrid::rapidity(double mass, int d, double theta_max, int n_theta, double perp_max, int n_perp) {
  if (d < 2 || d > 4) throw ConfigError("rapidity grid: d must be 2, 3 or 4");
  if (n_theta < 1 || theta_max <= 0.0) throw ConfigError("rapidity grid: need n_theta >= 1 and theta_max > 0");
  if (mass < 0.0) throw ConfigError("rapidity grid: mass must be >= 0");
  if (theta_max > 700.0) throw RangeError("rapidity grid: cosh(theta_max) overflows");
  if (d == 2) n_perp = 1;
  if (d > 2 && (n_perp < 1 || perp_max <= 0.0)) throw ConfigError("rapidity grid: invalid perpendicular grid");
  if (d == 2 && mass == 0.0) throw ConfigError("rapidity grid: massless d = 2 requires the log-momentum mode");
  auto g = std::make_shared<MassShellGrid>();
  g->mass = mass;
  g->d = d;
  g->mode = GridMode::Rapidity;
  g->theta_max = theta_max;
  g->n_theta = n_theta;
  g->perp_max = d > 2 ? perp_max : 0.0;
  g->n_perp = n_perp;
  const int np = g->perp_count();
  const double h = 2.0 * theta_max / n_theta;
  const double dperp = d > 2 ? 2.0 * perp_max / n_perp : 1.0;
  const double w = h * std::pow(dperp, d - 2);
  g->nodes.reserve(static_cast<size_t>(np) * n_theta);
  for (int k = 0; k < np; ++k) {
    for (int it = 0; it < n_theta; ++it) {
      Vec p(d);
      double perp2 = 0.0;
      int rem = k;
      for (int a = 2; a < d; ++a) {
        const int j = rem % n_perp;
        rem /= n_perp;
        p(a) = midpoint(perp_max, n_perp, j);
        perp2 += p(a) * p(a);
      }
      const double mt = std::sqrt(mass * mass + perp2);
      if (mt == 0.0) throw ConfigError("rapidity grid: vanishing transverse mass");
      const double th = midpoint(theta_max, n_theta, it);
      p(0) = mt * std::cosh(th);
      p(1) = mt * std::sinh(th);
      g->nodes.push_back(p);
    }
  }
  g->weights = Vec::Constant(g->size(), w);
  return g;
}

GridPtr MassShellGrid::momentum(double mass, double p_max, int n_p) {
  if (mass < 0.0 || p_max <= 0.0 || n_p < 1) throw ConfigError("momentum grid: invalid parameters");
  auto g = std::make_shared<MassShellGrid>();
  g->mass = mass;
  g->d = 2;
  g->mode = GridMode::Momentum;
  g->p_max = p_max;
  g->n_p = n_p;
  g->n_theta = n_p;
  g->n_perp = 1;
  const double dp = 2.0 * p_max / n_p;
  g->weights.resize(n_p);
  for (int j = 0; j < n_p; ++j) {
    Vec p(2);
    p(1) = midpoint(p_max, n_p, j);
    p(0) = std::sqrt(mass * mass + p(1) * p(1));
    if (p(0) == 0.0) throw ConfigError("momentum grid: zero-energy node");
    g->nodes.push_back(p);
    g->weights(j) = dp / (2.0 * p(0));
  }
  return g;
}

GridPtr MassShellGrid::log_momentum(double log_min, double log_max, int n_log) {
  if (!(log_max > log_min) || n_log < 1) throw ConfigError("log-momentum grid: invalid parameters");
  auto g = std::make_shared<MassShellGrid>();
  g->mass = 0.0;
  g->d = 2;
  g->mode = GridMode::LogMomentum;
  g->log_min = log_min;
  g->log_max = log_max;
  g->n_log = n_log;
  g->n_theta = 2 * n_log;
  g->n_perp = 1;
  const double du = (log_max - log_min) / n_log;
  g->weights = Vec::Constant(2 * n_log, du / 2.0);
  for (int i = 0; i < 2 * n_log; ++i) {
    const bool neg = i < n_log;
    const int k = neg ? n_log - 1 - i : i - n_log;
    const double r = std::exp(log_min + (k + 0.5) * du);
    Vec p(2);
    p(0) = r;
    p(1) = neg ? -r : r;
    g->nodes.push_back(p);
  }
  return g;
}

double MassShellGrid::step() const {
  switch (mode) {
    case GridMode::Rapidity: return 2.0 * theta_max / n_theta;
    case GridMode::Momentum: return 2.0 * p_max / n_p;
    case GridMode::LogMomentum: return (log_max - log_min) / n_log;
  }
  return 0.0;
}

int MassShellGrid::perp_count() const {
  int n = 1;
  for (int a = 2; a < d; ++a) n *= n_perp;
  return n;
}

double MassShellGrid::rapidity(int i) const {
  if (mode != GridMode::Rapidity) return std::asinh(nodes[i](1) / std::sqrt(std::max(nodes[i](0) * nodes[i](0) - nodes[i](1) * nodes[i](1), 0.0)));
  return midpoint(theta_max, n_theta, theta_index(i));
}

Vec MassShellGrid::perp(int i) const { return nodes[i].tail(d - 2); }

int MassShellGrid::perp_reflect(int i) const {
  if (mode != GridMode::Rapidity || d == 2) return i;
  int k = perp_flat(i);
  int out = 0;
  int mult = 1;
  for (int a = 2; a < d; ++a) {
    const int j = k % n_perp;
    k /= n_perp;
    out += (n_perp - 1 - j) * mult;
    mult *= n_perp;
  }
  return out * n_theta + theta_index(i);
}

std::string MassShellGrid::descriptor() const {
  std::ostringstream os;
  os << "mass=" << fmt17(mass) << ";d=" << d << ";mode=";
  switch (mode) {
    case GridMode::Rapidity:
      os << "rapidity;theta_max=" << fmt17(theta_max) << ";n_theta=" << n_theta << ";perp_max=" << fmt17(perp_max)
         << ";n_perp=" << n_perp;
      break;
    case GridMode::Momentum: os << "momentum;p_max=" << fmt17(p_max) << ";n_p=" << n_p; break;
    case GridMode::LogMomentum:
      os << "log;log_min=" << fmt17(log_min) << ";log_max=" << fmt17(log_max) << ";n_log=" << n_log;
      break;
  }
  return os.str();
}

OnShellFunction OnShellFunction::zeros(GridPtr g, int sign) {
  OnShellFunction f;
  f.values = CVec::Zero(g->size());
  f.grid = std::move(g);
  f.sign = sign;
  return f;
}

cplx OnShellFunction::inner(const OnShellFunction& other) const {
  cplx s = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) s += grid->weights(i) * std::conj(values(i)) * other.values(i);
  return s;
}

double OnShellFunction::norm() const { return std::sqrt(std::max(inner(*this).real(), 0.0)); }

OnShellFunction OnShellFunction::conj() const {
  OnShellFunction f = *this;
  f.values = values.conjugate();
  return f;
}

OnShellFunction OnShellFunction::operator+(const OnShellFunction& o) const {
  if (!grid->same_as(*o.grid)) throw ConfigError("on-shell functions live on different grids");
  OnShellFunction f = *this;
  f.values += o.values;
  return f;
}

OnShellFunction OnShellFunction::operator*(cplx s) const {
  OnShellFunction f = *this;
  f.values *= s;
  return f;
}

double bump_profile(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  const double u2 = u * u;
  return std::exp(-u2 / (1.0 - u2));
}

TestFunction TestFunction::bump(const Vec& center, const Vec& half_widths, cplx amplitude) {
  return modulated(center, half_widths, Vec::Zero(center.size()), amplitude);
}

TestFunction TestFunction::modulated(const Vec& center, const Vec& half_widths, const Vec& k_mod, cplx amplitude) {
  if (center.size() != half_widths.size() || center.size() != k_mod.size())
    throw ConfigError("test function: component counts differ");
  if ((half_widths.array() <= 0.0).any()) throw ConfigError("test function: half widths must be positive");
  return TestFunction{center, half_widths, k_mod, amplitude};
}

cplx TestFunction::eval(const Vec& x) const {
  double prof = 1.0;
  for (int mu = 0; mu < dim(); ++mu) prof *= bump_profile((x(mu) - center(mu)) / half_widths(mu));
  if (prof == 0.0) return 0.0;
  return amplitude * prof * std::exp(cplx(0.0, -minkowski_dot(k_mod, x)));
}

TestFunction TestFunction::translated(const Vec& a) const {
  TestFunction f = *this;
  f.center += a;
  // keeps f_a(x) = f(x - a): the modulation phase picks up exp(i k.a)
  f.amplitude *= std::exp(cplx(0.0, minkowski_dot(k_mod, a)));
  return f;
}

TestFunction TestFunction::conj() const {
  TestFunction f = *this;
  f.k_mod = -k_mod;
  f.amplitude = std::conj(amplitude);
  return f;
}

std::vector<Vec> TestFunction::support_corners() const {
  const int d = dim();
  std::vector<Vec> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vec c = center;
    for (int mu = 0; mu < d; ++mu) c(mu) += ((mask >> mu) & 1) ? half_widths(mu) : -half_widths(mu);
    out.push_back(c);
  }
  return out;
}

bool TestFunction::support_inside(const Wedge& w) const {
  for (const auto& c : support_corners())
    if (!w.contains(c)) return false;
  return true;
}

namespace {

// Weighted profile sums at a given order: sum_j w_j b(u_j) exp(i z u_j).
cplx profile_transform(const QuadratureRule& r, cplx z) {
  cplx s = 0.0;
  for (size_t j = 0; j < r.nodes.size(); ++j) {
    const double bw = r.weights[j] * bump_profile(r.nodes[j]);
    if (bw == 0.0) continue;
    s += bw * std::exp(cplx(0.0, 1.0) * z * r.nodes[j]);
  }
  return s;
}

cplx transform_at_order(const TestFunction& f, const CVec& kappa, const QuadratureRule& r) {
  cplx acc = f.amplitude;
  for (int mu = 0; mu < f.dim(); ++mu) {
    const double g = mu == 0 ? 1.0 : -1.0;
    const cplx a = g * (kappa(mu) - f.k_mod(mu));
    acc *= f.half_widths(mu) * std::exp(cplx(0.0, 1.0) * a * f.center(mu)) * profile_transform(r, a * f.half_widths(mu));
  }
  return acc;
}

constexpr int kMinOrder = 32;
constexpr int kMaxOrder = 8192;
constexpr double kQuadTol = 1e-10;

CVec adaptive_transform(const TestFunction& f, const std::vector<CVec>& kappas, QuadratureReport* report) {
  const size_t n = kappas.size();
  CVec prev(n), cur(n);
  // ||f||_1 bounds the transform on real momenta
  double l1 = std::abs(f.amplitude);
  for (int mu = 0; mu < f.dim(); ++mu) l1 *= f.half_widths(mu) * std::abs(profile_transform(gauss_legendre(kMinOrder), 0.0));
  for (size_t i = 0; i < n; ++i) prev(i) = transform_at_order(f, kappas[i], gauss_legendre(kMinOrder));
  for (int order = 2 * kMinOrder; order <= kMaxOrder; order *= 2) {
    const QuadratureRule& r = gauss_legendre(order);
    for (size_t i = 0; i < n; ++i) cur(i) = transform_at_order(f, kappas[i], r);
    const double scale = n ? std::max(cur.cwiseAbs().maxCoeff(), l1) : 0.0;
    const double err = n ? (cur - prev).cwiseAbs().maxCoeff() : 0.0;
    if (!cur.allFinite()) throw RangeError("transform: non-finite value at complexified momentum");
    if (err <= kQuadTol * scale || scale == 0.0) {
      if (report) {
        report->order = order;
        report->error_estimate = scale > 0.0 ? err / scale : 0.0;
      }
      return cur;
    }
    prev = cur;
  }
  throw NumericalError("transform: Gauss-Legendre quadrature did not reach relative error 1e-10 at order 8192");
}

}  // namespace

cplx transform_offshell(const TestFunction& f, const CVec& kappa, QuadratureReport* report) {
  return adaptive_transform(f, {kappa}, report)(0);
}

OnShellFunction sample_onshell(const TestFunction& f, const GridPtr& grid, int sign, QuadratureReport* report) {
  if (f.dim() != grid->d) throw ConfigError("sample_onshell: dimension mismatch between test function and grid");
  std::vector<CVec> kappas;
  kappas.reserve(grid->size());
  for (const auto& p : grid->nodes) kappas.push_back((static_cast<double>(sign) * p).cast<cplx>());
  OnShellFunction out;
  out.grid = grid;
  out.sign = sign;
  out.values = adaptive_transform(f, kappas, report);
  return out;
}

CVec sample_complex_rapidity(const TestFunction& f, const GridPtr& grid, int sign, double s) {
  if (grid->mode != GridMode::Rapidity) throw ConfigError("complex rapidity requires the rapidity grid mode");
  if (grid->theta_max > 700.0) throw RangeError("complex rapidity: cosh overflow");
  std::vector<CVec> kappas;
  kappas.reserve(grid->size());
  for (int i = 0; i < grid->size(); ++i) {
    const Vec& p = grid->nodes[i];
    double perp2 = 0.0;
    for (int a = 2; a < grid->d; ++a) perp2 += p(a) * p(a);
    const double mt = std::sqrt(grid->mass * grid->mass + perp2);
    const cplx z(grid->rapidity(i), s);
    CVec k(grid->d);
    k(0) = mt * std::cosh(z);
    k(1) = mt * std::sinh(z);
    for (int a = 2; a < grid->d; ++a) k(a) = p(a);
    kappas.push_back(static_cast<double>(sign) * k);
  }
  return adaptive_transform(f, kappas, nullptr);
}

OnShellFunction continue_to_shifted_contour(const TestFunction& f, const GridPtr& grid, int sign) {
  OnShellFunction out;
  out.grid = grid;
  out.sign = sign;
  out.values = sample_complex_rapidity(f, grid, sign, kPi);
  return out;
}

std::vector<Vec> velocity_support(const OnShellFunction& ftilde, double threshold) {
  if (!(threshold > 0.0)) throw ConfigError("velocity_support: threshold must be positive");
  const double mx = ftilde.values.size() ? ftilde.values.cwiseAbs().maxCoeff() : 0.0;
  if (mx == 0.0) throw EmptySupportError("velocity_support: function vanishes on the grid");
  std::vector<Vec> out;
  for (int i = 0; i < ftilde.grid->size(); ++i) {
    if (std::abs(ftilde.values(i)) < threshold * mx) continue;
    const Vec& p = ftilde.grid->nodes[i];
    Vec v(p.size());
    v(0) = 1.0;
    v.tail(p.size() - 1) = p.tail(p.size() - 1) / p(0);
    out.push_back(v);
  }
  return out;
}

std::vector<Vec> velocity_support(const TestFunction& f, const GridPtr& grid, double threshold) {
  return velocity_support(sample_onshell(f, grid, +1), threshold);
}

bool is_precursor(const std::vector<Vec>& xi_a, const std::vector<Vec>& xi_b, const Wedge& w) {
  if (xi_a.empty() || xi_b.empty()) throw PreconditionError("is_precursor: velocity sets must be non-empty");
  for (const auto& va : xi_a)
    for (const auto& vb : xi_b)
      if (!w.contains(va - vb)) return false;
  return true;
}

}  // namespace warpfock
