#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "warpfock/geometry.hpp"

namespace warpfock {

enum class GridMode { Rapidity, Momentum, LogMomentum };

struct MassShellGrid;
using GridPtr = std::shared_ptr<const MassShellGrid>;

struct MassShellGrid {
  double mass = 1.0;
  int d = 2;
  GridMode mode = GridMode::Rapidity;

  double theta_max = 4.0;
  int n_theta = 64;
  double perp_max = 0.0;
  int n_perp = 1;

  double p_max = 0.0;
  int n_p = 0;

  double log_min = 0.0;
  double log_max = 0.0;
  int n_log = 0;

  std::vector<Vec> nodes;
  Vec weights;

  static GridPtr rapidity(double mass, int d, double theta_max, int n_theta, double perp_max = 1.0, int n_perp = 1);
  static GridPtr momentum(double mass, double p_max, int n_p);
  // Massless, d = 2: p^1 = +-exp(u), u uniform in [log_min, log_max].
  static GridPtr log_momentum(double log_min, double log_max, int n_log);

  int size() const { return static_cast<int>(nodes.size()); }
  // Rapidity step, momentum step, or log step depending on the mode.
  double step() const;
  int perp_count() const;
  int theta_index(int i) const { return i % n_theta; }
  int perp_flat(int i) const { return i / n_theta; }
  double rapidity(int i) const;
  Vec perp(int i) const;
  // Node carrying the same rapidity with p_perp -> -p_perp.
  int perp_reflect(int i) const;
  double energy(int i) const { return nodes[i](0); }
  std::string descriptor() const;
  bool same_as(const MassShellGrid& other) const { return descriptor() == other.descriptor(); }
};

struct OnShellFunction {
  GridPtr grid;
  CVec values;
  int sign = +1;

  static OnShellFunction zeros(GridPtr g, int sign = +1);
  double norm() const;
  cplx inner(const OnShellFunction& other) const;  // conjugate-linear in *this
  OnShellFunction conj() const;
  OnShellFunction operator+(const OnShellFunction& o) const;
  OnShellFunction operator*(cplx s) const;
};

// amplitude * prod_mu b((x^mu - c^mu)/h^mu) * exp(-i k_mod . x), b(u) = exp(-u^2/(1-u^2)).
struct TestFunction {
  Vec center;
  Vec half_widths;
  Vec k_mod;
  cplx amplitude{1.0, 0.0};

  static TestFunction bump(const Vec& center, const Vec& half_widths, cplx amplitude = 1.0);
  static TestFunction modulated(const Vec& center, const Vec& half_widths, const Vec& k_mod, cplx amplitude = 1.0);
  int dim() const { return static_cast<int>(center.size()); }
  cplx eval(const Vec& x) const;
  TestFunction translated(const Vec& a) const;
  TestFunction conj() const;
  // Corners of the support box.
  std::vector<Vec> support_corners() const;
  bool support_inside(const Wedge& w) const;
};

double bump_profile(double u);

struct QuadratureReport {
  int order = 0;
  double error_estimate = 0.0;
};

OnShellFunction sample_onshell(const TestFunction& f, const GridPtr& grid, int sign,
                               QuadratureReport* report = nullptr);
// f^sign at complexified rapidity theta + i s (p_perp unchanged).
CVec sample_complex_rapidity(const TestFunction& f, const GridPtr& grid, int sign, double s);
OnShellFunction continue_to_shifted_contour(const TestFunction& f, const GridPtr& grid, int sign);

// Off-shell transform integral of f(x) exp(i kappa . x) (Minkowski product), complex kappa allowed.
cplx transform_offshell(const TestFunction& f, const CVec& kappa, QuadratureReport* report = nullptr);

std::vector<Vec> velocity_support(const OnShellFunction& ftilde, double threshold = 1e-3);
std::vector<Vec> velocity_support(const TestFunction& f, const GridPtr& grid, double threshold = 1e-3);
bool is_precursor(const std::vector<Vec>& xi_a, const std::vector<Vec>& xi_b, const Wedge& w);

}  // namespace warpfock
