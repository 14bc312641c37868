#pragma once

#include <vector>

#include "warpfock/common.hpp"

namespace warpfock {

// Contravariant components x^mu, metric diag(+,-,...,-).
using MinkowskiVector = Vec;

Mat metric(int d);
double minkowski_dot(const Vec& x, const Vec& y);
cplx minkowski_dot(const CVec& x, const CVec& y);

struct LorentzTransform {
  Mat matrix;
  bool orthochronous = true;
  bool proper = true;

  int dim() const { return static_cast<int>(matrix.rows()); }

  // Validates the metric-preservation invariant and derives the flags.
  static LorentzTransform from_matrix(const Mat& m, double tol = 1e-12);
  static LorentzTransform identity(int d);
  // Boost along x^1 with rapidity chi.
  static LorentzTransform boost01(int d, double chi);
  // Rotation in the (2,3) plane (d = 4); identity for d < 4.
  static LorentzTransform rotation23(int d, double angle);
  // Boost in the 0-1 plane combined with a rotation of the perpendicular plane.
  static LorentzTransform stabilizer(int d, double chi, double angle);
  // x -> -x.
  static LorentzTransform reflection(int d);

  LorentzTransform compose(const LorentzTransform& rhs) const;
  LorentzTransform inverse() const;
  Vec apply(const Vec& x) const { return matrix * x; }
};

struct PoincareTransform {
  LorentzTransform lorentz;
  Vec translation;

  static PoincareTransform identity(int d);
  Vec apply(const Vec& x) const { return lorentz.matrix * x + translation; }
  Vec pullback(const Vec& x) const;
};

struct Wedge {
  PoincareTransform transform;

  static Wedge reference(int d);
  static Wedge opposite(int d);
  int dim() const { return transform.lorentz.dim(); }
  bool contains(const Vec& x) const;
};

struct ThetaMatrix {
  Mat entries;
  double lambda = 0.0;
  double eta = 0.0;

  int dim() const { return static_cast<int>(entries.rows()); }

  // Mixed-index block form raised with the metric:
  // theta^{01} = -lambda, theta^{23} = -eta.
  static ThetaMatrix from_params(int d, double lambda, double eta = 0.0);
  // Throws ConfigError naming the antisymmetry invariant on failure.
  static ThetaMatrix from_matrix(const Mat& m, double tol = 1e-14);
  static ThetaMatrix zero(int d) { return from_params(d, 0.0, 0.0); }

  // p theta q = sum p_mu theta^{mu nu} q_nu with lowered p, q.
  double contract(const Vec& p, const Vec& q) const;
  cplx contract(const CVec& p, const CVec& q) const;
  // Vector (theta q)^mu = theta^{mu nu} q_nu.
  Vec act(const Vec& q) const;
  ThetaMatrix scaled(double s) const;
  ThetaMatrix negated() const { return scaled(-1.0); }
  bool is_antisymmetric(double tol = 1e-14) const;
};

ThetaMatrix gamma_lambda(const LorentzTransform& l, const ThetaMatrix& theta);
bool is_admissible(const ThetaMatrix& theta, int d, double tol = 1e-14);
ThetaMatrix theta_of_wedge(const Wedge& w, double lambda, double eta);
bool wedge_contains(const Wedge& w, const Vec& x);

}  // namespace warpfock
