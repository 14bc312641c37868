#include "warpfock/geometry.hpp"

#include <cmath>

namespace warpfock {

Mat metric(int d) {
  Mat g = -Mat::Identity(d, d);
  g(0, 0) = 1.0;
  return g;
}

double minkowski_dot(const Vec& x, const Vec& y) {
  double s = x(0) * y(0);
  for (Eigen::Index i = 1; i < x.size(); ++i) s -= x(i) * y(i);
  return s;
}

cplx minkowski_dot(const CVec& x, const CVec& y) {
  cplx s = x(0) * y(0);
  for (Eigen::Index i = 1; i < x.size(); ++i) s -= x(i) * y(i);
  return s;
}

LorentzTransform LorentzTransform::from_matrix(const Mat& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 2)
    throw ConfigError("Lorentz matrix must be square with d >= 2");
  const int d = static_cast<int>(m.rows());
  const Mat g = metric(d);
  const double dev = (m.transpose() * g * m - g).cwiseAbs().maxCoeff();
  if (dev > tol * std::max(1.0, m.cwiseAbs().maxCoeff() * m.cwiseAbs().maxCoeff()))
    throw ConfigError("Lorentz matrix violates L^T g L = g (deviation " + std::to_string(dev) + ")");
  LorentzTransform l;
  l.matrix = m;
  l.orthochronous = m(0, 0) >= 1.0 - tol;
  l.proper = std::abs(m.determinant() - 1.0) <= 1e-12;
  return l;
}

LorentzTransform LorentzTransform::identity(int d) {
  return LorentzTransform{Mat::Identity(d, d), true, true};
}

LorentzTransform LorentzTransform::boost01(int d, double chi) {
  Mat m = Mat::Identity(d, d);
  m(0, 0) = std::cosh(chi);
  m(0, 1) = std::sinh(chi);
  m(1, 0) = std::sinh(chi);
  m(1, 1) = std::cosh(chi);
  return LorentzTransform{m, true, true};
}

LorentzTransform LorentzTransform::rotation23(int d, double angle) {
  Mat m = Mat::Identity(d, d);
  if (d >= 4) {
    m(2, 2) = std::cos(angle);
    m(2, 3) = -std::sin(angle);
    m(3, 2) = std::sin(angle);
    m(3, 3) = std::cos(angle);
  }
  return LorentzTransform{m, true, true};
}

LorentzTransform LorentzTransform::stabilizer(int d, double chi, double angle) {
  return boost01(d, chi).compose(rotation23(d, angle));
}

LorentzTransform LorentzTransform::reflection(int d) {
  return LorentzTransform{-Mat::Identity(d, d), false, d % 2 == 0};
}

LorentzTransform LorentzTransform::compose(const LorentzTransform& rhs) const {
  LorentzTransform out;
  out.matrix = matrix * rhs.matrix;
  out.orthochronous = orthochronous == rhs.orthochronous;
  out.proper = proper == rhs.proper;
  return out;
}

LorentzTransform LorentzTransform::inverse() const {
  const Mat g = metric(dim());
  return LorentzTransform{g * matrix.transpose() * g, orthochronous, proper};
}

PoincareTransform PoincareTransform::identity(int d) {
  return PoincareTransform{LorentzTransform::identity(d), Vec::Zero(d)};
}

Vec PoincareTransform::pullback(const Vec& x) const {
  return lorentz.inverse().matrix * (x - translation);
}

Wedge Wedge::reference(int d) { return Wedge{PoincareTransform::identity(d)}; }

Wedge Wedge::opposite(int d) {
  return Wedge{PoincareTransform{LorentzTransform::reflection(d), Vec::Zero(d)}};
}

bool Wedge::contains(const Vec& x) const {
  if (x.size() != dim()) throw ConfigError("vector dimension does not match wedge dimension");
  const Vec y = transform.pullback(x);
  return y(1) > std::abs(y(0));
}

ThetaMatrix ThetaMatrix::from_params(int d, double lambda, double eta) {
  if (d < 2) throw ConfigError("dimension must be >= 2");
  ThetaMatrix t;
  t.entries = Mat::Zero(d, d);
  t.entries(0, 1) = -lambda;
  t.entries(1, 0) = lambda;
  if (d >= 4) {
    t.entries(2, 3) = -eta;
    t.entries(3, 2) = eta;
  }
  t.lambda = lambda;
  t.eta = d >= 4 ? eta : 0.0;
  return t;
}

ThetaMatrix ThetaMatrix::from_matrix(const Mat& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 2) throw ConfigError("theta must be a square d x d matrix");
  const double dev = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (dev > tol)
    throw ConfigError("theta violates invariant: antisymmetry theta^{mu nu} = -theta^{nu mu} (deviation " +
                      std::to_string(dev) + ")");
  ThetaMatrix t;
  t.entries = m;
  t.lambda = -m(0, 1);
  t.eta = m.rows() >= 4 ? -m(2, 3) : 0.0;
  return t;
}

double ThetaMatrix::contract(const Vec& p, const Vec& q) const {
  const int d = dim();
  double s = 0.0;
  for (int mu = 0; mu < d; ++mu) {
    const double pm = mu == 0 ? p(0) : -p(mu);
    for (int nu = 0; nu < d; ++nu) {
      const double e = entries(mu, nu);
      if (e == 0.0) continue;
      s += pm * e * (nu == 0 ? q(0) : -q(nu));
    }
  }
  return s;
}

cplx ThetaMatrix::contract(const CVec& p, const CVec& q) const {
  const int d = dim();
  cplx s = 0.0;
  for (int mu = 0; mu < d; ++mu) {
    const cplx pm = mu == 0 ? p(0) : -p(mu);
    for (int nu = 0; nu < d; ++nu) {
      const double e = entries(mu, nu);
      if (e == 0.0) continue;
      s += pm * e * (nu == 0 ? q(0) : -q(nu));
    }
  }
  return s;
}

Vec ThetaMatrix::act(const Vec& q) const { return entries * (metric(dim()) * q); }

ThetaMatrix ThetaMatrix::scaled(double s) const {
  ThetaMatrix t = *this;
  t.entries *= s;
  t.lambda *= s;
  t.eta *= s;
  return t;
}

bool ThetaMatrix::is_antisymmetric(double tol) const {
  return (entries + entries.transpose()).cwiseAbs().maxCoeff() <= tol;
}

ThetaMatrix gamma_lambda(const LorentzTransform& l, const ThetaMatrix& theta) {
  if (l.dim() != theta.dim()) throw ConfigError("gamma_lambda: dimension mismatch");
  Mat m = l.matrix * theta.entries * l.matrix.transpose();
  if (!l.orthochronous) m = -m;
  ThetaMatrix out;
  out.entries = m;
  out.lambda = -m(0, 1);
  out.eta = m.rows() >= 4 ? -m(2, 3) : 0.0;
  return out;
}

bool is_admissible(const ThetaMatrix& theta, int d, double tol) {
  if (d < 2 || d > 4) throw ConfigError("is_admissible: supported dimensions are 2, 3, 4");
  if (theta.dim() != d) throw ConfigError("is_admissible: dimension mismatch");
  if (!theta.is_antisymmetric(tol)) return false;
  const Mat& e = theta.entries;
  const double lambda = -e(0, 1);
  if (lambda < -tol) return false;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const bool lam_slot = (i == 0 && j == 1) || (i == 1 && j == 0);
      const bool eta_slot = d == 4 && ((i == 2 && j == 3) || (i == 3 && j == 2));
      if (!lam_slot && !eta_slot && std::abs(e(i, j)) > tol) return false;
    }
  }
  return true;
}

ThetaMatrix theta_of_wedge(const Wedge& w, double lambda, double eta) {
  const int d = w.dim();
  const ThetaMatrix ref = ThetaMatrix::from_params(d, lambda, eta);
  if (!is_admissible(ref, d)) throw AdmissibilityError("theta_of_wedge: (lambda, eta) not admissible, lambda must be >= 0");
  return gamma_lambda(w.transform.lorentz, ref);
}

bool wedge_contains(const Wedge& w, const Vec& x) { return w.contains(x); }

}  // namespace warpfock
