#include "warpfock/nc_spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace warpfock {

WeylWord WeylWord::generator(const Vec& p) {
  WeylWord w;
  w.total = p;
  w.history = {p};
  return w;
}

WeylWord weyl_multiply(const WeylWord& a, const WeylWord& b, const ThetaMatrix& theta) {
  WeylWord w;
  w.total = a.total + b.total;
  w.phase = a.phase * b.phase * std::exp(cplx(0.0, theta.contract(a.total, b.total)));
  w.history = a.history;
  w.history.insert(w.history.end(), b.history.begin(), b.history.end());
  return w;
}

namespace {

ThetaMatrix from_entries(Mat m) {
  m = 0.5 * (m - m.transpose());
  return ThetaMatrix::from_matrix(m);
}

}  // namespace

CoordinateCommutator coordinate_commutator(const OneParticleUnitary& V, const ThetaMatrix& theta) {
  CoordinateCommutator c;
  const int d = theta.dim();
  if (V.kind == UnitaryKind::Dilation) {
    c.supported = true;
    c.theta = theta.scaled(std::exp(-2.0 * V.b));
    return c;
  }
  if (V.kind == UnitaryKind::Identity || V.kind == UnitaryKind::BoostStabilizer ||
      V.kind == UnitaryKind::Composition) {
    auto l = V.lorentz(d);
    if (l) {
      c.supported = true;
      c.theta = V.kind == UnitaryKind::Identity ? theta : from_entries(l->matrix.transpose() * theta.entries * l->matrix);
      return c;
    }
  }
  c.reason = "no cataloged closed form for the coordinate commutator of " + V.describe();
  return c;
}

int64_t MomentumLattice::size() const {
  int64_t s = 1;
  for (int k = 0; k < d; ++k) s *= side();
  return s;
}

Vec MomentumLattice::point(int64_t flat) const {
  Vec k(d);
  for (int mu = d - 1; mu >= 0; --mu) {
    k(mu) = spacing * static_cast<double>(flat % side() - half);
    flat /= side();
  }
  return k;
}

int64_t MomentumLattice::flat(const std::vector<int>& idx) const {
  int64_t f = 0;
  for (int mu = 0; mu < d; ++mu) {
    if (idx[mu] < -half || idx[mu] > half) return -1;
    f = f * side() + (idx[mu] + half);
  }
  return f;
}

CVec lattice_transform(const TestFunction& f, const MomentumLattice& lat, double alias_tol) {
  if (f.dim() != lat.d) throw ConfigError("lattice_transform: dimension mismatch");
  CVec out(lat.size());
  double peak = 0.0, edge = 0.0;
  for (int64_t i = 0; i < lat.size(); ++i) {
    out(i) = transform_offshell(f, lat.point(i).cast<cplx>());
    peak = std::max(peak, std::abs(out(i)));
    int64_t r = i;
    bool on_edge = false;
    for (int mu = 0; mu < lat.d; ++mu) {
      const int64_t c = r % lat.side();
      r /= lat.side();
      on_edge = on_edge || c == 0 || c == lat.side() - 1;
    }
    if (on_edge) edge = std::max(edge, std::abs(out(i)));
  }
  if (edge > alias_tol * peak)
    throw RangeError("moyal lattice: transform does not decay inside the lattice band (edge/peak = " +
                     std::to_string(edge / std::max(peak, 1e-300)) + ")");
  return out;
}

cplx twist_phase(const Vec& q, const Vec& k, const ThetaMatrix& theta) {
  return std::exp(cplx(0.0, -theta.contract(q, k)));
}

CVec twisted_convolution(const CVec& a, const CVec& b, const ThetaMatrix& theta, const MomentumLattice& lat) {
  if (a.size() != lat.size() || b.size() != lat.size()) throw ConfigError("twisted_convolution: size mismatch");
  const int d = lat.d;
  const double measure = std::pow(lat.spacing, d) * std::pow(2.0 * kPi, -d);
  CVec out = CVec::Zero(lat.size());
  std::vector<int> ik(d), iq(d), idiff(d);
  auto coords = [&](int64_t flat, std::vector<int>& c) {
    for (int mu = d - 1; mu >= 0; --mu) {
      c[mu] = static_cast<int>(flat % lat.side()) - lat.half;
      flat /= lat.side();
    }
  };
  for (int64_t K = 0; K < lat.size(); ++K) {
    coords(K, ik);
    cplx acc = 0.0;
    for (int64_t Q = 0; Q < lat.size(); ++Q) {
      if (a(Q) == 0.0) continue;
      coords(Q, iq);
      for (int mu = 0; mu < d; ++mu) idiff[mu] = ik[mu] - iq[mu];
      const int64_t D = lat.flat(idiff);
      if (D < 0 || b(D) == 0.0) continue;
      acc += a(Q) * b(D) * twist_phase(lat.point(Q), lat.point(D), theta);
    }
    out(K) = measure * acc;
  }
  return out;
}

CVec moyal_star(const TestFunction& f1, const TestFunction& f2, const ThetaMatrix& theta, const MomentumLattice& lat,
                double alias_tol) {
  return twisted_convolution(lattice_transform(f1, lat, alias_tol), lattice_transform(f2, lat, alias_tol), theta,
                             lat);
}

namespace {

void matchings(std::vector<int>& free, std::vector<std::pair<int, int>>& cur,
               std::vector<std::vector<std::pair<int, int>>>& out) {
  if (free.empty()) {
    out.push_back(cur);
    return;
  }
  const int a = free.front();
  for (size_t k = 1; k < free.size(); ++k) {
    const int b = free[k];
    std::vector<int> rest;
    for (size_t m = 1; m < free.size(); ++m)
      if (m != k) rest.push_back(free[m]);
    cur.emplace_back(a, b);
    matchings(rest, cur, out);
    cur.pop_back();
  }
}

}  // namespace

NPointResult twisted_npoint(const std::vector<SmearedFieldDescriptor>& fields, const ThetaMatrix& theta,
                            const OneParticleUnitary& V) {
  NPointResult r;
  const int n = static_cast<int>(fields.size());
  if (n == 0) {
    r.value = 1.0;
    return r;
  }
  if (n % 2 == 1) {
    r.parity_zero = true;
    return r;
  }
  const GridPtr& grid = fields.front().f_plus.grid;
  const Generator X = Generator::conjugated(V, grid);
  const int N = grid->size();
  std::vector<int> free(n);
  for (int i = 0; i < n; ++i) free[i] = i;
  std::vector<std::pair<int, int>> cur;
  std::vector<std::vector<std::pair<int, int>>> all;
  matchings(free, cur, all);
  const int pairs = n / 2;
  double xscale = 1.0;
  for (int j = 0; j < N; ++j) xscale = std::max(xscale, X.node(j).cwiseAbs().maxCoeff());
  for (const auto& m : all) {
    std::vector<int> label(pairs, 0);
    while (true) {
      cplx amp = 1.0;
      std::vector<Vec> word(n);
      for (int p = 0; p < pairs; ++p) {
        const int a = m[p].first, b = m[p].second, j = label[p];
        // <Omega, a(conj f_a^-) a*(f_b^+) Omega> on node j
        amp *= grid->weights(j) * fields[a].f_minus.values(j) * fields[b].f_plus.values(j);
        word[a] = -X.node(j);
        word[b] = X.node(j);
      }
      if (amp != 0.0) {
        WeylWord w = WeylWord::generator(word[0]);
        for (int i = 1; i < n; ++i) w = weyl_multiply(w, WeylWord::generator(word[i]), theta);
        if (w.total.cwiseAbs().maxCoeff() > 1e-9 * xscale)
          throw ConsistencyError("twisted_npoint: contraction left a nonzero total Weyl momentum");
        r.value += amp * w.phase;
      }
      int p = 0;
      while (p < pairs && ++label[p] == N) label[p++] = 0;
      if (p == pairs) break;
    }
  }
  return r;
}

cplx fock_npoint(const std::vector<SmearedFieldDescriptor>& fields, const ThetaMatrix& theta,
                 const OneParticleUnitary& V) {
  const int n = static_cast<int>(fields.size());
  if (n == 0) return 1.0;
  const GridPtr& grid = fields.front().f_plus.grid;
  FockState s = FockState::vacuum(grid, std::max(1, n / 2));
  for (int i = n - 1; i >= 0; --i) s = deformed_field_apply({fields[i], theta, V}, s);
  return s.sectors[0](0);
}

namespace {

// Trapezoid sum on a uniform position lattice over the support box.
cplx position_lattice_transform(const TestFunction& f, const Vec& kappa, int per_axis) {
  cplx acc = f.amplitude;
  for (int mu = 0; mu < f.dim(); ++mu) {
    const double g = mu == 0 ? 1.0 : -1.0;
    const double a = g * (kappa(mu) - f.k_mod(mu));
    const double h = 2.0 * f.half_widths(mu) / per_axis;
    cplx s = 0.0;
    for (int i = 1; i < per_axis; ++i) {
      const double x = f.center(mu) - f.half_widths(mu) + i * h;
      s += bump_profile((x - f.center(mu)) / f.half_widths(mu)) * std::exp(cplx(0.0, a * x));
    }
    acc *= s * h;
  }
  return acc;
}

}  // namespace

EquivalenceReport twisted_product_equivalence(const TestFunction& f1, const TestFunction& f2,
                                              const ThetaMatrix& theta, const GridPtr& grid) {
  const int N = grid->size();
  const CVec c1 = sample_onshell(f1, grid, +1).values;
  const CVec c2 = sample_onshell(f2, grid, +1).values;
  // twist kernel with the Weyl-consistent sign: F evaluated at -theta
  const ThetaMatrix tf = theta.negated();
  constexpr int kPerAxis = 512;
  CVec h1(N), h2(N);
  for (int j = 0; j < N; ++j) {
    h1(j) = position_lattice_transform(f1, grid->nodes[j], kPerAxis);
    h2(j) = position_lattice_transform(f2, grid->nodes[j], kPerAxis);
  }
  EquivalenceReport rep;
  const double inv = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      const Vec& pj = grid->nodes[j];
      const Vec& pk = grid->nodes[k];
      const WeylWord wjk = weyl_multiply(WeylWord::generator(pj), WeylWord::generator(pk), theta);
      const WeylWord wkj = weyl_multiply(WeylWord::generator(pk), WeylWord::generator(pj), theta);
      const cplx lhs = inv * (c1(j) * c2(k) * wjk.phase + c1(k) * c2(j) * wkj.phase);
      const cplx rhs = inv * (h1(j) * h2(k) * twist_phase(pj, pk, tf) + h1(k) * h2(j) * twist_phase(pk, pj, tf));
      rep.max_deviation = std::max(rep.max_deviation, std::abs(lhs - rhs));
      rep.scale = std::max(rep.scale, std::abs(lhs));
    }
  rep.relative = rep.scale > 0.0 ? rep.max_deviation / rep.scale : 0.0;
  return rep;
}

IsomorphismReport isomorphism_check(const std::vector<SmearedFieldDescriptor>& fields, const ThetaMatrix& theta,
                                    const OneParticleUnitary& V) {
  IsomorphismReport rep;
  for (int n : {2, 4}) {
    if (static_cast<int>(fields.size()) < n) break;
    std::vector<SmearedFieldDescriptor> sub(fields.begin(), fields.begin() + n);
    const cplx l = twisted_npoint(sub, theta, V).value;
    const cplx r = fock_npoint(sub, theta, V);
    rep.orders.push_back(n);
    rep.lhs.push_back(l);
    rep.rhs.push_back(r);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(l - r));
  }
  const auto cc = coordinate_commutator(V, theta);
  if (cc.supported) rep.commutator = cc.theta;
  return rep;
}

}  // namespace warpfock
