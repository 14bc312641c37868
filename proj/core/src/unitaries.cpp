#include "warpfock/unitaries.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "warpfock/serialize.hpp"

namespace warpfock {

OneParticleUnitary OneParticleUnitary::identity() { return {}; }

OneParticleUnitary OneParticleUnitary::boost(double chi, double angle) {
  OneParticleUnitary v;
  v.kind = UnitaryKind::BoostStabilizer;
  v.chi = chi;
  v.angle = angle;
  return v;
}

OneParticleUnitary OneParticleUnitary::momentum_shift(const Vec& k) {
  OneParticleUnitary v;
  v.kind = UnitaryKind::MomentumShift;
  v.k = k;
  return v;
}

OneParticleUnitary OneParticleUnitary::dilation(double b) {
  OneParticleUnitary v;
  v.kind = UnitaryKind::Dilation;
  v.b = b;
  return v;
}

OneParticleUnitary OneParticleUnitary::translation(const Vec& a) {
  OneParticleUnitary v;
  v.kind = UnitaryKind::Translation;
  v.a = a;
  return v;
}

OneParticleUnitary OneParticleUnitary::composition(std::vector<OneParticleUnitary> parts) {
  OneParticleUnitary v;
  v.kind = UnitaryKind::Composition;
  v.parts = std::move(parts);
  return v;
}

std::string OneParticleUnitary::describe() const { return canonical_dump(to_json()); }

nlohmann::json OneParticleUnitary::to_json() const {
  nlohmann::json j;
  switch (kind) {
    case UnitaryKind::Identity: j["variant"] = "identity"; break;
    case UnitaryKind::BoostStabilizer:
      j["variant"] = "boost";
      j["chi"] = chi;
      j["angle"] = angle;
      break;
    case UnitaryKind::MomentumShift:
      j["variant"] = "momentum_shift";
      j["k"] = vector_json(k);
      break;
    case UnitaryKind::Dilation:
      j["variant"] = "dilation";
      j["b"] = b;
      break;
    case UnitaryKind::Translation:
      j["variant"] = "translation";
      j["a"] = vector_json(a);
      break;
    case UnitaryKind::Composition: {
      j["variant"] = "composition";
      auto arr = nlohmann::json::array();
      for (const auto& p : parts) arr.push_back(p.to_json());
      j["parts"] = arr;
      break;
    }
  }
  return j;
}

OneParticleUnitary OneParticleUnitary::from_json(const nlohmann::json& j) {
  const std::string variant = j.value("variant", "identity");
  if (variant == "identity") return identity();
  if (variant == "boost") return boost(j.at("chi").get<double>(), j.value("angle", 0.0));
  if (variant == "momentum_shift") {
    const auto& k = j.at("k");
    if (k.is_number()) return momentum_shift(Vec::Constant(1, k.get<double>()));
    return momentum_shift(vector_from_json(k));
  }
  if (variant == "dilation") return dilation(j.at("b").get<double>());
  if (variant == "translation") return translation(vector_from_json(j.at("a")));
  if (variant == "composition") {
    std::vector<OneParticleUnitary> parts;
    for (const auto& p : j.at("parts")) parts.push_back(from_json(p));
    return composition(std::move(parts));
  }
  throw ConfigError("unknown unitary variant '" + variant + "'");
}

std::optional<LorentzTransform> OneParticleUnitary::lorentz(int d) const {
  switch (kind) {
    case UnitaryKind::Identity: return LorentzTransform::identity(d);
    case UnitaryKind::BoostStabilizer: return LorentzTransform::stabilizer(d, chi, angle);
    case UnitaryKind::Composition: {
      LorentzTransform l = LorentzTransform::identity(d);
      for (const auto& p : parts) {
        auto lp = p.lorentz(d);
        if (!lp) return std::nullopt;
        l = l.compose(*lp);
      }
      return l;
    }
    default: return std::nullopt;
  }
}

namespace {

int lattice_steps(double value, double step, const char* what) {
  const double s = value / step;
  const double r = std::round(s);
  if (std::abs(s - r) > 1e-9 * std::max(1.0, std::abs(s))) {
    std::ostringstream os;
    os.precision(17);
    os << what << " " << value << " is not a multiple of the grid spacing " << step
       << "; nearest lattice-compatible value is " << r * step;
    throw RealizabilityError(os.str());
  }
  return static_cast<int>(r);
}

Realization realize_boost(const OneParticleUnitary& v, const GridPtr& g) {
  if (g->mode != GridMode::Rapidity) throw ConfigError("boost requires the rapidity-uniform grid mode");
  const int s = lattice_steps(v.chi, g->step(), "boost rapidity");
  if (g->d < 4 && v.angle != 0.0) throw ConfigError("perpendicular rotation needs d = 4");
  Realization r;
  r.op = ScaledPermutation::identity(g->size());
  const double c = std::cos(v.angle), sn = std::sin(v.angle);
  const int nt = g->n_theta;
  const int np = g->perp_count();
  std::vector<int> perp_src(np);
  for (int k = 0; k < np; ++k) {
    if (g->d < 4 || v.angle == 0.0) {
      perp_src[k] = k;
      continue;
    }
    const Vec q = g->perp(k * nt);
    // inverse rotation of p_perp
    Vec t(2);
    t(0) = c * q(0) + sn * q(1);
    t(1) = -sn * q(0) + c * q(1);
    int found = -1;
    for (int m = 0; m < np; ++m) {
      if ((g->perp(m * nt) - t).norm() <= 1e-9 * std::max(1.0, g->perp_max)) {
        found = m;
        break;
      }
    }
    if (found < 0) throw RealizabilityError("rotation angle does not map the perpendicular grid onto itself; use a multiple of pi/2");
    perp_src[k] = found;
  }
  for (int i = 0; i < g->size(); ++i) {
    const int it = g->theta_index(i);
    int src = it - s;
    if (src < 0 || src >= nt) {
      r.wrapped.push_back(i);
      src = ((src % nt) + nt) % nt;
    }
    r.op.perm[i] = perp_src[g->perp_flat(i)] * nt + src;
  }
  return r;
}

Realization realize_shift(const OneParticleUnitary& v, const GridPtr& g) {
  if (g->mode != GridMode::Momentum) throw ConfigError("momentum shift requires the momentum-uniform grid mode");
  if (v.k.size() < 1) throw ConfigError("momentum shift needs a spatial vector");
  const double k1 = v.k.size() == g->d ? v.k(1) : v.k(0);
  const int s = lattice_steps(k1, g->step(), "momentum shift");
  const int N = g->size();
  Realization r;
  r.op = ScaledPermutation::identity(N);
  for (int j = 0; j < N; ++j) {
    int src = j - s;
    if (src < 0 || src >= N) {
      r.wrapped.push_back(j);
      src = ((src % N) + N) % N;
    }
    r.op.perm[j] = src;
    r.op.scale(j) = std::sqrt(g->energy(j) / g->energy(src));
  }
  return r;
}

Realization realize_dilation(const OneParticleUnitary& v, const GridPtr& g) {
  if (g->mass > 0.0) throw ConfigError("dilation is only defined for mass 0");
  if (g->mode != GridMode::LogMomentum) throw ConfigError("dilation requires the log-momentum grid mode");
  const int s = lattice_steps(v.b, g->step(), "dilation parameter");
  const int n = g->n_log;
  Realization r;
  r.op = ScaledPermutation::identity(g->size());
  for (int i = 0; i < 2 * n; ++i) {
    const bool neg = i < n;
    const int k = neg ? n - 1 - i : i - n;
    int t = k + s;
    if (t < 0 || t >= n) {
      r.wrapped.push_back(i);
      t = ((t % n) + n) % n;
    }
    r.op.perm[i] = neg ? n - 1 - t : n + t;
  }
  return r;
}

}  // namespace

Realization realize(const OneParticleUnitary& v, const GridPtr& grid) {
  switch (v.kind) {
    case UnitaryKind::Identity: return {ScaledPermutation::identity(grid->size()), {}};
    case UnitaryKind::BoostStabilizer: return realize_boost(v, grid);
    case UnitaryKind::MomentumShift: return realize_shift(v, grid);
    case UnitaryKind::Dilation: return realize_dilation(v, grid);
    case UnitaryKind::Translation: {
      if (v.a.size() != grid->d) throw ConfigError("translation: dimension mismatch");
      CVec ph(grid->size());
      for (int i = 0; i < grid->size(); ++i) ph(i) = std::exp(cplx(0.0, minkowski_dot(grid->nodes[i], v.a)));
      return {ScaledPermutation::diagonal(ph), {}};
    }
    case UnitaryKind::Composition: {
      Realization acc{ScaledPermutation::identity(grid->size()), {}};
      for (const auto& p : v.parts) {
        Realization rp = realize(p, grid);
        // wrapped nodes of the right factor, pulled back through the current prefix
        ScaledPermutation prefix_inv = acc.op.inverse();
        for (int w : rp.wrapped) acc.wrapped.push_back(prefix_inv.perm[w]);
        acc.op = acc.op.compose(rp.op);
      }
      std::sort(acc.wrapped.begin(), acc.wrapped.end());
      acc.wrapped.erase(std::unique(acc.wrapped.begin(), acc.wrapped.end()), acc.wrapped.end());
      return acc;
    }
  }
  throw ConfigError("unknown unitary variant");
}

UnitaryResult apply_unitary(const OneParticleUnitary& v, const OnShellFunction& h) {
  Realization r = realize(v, h.grid);
  UnitaryResult res;
  res.value = h;
  res.value.values = r.op.apply(h.values);
  const double total = h.norm();
  double lost = 0.0;
  for (int i : r.wrapped) lost += h.grid->weights(i) * std::norm(res.value.values(i));
  res.boundary_loss = total > 0.0 ? std::sqrt(lost) / total : 0.0;
  res.range_warning = res.boundary_loss > 1e-8;
  return res;
}

FockState second_quantize_apply(const OneParticleUnitary& v, const FockState& psi) {
  return second_quantize_apply(realize(v, psi.grid).op, psi);
}

namespace {

bool transform_corners(const OneParticleUnitary& v, std::vector<Vec>& pts) {
  switch (v.kind) {
    case UnitaryKind::Identity:
    case UnitaryKind::MomentumShift: return true;
    case UnitaryKind::BoostStabilizer: {
      const int d = static_cast<int>(pts.front().size());
      const LorentzTransform l = LorentzTransform::stabilizer(d, v.chi, v.angle);
      for (auto& p : pts) p = l.apply(p);
      return true;
    }
    case UnitaryKind::Dilation:
      for (auto& p : pts) p *= std::exp(-v.b);
      return true;
    case UnitaryKind::Translation:
      for (auto& p : pts) p += v.a;
      return true;
    case UnitaryKind::Composition:
      for (auto it = v.parts.rbegin(); it != v.parts.rend(); ++it) {
        if (it->kind == UnitaryKind::MomentumShift || it->kind == UnitaryKind::Composition) return false;
        transform_corners(*it, pts);
      }
      return true;
  }
  return false;
}

}  // namespace

Tristate supports_wedge_covariance(const OneParticleUnitary& v, const TestFunction& f, const Wedge& w) {
  if (!f.support_inside(w)) throw PreconditionError("supports_wedge_covariance: supp f is not inside the wedge");
  std::vector<Vec> pts = f.support_corners();
  if (!transform_corners(v, pts)) return Tristate::Indeterminate;
  for (const auto& p : pts)
    if (!w.contains(p)) return Tristate::False;
  return Tristate::True;
}

namespace {

SparseC gamma_sector(const ScaledPermutation& v, int n, int N) {
  int64_t dim = 1;
  for (int k = 0; k < n; ++k) dim *= N;
  SparseC m(dim, dim);
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(dim);
  std::vector<int> dg(n + 1), src(n + 1);
  for (int64_t J = 0; J < dim; ++J) {
    decode_index(J, n, N, dg.data());
    cplx s = 1.0;
    for (int k = 0; k < n; ++k) {
      s *= v.scale(dg[k]);
      src[k] = v.perm[dg[k]];
    }
    trips.emplace_back(J, encode_index(src.data(), n, N), s);
  }
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SparseC momentum_sector(const GridPtr& g, int mu, int n) {
  const int N = g->size();
  int64_t dim = 1;
  for (int k = 0; k < n; ++k) dim *= N;
  SparseC m(dim, dim);
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(dim);
  std::vector<int> dg(n + 1);
  for (int64_t J = 0; J < dim; ++J) {
    decode_index(J, n, N, dg.data());
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += g->nodes[dg[k]](mu);
    trips.emplace_back(J, J, s);
  }
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace

std::vector<std::vector<SparseC>> conjugated_generator_matrices(const OneParticleUnitary& v, const GridPtr& grid,
                                                                int n_max) {
  const ScaledPermutation op = realize(v, grid).op;
  const ScaledPermutation inv = op.inverse();
  std::vector<std::vector<SparseC>> out(grid->d);
  for (int n = 0; n <= n_max; ++n) {
    const SparseC G = gamma_sector(op, n, grid->size());
    const SparseC Gi = gamma_sector(inv, n, grid->size());
    for (int mu = 0; mu < grid->d; ++mu) {
      SparseC x = Gi * momentum_sector(grid, mu, n) * G;
      x.prune(cplx(0.0));
      out[mu].push_back(x);
    }
  }
  return out;
}

double generator_commutator_norm(const std::vector<std::vector<SparseC>>& x) {
  double worst = 0.0;
  for (size_t mu = 0; mu < x.size(); ++mu)
    for (size_t nu = mu + 1; nu < x.size(); ++nu)
      for (size_t n = 0; n < x[mu].size(); ++n) {
        SparseC c = x[mu][n] * x[nu][n] - x[nu][n] * x[mu][n];
        worst = std::max(worst, c.norm());
      }
  return worst;
}

double isospectrality_defect(const std::vector<std::vector<SparseC>>& x, const GridPtr& grid, int n_max) {
  double worst = 0.0;
  for (int mu = 0; mu < grid->d; ++mu) {
    for (int n = 0; n <= n_max; ++n) {
      const SparseC& m = x[mu][n];
      const SparseC p = momentum_sector(grid, mu, n);
      std::vector<double> ex, ep;
      double off = 0.0;
      for (int k = 0; k < m.outerSize(); ++k)
        for (SparseC::InnerIterator it(m, k); it; ++it)
          if (it.row() != it.col()) off = std::max(off, std::abs(it.value()));
      for (int64_t i = 0; i < m.rows(); ++i) {
        ex.push_back(m.coeff(i, i).real());
        ep.push_back(p.coeff(i, i).real());
      }
      std::sort(ex.begin(), ex.end());
      std::sort(ep.begin(), ep.end());
      for (size_t i = 0; i < ex.size(); ++i) worst = std::max(worst, std::abs(ex[i] - ep[i]));
      worst = std::max(worst, off);
    }
  }
  return worst;
}

std::vector<CatalogEntry> unitary_catalog(int n_nodes) {
  const double theta_max = 4.0;
  GridPtr rap = MassShellGrid::rapidity(1.0, 2, theta_max, n_nodes);
  const double h = rap->step();
  GridPtr mom = MassShellGrid::momentum(1.0, std::sinh(theta_max), n_nodes);
  GridPtr lg = MassShellGrid::log_momentum(-3.0, 3.0, n_nodes / 2);
  Vec k(1);
  k(0) = 3.0 * mom->step();
  return {
      {"identity", OneParticleUnitary::identity(), rap},
      {"boost", OneParticleUnitary::boost(h), rap},
      {"boost_composition",
       OneParticleUnitary::composition({OneParticleUnitary::boost(2.0 * h), OneParticleUnitary::boost(-h)}), rap},
      {"momentum_shift", OneParticleUnitary::momentum_shift(k), mom},
      {"dilation", OneParticleUnitary::dilation(2.0 * lg->step()), lg},
  };
}

}  // namespace warpfock
