#include "warpfock/locality.hpp"

#include <algorithm>
#include <cmath>

namespace warpfock {

namespace {

bool lorentz_type(const OneParticleUnitary& v) {
  switch (v.kind) {
    case UnitaryKind::Identity:
    case UnitaryKind::BoostStabilizer: return true;
    case UnitaryKind::Composition:
      return std::all_of(v.parts.begin(), v.parts.end(), [](const auto& p) { return lorentz_type(p); });
    default: return false;
  }
}

}  // namespace

ResidualResult commutator_residual(const TestFunction& f, const TestFunction& g, const ThetaMatrix& theta,
                                   const OneParticleUnitary& V, const GridPtr& grid, const Vec& x, const Vec& y) {
  if (theta.dim() != grid->d) throw ConfigError("commutator_residual: theta dimension mismatch");
  const ScaledPermutation v = realize(V, grid).op;
  const CVec fm = v.apply(sample_onshell(f, grid, -1).values);
  const CVec fp = v.apply(sample_onshell(f, grid, +1).values);
  const CVec gm = v.apply(sample_onshell(g, grid, -1).values);
  const CVec gp = v.apply(sample_onshell(g, grid, +1).values);
  const Vec z = x + y;
  ResidualResult r;
  for (int i = 0; i < grid->size(); ++i) {
    const double ph = theta.contract(grid->nodes[i], z);
    r.i1 += grid->weights(i) * fm(i) * gp(i) * std::exp(cplx(0.0, -ph));
    r.i2 += grid->weights(i) * fp(i) * gm(i) * std::exp(cplx(0.0, ph));
  }
  r.residual = r.i1 - r.i2;
  const double scale = std::max(std::abs(r.i1), std::abs(r.i2));
  r.relative = scale > 0.0 ? std::abs(r.residual) / scale : 0.0;
  if (grid->mode == GridMode::Rapidity && lorentz_type(V)) {
    const CVec cf = v.apply(continue_to_shifted_contour(f, grid, -1).values);
    const CVec cg = v.apply(continue_to_shifted_contour(g, grid, +1).values);
    cplx shifted = 0.0;
    for (int i = 0; i < grid->size(); ++i) {
      Vec p = grid->nodes[i];
      p(0) = -p(0);
      p(1) = -p(1);
      shifted += grid->weights(i) * cf(i) * cg(i) * std::exp(cplx(0.0, -theta.contract(p, z)));
    }
    r.contour_gap = scale > 0.0 ? std::abs(shifted - r.i2) / scale : 0.0;
  }
  return r;
}

double contour_identity_defect(const TestFunction& f, const GridPtr& grid) {
  const OnShellFunction cont = continue_to_shifted_contour(f, grid, -1);
  const OnShellFunction plus = sample_onshell(f, grid, +1);
  double worst = 0.0;
  for (int i = 0; i < grid->size(); ++i)
    worst = std::max(worst, std::abs(cont.values(i) - plus.values(grid->perp_reflect(i))));
  return worst;
}

CommutatorNorm full_commutator_norm(const TestFunction& f, const TestFunction& g, const Wedge& w, const Wedge& w_opp,
                                    const OneParticleUnitary& V, const FockState& psi, double lambda, double eta,
                                    bool check_supports) {
  const Mat& l = w.transform.lorentz.matrix;
  const Mat& lo = w_opp.transform.lorentz.matrix;
  if ((l + lo).cwiseAbs().maxCoeff() > 1e-12 ||
      (w.transform.translation + w_opp.transform.translation).cwiseAbs().maxCoeff() > 1e-12)
    throw PreconditionError("full_commutator_norm: w_opp must be the opposite wedge -w");
  if (check_supports && (!f.support_inside(w) || !g.support_inside(w_opp)))
    throw PreconditionError("full_commutator_norm: supp f must lie in w and supp g in -w");
  const GridPtr& grid = psi.grid;
  const DeformedFieldDescriptor df{SmearedFieldDescriptor::from_test_function(f, grid), theta_of_wedge(w, lambda, eta),
                                   V};
  const DeformedFieldDescriptor dg{SmearedFieldDescriptor::from_test_function(g, grid),
                                   theta_of_wedge(w_opp, lambda, eta), V};
  const FockState fg = deformed_field_apply(df, deformed_field_apply(dg, psi));
  const FockState gf = deformed_field_apply(dg, deformed_field_apply(df, psi));
  CommutatorNorm c;
  c.norm = (fg - gf).norm();
  c.scale = std::max(fg.norm(), gf.norm());
  c.relative = c.scale > 0.0 ? c.norm / c.scale : 0.0;
  return c;
}

OnShellFunction sharp_packet(const GridPtr& grid, int node) {
  if (grid->mode != GridMode::Rapidity) throw ConfigError("sharp packets are defined on the rapidity grid");
  const int it = grid->theta_index(node);
  if (it < 1 || it + 1 >= grid->n_theta) throw RangeError("sharp packet touches the rapidity edge");
  OnShellFunction f = OnShellFunction::zeros(grid, +1);
  f.values(node - 1) = 0.25;
  f.values(node) = 0.5;
  f.values(node + 1) = 0.25;
  return f;
}

OnShellFunction time_evolved(const OnShellFunction& f, double t) {
  OnShellFunction out = f;
  for (int i = 0; i < f.grid->size(); ++i) {
    const double p0 = f.grid->nodes[i](0);
    const double omega = f.grid->energy(i);
    out.values(i) *= std::exp(cplx(0.0, (p0 - omega) * t));
  }
  return out;
}

FockState two_particle_state(const OnShellFunction& f, const OnShellFunction& g, const Wedge& w,
                             const ThetaMatrix& theta, const OneParticleUnitary& V, Direction dir, int n_max,
                             double threshold) {
  if (n_max < 2) throw ConfigError("two_particle_state: N_max must be at least 2");
  const auto xf = velocity_support(f, threshold);
  const auto xg = velocity_support(g, threshold);
  if (dir == Direction::In && !is_precursor(xf, xg, w))
    throw OrderingError("incoming state requires Xi(f) to precede Xi(g) in the wedge");
  if (dir == Direction::Out && !is_precursor(xg, xf, w))
    throw OrderingError("outgoing state requires Xi(g) to precede Xi(f) in the wedge");
  const GridPtr& grid = f.grid;
  const ScaledPermutation v = realize(V, grid).op;
  const Generator P = Generator::momentum(grid);
  FockState s = FockState::vacuum(grid, n_max);
  s = warp_spectral(creator(v.apply(g.values)), theta, P, s);
  s = warp_spectral(creator(v.apply(f.values)), theta, P, s);
  return second_quantize_apply(v.inverse(), s);
}

SMatrixResult s_matrix_phase(const OnShellFunction& f, const OnShellFunction& g, const ThetaMatrix& theta,
                             const OneParticleUnitary& V, double threshold) {
  for (int i = 0; i < f.grid->size(); ++i)
    if (f.values(i) != 0.0 && g.values(i) != 0.0)
      throw PreconditionError("s_matrix_phase: momentum supports must be disjoint");
  const int d = f.grid->d;
  const auto xf = velocity_support(f, threshold);
  const auto xg = velocity_support(g, threshold);
  SMatrixResult r;
  Wedge w = Wedge::reference(d);
  if (!is_precursor(xf, xg, w)) {
    w = Wedge::opposite(d);
    r.reference_wedge = false;
    if (!is_precursor(xf, xg, w)) throw OrderingError("s_matrix_phase: velocity supports are not wedge ordered");
  }
  const FockState in = two_particle_state(f, g, w, theta, V, Direction::In, 2, threshold);
  const FockState out = two_particle_state(g, f, w, theta, V, Direction::Out, 2, threshold);
  r.s = out.inner(in) / (out.norm() * in.norm());
  return r;
}

std::vector<BoundSample> tempered_bound(const DeformedFieldDescriptor& desc, const FockState& psi,
                                        const std::vector<Vec>& translations, double slack) {
  const double rhs =
      (desc.smearing.f_plus.norm() + desc.smearing.f_minus.norm()) * number_sqrt_apply(psi).norm() + slack;
  std::vector<BoundSample> out;
  for (const auto& x : translations) {
    BoundSample b;
    b.lhs = deformed_field_apply(desc, apply_translation(x, psi)).norm();
    b.rhs = rhs;
    b.pass = b.lhs <= b.rhs;
    out.push_back(b);
  }
  return out;
}

std::vector<double> continuity_surrogate(const DeformedFieldDescriptor& desc, const FockState& psi, const Vec& x0,
                                         int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    const Vec x = x0 / std::ldexp(1.0, k);
    out.push_back(deformed_field_apply(desc, apply_translation(x, psi) - psi).norm());
  }
  return out;
}

}  // namespace warpfock
