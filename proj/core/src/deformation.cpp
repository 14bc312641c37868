#include "warpfock/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "warpfock/quadrature.hpp"

namespace warpfock {

Generator Generator::momentum(const GridPtr& grid) {
  Generator g;
  g.grid = grid;
  g.x.resize(grid->size(), grid->d);
  for (int j = 0; j < grid->size(); ++j) g.x.row(j) = grid->nodes[j].transpose();
  return g;
}

Generator Generator::conjugated(const OneParticleUnitary& v, const GridPtr& grid) {
  const ScaledPermutation op = realize(v, grid).op;
  Generator p = momentum(grid);
  Generator g = p;
  // X = V^-1 P V is diagonal with x_j = p_{perm^-1(j)}
  for (int i = 0; i < grid->size(); ++i) g.x.row(op.perm[i]) = p.x.row(i);
  return g;
}

Generator Generator::from_generator_matrices(const std::vector<std::vector<SparseC>>& mats, const GridPtr& grid) {
  if (static_cast<int>(mats.size()) != grid->d) throw ConfigError("generator matrices: component count mismatch");
  Generator g;
  g.grid = grid;
  g.x.resize(grid->size(), grid->d);
  for (int mu = 0; mu < grid->d; ++mu) {
    if (mats[mu].size() < 2) throw ConfigError("generator matrices: one-particle sector missing");
    const SparseC& m = mats[mu][1];
    double off = 0.0, scale = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
      for (SparseC::InnerIterator it(m, k); it; ++it) {
        if (it.row() != it.col()) off = std::max(off, std::abs(it.value()));
        else scale = std::max(scale, std::abs(it.value()));
      }
    if (off > 1e-12 * std::max(1.0, scale))
      throw ConsistencyError("conjugated generator is not diagonal in the node basis");
    for (int j = 0; j < grid->size(); ++j) g.x(j, mu) = m.coeff(j, j).real();
  }
  return g;
}

Generator Generator::conjugated_by(const ScaledPermutation& w) const {
  Generator g = *this;
  for (int j = 0; j < modes(); ++j) g.x.row(j) = x.row(w.perm[j]);
  return g;
}

CVec Generator::phases(const Vec& y) const {
  if (y.size() != dim()) throw ConfigError("generator: translation dimension mismatch");
  CVec ph(modes());
  for (int j = 0; j < modes(); ++j) {
    double s = x(j, 0) * y(0);
    for (int mu = 1; mu < dim(); ++mu) s -= x(j, mu) * y(mu);
    ph(j) = std::exp(cplx(0.0, s));
  }
  return ph;
}

ScaledPermutation Generator::unitary(const Vec& y) const { return ScaledPermutation::diagonal(phases(y)); }

CMat Generator::twist(const ThetaMatrix& theta) const {
  if (theta.dim() != dim()) throw ConfigError("theta dimension does not match the generator");
  const int N = modes();
  // lowered x times theta times lowered x
  Mat xl = x;
  for (int mu = 1; mu < dim(); ++mu) xl.col(mu) *= -1.0;
  const Mat phase = xl * theta.entries * xl.transpose();
  CMat e(N, N);
  for (int j = 0; j < N; ++j)
    for (int l = 0; l < N; ++l) e(j, l) = std::exp(cplx(0.0, phase(j, l)));
  return e;
}

FockState Conjugation::apply(const FockState& psi) const {
  return second_quantize_apply(v, antiunitary ? psi.conj() : psi);
}

FockState Conjugation::apply_inverse(const FockState& psi) const {
  FockState out = second_quantize_apply(v.inverse(), psi);
  return antiunitary ? out.conj() : out;
}

CVec Conjugation::one_particle(const CVec& f) const { return v.apply(antiunitary ? CVec(f.conjugate()) : f); }

ScaledPermutation Conjugation::conjugate_op(const ScaledPermutation& op) const {
  return v.compose(antiunitary ? op.conj() : op).compose(v.inverse());
}

namespace {

std::string vec_brief(const CVec& c) {
  std::ostringstream os;
  os.precision(6);
  os << "[" << c.size() << " modes, |c|max=" << (c.size() ? c.cwiseAbs().maxCoeff() : 0.0) << "]";
  return os.str();
}

class CreatorOp : public Operator {
 public:
  explicit CreatorOp(CVec c) : c_(std::move(c)) {}
  OpKind kind() const override { return OpKind::Creator; }
  FockState apply(const FockState& psi) const override { return create(c_, psi); }
  OpPtr translated(const Vec& z, const Generator& X) const override {
    return creator((c_.array() * X.phases(z).array()).matrix());
  }
  OpPtr conjugated(const Conjugation& W) const override { return creator(W.one_particle(c_)); }
  std::string describe() const override { return "a*" + vec_brief(c_); }
  const CVec& coeffs() const { return c_; }

 private:
  CVec c_;
};

class AnnihilatorOp : public Operator {
 public:
  explicit AnnihilatorOp(CVec h) : h_(std::move(h)) {}
  OpKind kind() const override { return OpKind::Annihilator; }
  FockState apply(const FockState& psi) const override { return annihilate(h_, psi); }
  OpPtr translated(const Vec& z, const Generator& X) const override {
    return annihilator((h_.array() * X.phases(z).array()).matrix());
  }
  OpPtr conjugated(const Conjugation& W) const override { return annihilator(W.one_particle(h_)); }
  std::string describe() const override { return "a" + vec_brief(h_); }
  const CVec& coeffs() const { return h_; }

 private:
  CVec h_;
};

class FieldOp : public Operator {
 public:
  FieldOp(CVec c, CVec h) : c_(std::move(c)), h_(std::move(h)) {}
  OpKind kind() const override { return OpKind::Field; }
  FockState apply(const FockState& psi) const override { return annihilate(h_, psi) + create(c_, psi); }
  OpPtr translated(const Vec& z, const Generator& X) const override {
    const CVec ph = X.phases(z);
    return field((c_.array() * ph.array()).matrix(), (h_.array() * ph.array()).matrix());
  }
  OpPtr conjugated(const Conjugation& W) const override { return field(W.one_particle(c_), W.one_particle(h_)); }
  std::string describe() const override { return "phi" + vec_brief(c_); }
  const CVec& c() const { return c_; }
  const CVec& h() const { return h_; }

 private:
  CVec c_, h_;
};

class SecondQuantizedOp : public Operator {
 public:
  explicit SecondQuantizedOp(ScaledPermutation v) : v_(std::move(v)) {}
  OpKind kind() const override { return OpKind::SecondQuantized; }
  FockState apply(const FockState& psi) const override { return second_quantize_apply(v_, psi); }
  OpPtr translated(const Vec& z, const Generator& X) const override {
    const ScaledPermutation u = X.unitary(z);
    return second_quantized(u.compose(v_).compose(u.inverse()));
  }
  OpPtr conjugated(const Conjugation& W) const override { return second_quantized(W.conjugate_op(v_)); }
  std::string describe() const override { return "Gamma[" + std::to_string(v_.size()) + "]"; }

 private:
  ScaledPermutation v_;
};

class ProductOp : public Operator {
 public:
  explicit ProductOp(std::vector<OpPtr> f) : f_(std::move(f)) {}
  OpKind kind() const override { return OpKind::Product; }
  FockState apply(const FockState& psi) const override {
    FockState s = psi;
    for (auto it = f_.rbegin(); it != f_.rend(); ++it) s = (*it)->apply(s);
    return s;
  }
  OpPtr translated(const Vec& z, const Generator& X) const override {
    std::vector<OpPtr> g;
    for (const auto& o : f_) g.push_back(o->translated(z, X));
    return product(std::move(g));
  }
  OpPtr conjugated(const Conjugation& W) const override {
    std::vector<OpPtr> g;
    for (const auto& o : f_) g.push_back(o->conjugated(W));
    return product(std::move(g));
  }
  std::string describe() const override {
    std::string s;
    for (const auto& o : f_) s += (s.empty() ? "" : " ") + o->describe();
    return s;
  }

 private:
  std::vector<OpPtr> f_;
};

class RieffelOp : public Operator {
 public:
  RieffelOp(OpPtr a, OpPtr b, ThetaMatrix theta, Generator X)
      : a_(std::move(a)), b_(std::move(b)), theta_(std::move(theta)), X_(std::move(X)) {}
  OpKind kind() const override { return OpKind::Rieffel; }
  FockState apply(const FockState& psi) const override {
    FockState out = FockState::zero(psi.grid, psi.n_max);
    for (const auto& lam : spectral_decomposition(psi, X_)) {
      const FockState bpart = b_->apply(lam.materialize(psi.grid, psi.n_max));
      for (const auto& mu : spectral_decomposition(bpart, X_)) {
        const Vec z = theta_.act(mu.total - lam.total);
        out += a_->translated(z, X_)->apply(mu.materialize(psi.grid, psi.n_max));
      }
    }
    return out;
  }
  OpPtr translated(const Vec& z, const Generator& X) const override {
    return rieffel_operator(a_->translated(z, X), b_->translated(z, X), theta_, X_);
  }
  OpPtr conjugated(const Conjugation&) const override {
    throw GrammarError("conjugation of a Rieffel product is outside the supported operator grammar");
  }
  std::string describe() const override { return "(" + a_->describe() + ") x_theta (" + b_->describe() + ")"; }

 private:
  OpPtr a_, b_;
  ThetaMatrix theta_;
  Generator X_;
};

}  // namespace

OpPtr creator(const CVec& c) { return std::make_shared<CreatorOp>(c); }
OpPtr annihilator(const CVec& h) { return std::make_shared<AnnihilatorOp>(h); }
OpPtr field(const CVec& c, const CVec& h) { return std::make_shared<FieldOp>(c, h); }
OpPtr field(const SmearedFieldDescriptor& d) {
  return field(d.creation_coefficients(), d.annihilation_coefficients());
}
OpPtr second_quantized(const ScaledPermutation& v) { return std::make_shared<SecondQuantizedOp>(v); }
OpPtr translation_operator(const Vec& a, const GridPtr& grid) {
  return second_quantized(realize(OneParticleUnitary::translation(a), grid).op);
}
OpPtr product(std::vector<OpPtr> factors) {
  if (factors.empty()) throw GrammarError("empty operator word");
  if (factors.size() == 1) return factors.front();
  return std::make_shared<ProductOp>(std::move(factors));
}
OpPtr rieffel_operator(OpPtr A, OpPtr B, const ThetaMatrix& theta, const Generator& X) {
  return std::make_shared<RieffelOp>(std::move(A), std::move(B), theta, X);
}

LetterData letter_data(const Operator& op) {
  LetterData d;
  switch (op.kind()) {
    case OpKind::Creator: d.create = static_cast<const CreatorOp&>(op).coeffs(); break;
    case OpKind::Annihilator: d.annihilate = static_cast<const AnnihilatorOp&>(op).coeffs(); break;
    case OpKind::Field:
      d.create = static_cast<const FieldOp&>(op).c();
      d.annihilate = static_cast<const FieldOp&>(op).h();
      break;
    default: break;
  }
  return d;
}

FockState SpectralComponent::materialize(const GridPtr& grid, int n_max) const {
  FockState s = FockState::zero(grid, n_max);
  for (size_t k = 0; k < index.size(); ++k) s.sectors[sector](index[k]) = value[k];
  return s;
}

std::vector<SpectralComponent> spectral_decomposition(const FockState& psi, const Generator& X) {
  const int N = psi.modes();
  if (X.modes() != N) throw ConfigError("generator and state live on different grids");
  std::map<std::vector<int>, SpectralComponent> groups;
  std::vector<int> dg(psi.n_max + 1);
  for (int n = 0; n <= psi.n_max; ++n) {
    const CVec& s = psi.sectors[n];
    for (int64_t J = 0; J < s.size(); ++J) {
      if (s(J) == 0.0) continue;
      decode_index(J, n, N, dg.data());
      std::vector<int> key(dg.begin(), dg.begin() + n);
      std::sort(key.begin(), key.end());
      auto it = groups.find(key);
      if (it == groups.end()) {
        SpectralComponent c;
        c.modes = key;
        c.sector = n;
        c.total = Vec::Zero(X.dim());
        for (int m : key) c.total += X.node(m);
        it = groups.emplace(key, std::move(c)).first;
      }
      it->second.index.push_back(J);
      it->second.value.push_back(s(J));
    }
  }
  std::vector<SpectralComponent> out;
  out.reserve(groups.size());
  for (auto& kv : groups) out.push_back(std::move(kv.second));
  return out;
}

namespace {

void enumerate_multisets(int N, int n, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < N; ++i) {
    cur.push_back(i);
    enumerate_multisets(N, n, i, cur, out);
    cur.pop_back();
  }
}

// E_M restricted to one sorted multiset M.
FockState project_multiset(const FockState& s, const std::vector<int>& key) {
  const int n = static_cast<int>(key.size());
  FockState out = FockState::zero(s.grid, s.n_max);
  std::vector<int> dg = key;
  do {
    const int64_t J = encode_index(dg.data(), n, s.modes());
    out.sectors[n](J) = s.sectors[n](J);
  } while (std::next_permutation(dg.begin(), dg.end()));
  return out;
}

}  // namespace

FockState warp_spectral_generic(const OpPtr& A, const ThetaMatrix& theta, const Generator& X, const FockState& psi,
                                WarpForm form) {
  FockState out = FockState::zero(psi.grid, psi.n_max);
  if (form == WarpForm::Right) {
    for (const auto& c : spectral_decomposition(psi, X))
      out += A->translated(theta.act(c.total), X)->apply(c.materialize(psi.grid, psi.n_max));
    return out;
  }
  const int N = psi.modes();
  for (int n = 0; n <= psi.n_max; ++n) {
    std::vector<std::vector<int>> keys;
    std::vector<int> cur;
    enumerate_multisets(N, n, 0, cur, keys);
    for (const auto& key : keys) {
      Vec total = Vec::Zero(X.dim());
      for (int m : key) total += X.node(m);
      out += project_multiset(A->translated(theta.act(total), X)->apply(psi), key);
    }
  }
  return out;
}

FockState warp_spectral(const OpPtr& A, const ThetaMatrix& theta, const Generator& X, const FockState& psi,
                        WarpForm form) {
  if (X.modes() != psi.modes()) throw ConfigError("generator and state live on different grids");
  const OpKind k = A->kind();
  if (form == WarpForm::Right && (k == OpKind::Creator || k == OpKind::Annihilator || k == OpKind::Field)) {
    const CMat tw = X.twist(theta);
    const LetterData d = letter_data(*A);
    FockState out = FockState::zero(psi.grid, psi.n_max);
    out.truncated = psi.truncated;
    if (d.annihilate.size()) out += annihilate(d.annihilate, psi, &tw);
    if (d.create.size()) out += create(d.create, psi, &tw);
    return out;
  }
  return warp_spectral_generic(A, theta, X, psi, form);
}

namespace {

std::vector<FockState> neville_table(const std::vector<double>& h, const std::vector<FockState>& t) {
  // returns the diagonal P_{0..m} and P_{1..m} for the error estimate
  const size_t m = t.size();
  std::vector<FockState> p = t;
  std::vector<FockState> last_two;
  for (size_t len = 1; len < m; ++len) {
    for (size_t i = 0; i + len < m; ++i) {
      const size_t j = i + len;
      p[i] = (p[i] * cplx(h[j]) - p[i + 1] * cplx(h[i])) * cplx(1.0 / (h[j] - h[i]));
    }
    if (len + 2 == m) last_two = {p[0], p[1]};
  }
  if (m == 1) return {p[0], p[0]};
  if (m == 2) return {p[0], t[1]};
  return {p[0], last_two[1]};
}

}  // namespace

OscillatoryResult warp_oscillatory(const OpPtr& A, const ThetaMatrix& theta, const Generator& X, const FockState& psi,
                                   const std::vector<double>& epsilons, int gh_order) {
  if (epsilons.empty()) throw ConfigError("warp_oscillatory: empty epsilon schedule");
  const int d = X.dim();
  const QuadratureRule& gh = gauss_hermite(gh_order);
  const int q = gh_order;
  int64_t npts = 1;
  for (int k = 0; k < d; ++k) npts *= q;
  const double norm = std::pow(kPi, -0.5 * d);
  const auto comps = spectral_decomposition(psi, X);
  OscillatoryResult res;
  res.epsilons = epsilons;
  std::vector<int> digit(d);
  for (double eps : epsilons) {
    FockState acc = FockState::zero(psi.grid, psi.n_max);
    for (const auto& c : comps) {
      const FockState part = c.materialize(psi.grid, psi.n_max);
      for (int64_t P = 0; P < npts; ++P) {
        int64_t r = P;
        double w = norm;
        Vec t(d);
        for (int k = 0; k < d; ++k) {
          digit[k] = static_cast<int>(r % q);
          r /= q;
          t(k) = gh.nodes[digit[k]];
          w *= gh.weights[digit[k]];
        }
        const Vec x = c.total + 2.0 * eps * t;
        w *= std::exp(-eps * eps * x.squaredNorm());
        if (w < 1e-300) continue;
        const Vec y = theta.act(x);
        FockState s = second_quantize_apply(X.unitary(-y), part);
        s = A->apply(s);
        s = second_quantize_apply(X.unitary(y), s);
        acc += s * cplx(w);
      }
    }
    res.estimates.push_back(acc);
  }
  std::vector<double> h;
  for (double e : epsilons) h.push_back(e * e);
  const auto best = neville_table(h, res.estimates);
  res.value = best[0];
  res.extrapolation_error = (best[0] - best[1]).norm();
  const double scale = std::max(res.value.norm(), 1e-300);
  if (!(res.extrapolation_error <= 1e-3 * scale)) {
    std::ostringstream os;
    os << "warp_oscillatory: Richardson extrapolation did not converge (error " << res.extrapolation_error
       << ", scale " << scale << ", GH order " << gh_order << ")";
    throw NumericalError(os.str());
  }
  return res;
}

FockState rieffel_product(const OpPtr& A, const OpPtr& B, const ThetaMatrix& theta, const Generator& X,
                          const FockState& psi) {
  return rieffel_operator(A, B, theta, X)->apply(psi);
}

FockState deformed_field_apply(const DeformedFieldDescriptor& desc, const FockState& psi) {
  const GridPtr& g = psi.grid;
  const ScaledPermutation v = realize(desc.V, g).op;
  const Conjugation W{v, false};
  const OpPtr moved = field(desc.smearing)->conjugated(W);
  FockState s = second_quantize_apply(v, psi);
  s = warp_spectral(moved, desc.theta, Generator::momentum(g), s);
  return second_quantize_apply(v.inverse(), s);
}

FockState deformed_field_direct(const DeformedFieldDescriptor& desc, const FockState& psi) {
  const Generator X = Generator::from_generator_matrices(conjugated_generator_matrices(desc.V, psi.grid, 1), psi.grid);
  return warp_spectral(field(desc.smearing), desc.theta, X, psi);
}

AdjointReport adjoint_deformed(const DeformedFieldDescriptor& desc, const std::vector<FockState>& states) {
  AdjointReport r;
  DeformedFieldDescriptor bar = desc;
  bar.smearing = desc.smearing.conj();
  std::vector<FockState> fwd, bwd;
  for (const auto& s : states) {
    fwd.push_back(deformed_field_apply(desc, s));
    bwd.push_back(deformed_field_apply(bar, s));
  }
  for (size_t i = 0; i < states.size(); ++i)
    for (size_t j = 0; j < states.size(); ++j) {
      const cplx lhs = states[i].inner(fwd[j]);
      const cplx rhs = std::conj(states[j].inner(bwd[i]));
      r.max_deviation = std::max(r.max_deviation, std::abs(lhs - rhs));
      ++r.samples;
    }
  return r;
}

CovarianceResult covariance_transport(const Conjugation& W, const Mat& M, const OpPtr& A, const ThetaMatrix& theta,
                                      const Generator& X, const FockState& psi, double tol) {
  const int d = X.dim();
  if (M.rows() != d || M.cols() != d) throw ConfigError("covariance: M has the wrong size");
  CovarianceResult res;
  std::vector<Vec> probes;
  for (int k = 0; k < 3; ++k) {
    Vec x(d);
    for (int mu = 0; mu < d; ++mu) x(mu) = 0.37 * (k + 1) - 0.21 * mu * (k + 2) + 0.05 * mu * mu;
    probes.push_back(x);
  }
  const FockState pulled = W.apply_inverse(psi);
  for (const auto& x : probes) {
    for (const FockState* phi : {&psi, &pulled}) {
      const FockState a = W.apply(second_quantize_apply(X.unitary(x), W.apply_inverse(*phi)));
      const FockState b = second_quantize_apply(X.unitary(M * x), *phi);
      const double scale = std::max(phi->norm(), 1e-300);
      res.intertwining_defect = std::max(res.intertwining_defect, (a - b).norm() / scale);
    }
  }
  if (res.intertwining_defect > tol) {
    std::ostringstream os;
    os << "covariance: W U_X(x) W^-1 = U_X(Mx) fails on the supplied state (defect " << res.intertwining_defect << ")";
    throw PreconditionError(os.str());
  }
  const double sigma = W.antiunitary ? -1.0 : 1.0;
  Mat tp = sigma * M * theta.entries * M.transpose();
  tp = 0.5 * (tp - tp.transpose());
  const ThetaMatrix theta_p = ThetaMatrix::from_matrix(tp);
  res.lhs = W.apply(warp_spectral(A, theta, X, pulled));
  res.rhs = warp_spectral(A->conjugated(W), theta_p, X, psi);
  res.deviation = (res.lhs - res.rhs).norm();
  return res;
}

}  // namespace warpfock
