#include "warpfock/fock.hpp"

#include <algorithm>
#include <cmath>

#include "warpfock/serialize.hpp"

namespace warpfock {

ScaledPermutation ScaledPermutation::identity(int n) {
  ScaledPermutation v;
  v.perm.resize(n);
  for (int i = 0; i < n; ++i) v.perm[i] = i;
  v.scale = CVec::Ones(n);
  return v;
}

ScaledPermutation ScaledPermutation::diagonal(const CVec& s) {
  ScaledPermutation v = identity(static_cast<int>(s.size()));
  v.scale = s;
  return v;
}

CVec ScaledPermutation::apply(const CVec& h) const {
  if (h.size() != size()) throw ConfigError("one-particle operator: size mismatch");
  CVec out(size());
  for (int i = 0; i < size(); ++i) out(i) = scale(i) * h(perm[i]);
  return out;
}

ScaledPermutation ScaledPermutation::compose(const ScaledPermutation& rhs) const {
  if (rhs.size() != size()) throw ConfigError("one-particle operator: size mismatch");
  ScaledPermutation v;
  v.perm.resize(size());
  v.scale.resize(size());
  for (int i = 0; i < size(); ++i) {
    v.perm[i] = rhs.perm[perm[i]];
    v.scale(i) = scale(i) * rhs.scale(perm[i]);
  }
  return v;
}

ScaledPermutation ScaledPermutation::inverse() const {
  ScaledPermutation v;
  v.perm.resize(size());
  v.scale.resize(size());
  for (int i = 0; i < size(); ++i) {
    v.perm[perm[i]] = i;
    v.scale(perm[i]) = 1.0 / scale(i);
  }
  return v;
}

ScaledPermutation ScaledPermutation::conj() const {
  ScaledPermutation v = *this;
  v.scale = scale.conjugate();
  return v;
}

CMat ScaledPermutation::dense() const {
  CMat m = CMat::Zero(size(), size());
  for (int i = 0; i < size(); ++i) m(i, perm[i]) = scale(i);
  return m;
}

void decode_index(int64_t idx, int n, int modes, int* digits) {
  for (int k = n - 1; k >= 0; --k) {
    digits[k] = static_cast<int>(idx % modes);
    idx /= modes;
  }
}

int64_t encode_index(const int* digits, int n, int modes) {
  int64_t idx = 0;
  for (int k = 0; k < n; ++k) idx = idx * modes + digits[k];
  return idx;
}

namespace {

int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
  if (a.get() != b.get() && !a->same_as(*b)) throw ConfigError("grid mismatch between operands");
}

}  // namespace

FockState FockState::zero(GridPtr g, int n_max) {
  if (n_max < 0) throw ConfigError("N_max must be non-negative");
  FockState s;
  s.n_max = n_max;
  s.grid = std::move(g);
  s.sectors.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) s.sectors[n] = CVec::Zero(ipow(s.grid->size(), n));
  return s;
}

FockState FockState::vacuum(GridPtr g, int n_max) {
  FockState s = zero(std::move(g), n_max);
  s.sectors[0](0) = 1.0;
  return s;
}

int64_t FockState::sector_size(int n) const { return ipow(modes(), n); }

bool FockState::same_shape(const FockState& o) const {
  return n_max == o.n_max && (grid.get() == o.grid.get() || grid->same_as(*o.grid));
}

FockState FockState::operator+(const FockState& o) const {
  FockState r = *this;
  r += o;
  return r;
}

FockState& FockState::operator+=(const FockState& o) {
  if (!same_shape(o)) throw ConfigError("Fock states with different shapes");
  for (int n = 0; n <= n_max; ++n) sectors[n] += o.sectors[n];
  truncated = truncated || o.truncated;
  return *this;
}

FockState FockState::operator-(const FockState& o) const { return *this + o * cplx(-1.0); }

FockState FockState::operator*(cplx s) const {
  FockState r = *this;
  for (auto& v : r.sectors) v *= s;
  return r;
}

cplx FockState::inner(const FockState& o) const {
  if (!same_shape(o)) throw ConfigError("Fock states with different shapes");
  const int N = modes();
  const Vec& w = grid->weights;
  cplx total = 0.0;
  Vec weight(1);
  weight(0) = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      Vec next(weight.size() * N);
      for (Eigen::Index a = 0; a < weight.size(); ++a) next.segment(a * N, N) = weight(a) * w;
      weight.swap(next);
    }
    total += (weight.cast<cplx>().array() * sectors[n].conjugate().array() * o.sectors[n].array()).sum();
  }
  return total;
}

double FockState::norm() const { return std::sqrt(std::max(inner(*this).real(), 0.0)); }

double FockState::max_abs_diff(const FockState& o) const {
  double m = 0.0;
  for (int n = 0; n <= n_max; ++n) m = std::max(m, (sectors[n] - o.sectors[n]).cwiseAbs().maxCoeff());
  return m;
}

double FockState::symmetry_defect() const {
  const int N = modes();
  double worst = 0.0;
  std::vector<int> dg(n_max + 1);
  for (int n = 2; n <= n_max; ++n) {
    const CVec& s = sectors[n];
    for (int64_t idx = 0; idx < s.size(); ++idx) {
      decode_index(idx, n, N, dg.data());
      for (int k = 0; k + 1 < n; ++k) {
        std::swap(dg[k], dg[k + 1]);
        worst = std::max(worst, std::abs(s(idx) - s(encode_index(dg.data(), n, N))));
        std::swap(dg[k], dg[k + 1]);
      }
    }
  }
  return worst;
}

FockState FockState::symmetrized() const {
  FockState r = *this;
  const int N = modes();
  std::vector<int> dg(n_max + 1);
  for (int n = 2; n <= n_max; ++n) {
    const CVec& s = sectors[n];
    CVec out(s.size());
    for (int64_t idx = 0; idx < s.size(); ++idx) {
      decode_index(idx, n, N, dg.data());
      std::sort(dg.begin(), dg.begin() + n);
      cplx acc = 0.0;
      int count = 0;
      do {
        acc += s(encode_index(dg.data(), n, N));
        ++count;
      } while (std::next_permutation(dg.begin(), dg.begin() + n));
      out(idx) = acc / static_cast<double>(count);
    }
    r.sectors[n] = out;
  }
  return r;
}

FockState FockState::conj() const {
  FockState r = *this;
  for (auto& v : r.sectors) v = v.conjugate();
  return r;
}

FockState create(const CVec& c, const FockState& psi, const CMat* twist) {
  const int N = psi.modes();
  if (c.size() != N) throw ConfigError("create: coefficient count differs from grid size");
  FockState out = FockState::zero(psi.grid, psi.n_max);
  out.truncated = psi.truncated;
  if (psi.n_max >= 0 && psi.sectors[psi.n_max].cwiseAbs().maxCoeff() > 0.0 && c.cwiseAbs().maxCoeff() > 0.0)
    out.truncated = true;
  std::vector<int> dg(psi.n_max + 2);
  for (int n = 0; n < psi.n_max; ++n) {
    const CVec& src = psi.sectors[n];
    if (src.cwiseAbs().maxCoeff() == 0.0) continue;
    CVec& dst = out.sectors[n + 1];
    const double pre = 1.0 / std::sqrt(static_cast<double>(n + 1));
    const int m = n + 1;
    std::vector<int64_t> stride(m);
    for (int k = 0; k < m; ++k) stride[k] = ipow(N, m - 1 - k);
    for (int64_t J = 0; J < dst.size(); ++J) {
      decode_index(J, m, N, dg.data());
      cplx acc = 0.0;
      for (int k = 0; k < m; ++k) {
        const int64_t hi = J / (stride[k] * N);
        const int64_t lo = J % stride[k];
        const int64_t rest = hi * stride[k] + lo;
        cplx term = c(dg[k]) * src(rest);
        if (term == 0.0) continue;
        if (twist) {
          for (int l = 0; l < m; ++l)
            if (l != k) term *= (*twist)(dg[k], dg[l]);
        }
        acc += term;
      }
      dst(J) = pre * acc;
    }
  }
  return out;
}

FockState annihilate(const CVec& h, const FockState& psi, const CMat* twist) {
  const int N = psi.modes();
  if (h.size() != N) throw ConfigError("annihilate: coefficient count differs from grid size");
  FockState out = FockState::zero(psi.grid, psi.n_max);
  out.truncated = psi.truncated;
  const CVec hw = (h.conjugate().array() * psi.grid->weights.cast<cplx>().array()).matrix();
  std::vector<int> dg(psi.n_max + 1);
  for (int n = 1; n <= psi.n_max; ++n) {
    const CVec& src = psi.sectors[n];
    if (src.cwiseAbs().maxCoeff() == 0.0) continue;
    CVec& dst = out.sectors[n - 1];
    const double pre = std::sqrt(static_cast<double>(n));
    const int64_t block = dst.size();
    for (int64_t R = 0; R < block; ++R) {
      decode_index(R, n - 1, N, dg.data());
      cplx acc = 0.0;
      for (int i = 0; i < N; ++i) {
        if (hw(i) == 0.0) continue;
        cplx term = hw(i) * src(i * block + R);
        if (twist) {
          for (int l = 0; l < n - 1; ++l) term *= std::conj((*twist)(i, dg[l]));
        }
        acc += term;
      }
      dst(R) = pre * acc;
    }
  }
  return out;
}

FockState create(const OnShellFunction& f, const FockState& psi) {
  require_same_grid(f.grid, psi.grid);
  return create(f.values, psi);
}

FockState annihilate(const OnShellFunction& h, const FockState& psi) {
  require_same_grid(h.grid, psi.grid);
  return annihilate(h.values, psi);
}

SmearedFieldDescriptor SmearedFieldDescriptor::from_test_function(const TestFunction& f, const GridPtr& grid) {
  return {sample_onshell(f, grid, +1), sample_onshell(f, grid, -1)};
}

SmearedFieldDescriptor SmearedFieldDescriptor::conj() const {
  SmearedFieldDescriptor d{f_minus.conj(), f_plus.conj()};
  d.f_plus.sign = +1;
  d.f_minus.sign = -1;
  return d;
}

FockState free_field_apply(const SmearedFieldDescriptor& desc, const FockState& psi) {
  require_same_grid(desc.f_plus.grid, psi.grid);
  require_same_grid(desc.f_minus.grid, psi.grid);
  return annihilate(desc.annihilation_coefficients(), psi) + create(desc.creation_coefficients(), psi);
}

FockState second_quantize_apply(const ScaledPermutation& v, const FockState& psi) {
  const int N = psi.modes();
  if (v.size() != N) throw ConfigError("second quantization: operator size differs from grid size");
  FockState out = psi;
  std::vector<int> dg(psi.n_max + 1), src(psi.n_max + 1);
  for (int n = 1; n <= psi.n_max; ++n) {
    const CVec& in = psi.sectors[n];
    if (in.cwiseAbs().maxCoeff() == 0.0) continue;
    CVec& dst = out.sectors[n];
    for (int64_t J = 0; J < in.size(); ++J) {
      decode_index(J, n, N, dg.data());
      cplx s = 1.0;
      for (int k = 0; k < n; ++k) {
        s *= v.scale(dg[k]);
        src[k] = v.perm[dg[k]];
      }
      dst(J) = s * in(encode_index(src.data(), n, N));
    }
  }
  return out;
}

FockState apply_translation(const Vec& a, const FockState& psi) {
  const int N = psi.modes();
  if (a.size() != psi.grid->d) throw ConfigError("translation: dimension mismatch");
  CVec ph(N);
  for (int i = 0; i < N; ++i) ph(i) = std::exp(cplx(0.0, minkowski_dot(psi.grid->nodes[i], a)));
  return second_quantize_apply(ScaledPermutation::diagonal(ph), psi);
}

FockState number_sqrt_apply(const FockState& psi) {
  FockState out = psi;
  for (int n = 0; n <= psi.n_max; ++n) out.sectors[n] *= std::sqrt(static_cast<double>(n + 1));
  return out;
}

CVec random_coefficients(int modes, int lo, int hi, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CVec c = CVec::Zero(modes);
  lo = std::max(lo, 0);
  hi = std::min(hi, modes);
  for (int i = lo; i < hi; ++i) c(i) = cplx(nd(rng), nd(rng));
  return c;
}

FockState random_state(const GridPtr& g, int n_max, int top_sector, int lo, int hi, std::mt19937_64& rng) {
  FockState s = FockState::zero(g, n_max);
  std::normal_distribution<double> nd(0.0, 1.0);
  const int N = g->size();
  std::vector<int> dg(n_max + 1);
  for (int n = 0; n <= std::min(top_sector, n_max); ++n) {
    for (int64_t J = 0; J < s.sectors[n].size(); ++J) {
      decode_index(J, n, N, dg.data());
      bool inside = true;
      for (int k = 0; k < n; ++k) inside = inside && dg[k] >= lo && dg[k] < hi;
      if (inside) s.sectors[n](J) = cplx(nd(rng), nd(rng));
    }
  }
  s = s.symmetrized();
  const double nrm = s.norm();
  return nrm > 0.0 ? s * (1.0 / nrm) : s;
}

nlohmann::json to_json(const FockState& psi) {
  nlohmann::json j;
  j["grid_hash"] = sha256_hex(psi.grid->descriptor());
  j["n_max"] = psi.n_max;
  j["truncated"] = psi.truncated;
  auto secs = nlohmann::json::array();
  for (const auto& s : psi.sectors) {
    auto a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < s.size(); ++i) a.push_back(complex_json(s(i)));
    secs.push_back(a);
  }
  j["sectors"] = secs;
  return j;
}

FockState fock_from_json(const nlohmann::json& j, const GridPtr& g) {
  if (j.at("grid_hash").get<std::string>() != sha256_hex(g->descriptor()))
    throw ConfigError("Fock state JSON belongs to a different grid");
  FockState s = FockState::zero(g, j.at("n_max").get<int>());
  s.truncated = j.value("truncated", false);
  const auto& secs = j.at("sectors");
  if (static_cast<int>(secs.size()) != s.n_max + 1) throw ConfigError("Fock state JSON: sector count mismatch");
  for (int n = 0; n <= s.n_max; ++n) {
    if (static_cast<int64_t>(secs[n].size()) != s.sectors[n].size())
      throw ConfigError("Fock state JSON: sector size mismatch");
    for (size_t i = 0; i < secs[n].size(); ++i) s.sectors[n](i) = complex_from_json(secs[n][i]);
  }
  return s;
}

}  // namespace warpfock
