#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "warpfock/unitaries.hpp"

namespace warpfock {

// Joint spectrum of a generator diagonal in the node basis: row j holds x_j.
struct Generator {
  GridPtr grid;
  Mat x;

  static Generator momentum(const GridPtr& grid);
  // x_j = p_{perm^-1(j)} read off the realized unitary.
  static Generator conjugated(const OneParticleUnitary& v, const GridPtr& grid);
  // Diagonal of the one-particle conjugated generator matrices; throws ConsistencyError if not diagonal.
  static Generator from_generator_matrices(const std::vector<std::vector<SparseC>>& mats, const GridPtr& grid);
  // W X W^-1 for a scaled permutation W.
  Generator conjugated_by(const ScaledPermutation& w) const;

  int modes() const { return static_cast<int>(x.rows()); }
  int dim() const { return static_cast<int>(x.cols()); }
  Vec node(int j) const { return x.row(j).transpose(); }
  CVec phases(const Vec& y) const;
  ScaledPermutation unitary(const Vec& y) const;
  CMat twist(const ThetaMatrix& theta) const;
};

// W = Gamma(v) or Gamma(v) J with J complex conjugation on the node basis.
struct Conjugation {
  ScaledPermutation v;
  bool antiunitary = false;

  FockState apply(const FockState& psi) const;
  FockState apply_inverse(const FockState& psi) const;
  CVec one_particle(const CVec& f) const;
  ScaledPermutation conjugate_op(const ScaledPermutation& op) const;
};

class Operator;
using OpPtr = std::shared_ptr<const Operator>;

enum class OpKind { Creator, Annihilator, Field, SecondQuantized, Product, Rieffel };

class Operator {
 public:
  virtual ~Operator() = default;
  virtual OpKind kind() const = 0;
  virtual FockState apply(const FockState& psi) const = 0;
  // alpha_z(A) = U_X(z) A U_X(-z)
  virtual OpPtr translated(const Vec& z, const Generator& X) const = 0;
  // W A W^-1
  virtual OpPtr conjugated(const Conjugation& W) const = 0;
  virtual std::string describe() const = 0;
};

OpPtr creator(const CVec& c);
OpPtr annihilator(const CVec& h);
// a(h) + a*(c)
OpPtr field(const CVec& c, const CVec& h);
OpPtr field(const SmearedFieldDescriptor& desc);
OpPtr second_quantized(const ScaledPermutation& v);
OpPtr translation_operator(const Vec& a, const GridPtr& grid);
// Applied right to left: factors[0] is the leftmost.
OpPtr product(std::vector<OpPtr> factors);
OpPtr rieffel_operator(OpPtr A, OpPtr B, const ThetaMatrix& theta, const Generator& X);

// Coefficients of single-letter operators (empty for other kinds).
struct LetterData {
  CVec create;
  CVec annihilate;
};
LetterData letter_data(const Operator& op);

struct SpectralComponent {
  std::vector<int> modes;  // sorted multiset
  Vec total;               // sum of x over the multiset
  int sector = 0;
  std::vector<int64_t> index;
  std::vector<cplx> value;

  FockState materialize(const GridPtr& grid, int n_max) const;
};
std::vector<SpectralComponent> spectral_decomposition(const FockState& psi, const Generator& X);

enum class WarpForm { Right, Left };

FockState warp_spectral(const OpPtr& A, const ThetaMatrix& theta, const Generator& X, const FockState& psi,
                        WarpForm form = WarpForm::Right);
// Multiset loop without the single-letter shortcut.
FockState warp_spectral_generic(const OpPtr& A, const ThetaMatrix& theta, const Generator& X, const FockState& psi,
                                WarpForm form = WarpForm::Right);

struct OscillatoryResult {
  FockState value;
  double extrapolation_error = 0.0;
  std::vector<double> epsilons;
  std::vector<FockState> estimates;
};
OscillatoryResult warp_oscillatory(const OpPtr& A, const ThetaMatrix& theta, const Generator& X, const FockState& psi,
                                   const std::vector<double>& epsilons = {0.2, 0.1, 0.05, 0.025, 0.0125}, int gh_order = 40);

FockState rieffel_product(const OpPtr& A, const OpPtr& B, const ThetaMatrix& theta, const Generator& X,
                          const FockState& psi);

struct DeformedFieldDescriptor {
  SmearedFieldDescriptor smearing;
  ThetaMatrix theta;
  OneParticleUnitary V;
};

// Gamma(V^-1) [Gamma(V) phi(f) Gamma(V)^-1]_{theta,P} Gamma(V) psi
FockState deformed_field_apply(const DeformedFieldDescriptor& desc, const FockState& psi);
// Spectral sum over the conjugated generator matrices.
FockState deformed_field_direct(const DeformedFieldDescriptor& desc, const FockState& psi);

struct AdjointReport {
  double max_deviation = 0.0;
  int samples = 0;
};
AdjointReport adjoint_deformed(const DeformedFieldDescriptor& desc, const std::vector<FockState>& states);

struct CovarianceResult {
  FockState lhs;
  FockState rhs;
  double deviation = 0.0;
  double intertwining_defect = 0.0;
};
// sigma = -1 when W is antiunitary; theta' = sigma M theta M^T.
CovarianceResult covariance_transport(const Conjugation& W, const Mat& M, const OpPtr& A, const ThetaMatrix& theta,
                                      const Generator& X, const FockState& psi, double tol = 1e-12);

}  // namespace warpfock
