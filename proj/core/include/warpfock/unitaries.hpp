#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "warpfock/fock.hpp"

namespace warpfock {

enum class UnitaryKind { Identity, BoostStabilizer, MomentumShift, Dilation, Translation, Composition };

struct OneParticleUnitary {
  UnitaryKind kind = UnitaryKind::Identity;
  double chi = 0.0;     // boost rapidity
  double angle = 0.0;   // rotation of the perpendicular plane
  Vec k;                // momentum shift (spatial)
  double b = 0.0;       // dilation
  Vec a;                // translation
  std::vector<OneParticleUnitary> parts;  // applied right to left

  static OneParticleUnitary identity();
  static OneParticleUnitary boost(double chi, double angle = 0.0);
  static OneParticleUnitary momentum_shift(const Vec& k);
  static OneParticleUnitary dilation(double b);
  static OneParticleUnitary translation(const Vec& a);
  static OneParticleUnitary composition(std::vector<OneParticleUnitary> parts);

  std::string describe() const;
  nlohmann::json to_json() const;
  static OneParticleUnitary from_json(const nlohmann::json& j);
  // Lorentz part when the variant has one (identity, boosts and their compositions).
  std::optional<LorentzTransform> lorentz(int d) const;
};

struct Realization {
  ScaledPermutation op;
  // Nodes whose image wrapped around the grid edge.
  std::vector<int> wrapped;
};

// Throws RealizabilityError (naming the nearest lattice-compatible parameter) or ConfigError.
Realization realize(const OneParticleUnitary& v, const GridPtr& grid);

struct UnitaryResult {
  OnShellFunction value;
  double boundary_loss = 0.0;  // relative norm carried by wrapped nodes
  bool range_warning = false;  // boundary_loss above 1e-8
};

UnitaryResult apply_unitary(const OneParticleUnitary& v, const OnShellFunction& h);
FockState second_quantize_apply(const OneParticleUnitary& v, const FockState& psi);

enum class Tristate { False, True, Indeterminate };
Tristate supports_wedge_covariance(const OneParticleUnitary& v, const TestFunction& f, const Wedge& w);

using SparseC = Eigen::SparseMatrix<cplx>;
// X[mu][n] = Gamma(V^-1) P_mu Gamma(V) restricted to sector n, node basis.
std::vector<std::vector<SparseC>> conjugated_generator_matrices(const OneParticleUnitary& v, const GridPtr& grid,
                                                                int n_max);
double generator_commutator_norm(const std::vector<std::vector<SparseC>>& x);
// Max deviation between sorted diagonal spectra of X_mu and P_mu, all sectors.
double isospectrality_defect(const std::vector<std::vector<SparseC>>& x, const GridPtr& grid, int n_max);

struct CatalogEntry {
  std::string name;
  OneParticleUnitary v;
  GridPtr grid;
};
// Cataloged unitaries on default-sized grids with the given rapidity node count.
std::vector<CatalogEntry> unitary_catalog(int n_nodes = 64);

}  // namespace warpfock
