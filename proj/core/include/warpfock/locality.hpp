#pragma once

#include <optional>
#include <vector>

#include "warpfock/deformation.hpp"

namespace warpfock {

struct ResidualResult {
  cplx i1{0.0, 0.0};
  cplx i2{0.0, 0.0};
  cplx residual{0.0, 0.0};
  double relative = 0.0;  // |I1 - I2| / max(|I1|, |I2|)
  // |I1 on the shifted contour - I2| / max(|I1|, |I2|); rapidity grids with Lorentz-type V only.
  std::optional<double> contour_gap;
};

ResidualResult commutator_residual(const TestFunction& f, const TestFunction& g, const ThetaMatrix& theta,
                                   const OneParticleUnitary& V, const GridPtr& grid, const Vec& x, const Vec& y);

// max_i |f^-(p_perp, theta_i + i pi) - f^+(-p_perp, theta_i)|
double contour_identity_defect(const TestFunction& f, const GridPtr& grid);

struct CommutatorNorm {
  double norm = 0.0;
  double scale = 0.0;  // max of the two ordered products
  double relative = 0.0;
};

CommutatorNorm full_commutator_norm(const TestFunction& f, const TestFunction& g, const Wedge& w, const Wedge& w_opp,
                                    const OneParticleUnitary& V, const FockState& psi, double lambda, double eta = 0.0,
                                    bool check_supports = true);

enum class Direction { In, Out };

// Weights 1/4, 1/2, 1/4 on neighbouring rapidity nodes.
OnShellFunction sharp_packet(const GridPtr& grid, int node);
// f_t on shell: values scaled by exp(i (p_0 - omega_p) t).
OnShellFunction time_evolved(const OnShellFunction& f, double t);

FockState two_particle_state(const OnShellFunction& f, const OnShellFunction& g, const Wedge& w,
                             const ThetaMatrix& theta, const OneParticleUnitary& V, Direction dir, int n_max = 2,
                             double threshold = 1e-3);

struct SMatrixResult {
  cplx s{1.0, 0.0};
  bool reference_wedge = true;  // false when the ordering used -W1
};
SMatrixResult s_matrix_phase(const OnShellFunction& f, const OnShellFunction& g, const ThetaMatrix& theta,
                             const OneParticleUnitary& V, double threshold = 1e-3);

struct BoundSample {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};
// ||phi_{theta,X}(f) U(x) psi|| against (||f+|| + ||f-||) ||(N+1)^{1/2} psi|| + slack.
std::vector<BoundSample> tempered_bound(const DeformedFieldDescriptor& desc, const FockState& psi,
                                        const std::vector<Vec>& translations, double slack = 1e-10);
// ||phi_{theta,X}(f) (U(x0 / 2^k) - 1) psi|| for k = 0..count-1.
std::vector<double> continuity_surrogate(const DeformedFieldDescriptor& desc, const FockState& psi, const Vec& x0,
                                         int count);

}  // namespace warpfock
