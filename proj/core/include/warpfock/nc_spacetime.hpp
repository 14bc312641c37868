#pragma once

#include <optional>
#include <string>
#include <vector>

#include "warpfock/deformation.hpp"

namespace warpfock {

// e^{i p xhat} with accumulated scalar phase.
struct WeylWord {
  Vec total;
  cplx phase{1.0, 0.0};
  std::vector<Vec> history;

  static WeylWord generator(const Vec& p);
};

// e^{ip xhat} e^{iq xhat} = e^{i p theta q} e^{i(p+q) xhat}
WeylWord weyl_multiply(const WeylWord& a, const WeylWord& b, const ThetaMatrix& theta);

struct CoordinateCommutator {
  bool supported = false;
  ThetaMatrix theta;
  std::string reason;
};
CoordinateCommutator coordinate_commutator(const OneParticleUnitary& V, const ThetaMatrix& theta);

// Uniform lattice k = spacing * (i_0, ..., i_{d-1}), i_mu in [-half, half].
struct MomentumLattice {
  int d = 2;
  int half = 20;
  double spacing = 0.25;

  int side() const { return 2 * half + 1; }
  int64_t size() const;
  Vec point(int64_t flat) const;
  // Flat index of integer coordinates, or -1 outside the lattice.
  int64_t flat(const std::vector<int>& idx) const;
};

// Transform sum f(x) exp(i k.x) at every lattice point; RangeError when the edge carries more than tol of the peak.
CVec lattice_transform(const TestFunction& f, const MomentumLattice& lat, double alias_tol = 1e-8);
// exp(-i q theta k)
cplx twist_phase(const Vec& q, const Vec& k, const ThetaMatrix& theta);
// (2 pi)^-d sum_q a(q) b(k - q) exp(-i q theta (k - q)) spacing^d
CVec twisted_convolution(const CVec& a, const CVec& b, const ThetaMatrix& theta, const MomentumLattice& lat);
CVec moyal_star(const TestFunction& f1, const TestFunction& f2, const ThetaMatrix& theta, const MomentumLattice& lat,
                double alias_tol = 1e-8);

struct NPointResult {
  cplx value{0.0, 0.0};
  bool parity_zero = false;
};
// Wick contractions with Weyl-word bookkeeping; annihilators carry W(-x), creators W(+x).
NPointResult twisted_npoint(const std::vector<SmearedFieldDescriptor>& fields, const ThetaMatrix& theta,
                            const OneParticleUnitary& V);
// <Omega, phi_{theta,X}(f_1) ... phi_{theta,X}(f_n) Omega> on the Fock side.
cplx fock_npoint(const std::vector<SmearedFieldDescriptor>& fields, const ThetaMatrix& theta,
                 const OneParticleUnitary& V);

struct EquivalenceReport {
  double max_deviation = 0.0;
  double scale = 0.0;
  double relative = 0.0;
};
// Two-particle components of phi_{x,P}(f1) phi_{x,P}(f2) against the twisted-kernel smearing of the Wick square.
EquivalenceReport twisted_product_equivalence(const TestFunction& f1, const TestFunction& f2,
                                              const ThetaMatrix& theta, const GridPtr& grid);

struct IsomorphismReport {
  std::vector<int> orders;
  std::vector<cplx> lhs;
  std::vector<cplx> rhs;
  double max_deviation = 0.0;
  std::optional<ThetaMatrix> commutator;
};
IsomorphismReport isomorphism_check(const std::vector<SmearedFieldDescriptor>& fields, const ThetaMatrix& theta,
                                    const OneParticleUnitary& V);

}  // namespace warpfock
