#include <gtest/gtest.h>

#include <cmath>

#include "oracle_values.hpp"
#include "util.hpp"

using namespace wt;

TEST(Unitaries, IdentityLeavesFunctions) {
  const GridPtr g = small_rapidity(8);
  std::mt19937_64 rng(1);
  const OnShellFunction h = osf(g, random_c(g, rng));
  const auto r = apply_unitary(OneParticleUnitary::identity(), h);
  EXPECT_EQ((r.value.values - h.values).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Unitaries, BoostOneStepPermutes) {
  const GridPtr g = small_rapidity(8);
  std::mt19937_64 rng(2);
  const OnShellFunction h = osf(g, random_c(g, rng));
  const auto r = apply_unitary(OneParticleUnitary::boost(g->step()), h);
  for (int j = 1; j < 8; ++j) EXPECT_EQ(r.value.values(j), h.values(j - 1));
  EXPECT_NEAR(r.value.norm(), h.norm(), 1e-15);
  EXPECT_FALSE(r.range_warning);
}

TEST(Unitaries, BoundaryLossReported) {
  const GridPtr g = small_rapidity(8);
  OnShellFunction h = OnShellFunction::zeros(g);
  h.values(7) = 1.0;
  const auto r = apply_unitary(OneParticleUnitary::boost(g->step()), h);
  EXPECT_TRUE(r.range_warning);
  EXPECT_GT(r.boundary_loss, 0.5);
}

TEST(Unitaries, NonLatticeBoostRejected) {
  const GridPtr g = small_rapidity(8);
  try {
    realize(OneParticleUnitary::boost(0.3 * g->step()), g);
    FAIL();
  } catch (const RealizabilityError& e) {
    EXPECT_NE(std::string(e.what()).find("nearest"), std::string::npos);
  }
}

TEST(Unitaries, DilationPreservesMasslessNorm) {
  const GridPtr g = MassShellGrid::log_momentum(-6.0, 6.0, 240);
  OnShellFunction h = OnShellFunction::zeros(g);
  for (int i = 0; i < g->size(); ++i) {
    const double u = std::log(std::abs(g->nodes[i](1)));
    h.values(i) = std::exp(-u * u);
  }
  EXPECT_NEAR(h.norm() * h.norm(), oracle::kMasslessNormSq, 1e-10);
  const auto r = apply_unitary(OneParticleUnitary::dilation(2.0 * g->step()), h);
  EXPECT_NEAR(r.value.norm(), h.norm(), 1e-12);
}

TEST(Unitaries, MomentumShiftUnitary) {
  const GridPtr g = MassShellGrid::momentum(1.0, 6.0, 60);
  std::mt19937_64 rng(3);
  const OnShellFunction h = osf(g, random_c(g, rng));
  Vec k(1);
  k(0) = 2.0 * g->step();
  const auto r = apply_unitary(OneParticleUnitary::momentum_shift(k), h);
  EXPECT_NEAR(r.value.norm(), h.norm(), 1e-13);
}

TEST(Unitaries, CompositionAndJson) {
  const GridPtr g = small_rapidity(8);
  const auto c = OneParticleUnitary::composition({OneParticleUnitary::boost(2 * g->step()),
                                                  OneParticleUnitary::boost(-g->step())});
  const auto one = realize(OneParticleUnitary::boost(g->step()), g).op;
  const auto comp = realize(c, g).op;
  EXPECT_EQ(one.perm, comp.perm);
  const auto back = OneParticleUnitary::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_THROW(OneParticleUnitary::from_json(nlohmann::json{{"variant", "bogus"}}), Error);
}

TEST(Unitaries, WedgeCovariance) {
  const Wedge w = Wedge::reference(2);
  const TestFunction f = TestFunction::bump(vec({0.0, 3.0}), vec({0.5, 0.5}));
  EXPECT_EQ(supports_wedge_covariance(OneParticleUnitary::boost(0.7), f, w), Tristate::True);
  EXPECT_EQ(supports_wedge_covariance(OneParticleUnitary::dilation(0.4), f, w), Tristate::True);
  EXPECT_EQ(supports_wedge_covariance(OneParticleUnitary::dilation(-0.4), f, w), Tristate::True);
  Vec k(1);
  k(0) = 0.3;
  EXPECT_EQ(supports_wedge_covariance(OneParticleUnitary::momentum_shift(k), f, w), Tristate::True);
  EXPECT_EQ(supports_wedge_covariance(OneParticleUnitary::translation(vec({0.0, -2.8})), f, w), Tristate::False);
  EXPECT_THROW(supports_wedge_covariance(OneParticleUnitary::identity(), f, Wedge::opposite(2)), PreconditionError);
}

TEST(Unitaries, GeneratorsCommuteAndAreIsospectral) {
  for (const auto& e : unitary_catalog(16)) {
    const auto x = conjugated_generator_matrices(e.v, e.grid, 3);
    EXPECT_LE(generator_commutator_norm(x), 1e-12) << e.name;
    EXPECT_LE(isospectrality_defect(x, e.grid, 3), 1e-12) << e.name;
  }
}

TEST(Unitaries, IdentityGeneratorIsMomentum) {
  const GridPtr g = small_rapidity(6);
  const auto x = conjugated_generator_matrices(OneParticleUnitary::identity(), g, 2);
  for (int mu = 0; mu < 2; ++mu) {
    const CMat d = CMat(x[mu][2]);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) EXPECT_NEAR(std::abs(d(i * 6 + j, i * 6 + j) - (g->nodes[i](mu) + g->nodes[j](mu))), 0.0, 1e-13);
    EXPECT_NEAR((d - CMat(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0, 0.0);
  }
}
