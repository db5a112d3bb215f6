#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "dicke/meanfield.hpp"

using namespace dicke;
using namespace dicke::mf;

namespace {

ModelParams params(double J, double eps, double g) {
  ModelParams p;
  p.J = J;
  p.eps = eps;
  p.g = g;
  return p;
}

}  // namespace

TEST(MeanField, EnergyAtOptimalAlphaMatchesReducedForm) {
  const auto p = params(0.2, 0.3, 0.9);
  MeanFieldState s;
  s.theta_A = 1.1;
  s.phi_A = 0.2;
  s.theta_B = 2.0;
  s.phi_B = 0.1;
  s.alpha = optimal_alpha(p, s);
  const double sx = s.nx_A() + s.nx_B();
  const double reduced = -p.g * p.g / 16.0 * sx * sx + p.eps * (s.nz_A() + s.nz_B()) / 2.0 + p.J * s.nz_A() * s.nz_B();
  EXPECT_NEAR(mf_energy(p, s), reduced, 1e-15);
  // Optimal alpha is a minimum in alpha.
  auto shifted = s;
  shifted.alpha += 1e-3;
  EXPECT_GT(mf_energy(p, shifted), mf_energy(p, s));
}

TEST(MeanField, DickeThresholdAtZeroCoupling) {
  const double eps = 0.3;
  const auto b = mf_boundary(params(0.0, eps, 0.0), Axis::g, 0.3, 1.2, is_superradiant, 1e-7);
  EXPECT_NEAR(b.location, std::sqrt(2.0 * eps), 1e-6);
}

TEST(MeanField, DickeClosedFormAboveThreshold) {
  // g = 1, eps = 0.3: nx per sublattice 0.8, alpha = -0.4, e = -0.34.
  const auto s = mf_minimize(params(0.0, 0.3, 1.0));
  EXPECT_NEAR(s.alpha, -0.4, 1e-9);
  EXPECT_NEAR(s.energy_per_site, -0.34, 1e-12);
  EXPECT_EQ(mf_classify(s), Phase::PS);
}

TEST(MeanField, FerroOnsetMatchesStabilityThreshold) {
  const auto p = params(-0.2, 0.3, 0.0);
  EXPECT_NEAR(g_crit_ferro(p), std::sqrt(0.6 + 0.8), 1e-15);
  const auto b = mf_boundary(p, Axis::g, 1.0, 1.4, is_superradiant, 1e-7);
  EXPECT_NEAR(b.location, g_crit_ferro(p), 1e-6);
}

TEST(MeanField, ClosedFormsRejectWrongSign) {
  EXPECT_THROW(g_crit_ferro(params(0.2, 0.3, 1.0)), InvalidInput);
  EXPECT_THROW(weak_energy_ferro(params(0.2, 0.3, 1.0)), InvalidInput);
  EXPECT_THROW(classical_af_boundary(-0.1), InvalidInput);
  EXPECT_DOUBLE_EQ(weak_energy_ferro(params(-0.2, 0.3, 1.0)), -0.5);
  EXPECT_DOUBLE_EQ(classical_af_boundary(0.2), 0.4);
}

TEST(MeanField, ClassicalAfBoundaryAtZeroCoupling) {
  const auto b = mf_boundary(params(0.2, 0.0, 0.0), Axis::eps, 0.3, 0.5, is_antiferro, 1e-7);
  EXPECT_NEAR(b.location, classical_af_boundary(0.2), 1e-6);
}

TEST(MeanField, TableBoundaries) {
  const auto p = params(0.2, 0.0, 0.52);
  EXPECT_NEAR(mf_boundary(p, Axis::eps, 0.45, 0.60, is_superradiant).location, 0.5352, 5e-4);
  EXPECT_NEAR(mf_boundary(p, Axis::eps, 0.30, 0.335, is_superradiant).location, 0.3254, 5e-4);
}

TEST(MeanField, RepresentativeConventions) {
  for (double g : {0.4, 0.9, 1.3}) {
    for (double J : {-0.3, 0.3}) {
      const auto s = mf_minimize(params(J, 0.3, g));
      EXPECT_LE(s.alpha, 0.0);
      EXPECT_GE(s.nz_A(), s.nz_B());
    }
  }
}

TEST(MeanField, SeedOrderDoesNotChangeResult) {
  const auto p = params(0.2, 0.33, 0.52);
  const auto a = mf_minimize(p);
  MinimizeOptions o;
  o.order_seed = 12345;
  const auto b = mf_minimize(p, o);
  EXPECT_NEAR(a.energy_per_site, b.energy_per_site, 1e-14);
  EXPECT_EQ(mf_classify(a), mf_classify(b));
}

TEST(MeanField, AntiferroSuperradiantOnlyForPositiveCoupling) {
  std::set<Phase> seen;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const double g = 0.2 + 1.3 * i / 20.0;
      const double J = -0.5 + 1.0 * j / 20.0;
      const auto ph = mf_phase_at(params(J, 0.3, g));
      seen.insert(ph);
      if (ph == Phase::AS) EXPECT_GT(J, 0.0);
    }
  }
  EXPECT_EQ(seen.size(), 4u);
}

TEST(MeanField, BracketMustStraddle) {
  EXPECT_THROW(mf_boundary(params(0.0, 0.3, 0.0), Axis::g, 0.1, 0.2, is_superradiant), BracketError);
  EXPECT_THROW(mf_boundary(params(0.0, 0.3, 0.0), Axis::g, 0.1, 1.2, is_superradiant, 0.0), InvalidInput);
}

TEST(MeanField, DiamagneticRenormalization) {
  auto p = params(0.0, 0.3, 0.8);
  p.D = 0.0;
  auto r = renormalize_A2(p);
  EXPECT_DOUBLE_EQ(r.omega_c, 1.0);
  EXPECT_DOUBLE_EQ(r.g, 0.8);
  p.D = 0.75;
  r = renormalize_A2(p);
  EXPECT_NEAR(r.omega_c, 2.0, 1e-15);
  EXPECT_NEAR(r.g, 0.8 / std::sqrt(2.0), 1e-15);
  EXPECT_FALSE(r.D.has_value());
  p.D = -0.1;
  EXPECT_THROW(renormalize_A2(p), InvalidInput);
}

TEST(MeanField, TrkBound) {
  EXPECT_NEAR(trk_min_D(params(0.0, 0.5, 1.0)), 1.0, 1e-15);
  EXPECT_THROW(trk_min_D(params(0.0, 0.0, 1.0)), InvalidInput);
}

TEST(MeanField, RejectsNonFiniteInput) {
  EXPECT_THROW(mf_minimize(params(NAN, 0.3, 1.0)), InvalidInput);
  MinimizeOptions o;
  o.seeds = 0;
  EXPECT_THROW(mf_minimize(params(0.0, 0.3, 1.0), o), InvalidInput);
}
