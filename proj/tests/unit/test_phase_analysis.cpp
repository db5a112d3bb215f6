#include <gtest/gtest.h>

#include <cmath>

#include "dicke/phase_analysis.hpp"

using namespace dicke;
using namespace dicke::phase;

namespace {

sc::ConvergedPoint point(double energy, double m_x, double m_s) {
  sc::ConvergedPoint p;
  p.energy_per_site = energy;
  p.fields = {m_x, m_s};
  p.converged = true;
  p.classification = sc::classify(p.fields, 1e-6);
  return p;
}

// Two metastable branches: ordered (AN) with E = x - 0.8 and normal polarized
// (PN) with E = -x, crossing at x = 0.4. Each branch survives past the
// crossing and dies at its own spinodal.
sc::SweepBranch hysteresis_branch(bool ascending, double lo, double hi, double step) {
  sc::SweepBranch b;
  b.swept = SweepVar::eps;
  b.direction = ascending ? sc::Direction::ascending : sc::Direction::descending;
  const int n = static_cast<int>(std::lround((hi - lo) / step));
  for (int k = 0; k <= n; ++k) {
    const double x = ascending ? lo + k * step : hi - k * step;
    const bool ordered = ascending ? x < 0.43 : x < 0.37;
    b.values.push_back(x);
    b.points.push_back(ordered ? point(x - 0.8, 0.0, 0.5) : point(-x, 0.0, 0.0));
  }
  return b;
}

// m_x = sqrt(x - x0) above x0: a continuous onset.
sc::ConvergedPoint mean_field_like(double x, double x0) {
  const double m = x > x0 ? std::sqrt(x - x0) : 0.0;
  return point(-(x > x0 ? (x - x0) * (x - x0) : 0.0) - x, m, 0.0);
}

sc::SweepBranch onset_branch(bool ascending, double x0) {
  sc::SweepBranch b;
  b.swept = SweepVar::g;
  b.direction = ascending ? sc::Direction::ascending : sc::Direction::descending;
  for (int k = 0; k <= 20; ++k) {
    const double x = ascending ? 0.5 + 0.01 * k : 0.7 - 0.01 * k;
    b.values.push_back(x);
    b.points.push_back(mean_field_like(x, x0));
  }
  return b;
}

}  // namespace

TEST(PhaseAnalysis, CrossingOfHysteresisBranches) {
  const auto up = hysteresis_branch(true, 0.30, 0.50, 0.01);
  const auto down = hysteresis_branch(false, 0.30, 0.50, 0.01);
  const auto pb = detect_first_order(up, down);
  ASSERT_TRUE(pb.has_value());
  EXPECT_EQ(pb->kind, Kind::first_order);
  EXPECT_EQ(pb->evidence, Evidence::branch_crossing);
  EXPECT_NEAR(pb->location, 0.4, 1e-9);
  EXPECT_LE(pb->uncertainty, 0.01 + 1e-12);
  EXPECT_EQ(pb->below, Phase::AN);
  EXPECT_EQ(pb->above, Phase::PN);
  EXPECT_FALSE(pb->low_confidence);
  // The crossing, not the window midpoint.
  EXPECT_NEAR(pb->window_lo, 0.37, 1e-9);
  EXPECT_NEAR(pb->window_hi, 0.42, 1e-9);
}

TEST(PhaseAnalysis, NoWindowNoFirstOrder) {
  const auto up = onset_branch(true, 0.6);
  const auto down = onset_branch(false, 0.6);
  EXPECT_FALSE(detect_first_order(up, down).has_value());
}

TEST(PhaseAnalysis, BranchesMustMatch) {
  auto up = hysteresis_branch(true, 0.30, 0.50, 0.01);
  auto down = hysteresis_branch(false, 0.30, 0.50, 0.01);
  down.swept = SweepVar::g;
  EXPECT_THROW(detect_first_order(up, down), InvalidInput);
  const auto shorter = hysteresis_branch(false, 0.30, 0.45, 0.01);
  EXPECT_THROW(detect_first_order(up, shorter), InvalidInput);
}

TEST(PhaseAnalysis, ContinuousOnsetRefinedByBisection) {
  const double x0 = 0.6123;
  const auto up = onset_branch(true, x0);
  const auto down = onset_branch(false, x0);
  Refiner refine = [&](double v, const sc::ConvergedPoint&, const sc::WarmStates*) {
    return mean_field_like(v, x0);
  };
  ContinuousOptions opts;
  opts.tol = 1e-4;
  opts.partner = &down;
  const auto bs = detect_continuous(up, OrderParam::m_x, &refine, opts);
  ASSERT_EQ(bs.size(), 1u);
  EXPECT_EQ(bs[0].kind, Kind::continuous);
  EXPECT_NEAR(bs[0].location, x0, 1e-4);
  EXPECT_LE(bs[0].uncertainty, 1e-4);
  EXPECT_EQ(bs[0].below, Phase::PN);
  EXPECT_EQ(bs[0].above, Phase::PS);

  // Same answer from the descending branch.
  opts.partner = &up;
  const auto rev = detect_continuous(down, OrderParam::m_x, &refine, opts);
  ASSERT_EQ(rev.size(), 1u);
  EXPECT_NEAR(rev[0].location, bs[0].location, 2.0 * opts.tol);
}

TEST(PhaseAnalysis, DisagreeingPartnerMarksFirstOrder) {
  const auto up = onset_branch(true, 0.6123);
  const auto down = onset_branch(false, 0.55);
  ContinuousOptions opts;
  opts.partner = &down;
  const auto bs = detect_continuous(up, OrderParam::m_x, nullptr, opts);
  ASSERT_EQ(bs.size(), 1u);
  EXPECT_EQ(bs[0].kind, Kind::first_order);
}

TEST(PhaseAnalysis, SlopeJumpMarksFirstOrder) {
  // Energy kink: slope changes from -1 to -3 at the onset.
  sc::SweepBranch b;
  b.swept = SweepVar::g;
  for (int k = 0; k <= 20; ++k) {
    const double x = 0.5 + 0.01 * k;
    b.values.push_back(x);
    const bool on = x > 0.605;
    b.points.push_back(point(on ? -0.6 - 3.0 * (x - 0.6) : -x, on ? 0.3 : 0.0, 0.0));
  }
  const auto bs = detect_continuous(b, OrderParam::m_x, nullptr);
  ASSERT_EQ(bs.size(), 1u);
  EXPECT_EQ(bs[0].kind, Kind::first_order);
}

TEST(PhaseAnalysis, AnalyzeSweepKeepsCrossingOverOnsets) {
  BranchPair pair{hysteresis_branch(true, 0.30, 0.50, 0.01), hysteresis_branch(false, 0.30, 0.50, 0.01)};
  const auto bs = analyze_sweep(pair, nullptr);
  ASSERT_EQ(bs.size(), 1u);
  EXPECT_EQ(bs[0].evidence, Evidence::branch_crossing);
}

TEST(PhaseAnalysis, SyntheticCubicDeltaE) {
  // |delta_e| = c (x* - eps)^3 below x*, zero above: the floor crossing sits
  // at x* - (floor / c)^(1/3).
  const double c = 1.4, xs = 0.2, floor = 1e-10;
  auto de = [&](double eps) {
    DeltaEResult r;
    r.eps = eps;
    r.delta_e = eps < xs ? -c * std::pow(xs - eps, 3) : 0.0;
    r.below_floor = std::abs(r.delta_e) < floor;
    return r;
  };
  const double expect = xs - std::cbrt(floor / c);
  const auto a = multicritical_bisect(de, 0.15, 0.30, 1e-6);
  EXPECT_NEAR(a.eps_star, expect, 1e-6);
  EXPECT_LE(a.uncertainty, 1e-6);
  // Independent of the bracket.
  const auto b = multicritical_bisect(de, 0.10, 0.25, 1e-6);
  EXPECT_NEAR(a.eps_star, b.eps_star, 2e-6);
  EXPECT_GE(a.steps.size(), 3u);
}

TEST(PhaseAnalysis, BisectionNeedsStraddlingBracket) {
  auto de = [](double eps) {
    DeltaEResult r;
    r.eps = eps;
    r.delta_e = -1e-3;
    return r;
  };
  try {
    multicritical_bisect(de, 0.1, 0.2, 1e-4);
    FAIL() << "expected BracketError";
  } catch (const BracketError& e) {
    EXPECT_DOUBLE_EQ(e.value_lo(), 0.1);
    EXPECT_DOUBLE_EQ(e.value_hi(), 0.2);
    EXPECT_NE(std::string(e.what()).find("-0.001"), std::string::npos);
  }
  EXPECT_THROW(multicritical_bisect(de, 0.2, 0.1, 1e-4), InvalidInput);
}

TEST(PhaseAnalysis, DeltaERequiresFerroCoupling) {
  EXPECT_THROW(delta_e_at_mf_critical(0.0, 0.2), InvalidInput);
  EXPECT_THROW(delta_e_at_mf_critical(0.2, 0.2), InvalidInput);
}

TEST(PhaseAnalysis, SweepGrid) {
  const auto g = sweep_grid(0.25, 0.30, 0.01);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_DOUBLE_EQ(g.front(), 0.25);
  EXPECT_DOUBLE_EQ(g.back(), 0.30);
  const auto f = sweep_grid(0.0, 0.1, 0.05, {{0.02, 0.04, 0.01}});
  const std::vector<double> expect{0.0, 0.02, 0.03, 0.04, 0.09, 0.1};
  ASSERT_EQ(f.size(), expect.size());
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(f[i], expect[i], 1e-12);
  EXPECT_THROW(sweep_grid(0.3, 0.3, 0.01), InvalidInput);
  EXPECT_THROW(sweep_grid(0.31, 0.30, 0.01), InvalidInput);
  EXPECT_THROW(sweep_grid(0.2, 0.3, 0.0), InvalidInput);
}

TEST(PhaseAnalysis, Profiles) {
  EXPECT_EQ(profile_from_string("default"), Profile::standard);
  EXPECT_EQ(profile_from_string("tight"), Profile::tight);
  EXPECT_THROW(profile_from_string("loose"), InvalidInput);
  EXPECT_DOUBLE_EQ(profile_settings(Profile::standard).delta_e_floor, 1e-10);
  EXPECT_DOUBLE_EQ(profile_settings(Profile::tight).delta_e_floor, 1e-12);
  EXPECT_DOUBLE_EQ(profile_settings(Profile::tight).fixed_point.tol, 1e-13);
  EXPECT_DOUBLE_EQ(profile_settings(Profile::tight).dmrg.energy_tol, 1e-14);
}
