#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "dicke/mpo.hpp"
#include "dicke/mps.hpp"
#include "dicke/nlce.hpp"

using namespace dicke;
using namespace dicke::nlce;

namespace {

dmrg::ClusterSolution fake(std::size_t n, double energy, double sx, double sz_alternating) {
  dmrg::ClusterSolution s;
  s.n_sites = n;
  s.energy = energy;
  s.converged = true;
  for (std::size_t i = 0; i < n; ++i) {
    s.sx_profile.push_back(sx);
    s.sz_profile.push_back((i + 1) % 2 == 0 ? sz_alternating : -sz_alternating);
  }
  return s;
}

dmrg::ClusterSolution solve(double J, double eps, double h, std::size_t n) {
  ModelParams p;
  p.J = J;
  p.eps = eps;
  p.g = 1.0;
  return dmrg::dmrg_ground(dmrg::build_mpo(p, {h, 0.0}, n, false),
                           dmrg::product_state(n, dmrg::ProductPattern::plus_x), {});
}

}  // namespace

TEST(Nlce, SizeRules) {
  EXPECT_NO_THROW(check_sizes(100, 101, Mode::ferro_step1));
  EXPECT_NO_THROW(check_sizes(100, 102, Mode::af_step2));
  EXPECT_THROW(check_sizes(100, 102, Mode::ferro_step1), InvalidInput);
  EXPECT_THROW(check_sizes(101, 103, Mode::af_step2), InvalidInput);
  EXPECT_THROW(check_sizes(100, 101, Mode::af_step2), InvalidInput);
  EXPECT_THROW(check_sizes(0, 1, Mode::ferro_step1), InvalidInput);
}

TEST(Nlce, TelescopeHalvesInAfMode) {
  EXPECT_DOUBLE_EQ(telescope(-10.0, 10, -11.5, 11, Mode::ferro_step1), -1.5);
  EXPECT_DOUBLE_EQ(telescope(-10.0, 10, -13.0, 12, Mode::af_step2), -1.5);
}

TEST(Nlce, ExtensiveLinearQuantitiesAreExact) {
  // E(N) = a N + b: the bulk estimate is a for either mode.
  const double a = -0.37, b = 0.11;
  ClusterPair f{fake(20, a * 20 + b, 0.3, 0.2), fake(21, a * 21 + b, 0.3, 0.2), Mode::ferro_step1};
  EXPECT_NEAR(bulk_energy(f), a, 1e-14);
  ClusterPair af{fake(20, a * 20 + b, 0.3, 0.2), fake(22, a * 22 + b, 0.3, 0.2), Mode::af_step2};
  EXPECT_NEAR(bulk_energy(af), a, 1e-14);
  // Uniform <sigma_x> = 0.3 per site gives m_x = 0.15; alternating sigma_z = 0.2 gives m_s = 0.1.
  const auto est = bulk_estimate(af);
  EXPECT_NEAR(est.mx_per_site, 0.15, 1e-14);
  EXPECT_NEAR(est.ms_per_site, 0.1, 1e-14);
  EXPECT_EQ(est.range, 20u);
}

TEST(Nlce, ProfileLengthMismatchRejected) {
  auto s = fake(10, 0.0, 0.0, 0.0);
  s.sx_profile.pop_back();
  EXPECT_THROW(bulk_energy({s, fake(11, 0.0, 0.0, 0.0), Mode::ferro_step1}), InvalidInput);
}

TEST(Nlce, ReducedContributionsTelescope) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> m(1 + static_cast<std::size_t>(t % 30));
    for (auto& x : m) x = val(rng);
    const auto red = reduced_contributions(m);
    const double sum = std::accumulate(red.begin(), red.end(), 0.0);
    EXPECT_NEAR(sum, m.back() - (m.size() > 1 ? m[m.size() - 2] : 0.0), 1e-12);
  }
}

TEST(Nlce, ReducedContributionsFirstTerms) {
  const auto r = reduced_contributions({1.0, 5.0, 14.0});
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_DOUBLE_EQ(r[1], 3.0);        // 5 - 2 * 1
  EXPECT_DOUBLE_EQ(r[2], 14.0 - 3.0 * 1.0 - 2.0 * 3.0);
}

TEST(Nlce, DecoupledSitesGiveSingleSiteEnergy) {
  const double h = 0.3, eps = 0.4;
  ClusterPair pair{solve(0.0, eps, h, 8), solve(0.0, eps, h, 9), Mode::ferro_step1};
  EXPECT_NEAR(bulk_energy(pair), -std::hypot(h, eps), 1e-10);
  EXPECT_NEAR(bulk_observable(pair, Observable::sum_sx), 0.5 * h / std::hypot(h, eps), 1e-8);
}

TEST(Nlce, ConvergenceScanSettlesInGappedPhase) {
  auto solver = [](std::size_t a, std::size_t b) {
    return ClusterPair{solve(-0.2, 0.1, 0.3, a), solve(-0.2, 0.1, 0.3, b), Mode::ferro_step1};
  };
  const auto scan = convergence_scan(solver, {{10, 11}, {20, 21}, {30, 31}}, 1e-8);
  ASSERT_EQ(scan.estimates.size(), 3u);
  EXPECT_TRUE(scan.converged);
  EXPECT_THROW(convergence_scan(solver, {{20, 21}, {10, 11}}, 1e-8), InvalidInput);
}

TEST(Nlce, ConvergenceScanRejectsUnconvergedClusters) {
  auto solver = [](std::size_t a, std::size_t b) {
    ClusterPair p{fake(a, 0.0, 0.0, 0.0), fake(b, 0.0, 0.0, 0.0), Mode::ferro_step1};
    p.large.converged = false;
    return p;
  };
  EXPECT_THROW(convergence_scan(solver, {{10, 11}}, 1e-8), NotConverged);
}
