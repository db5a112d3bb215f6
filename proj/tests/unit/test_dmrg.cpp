#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dicke/dmrg.hpp"
#include "dicke/exact_diag.hpp"
#include "dicke/mpo.hpp"
#include "dicke/mps.hpp"

using namespace dicke;
using namespace dicke::dmrg;

namespace {

// Independent dense assembly from Kronecker products of Pauli matrices.
DenseMatrix kron_chain(const std::vector<Eigen::Matrix2d>& ops) {
  DenseMatrix m = DenseMatrix::Ones(1, 1);
  for (const auto& op : ops) {
    DenseMatrix next(m.rows() * 2, m.cols() * 2);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) next.block(i * 2, j * 2, 2, 2) = m(i, j) * op;
    m = next;
  }
  return m;
}

DenseMatrix oracle_hamiltonian(double h, double eps, double J, double b1, double bn, int n) {
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d X;
  X << 0, 1, 1, 0;
  Eigen::Matrix2d Z;
  Z << 1, 0, 0, -1;
  const int dim = 1 << n;
  DenseMatrix H = DenseMatrix::Zero(dim, dim);
  auto term = [&](std::vector<std::pair<int, Eigen::Matrix2d>> ops) {
    std::vector<Eigen::Matrix2d> chain(static_cast<std::size_t>(n), I);
    for (auto& [site, op] : ops) chain[static_cast<std::size_t>(site)] = op;
    return kron_chain(chain);
  };
  for (int i = 0; i < n; ++i) {
    H += -h * term({{i, X}}) + eps * term({{i, Z}});
    if (i + 1 < n) H += J * term({{i, Z}, {i + 1, Z}});
  }
  H += b1 * term({{0, Z}}) + bn * term({{n - 1, Z}});
  return H;
}

ModelParams params(double J, double eps, double g) {
  ModelParams p;
  p.J = J;
  p.eps = eps;
  p.g = g;
  return p;
}

// Parameters giving h_x directly with g = 1, omega = 1.
ModelParams with_field(double J, double eps) { return params(J, eps, 1.0); }

ClusterSolution solve(const ModelParams& p, const SelfFields& f, std::size_t n, bool af,
                      ProductPattern pattern = ProductPattern::plus_x, const DmrgSettings& s = {}) {
  return dmrg_ground(build_mpo(p, f, n, af), product_state(n, pattern), s);
}

}  // namespace

TEST(Mpo, DecoupledSitesMatchSingleSiteBlocks) {
  const auto mpo = build_mpo(params(0.0, 0.3, 1.0), {0.4, 0.0}, 4, false);
  EXPECT_NEAR(mpo.energy_offset, 0.64, 1e-15);
  const DenseMatrix h = mpo_to_dense(mpo);
  EXPECT_LT((h - oracle_hamiltonian(0.4, 0.3, 0.0, 0.0, 0.0, 4)).norm(), 1e-12);
  EXPECT_NEAR(linalg::eigh_dense(h).values(0), -2.0, 1e-12);
}

TEST(Mpo, BoundaryFieldsOnClassicalNeel) {
  const auto mpo = build_mpo(params(0.2, 0.0, 0.0), {0.0, 0.5}, 4, true);
  const DenseMatrix h = mpo_to_dense(mpo);
  EXPECT_LT((h - oracle_hamiltonian(0.0, 0.0, 0.2, 0.2, -0.2, 4)).norm(), 1e-12);
  // |down up down up| = bits 1010.
  EXPECT_NEAR(h(0b1010, 0b1010), -1.0, 1e-14);
  EXPECT_NEAR(linalg::eigh_dense(h).values(0), -1.0, 1e-12);
}

TEST(Mpo, MatchesDenseOracleAtEightSites) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = params(u(rng), std::abs(u(rng)), 1.0 + u(rng));
    const SelfFields f{u(rng), u(rng)};
    const bool af = trial % 2 == 0;
    const auto mpo = build_mpo(p, f, 8, af);
    const double h = effective_field(p, f.m_x);
    const double b = af ? 2.0 * p.J * f.m_s : 0.0;
    EXPECT_LT((mpo_to_dense(mpo) - oracle_hamiltonian(h, p.eps, p.J, b, -b, 8)).norm(), 1e-12);
    EXPECT_LT((mpo_to_dense(mpo) - dense_hamiltonian(p, f, 8, af)).norm(), 1e-12);
  }
}

TEST(Mpo, RejectsBadSizes) {
  EXPECT_THROW(build_mpo(params(0.2, 0.1, 0.5), {}, 1, false), InvalidInput);
  EXPECT_THROW(build_mpo(params(0.2, 0.1, 0.5), {}, 5, true), InvalidInput);
}

TEST(Mps, ProductStates) {
  auto z = measure_profiles(product_state(3, ProductPattern::minus_z));
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(z.sz[static_cast<std::size_t>(i)], -1.0, 1e-15);
    EXPECT_NEAR(z.sx[static_cast<std::size_t>(i)], 0.0, 1e-15);
  }
  auto x = measure_profiles(product_state(2, ProductPattern::plus_x));
  EXPECT_NEAR(x.sx[0], 1.0, 1e-15);
  EXPECT_NEAR(x.sx[1], 1.0, 1e-15);
  EXPECT_NEAR(x.sz[0], 0.0, 1e-15);
  auto neel = measure_profiles(product_state(4, ProductPattern::neel_even_up));
  double stag = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double expected = (i + 1) % 2 == 0 ? 1.0 : -1.0;
    EXPECT_NEAR(neel.sz[static_cast<std::size_t>(i)], expected, 1e-15);
    stag += expected * neel.sz[static_cast<std::size_t>(i)];
  }
  EXPECT_NEAR(stag, 4.0, 1e-14);
}

TEST(Mps, CanonicalFormAfterDmrg) {
  auto sol = solve(with_field(0.3, 0.1), {0.35, 0.0}, 12, false);
  Mps psi = sol.final_state;
  psi.canonicalize(5);
  EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-12);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_TRUE(psi.is_left_orthonormal(i));
  for (std::size_t i = 6; i < 12; ++i) EXPECT_TRUE(psi.is_right_orthonormal(i));
}

TEST(Dmrg, DecoupledSites) {
  auto sol = solve(params(0.0, 0.3, 1.0), {0.4, 0.0}, 4, false);
  EXPECT_TRUE(sol.converged);
  EXPECT_NEAR(sol.energy, -2.0, 1e-10);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(sol.sx_profile[i], 0.8, 1e-8);
    EXPECT_NEAR(sol.sz_profile[i], -0.6, 1e-8);
  }
}

// The default truncation cutoff alone costs ~1e-10 in energy here, so the
// 1e-10 comparisons run with the tight profile.
TEST(Dmrg, MatchesExactDiagAtTenSites) {
  const auto p = with_field(0.2, 0.0);
  const SelfFields f{0.1, 0.0};
  auto sol = solve(p, f, 10, false, ProductPattern::plus_x, DmrgSettings::tight());
  auto ed = exact_diag_ground(p, f, 10, false);
  EXPECT_NEAR(sol.energy, ed.energy, 1e-10);
  EXPECT_NEAR(solve(p, f, 10, false).energy, ed.energy, 1e-9);
}

TEST(Dmrg, SweepEnergiesAreMonotone) {
  auto sol = solve(with_field(-0.4, 0.05), {0.2, 0.0}, 24, false, ProductPattern::minus_z);
  ASSERT_GE(sol.sweep_energies.size(), 2u);
  for (std::size_t k = 1; k < sol.sweep_energies.size(); ++k)
    EXPECT_LE(sol.sweep_energies[k], sol.sweep_energies[k - 1] + 1e-12);
}

TEST(Dmrg, FieldFlipSymmetry) {
  const auto p = with_field(0.25, 0.15);
  auto plus = solve(p, {0.3, 0.0}, 10, false);
  auto minus = solve(p, {-0.3, 0.0}, 10, false);
  EXPECT_NEAR(plus.energy, minus.energy, 1e-10);
}

TEST(Dmrg, SpinFlipSymmetryAtZeroLongitudinalField) {
  const auto p = with_field(-0.3, 0.0);
  auto down = solve(p, {0.1, 0.0}, 12, false, ProductPattern::minus_z);
  auto flip = solve(p, {0.1, 0.0}, 12, false, ProductPattern::neel_even_up);
  EXPECT_NEAR(down.energy, flip.energy, 1e-10);
}

TEST(Dmrg, ProfilesAreBounded) {
  auto sol = solve(with_field(0.2, 0.1), {0.2, 0.3}, 16, true, ProductPattern::neel_even_up);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_LE(std::abs(sol.sx_profile[i]), 1.0 + 1e-10);
    EXPECT_LE(std::abs(sol.sz_profile[i]), 1.0 + 1e-10);
  }
}

TEST(Dmrg, RejectsMismatchedSizes) {
  const auto mpo = build_mpo(with_field(0.2, 0.1), {0.1, 0.0}, 4, false);
  EXPECT_THROW(dmrg_ground(mpo, product_state(5, ProductPattern::plus_x), DmrgSettings{}), InvalidInput);
}

TEST(ExactDiag, TwoSiteSpectrum) {
  const auto p = params(0.2, 0.0, 0.0);
  const DenseMatrix h = dense_hamiltonian(p, {}, 2, false);
  auto eig = linalg::eigh_dense(h);
  EXPECT_NEAR(eig.values(0), -0.2, 1e-14);
  EXPECT_NEAR(eig.values(1), -0.2, 1e-14);
  EXPECT_NEAR(eig.values(2), 0.2, 1e-14);
  EXPECT_NEAR(eig.values(3), 0.2, 1e-14);
  EXPECT_NEAR(exact_diag_ground(p, {}, 2, false).energy, -0.2, 1e-14);
}

TEST(ExactDiag, SingleSite) {
  EXPECT_NEAR(exact_diag_ground(with_field(0.0, 0.3), {0.4, 0.0}, 1, false).energy, -0.5, 1e-14);
}

TEST(ExactDiag, DegeneratePairResolvedByStaggeredMoment) {
  // Classical AF chain: the two Neel states are degenerate.
  auto ed = exact_diag_ground(params(0.2, 0.0, 0.0), {}, 4, false);
  EXPECT_LT(ed.gap, 1e-12);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ed.sz_profile[i], (i + 1) % 2 == 0 ? 1.0 : -1.0, 1e-12);
}

TEST(ExactDiag, LanczosPathAgreesWithDmrg) {
  const auto p = with_field(-0.3, 0.2);
  const SelfFields f{0.25, 0.0};
  auto ed = exact_diag_ground(p, f, 12, false);
  auto sol = solve(p, f, 12, false, ProductPattern::plus_x, DmrgSettings::tight());
  EXPECT_NEAR(sol.energy, ed.energy, 1e-10);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(sol.sx_profile[i], ed.sx_profile[i], 1e-7);
}

TEST(ExactDiag, SizeLimit) { EXPECT_THROW(exact_diag_ground(with_field(0.1, 0.1), {}, 15, false), SizeLimit); }
