#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dicke/linalg.hpp"

using dicke::linalg::DenseMatrix;
using dicke::linalg::Vector;
namespace la = dicke::linalg;

namespace {

DenseMatrix random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  DenseMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

// One-sided Jacobi: rotate column pairs of A until mutually orthogonal.
// Column norms are then the singular values.
struct JacobiSvd {
  DenseMatrix u;
  Vector s;
  DenseMatrix v;
};

JacobiSvd jacobi_svd(DenseMatrix a) {
  const int n = static_cast<int>(a.cols());
  DenseMatrix v = DenseMatrix::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const double gamma = a.col(p).dot(a.col(q));
        off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
        if (std::abs(gamma) < 1e-300) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (DenseMatrix* m : {&a, &v}) {
          const Vector cp = m->col(p);
          const Vector cq = m->col(q);
          m->col(p) = c * cp - s * cq;
          m->col(q) = s * cp + c * cq;
        }
      }
    }
    if (off < 1e-15) break;
  }
  JacobiSvd out;
  out.s.resize(n);
  out.u.resize(a.rows(), n);
  for (int k = 0; k < n; ++k) {
    out.s(k) = a.col(k).norm();
    out.u.col(k) = a.col(k) / out.s(k);
  }
  out.v = v;
  return out;
}

}  // namespace

TEST(SvdTruncated, IdentityKeepsEverything) {
  auto r = la::svd_truncated(DenseMatrix::Identity(3, 3), 0.0, 8);
  ASSERT_EQ(r.singular_values.size(), 3);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(r.singular_values(k), 1.0, 1e-14);
  EXPECT_EQ(r.discarded_weight, 0.0);
  EXPECT_FALSE(r.capped);
}

TEST(SvdTruncated, RankOne) {
  Vector u = Vector::LinSpaced(5, 1.0, 5.0).normalized();
  Vector v = Vector::LinSpaced(4, -1.0, 2.0).normalized();
  auto r = la::svd_truncated(u * v.transpose(), 1e-10, 8);
  ASSERT_EQ(r.singular_values.size(), 1);
  EXPECT_NEAR(r.singular_values(0), 1.0, 1e-13);
}

TEST(SvdTruncated, MatchesJacobiOracle) {
  const DenseMatrix m = random_matrix(8, 8, 7);
  auto r = la::svd_truncated(m, 0.0, 8);
  const auto oracle = jacobi_svd(m);
  DenseMatrix rec = r.u * r.singular_values.asDiagonal() * r.vt;
  DenseMatrix rec_oracle = oracle.u * oracle.s.asDiagonal() * oracle.v.transpose();
  EXPECT_LT((rec - m).norm() / m.norm(), 1e-12);
  EXPECT_LT((rec_oracle - m).norm() / m.norm(), 1e-12);
  std::vector<double> s(oracle.s.data(), oracle.s.data() + oracle.s.size());
  std::sort(s.rbegin(), s.rend());
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(r.singular_values(k), s[static_cast<std::size_t>(k)], 1e-12);
}

TEST(SvdTruncated, DiscardedWeightMatchesReconstructionError) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const DenseMatrix m = random_matrix(9, 6, seed);
    auto r = la::svd_truncated(m, 0.0, 3);
    EXPECT_TRUE(r.capped);
    DenseMatrix rec = r.u * r.singular_values.asDiagonal() * r.vt;
    EXPECT_NEAR((m - rec).squaredNorm() / m.squaredNorm(), r.discarded_weight, 1e-12);
    EXPECT_LT((r.u.transpose() * r.u - DenseMatrix::Identity(3, 3)).norm(), 1e-12);
    EXPECT_LT((r.vt * r.vt.transpose() - DenseMatrix::Identity(3, 3)).norm(), 1e-12);
  }
}

TEST(SvdTruncated, CutoffPicksSmallestRank) {
  DenseMatrix m = DenseMatrix::Zero(4, 4);
  m.diagonal() << 1.0, 1e-3, 1e-6, 1e-9;
  auto r = la::svd_truncated(m, 1e-10, 10);
  // Dropping 1e-6 leaves weight 1e-12 + 1e-18 <= 1e-10; dropping 1e-3 too does not.
  EXPECT_EQ(r.singular_values.size(), 2);
  EXPECT_FALSE(r.capped);
  EXPECT_LE(r.discarded_weight, 1e-10);
}

TEST(SvdTruncated, TiesAreKeptTogether) {
  DenseMatrix m = DenseMatrix::Zero(4, 4);
  m.diagonal() << 1.0, 0.5, 0.5, 1e-8;
  auto r = la::svd_truncated(m, 0.1, 10);
  EXPECT_EQ(r.singular_values.size(), 3);
}

TEST(SvdTruncated, RejectsBadInput) {
  DenseMatrix empty(0, 0);
  EXPECT_THROW(la::svd_truncated(empty, 0.0, 1), dicke::InvalidInput);
  DenseMatrix bad = DenseMatrix::Ones(2, 2);
  bad(0, 1) = std::nan("");
  EXPECT_THROW(la::svd_truncated(bad, 0.0, 1), dicke::InvalidInput);
  EXPECT_THROW(la::svd_truncated(DenseMatrix::Ones(2, 2), 1.0, 1), dicke::InvalidInput);
  EXPECT_THROW(la::svd_truncated(DenseMatrix::Ones(2, 2), 0.0, 0), dicke::InvalidInput);
}

TEST(Lanczos, DiagonalMatrix) {
  DenseMatrix a = Vector((Vector(3) << 3.0, 1.0, 2.0).finished()).asDiagonal();
  auto apply = [&a](const Vector& x, Vector& y) { y = a * x; };
  auto r = la::lanczos_ground(apply, Vector::Ones(3), 1e-12, 50);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(r.vector(1)), 1.0, 1e-10);
}

TEST(Lanczos, TwoLevelClosedForm) {
  DenseMatrix a(2, 2);
  a << 0.3, -0.4, -0.4, -0.3;
  auto apply = [&a](const Vector& x, Vector& y) { y = a * x; };
  auto r = la::lanczos_ground(apply, Vector::Ones(2), 1e-12, 50);
  EXPECT_NEAR(r.value, -0.5, 1e-12);
}

TEST(Lanczos, RandomSymmetricAgainstDense) {
  DenseMatrix b = random_matrix(50, 50, 3);
  DenseMatrix a = 0.5 * (b + b.transpose());
  auto apply = [&a](const Vector& x, Vector& y) { y = a * x; };
  auto r = la::lanczos_ground(apply, Vector::Ones(50), 1e-12, 500);
  auto dense = la::eigh_dense(a);
  EXPECT_NEAR(r.value, dense.values(0), 1e-10);
  EXPECT_NEAR(r.vector.norm(), 1.0, 1e-12);
  EXPECT_LE((a * r.vector - r.value * r.vector).norm(), 1e-12 * std::max(1.0, std::abs(r.value)) * 10);

  // Variational bound against random probes.
  std::mt19937_64 rng(11);
  std::normal_distribution<double> d;
  for (int k = 0; k < 20; ++k) {
    Vector p(50);
    for (auto& x : p) x = d(rng);
    EXPECT_LE(r.value, p.dot(a * p) / p.squaredNorm() + 1e-12);
  }
}

TEST(Lanczos, ReportsBestOnIterationLimit) {
  DenseMatrix b = random_matrix(300, 300, 5);
  DenseMatrix a = 0.5 * (b + b.transpose());
  auto apply = [&a](const Vector& x, Vector& y) { y = a * x; };
  try {
    la::lanczos_ground(apply, Vector::Ones(300), 1e-14, 3);
    FAIL() << "expected LanczosNotConverged";
  } catch (const la::LanczosNotConverged& e) {
    EXPECT_TRUE(std::isfinite(e.best().value));
    EXPECT_EQ(e.best().vector.size(), 300);
  }
}

TEST(EighDense, TwoLevel) {
  DenseMatrix a(2, 2);
  a << 0.3, -0.4, -0.4, -0.3;
  auto r = la::eigh_dense(a);
  EXPECT_NEAR(r.values(0), -0.5, 1e-14);
  EXPECT_NEAR(r.values(1), 0.5, 1e-14);
}

TEST(EighDense, Identity) {
  auto r = la::eigh_dense(DenseMatrix::Identity(5, 5));
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(r.values(k), 1.0, 1e-14);
}

TEST(EighDense, RecoversConstructedSpectrum) {
  Eigen::HouseholderQR<DenseMatrix> qr(random_matrix(3, 3, 9));
  DenseMatrix v = qr.householderQ();
  Vector d(3);
  d << -1.5, 0.25, 2.0;
  DenseMatrix m = v * d.asDiagonal() * v.transpose();
  m = 0.5 * (m + m.transpose());
  auto r = la::eigh_dense(m);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(r.values(k), d(k), 1e-12);
  EXPECT_LT((m * r.vectors - r.vectors * r.values.asDiagonal()).norm(), 1e-10);
}

TEST(EighDense, RejectsAsymmetric) {
  DenseMatrix a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;
  EXPECT_THROW(la::eigh_dense(a), dicke::InvalidInput);
}
