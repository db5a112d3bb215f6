#include "dicke/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace dicke::linalg {

bool all_finite(const DenseMatrix& m) { return m.allFinite(); }

TruncatedSvd svd_truncated(const DenseMatrix& m, double cutoff, std::size_t max_dim) {
  if (m.size() == 0) throw InvalidInput("svd_truncated: empty matrix");
  if (!m.allFinite()) throw InvalidInput("svd_truncated: non-finite entry");
  if (!(cutoff >= 0.0 && cutoff < 1.0)) throw InvalidInput("svd_truncated: cutoff must lie in [0, 1)");
  if (max_dim < 1) throw InvalidInput("svd_truncated: max_dim must be >= 1");

  Eigen::BDCSVD<DenseMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const auto n = static_cast<std::size_t>(s.size());

  double total = s.squaredNorm();
  TruncatedSvd out;
  std::size_t keep = n;
  if (total > 0.0) {
    double tail = 0.0;
    while (keep > 1) {
      double w = s(keep - 1) * s(keep - 1);
      if (tail + w > cutoff * total) break;
      tail += w;
      --keep;
    }
    // Degenerate block at the edge is kept whole.
    const double edge = s(keep - 1);
    while (keep < n && s(keep) >= edge * (1.0 - 1e-14) && edge > 0.0) ++keep;
  } else {
    keep = 1;
    total = 1.0;
  }
  if (keep > max_dim) {
    keep = max_dim;
    out.capped = true;
  }

  double discarded = 0.0;
  for (std::size_t i = keep; i < n; ++i) discarded += s(i) * s(i);
  out.discarded_weight = discarded / total;

  const auto k = static_cast<Eigen::Index>(keep);
  out.u = svd.matrixU().leftCols(k);
  out.singular_values = s.head(k);
  out.vt = svd.matrixV().leftCols(k).transpose();
  return out;
}

namespace {

struct RitzPair {
  double value;
  Vector coeffs;
};

RitzPair lowest_ritz(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const auto k = static_cast<Eigen::Index>(alpha.size());
  if (k == 1) return {alpha[0], Vector::Ones(1)};
  Vector diag = Eigen::Map<const Vector>(alpha.data(), k);
  Vector sub = Eigen::Map<const Vector>(beta.data(), k - 1);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> tri;
  tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  return {tri.eigenvalues()(0), tri.eigenvectors().col(0)};
}

}  // namespace

EigenPair lanczos_ground(const LinearMap& apply, Vector v0, double tol, int max_iter) {
  if (v0.size() == 0) throw InvalidInput("lanczos_ground: empty start vector");
  if (!v0.allFinite()) throw InvalidInput("lanczos_ground: non-finite start vector");
  const double nrm0 = v0.norm();
  if (nrm0 == 0.0) throw InvalidInput("lanczos_ground: start vector is zero");
  if (max_iter < 1) throw InvalidInput("lanczos_ground: max_iter must be >= 1");

  const Eigen::Index n = v0.size();
  Vector start = v0 / nrm0;
  EigenPair best;
  best.value = std::numeric_limits<double>::infinity();
  best.residual = std::numeric_limits<double>::infinity();
  int used = 0;

  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(std::min<Eigen::Index>(kLanczosRestart, n) + 1));
  Vector w(n);

  while (used < max_iter) {
    basis.clear();
    basis.push_back(start);
    std::vector<double> alpha;
    std::vector<double> beta;

    for (;;) {
      const Vector& q = basis.back();
      apply(q, w);
      ++used;
      const double a = q.dot(w);
      alpha.push_back(a);
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        for (const Vector& b : basis) w.noalias() -= b.dot(w) * b;
      }
      const double b = w.norm();

      RitzPair ritz = lowest_ritz(alpha, beta);
      const double est = std::abs(b * ritz.coeffs(ritz.coeffs.size() - 1));
      const double scale = std::max(1.0, std::abs(ritz.value));
      const bool krylov_full = static_cast<Eigen::Index>(basis.size()) >= n;
      const bool breakdown = b < 1e-14 || krylov_full;
      const bool restart = static_cast<int>(basis.size()) >= kLanczosRestart;

      if (est <= tol * scale || breakdown || restart || used >= max_iter) {
        Vector x = Vector::Zero(n);
        for (std::size_t i = 0; i < basis.size(); ++i) x.noalias() += ritz.coeffs(static_cast<Eigen::Index>(i)) * basis[i];
        x.normalize();
        double residual = est;
        if (breakdown) {
          // The reduced problem is exact; confirm with an explicit residual.
          Vector ax(n);
          apply(x, ax);
          residual = (ax - ritz.value * x).norm();
        }
        if (residual < best.residual || (residual == best.residual && ritz.value < best.value)) {
          best.value = ritz.value;
          best.vector = x;
          best.residual = residual;
          best.iterations = used;
        }
        if (residual <= tol * scale) {
          best.iterations = used;
          return best;
        }
        if (breakdown) {
          // An invariant subspace is exact up to rounding in the matrix
          // products; a tolerance below that level cannot be met.
          const double rounding = 100.0 * std::numeric_limits<double>::epsilon() *
                                  std::sqrt(static_cast<double>(n)) * scale;
          if (residual <= rounding) return best;
          std::ostringstream os;
          os << "lanczos_ground: Krylov breakdown without a converged pair (residual " << residual << ")";
          throw NumericalBreakdown(os.str());
        }
        start = x;
        break;
      }
      beta.push_back(b);
      basis.push_back(w / b);
    }
  }
  throw LanczosNotConverged("lanczos_ground: not converged after " + std::to_string(used) + " iterations",
                            best);
}

SymmetricEigen eigh_dense(const DenseMatrix& m) {
  if (m.rows() != m.cols() || m.size() == 0) throw InvalidInput("eigh_dense: matrix must be square and non-empty");
  if (!m.allFinite()) throw InvalidInput("eigh_dense: non-finite entry");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidInput("eigh_dense: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalBreakdown("eigh_dense: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace dicke::linalg
