#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

#include "dicke/errors.hpp"

namespace dicke::linalg {

// Real dense matrix. Every public entry point rejects non-finite input.
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct TruncatedSvd {
  DenseMatrix u;             // rows x kept, orthonormal columns
  Vector singular_values;    // kept values, non-increasing
  DenseMatrix vt;            // kept x cols, orthonormal rows
  double discarded_weight = 0.0;  // sum of discarded s^2 over total s^2
  bool capped = false;       // max_dim forced more truncation than the cutoff asked for
};

// Thin SVD truncated to the smallest rank whose discarded relative squared
// weight is <= cutoff, capped at max_dim. Singular values tied with the last
// kept one (1e-14 relative) are kept as a block, still subject to max_dim.
TruncatedSvd svd_truncated(const DenseMatrix& m, double cutoff, std::size_t max_dim);

// y = A x for a symmetric operator A.
using LinearMap = std::function<void(const Vector& x, Vector& y)>;

struct EigenPair {
  double value = 0.0;
  Vector vector;
  int iterations = 0;
  double residual = 0.0;
};

// Raised when max_iter is exhausted; carries the best Ritz pair seen.
class LanczosNotConverged : public NotConverged {
 public:
  LanczosNotConverged(const std::string& what, EigenPair best)
      : NotConverged(what), best_(std::move(best)) {}
  const EigenPair& best() const { return best_; }

 private:
  EigenPair best_;
};

// Lowest eigenpair of a symmetric operator by Lanczos with full
// re-orthogonalization, restarted from the current Ritz vector every
// kLanczosRestart Krylov vectors. Converged when
// ||A v - lambda v|| <= tol * max(1, |lambda|).
inline constexpr int kLanczosRestart = 200;
EigenPair lanczos_ground(const LinearMap& apply, Vector v0, double tol, int max_iter);

struct SymmetricEigen {
  Vector values;         // ascending
  DenseMatrix vectors;   // columns
};

SymmetricEigen eigh_dense(const DenseMatrix& m);

bool all_finite(const DenseMatrix& m);

}  // namespace dicke::linalg
