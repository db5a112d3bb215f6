#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "dicke/dmrg.hpp"

namespace dicke::nlce {

enum class Mode { ferro_step1, af_step2 };

// Two linear clusters whose difference isolates the bulk contribution:
// sizes (N, N+1) in ferro mode, (N, N+2) with N even in AF mode.
struct ClusterPair {
  dmrg::ClusterSolution small;
  dmrg::ClusterSolution large;
  Mode mode = Mode::ferro_step1;
};

enum class Observable { sum_sx, staggered_sum_sz };

struct BulkEstimate {
  double energy_per_site = 0.0;  // matter part only
  double mx_per_site = 0.0;      // <S_x>/N
  double ms_per_site = 0.0;
  std::size_t range = 0;         // size of the smaller cluster
};

// Throws InvalidInput unless the sizes fit the mode.
void check_sizes(std::size_t n_small, std::size_t n_large, Mode mode);

// Telescoped difference of an extensive quantity: X_large - X_small, halved
// in AF mode where the clusters differ by one two-site unit cell.
double telescope(double x_small, std::size_t n_small, double x_large, std::size_t n_large, Mode mode);

double bulk_energy(const ClusterPair& pair);

// Per-site m_x (from sum_sx) or m_s (from the staggered sum with sign
// (-1)^i, i 1-based), both already halved to the [-1/2, 1/2] convention.
double bulk_observable(const ClusterPair& pair, Observable which);

double extensive_sum(const dmrg::ClusterSolution& sol, Observable which);

BulkEstimate bulk_estimate(const ClusterPair& pair);

// Reduced contributions M~(C_k) = M(C_k) - sum_{i<k} (k - i + 1) M~(C_i) of
// linear clusters C_1..C_N.
std::vector<double> reduced_contributions(const std::vector<double>& values);

using PairSolver = std::function<ClusterPair(std::size_t n_small, std::size_t n_large)>;

struct ConvergenceScan {
  std::vector<BulkEstimate> estimates;
  bool converged = false;  // last two energies within the tolerance
  double last_change = 0.0;
};

ConvergenceScan convergence_scan(const PairSolver& solver, const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                 double tol);

}  // namespace dicke::nlce
