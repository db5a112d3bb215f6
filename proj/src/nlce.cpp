#include "dicke/nlce.hpp"

#include <cmath>
#include <string>

namespace dicke::nlce {

void check_sizes(std::size_t n_small, std::size_t n_large, Mode mode) {
  if (n_small < 1) throw InvalidInput("nlce: cluster sizes must be positive");
  if (mode == Mode::ferro_step1) {
    if (n_large != n_small + 1)
      throw InvalidInput("nlce: ferro mode needs sizes (N, N+1), got (" + std::to_string(n_small) + ", " +
                         std::to_string(n_large) + ")");
  } else {
    if (n_large != n_small + 2 || n_small % 2 != 0)
      throw InvalidInput("nlce: AF mode needs even sizes (N, N+2), got (" + std::to_string(n_small) + ", " +
                         std::to_string(n_large) + ")");
  }
}

double telescope(double x_small, std::size_t n_small, double x_large, std::size_t n_large, Mode mode) {
  check_sizes(n_small, n_large, mode);
  const double d = x_large - x_small;
  return mode == Mode::ferro_step1 ? d : 0.5 * d;
}

namespace {

void check_pair(const ClusterPair& pair) {
  const auto& s = pair.small;
  const auto& l = pair.large;
  check_sizes(s.n_sites, l.n_sites, pair.mode);
  if (s.sx_profile.size() != s.n_sites || s.sz_profile.size() != s.n_sites || l.sx_profile.size() != l.n_sites ||
      l.sz_profile.size() != l.n_sites)
    throw InvalidInput("nlce: profile length does not match cluster size");
}

}  // namespace

double extensive_sum(const dmrg::ClusterSolution& sol, Observable which) {
  double sum = 0.0;
  if (which == Observable::sum_sx) {
    for (double v : sol.sx_profile) sum += v;
  } else {
    for (std::size_t i = 0; i < sol.sz_profile.size(); ++i) sum += ((i + 1) % 2 == 0 ? 1.0 : -1.0) * sol.sz_profile[i];
  }
  return sum;
}

double bulk_energy(const ClusterPair& pair) {
  check_pair(pair);
  return telescope(pair.small.energy, pair.small.n_sites, pair.large.energy, pair.large.n_sites, pair.mode);
}

double bulk_observable(const ClusterPair& pair, Observable which) {
  check_pair(pair);
  const double x = telescope(extensive_sum(pair.small, which), pair.small.n_sites, extensive_sum(pair.large, which),
                             pair.large.n_sites, pair.mode);
  return 0.5 * x;
}

BulkEstimate bulk_estimate(const ClusterPair& pair) {
  BulkEstimate b;
  b.energy_per_site = bulk_energy(pair);
  b.mx_per_site = bulk_observable(pair, Observable::sum_sx);
  b.ms_per_site = bulk_observable(pair, Observable::staggered_sum_sz);
  b.range = pair.small.n_sites;
  return b;
}

std::vector<double> reduced_contributions(const std::vector<double>& values) {
  std::vector<double> reduced(values.size(), 0.0);
  for (std::size_t k = 0; k < values.size(); ++k) {
    double r = values[k];
    // Cluster C_{i+1} embeds (k - i + 1) times into C_{k+1}, 0-based here.
    for (std::size_t i = 0; i < k; ++i) r -= static_cast<double>(k - i + 1) * reduced[i];
    reduced[k] = r;
  }
  return reduced;
}

ConvergenceScan convergence_scan(const PairSolver& solver, const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                 double tol) {
  ConvergenceScan scan;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (k > 0 && sizes[k].first <= sizes[k - 1].first) throw InvalidInput("convergence_scan: sizes must increase");
    ClusterPair pair = solver(sizes[k].first, sizes[k].second);
    for (const auto* sol : {&pair.small, &pair.large}) {
      if (!sol->converged)
        throw NotConverged("convergence_scan: cluster of size " + std::to_string(sol->n_sites) +
                           " did not converge in pair (" + std::to_string(sizes[k].first) + ", " +
                           std::to_string(sizes[k].second) + ")");
    }
    scan.estimates.push_back(bulk_estimate(pair));
  }
  if (scan.estimates.size() >= 2) {
    const auto n = scan.estimates.size();
    scan.last_change = std::abs(scan.estimates[n - 1].energy_per_site - scan.estimates[n - 2].energy_per_site);
    scan.converged = scan.last_change < tol;
  }
  return scan;
}

}  // namespace dicke::nlce
