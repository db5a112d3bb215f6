#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dicke/mpo.hpp"
#include "dicke/mps.hpp"

namespace dicke::dmrg {

struct DmrgSettings {
  double cutoff = 1e-10;        // discarded relative weight per truncation
  double energy_tol = 1e-10;    // |E_sweep - E_prev| stopping threshold
  std::size_t max_bond_dim = 128;
  int max_sweeps = 100;
  double lanczos_tol = 1e-12;
  int lanczos_max_iter = 20;   // per local solve; sweeps finish the job
  double noise = 1e-8;          // perturbation of the local start vector
  int noise_sweeps = 2;
  std::uint64_t seed = 20240607;

  static DmrgSettings default_profile() { return {}; }
  // Energy 1e-14, truncation 1e-12, local solve 1e-14.
  static DmrgSettings tight();

  void validate() const;
};

struct ClusterSolution {
  std::size_t n_sites = 0;
  double energy = 0.0;  // matter energy, MPO offset not included
  std::vector<double> sx_profile;
  std::vector<double> sz_profile;
  bool converged = false;
  int sweeps_used = 0;
  std::size_t max_bond_reached = 0;
  double max_discarded_weight = 0.0;
  std::vector<double> sweep_energies;  // energy after every full sweep
  Mps final_state;
};

// Two-site DMRG. One sweep is a left-to-right plus a right-to-left pass; the
// initial state's energy counts as sweep zero for the stopping test.
ClusterSolution dmrg_ground(const Mpo& mpo, const Mps& init, const DmrgSettings& settings);

}  // namespace dicke::dmrg
