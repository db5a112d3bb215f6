#pragma once

#include <cstddef>
#include <vector>

#include "dicke/linalg.hpp"
#include "dicke/model.hpp"

namespace dicke::dmrg {

inline constexpr std::size_t kExactDiagMaxSites = 14;
// Up to this size the full spectrum is computed densely; above it the two
// lowest states come from Lanczos with deflation.
inline constexpr std::size_t kExactDiagDenseSites = 10;

struct ExactGround {
  double energy = 0.0;  // offset excluded, same convention as the MPO
  double gap = 0.0;     // E_1 - E_0
  std::vector<double> sx_profile;
  std::vector<double> sz_profile;
};

// Same Hamiltonian as build_mpo, assembled directly in the sigma^z product
// basis (site 1 = most significant bit, bit 0 = spin up). n_sites = 1 is
// allowed and has no bond. When the lowest level is degenerate within 1e-12
// and the boundary fields are off, the reported state is the one with the
// largest staggered moment inside the degenerate pair.
ExactGround exact_diag_ground(const ModelParams& params, const SelfFields& fields, std::size_t n_sites,
                              bool with_af_boundary);

// Dense Hamiltonian of the same model, n_sites <= 12.
linalg::DenseMatrix dense_hamiltonian(const ModelParams& params, const SelfFields& fields, std::size_t n_sites,
                                      bool with_af_boundary);

}  // namespace dicke::dmrg
