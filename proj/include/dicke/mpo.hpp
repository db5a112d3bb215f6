#pragma once

#include <cstddef>
#include <vector>

#include "dicke/linalg.hpp"
#include "dicke/model.hpp"
#include "dicke/mps.hpp"

namespace dicke::dmrg {

using LocalOp = Eigen::Matrix2d;

struct MpoSite {
  int left_dim = 0;
  int right_dim = 0;
  std::vector<LocalOp> ops;   // row-major over (left, right) bond indices
  std::vector<char> nonzero;

  const LocalOp& at(int a, int b) const { return ops[static_cast<std::size_t>(a * right_dim + b)]; }
  bool has(int a, int b) const { return nonzero[static_cast<std::size_t>(a * right_dim + b)] != 0; }
};

// Lower-triangular bond-dimension-3 MPO of the effective matter Hamiltonian
//   H = -h_x sum_i sx_i + eps sum_i sz_i + J sum_i sz_i sz_{i+1}
// with h_x = g^2 m_x / omega_c, optionally plus the antiferromagnetic
// environment terms +2 J m_s sz_1 - 2 J m_s sz_N. The state-independent
// (g^2/omega_c) m_x^2 N lives in energy_offset, outside the tensors.
struct Mpo {
  std::size_t n_sites = 0;
  std::vector<MpoSite> sites;
  double energy_offset = 0.0;
};

Mpo build_mpo(const ModelParams& params, const SelfFields& fields, std::size_t n_sites, bool with_af_boundary);

// Dense 2^N matrix of the MPO (offset excluded). Site 1 is the most
// significant bit of the basis index. Only for n_sites <= 12.
linalg::DenseMatrix mpo_to_dense(const Mpo& mpo);

// <psi|H|psi> / <psi|psi>, offset excluded.
double expectation(const Mps& state, const Mpo& mpo);

const LocalOp& sigma_x();
const LocalOp& sigma_z();

}  // namespace dicke::dmrg
