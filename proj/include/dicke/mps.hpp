#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "dicke/linalg.hpp"

namespace dicke::dmrg {

using linalg::DenseMatrix;

// Local basis: s = 0 is spin up (sigma^z = +1), s = 1 is spin down.
inline constexpr int kPhysDim = 2;

// Rank-3 site tensor stored as one (left bond x right bond) matrix per
// physical index.
struct SiteTensor {
  std::array<DenseMatrix, kPhysDim> a;

  Eigen::Index left_dim() const { return a[0].rows(); }
  Eigen::Index right_dim() const { return a[0].cols(); }
};

// Open-boundary matrix product state. Sites are stored 0-based; physical site
// index i (1-based, used for staggering signs) is storage index + 1.
class Mps {
 public:
  Mps() = default;
  Mps(std::vector<SiteTensor> sites, std::size_t ortho_center);

  std::size_t n_sites() const { return sites_.size(); }
  const SiteTensor& site(std::size_t i) const { return sites_[i]; }
  SiteTensor& site(std::size_t i) { return sites_[i]; }
  std::size_t ortho_center() const { return center_; }
  void set_ortho_center(std::size_t c) { center_ = c; }

  // Internal bond dimensions, n_sites - 1 entries.
  std::vector<std::size_t> bond_dims() const;
  std::size_t max_bond_dim() const;

  double norm_squared() const;

  // Left-orthonormalize sites [0, center), right-orthonormalize
  // (center, n) by QR, then normalize the center tensor.
  void canonicalize(std::size_t center);
  void move_center_right();
  void move_center_left();

  bool is_left_orthonormal(std::size_t i, double tol = 1e-10) const;
  bool is_right_orthonormal(std::size_t i, double tol = 1e-10) const;

 private:
  std::vector<SiteTensor> sites_;
  std::size_t center_ = 0;
};

enum class ProductPattern { minus_z, plus_x, neel_even_up };

// Bond-dimension-1 normalized product state.
Mps product_state(std::size_t n_sites, ProductPattern pattern);

struct Profiles {
  std::vector<double> sx;
  std::vector<double> sz;
};

// Single-site <sigma^x_i>, <sigma^z_i> for every site.
Profiles measure_profiles(const Mps& state);

}  // namespace dicke::dmrg
