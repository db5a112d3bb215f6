#include "dicke/mps.hpp"

#include <algorithm>
#include <cmath>

namespace dicke::dmrg {

namespace {

// Stack [A0; A1] as a (2 Dl) x Dr matrix.
DenseMatrix stack_rows(const SiteTensor& t) {
  const auto dl = t.left_dim();
  DenseMatrix m(2 * dl, t.right_dim());
  m.topRows(dl) = t.a[0];
  m.bottomRows(dl) = t.a[1];
  return m;
}

// Concatenate [A0, A1] as a Dl x (2 Dr) matrix.
DenseMatrix stack_cols(const SiteTensor& t) {
  const auto dr = t.right_dim();
  DenseMatrix m(t.left_dim(), 2 * dr);
  m.leftCols(dr) = t.a[0];
  m.rightCols(dr) = t.a[1];
  return m;
}

struct Qr {
  DenseMatrix q;
  DenseMatrix r;
};

Qr thin_qr(const DenseMatrix& m) {
  const auto k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<DenseMatrix> qr(m);
  Qr out;
  out.q = qr.householderQ() * DenseMatrix::Identity(m.rows(), k);
  out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return out;
}

}  // namespace

Mps::Mps(std::vector<SiteTensor> sites, std::size_t ortho_center)
    : sites_(std::move(sites)), center_(ortho_center) {}

std::vector<std::size_t> Mps::bond_dims() const {
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i + 1 < sites_.size(); ++i) dims.push_back(static_cast<std::size_t>(sites_[i].right_dim()));
  return dims;
}

std::size_t Mps::max_bond_dim() const {
  std::size_t best = 1;
  for (auto d : bond_dims()) best = std::max(best, d);
  return best;
}

double Mps::norm_squared() const {
  DenseMatrix env = DenseMatrix::Ones(1, 1);
  for (const auto& t : sites_) {
    DenseMatrix next = DenseMatrix::Zero(t.right_dim(), t.right_dim());
    for (int s = 0; s < kPhysDim; ++s) next.noalias() += t.a[s].transpose() * env * t.a[s];
    env = std::move(next);
  }
  return env(0, 0);
}

void Mps::move_center_right() {
  const std::size_t i = center_;
  if (i + 1 >= sites_.size()) return;
  Qr qr = thin_qr(stack_rows(sites_[i]));
  const auto dl = sites_[i].left_dim();
  for (int s = 0; s < kPhysDim; ++s) sites_[i].a[s] = qr.q.middleRows(s * dl, dl);
  for (int s = 0; s < kPhysDim; ++s) sites_[i + 1].a[s] = qr.r * sites_[i + 1].a[s];
  center_ = i + 1;
}

void Mps::move_center_left() {
  const std::size_t i = center_;
  if (i == 0) return;
  // M = L Q with orthonormal rows of Q, from the QR of M^T.
  Qr qr = thin_qr(stack_cols(sites_[i]).transpose());
  const DenseMatrix q = qr.q.transpose();
  const auto dr = sites_[i].right_dim();
  for (int s = 0; s < kPhysDim; ++s) sites_[i].a[s] = q.middleCols(s * dr, dr);
  const DenseMatrix l = qr.r.transpose();
  for (int s = 0; s < kPhysDim; ++s) sites_[i - 1].a[s] = sites_[i - 1].a[s] * l;
  center_ = i - 1;
}

void Mps::canonicalize(std::size_t center) {
  if (sites_.empty()) return;
  center = std::min(center, sites_.size() - 1);
  center_ = 0;
  for (std::size_t i = 0; i + 1 < sites_.size(); ++i) move_center_right();
  while (center_ > center) move_center_left();
  auto& t = sites_[center_];
  const double nrm = std::sqrt(t.a[0].squaredNorm() + t.a[1].squaredNorm());
  if (nrm > 0.0) {
    for (auto& m : t.a) m /= nrm;
  }
}

bool Mps::is_left_orthonormal(std::size_t i, double tol) const {
  const auto& t = sites_[i];
  DenseMatrix g = t.a[0].transpose() * t.a[0] + t.a[1].transpose() * t.a[1];
  return (g - DenseMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool Mps::is_right_orthonormal(std::size_t i, double tol) const {
  const auto& t = sites_[i];
  DenseMatrix g = t.a[0] * t.a[0].transpose() + t.a[1] * t.a[1].transpose();
  return (g - DenseMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <= tol;
}

Mps product_state(std::size_t n_sites, ProductPattern pattern) {
  if (n_sites < 1) throw InvalidInput("product_state: n_sites must be >= 1");
  std::vector<SiteTensor> sites(n_sites);
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t k = 0; k < n_sites; ++k) {
    double up = 0.0;
    double down = 0.0;
    switch (pattern) {
      case ProductPattern::minus_z:
        down = 1.0;
        break;
      case ProductPattern::plus_x:
        up = r;
        down = r;
        break;
      case ProductPattern::neel_even_up: {
        const std::size_t i = k + 1;
        (i % 2 == 0 ? up : down) = 1.0;
        break;
      }
    }
    sites[k].a[0] = DenseMatrix::Constant(1, 1, up);
    sites[k].a[1] = DenseMatrix::Constant(1, 1, down);
  }
  return Mps(std::move(sites), 0);
}

Profiles measure_profiles(const Mps& state) {
  Mps psi = state;
  psi.canonicalize(0);
  const std::size_t n = psi.n_sites();
  Profiles out;
  out.sx.resize(n);
  out.sz.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& t = psi.site(k);
    const double n00 = t.a[0].squaredNorm();
    const double n11 = t.a[1].squaredNorm();
    const double n01 = (t.a[0].array() * t.a[1].array()).sum();
    const double norm = n00 + n11;
    out.sz[k] = (n00 - n11) / norm;
    out.sx[k] = 2.0 * n01 / norm;
    psi.move_center_right();
  }
  return out;
}

}  // namespace dicke::dmrg
