#include "dicke/dmrg.hpp"

#include <algorithm>
#include <limits>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace dicke::dmrg {

DmrgSettings DmrgSettings::tight() {
  DmrgSettings s;
  s.cutoff = 1e-12;
  s.energy_tol = 1e-14;
  // Observables from a loose local solve jitter by ~1e-11 between calls,
  // far above the tight self-consistency tolerance.
  s.lanczos_tol = 1e-14;
  s.lanczos_max_iter = 40;
  return s;
}

void DmrgSettings::validate() const {
  if (!(cutoff >= 0.0 && cutoff < 1.0)) throw InvalidInput("dmrg: cutoff must lie in [0, 1)");
  if (!(energy_tol > 0.0) || !(lanczos_tol > 0.0)) throw InvalidInput("dmrg: tolerances must be positive");
  if (max_bond_dim < 1 || max_sweeps < 1 || lanczos_max_iter < 1) throw InvalidInput("dmrg: limits must be >= 1");
  if (noise < 0.0) throw InvalidInput("dmrg: noise must be >= 0");
}

namespace {

using Env = std::vector<DenseMatrix>;  // one matrix per MPO bond index

// Two-site operator W1 (x) W2 summed over the shared bond, as 4x4 blocks in
// (t1 t2, s1 s2) order for every (left, right) MPO index pair.
struct PairOp {
  int left_dim = 0;
  int right_dim = 0;
  std::vector<Eigen::Matrix4d> blocks;
  std::vector<char> nonzero;
};

PairOp combine(const MpoSite& w1, const MpoSite& w2) {
  PairOp p;
  p.left_dim = w1.left_dim;
  p.right_dim = w2.right_dim;
  p.blocks.assign(static_cast<std::size_t>(p.left_dim * p.right_dim), Eigen::Matrix4d::Zero());
  p.nonzero.assign(p.blocks.size(), 0);
  for (int a = 0; a < w1.left_dim; ++a) {
    for (int c = 0; c < w2.right_dim; ++c) {
      auto& blk = p.blocks[static_cast<std::size_t>(a * p.right_dim + c)];
      bool any = false;
      for (int b = 0; b < w1.right_dim; ++b) {
        if (!w1.has(a, b) || !w2.has(b, c)) continue;
        const LocalOp& o1 = w1.at(a, b);
        const LocalOp& o2 = w2.at(b, c);
        for (int t1 = 0; t1 < 2; ++t1)
          for (int t2 = 0; t2 < 2; ++t2)
            for (int s1 = 0; s1 < 2; ++s1)
              for (int s2 = 0; s2 < 2; ++s2) blk(t1 * 2 + t2, s1 * 2 + s2) += o1(t1, s1) * o2(t2, s2);
        any = true;
      }
      p.nonzero[static_cast<std::size_t>(a * p.right_dim + c)] = any && blk.cwiseAbs().maxCoeff() > 0.0 ? 1 : 0;
    }
  }
  return p;
}

Env extend_left(const Env& left, const SiteTensor& t, const MpoSite& w) {
  Env next(static_cast<std::size_t>(w.right_dim), DenseMatrix::Zero(t.right_dim(), t.right_dim()));
  for (int a = 0; a < w.left_dim; ++a) {
    std::array<DenseMatrix, 2> la;
    for (int s = 0; s < 2; ++s) la[s] = left[static_cast<std::size_t>(a)] * t.a[s];
    for (int b = 0; b < w.right_dim; ++b) {
      if (!w.has(a, b)) continue;
      const LocalOp& op = w.at(a, b);
      for (int u = 0; u < 2; ++u) {
        DenseMatrix acc = DenseMatrix::Zero(t.left_dim(), t.right_dim());
        bool any = false;
        for (int s = 0; s < 2; ++s) {
          if (op(u, s) != 0.0) {
            acc.noalias() += op(u, s) * la[s];
            any = true;
          }
        }
        if (any) next[static_cast<std::size_t>(b)].noalias() += t.a[u].transpose() * acc;
      }
    }
  }
  return next;
}

Env extend_right(const Env& right, const SiteTensor& t, const MpoSite& w) {
  Env next(static_cast<std::size_t>(w.left_dim), DenseMatrix::Zero(t.left_dim(), t.left_dim()));
  for (int b = 0; b < w.right_dim; ++b) {
    std::array<DenseMatrix, 2> ra;
    for (int s = 0; s < 2; ++s) ra[s] = right[static_cast<std::size_t>(b)] * t.a[s].transpose();
    for (int a = 0; a < w.left_dim; ++a) {
      if (!w.has(a, b)) continue;
      const LocalOp& op = w.at(a, b);
      for (int u = 0; u < 2; ++u) {
        DenseMatrix acc = DenseMatrix::Zero(t.right_dim(), t.left_dim());
        bool any = false;
        for (int s = 0; s < 2; ++s) {
          if (op(u, s) != 0.0) {
            acc.noalias() += op(u, s) * ra[s];
            any = true;
          }
        }
        if (any) next[static_cast<std::size_t>(a)].noalias() += t.a[u] * acc;
      }
    }
  }
  return next;
}

// Effective two-site Hamiltonian acting on theta stored as four contiguous
// column-major (Dl x Dr) blocks ordered by s1 * 2 + s2.
class TwoSiteOperator {
 public:
  TwoSiteOperator(const Env& left, const PairOp& op, const Env& right, Eigen::Index dl, Eigen::Index dr)
      : left_(left), op_(op), right_(right), dl_(dl), dr_(dr) {}

  Eigen::Index size() const { return 4 * dl_ * dr_; }

  void apply(const linalg::Vector& x, linalg::Vector& y) const {
    const Eigen::Index blk = dl_ * dr_;
    y.setZero(size());
    std::array<Eigen::Map<const DenseMatrix>, 4> theta = {
        Eigen::Map<const DenseMatrix>(x.data() + 0 * blk, dl_, dr_),
        Eigen::Map<const DenseMatrix>(x.data() + 1 * blk, dl_, dr_),
        Eigen::Map<const DenseMatrix>(x.data() + 2 * blk, dl_, dr_),
        Eigen::Map<const DenseMatrix>(x.data() + 3 * blk, dl_, dr_)};

    // lt[a][s] = L[a] * theta[s]
    std::vector<std::array<DenseMatrix, 4>> lt(static_cast<std::size_t>(op_.left_dim));
    for (int a = 0; a < op_.left_dim; ++a) {
      bool used = false;
      for (int c = 0; c < op_.right_dim; ++c) used = used || op_.nonzero[static_cast<std::size_t>(a * op_.right_dim + c)];
      if (!used) continue;
      for (int s = 0; s < 4; ++s) lt[static_cast<std::size_t>(a)][s].noalias() = left_[static_cast<std::size_t>(a)] * theta[s];
    }
    DenseMatrix z(dl_, dr_);
    for (int c = 0; c < op_.right_dim; ++c) {
      for (int t = 0; t < 4; ++t) {
        z.setZero();
        bool any = false;
        for (int a = 0; a < op_.left_dim; ++a) {
          const auto idx = static_cast<std::size_t>(a * op_.right_dim + c);
          if (!op_.nonzero[idx]) continue;
          const auto& blk4 = op_.blocks[idx];
          for (int s = 0; s < 4; ++s) {
            const double coef = blk4(t, s);
            if (coef != 0.0) {
              z.noalias() += coef * lt[static_cast<std::size_t>(a)][s];
              any = true;
            }
          }
        }
        if (!any) continue;
        Eigen::Map<DenseMatrix> out(y.data() + t * blk, dl_, dr_);
        out.noalias() += z * right_[static_cast<std::size_t>(c)].transpose();
      }
    }
  }

 private:
  const Env& left_;
  const PairOp& op_;
  const Env& right_;
  Eigen::Index dl_;
  Eigen::Index dr_;
};

linalg::Vector pack_theta(const SiteTensor& l, const SiteTensor& r) {
  const auto dl = l.left_dim();
  const auto dr = r.right_dim();
  linalg::Vector v(4 * dl * dr);
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      Eigen::Map<DenseMatrix> blk(v.data() + (s1 * 2 + s2) * dl * dr, dl, dr);
      blk.noalias() = l.a[s1] * r.a[s2];
    }
  }
  return v;
}

// theta as the (2 Dl) x (2 Dr) matrix with rows (s1, alpha), cols (s2, beta).
DenseMatrix theta_matrix(const linalg::Vector& v, Eigen::Index dl, Eigen::Index dr) {
  DenseMatrix m(2 * dl, 2 * dr);
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      Eigen::Map<const DenseMatrix> blk(v.data() + (s1 * 2 + s2) * dl * dr, dl, dr);
      m.block(s1 * dl, s2 * dr, dl, dr) = blk;
    }
  }
  return m;
}

class Sweeper {
 public:
  Sweeper(const Mpo& mpo, Mps state, const DmrgSettings& settings)
      : mpo_(mpo), psi_(std::move(state)), settings_(settings), rng_(settings.seed) {
    const std::size_t n = mpo_.n_sites;
    pairs_.reserve(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) pairs_.push_back(combine(mpo_.sites[i], mpo_.sites[i + 1]));
    left_.resize(n + 1);
    right_.resize(n + 1);
    left_[0] = Env(1, DenseMatrix::Ones(1, 1));
    right_[n] = Env(1, DenseMatrix::Ones(1, 1));
    psi_.canonicalize(0);
    for (std::size_t i = n; i-- > 1;) right_[i] = extend_right(right_[i + 1], psi_.site(i), mpo_.sites[i]);
  }

  // Returns the energy of the last local solve.
  double sweep(bool noisy) {
    const std::size_t n = mpo_.n_sites;
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      e = update(i, noisy, true);
      left_[i + 1] = extend_left(left_[i], psi_.site(i), mpo_.sites[i]);
    }
    for (std::size_t i = n - 1; i-- > 0;) {
      e = update(i, noisy, false);
      right_[i + 1] = extend_right(right_[i + 2], psi_.site(i + 1), mpo_.sites[i + 1]);
    }
    psi_.set_ortho_center(0);
    return e;
  }

  const Mps& state() const { return psi_; }
  std::size_t max_bond() const { return max_bond_; }
  double max_discarded() const { return max_discarded_; }

 private:
  double update(std::size_t i, bool noisy, bool to_right) {
    SiteTensor& l = psi_.site(i);
    SiteTensor& r = psi_.site(i + 1);
    const auto dl = l.left_dim();
    const auto dr = r.right_dim();
    TwoSiteOperator heff(left_[i], pairs_[i], right_[i + 2], dl, dr);

    linalg::Vector v0 = pack_theta(l, r);
    if (noisy && settings_.noise > 0.0) {
      std::normal_distribution<double> gauss;
      linalg::Vector kick(v0.size());
      for (Eigen::Index k = 0; k < kick.size(); ++k) kick(k) = gauss(rng_);
      v0 += settings_.noise * std::max(v0.norm(), 1.0) * kick / kick.norm();
    }
    if (v0.norm() == 0.0) v0.setOnes();

    linalg::EigenPair gs;
    auto apply = [&heff](const linalg::Vector& x, linalg::Vector& y) { heff.apply(x, y); };
    try {
      gs = linalg::lanczos_ground(apply, v0, settings_.lanczos_tol, settings_.lanczos_max_iter);
    } catch (const linalg::LanczosNotConverged& e) {
      gs = e.best();
    }

    auto svd = linalg::svd_truncated(theta_matrix(gs.vector, dl, dr), settings_.cutoff, settings_.max_bond_dim);
    const auto k = svd.singular_values.size();
    max_bond_ = std::max(max_bond_, static_cast<std::size_t>(k));
    max_discarded_ = std::max(max_discarded_, svd.discarded_weight);
    svd.singular_values /= svd.singular_values.norm();
    if (to_right) {
      const DenseMatrix sv = svd.singular_values.asDiagonal() * svd.vt;
      for (int s = 0; s < 2; ++s) {
        l.a[s] = svd.u.middleRows(s * dl, dl);
        r.a[s] = sv.middleCols(s * dr, dr);
      }
    } else {
      const DenseMatrix us = svd.u * svd.singular_values.asDiagonal();
      for (int s = 0; s < 2; ++s) {
        l.a[s] = us.middleRows(s * dl, dl);
        r.a[s] = svd.vt.middleCols(s * dr, dr);
      }
    }
    return gs.value;
  }

  const Mpo& mpo_;
  Mps psi_;
  const DmrgSettings& settings_;
  std::mt19937_64 rng_;
  std::vector<PairOp> pairs_;
  std::vector<Env> left_;
  std::vector<Env> right_;
  std::size_t max_bond_ = 1;
  double max_discarded_ = 0.0;
};

}  // namespace

ClusterSolution dmrg_ground(const Mpo& mpo, const Mps& init, const DmrgSettings& settings) {
  settings.validate();
  if (init.n_sites() != mpo.n_sites) throw InvalidInput("dmrg_ground: MPO and initial state sizes differ");
  if (mpo.n_sites < 2) throw InvalidInput("dmrg_ground: need at least two sites");

  ClusterSolution out;
  out.n_sites = mpo.n_sites;
  double previous = expectation(init, mpo);
  Sweeper sweeper(mpo, init, settings);
  for (int sweep = 1; sweep <= settings.max_sweeps; ++sweep) {
    const double e = sweeper.sweep(sweep <= settings.noise_sweeps);
    out.sweep_energies.push_back(e);
    out.sweeps_used = sweep;
    out.energy = e;
    if (std::abs(e - previous) < settings.energy_tol) {
      out.converged = true;
      break;
    }
    // A tolerance below the rounding of the total energy cannot be met; after
    // the last sweep a change at that level counts as converged.
    const double rounding = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(e);
    if (sweep == settings.max_sweeps && std::abs(e - previous) < rounding) out.converged = true;
    previous = e;
  }
  out.final_state = sweeper.state();
  out.max_bond_reached = std::max(sweeper.max_bond(), out.final_state.max_bond_dim());
  out.max_discarded_weight = sweeper.max_discarded();
  Profiles p = measure_profiles(out.final_state);
  out.sx_profile = std::move(p.sx);
  out.sz_profile = std::move(p.sz);
  return out;
}

}  // namespace dicke::dmrg
