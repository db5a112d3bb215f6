#include "dicke/exact_diag.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace dicke::dmrg {

namespace {

struct SpinChain {
  std::size_t n = 0;
  double h = 0.0;
  double eps = 0.0;
  double J = 0.0;
  double field_first = 0.0;
  double field_last = 0.0;
  std::vector<double> diag;

  SpinChain(const ModelParams& params, const SelfFields& fields, std::size_t n_sites, bool af) : n(n_sites) {
    params.validate();
    fields.validate();
    if (n_sites < 1) throw InvalidInput("exact_diag: n_sites must be >= 1");
    if (n_sites > kExactDiagMaxSites)
      throw SizeLimit("exact_diag: n_sites = " + std::to_string(n_sites) + " exceeds the limit of " +
                      std::to_string(kExactDiagMaxSites));
    if (af && n_sites % 2 != 0) throw InvalidInput("exact_diag: AF boundary fields need an even n_sites");
    h = effective_field(params, fields.m_x);
    eps = params.eps;
    J = params.J;
    if (af) {
      field_first = 2.0 * params.J * fields.m_s;
      field_last = -2.0 * params.J * fields.m_s;
    }
    const std::size_t dim = std::size_t{1} << n;
    diag.resize(dim);
    for (std::size_t x = 0; x < dim; ++x) {
      double e = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double zi = sz(x, i);
        e += eps * zi;
        if (i + 1 < n) e += J * zi * sz(x, i + 1);
      }
      e += field_first * sz(x, 0) + field_last * sz(x, n - 1);
      diag[x] = e;
    }
  }

  std::size_t dim() const { return diag.size(); }
  std::size_t mask(std::size_t i) const { return std::size_t{1} << (n - 1 - i); }
  double sz(std::size_t x, std::size_t i) const { return (x & mask(i)) ? -1.0 : 1.0; }

  void apply(const linalg::Vector& v, linalg::Vector& out) const {
    out.resize(v.size());
    for (std::size_t x = 0; x < dim(); ++x) {
      double acc = diag[x] * v(static_cast<Eigen::Index>(x));
      if (h != 0.0)
        for (std::size_t i = 0; i < n; ++i) acc -= h * v(static_cast<Eigen::Index>(x ^ mask(i)));
      out(static_cast<Eigen::Index>(x)) = acc;
    }
  }

  linalg::DenseMatrix dense() const {
    linalg::DenseMatrix m = linalg::DenseMatrix::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
    for (std::size_t x = 0; x < dim(); ++x) {
      const auto ix = static_cast<Eigen::Index>(x);
      m(ix, ix) = diag[x];
      for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(x ^ mask(i)), ix) -= h;
    }
    return m;
  }

  double norm_bound() const {
    return std::abs(h) * static_cast<double>(n) + std::abs(eps) * static_cast<double>(n) +
           std::abs(J) * static_cast<double>(n) + std::abs(field_first) + std::abs(field_last) + 1.0;
  }

  double staggered(const linalg::Vector& a, const linalg::Vector& b) const {
    double s = 0.0;
    for (std::size_t x = 0; x < dim(); ++x) {
      double st = 0.0;
      for (std::size_t i = 0; i < n; ++i) st += ((i + 1) % 2 == 0 ? 1.0 : -1.0) * sz(x, i);
      s += a(static_cast<Eigen::Index>(x)) * st * b(static_cast<Eigen::Index>(x));
    }
    return s;
  }
};

void fill_profiles(const SpinChain& c, const linalg::Vector& psi, ExactGround& out) {
  out.sx_profile.assign(c.n, 0.0);
  out.sz_profile.assign(c.n, 0.0);
  const double norm2 = psi.squaredNorm();
  for (std::size_t x = 0; x < c.dim(); ++x) {
    const double p = psi(static_cast<Eigen::Index>(x));
    for (std::size_t i = 0; i < c.n; ++i) {
      out.sz_profile[i] += p * p * c.sz(x, i);
      out.sx_profile[i] += p * psi(static_cast<Eigen::Index>(x ^ c.mask(i)));
    }
  }
  for (std::size_t i = 0; i < c.n; ++i) {
    out.sz_profile[i] /= norm2;
    out.sx_profile[i] /= norm2;
  }
}

linalg::Vector start_vector(std::size_t dim, std::uint64_t salt) {
  // Deterministic, dense, and not orthogonal to any symmetry sector.
  linalg::Vector v(static_cast<Eigen::Index>(dim));
  std::uint64_t s = 0x9E3779B97F4A7C15ULL ^ salt;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    v(k) = 0.5 + static_cast<double>(s % 1000003) / 1000003.0;
  }
  return v / v.norm();
}

}  // namespace

linalg::DenseMatrix dense_hamiltonian(const ModelParams& params, const SelfFields& fields, std::size_t n_sites,
                                      bool with_af_boundary) {
  if (n_sites > 12) throw SizeLimit("dense_hamiltonian: n_sites must be <= 12");
  return SpinChain(params, fields, n_sites, with_af_boundary).dense();
}

ExactGround exact_diag_ground(const ModelParams& params, const SelfFields& fields, std::size_t n_sites,
                              bool with_af_boundary) {
  const SpinChain chain(params, fields, n_sites, with_af_boundary);
  ExactGround out;
  linalg::Vector v0;
  linalg::Vector v1;
  double e0 = 0.0;
  double e1 = 0.0;
  if (n_sites <= kExactDiagDenseSites) {
    const auto eig = linalg::eigh_dense(chain.dense());
    e0 = eig.values(0);
    v0 = eig.vectors.col(0);
    if (eig.values.size() > 1) {
      e1 = eig.values(1);
      v1 = eig.vectors.col(1);
    } else {
      e1 = e0 + 1.0;
    }
  } else {
    auto apply = [&chain](const linalg::Vector& x, linalg::Vector& y) { chain.apply(x, y); };
    const auto g0 = linalg::lanczos_ground(apply, start_vector(chain.dim(), 1), 1e-12, 4000);
    e0 = g0.value;
    v0 = g0.vector;
    const double shift = 2.0 * chain.norm_bound();
    auto deflated = [&](const linalg::Vector& x, linalg::Vector& y) {
      chain.apply(x, y);
      y += shift * v0.dot(x) * v0;
    };
    const auto g1 = linalg::lanczos_ground(deflated, start_vector(chain.dim(), 2), 1e-12, 4000);
    e1 = g1.value;
    v1 = g1.vector;
  }
  out.energy = e0;
  out.gap = e1 - e0;

  if (!with_af_boundary && v1.size() > 0 && out.gap < 1e-12) {
    // Diagonalize the staggered moment inside the degenerate pair.
    Eigen::Matrix2d s;
    s(0, 0) = chain.staggered(v0, v0);
    s(1, 1) = chain.staggered(v1, v1);
    s(0, 1) = s(1, 0) = chain.staggered(v0, v1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(s);
    const Eigen::Vector2d c = es.eigenvectors().col(1);
    v0 = c(0) * v0 + c(1) * v1;
  }
  fill_profiles(chain, v0, out);
  return out;
}

}  // namespace dicke::dmrg
