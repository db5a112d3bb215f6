#include "dicke/mpo.hpp"

#include <cmath>

namespace dicke::dmrg {

const LocalOp& sigma_x() {
  static const LocalOp op = (LocalOp() << 0.0, 1.0, 1.0, 0.0).finished();
  return op;
}

const LocalOp& sigma_z() {
  static const LocalOp op = (LocalOp() << 1.0, 0.0, 0.0, -1.0).finished();
  return op;
}

namespace {

MpoSite make_site(int left, int right) {
  MpoSite s;
  s.left_dim = left;
  s.right_dim = right;
  s.ops.assign(static_cast<std::size_t>(left * right), LocalOp::Zero());
  s.nonzero.assign(static_cast<std::size_t>(left * right), 0);
  return s;
}

void put(MpoSite& s, int a, int b, const LocalOp& op) {
  s.ops[static_cast<std::size_t>(a * s.right_dim + b)] = op;
  s.nonzero[static_cast<std::size_t>(a * s.right_dim + b)] = 1;
}

}  // namespace

Mpo build_mpo(const ModelParams& params, const SelfFields& fields, std::size_t n_sites, bool with_af_boundary) {
  params.validate();
  if (n_sites < 2) throw InvalidInput("build_mpo: n_sites must be >= 2");
  if (with_af_boundary && n_sites % 2 != 0) {
    throw InvalidInput("build_mpo: antiferromagnetic boundary fields need an even cluster");
  }
  const double hx = effective_field(params, fields.m_x);
  const LocalOp id = LocalOp::Identity();
  const LocalOp& sx = sigma_x();
  const LocalOp& sz = sigma_z();

  std::vector<LocalOp> onsite(n_sites, -hx * sx + params.eps * sz);
  if (with_af_boundary) {
    const double b = 2.0 * params.J * fields.m_s;
    onsite.front() += b * sz;
    onsite.back() -= b * sz;
  }

  // Bulk W = [[I, 0, 0], [sz, 0, 0], [h, J sz, I]]; the first site keeps the
  // last row and the last site the first column.
  Mpo mpo;
  mpo.n_sites = n_sites;
  mpo.energy_offset = params.g * params.g / params.omega_c * fields.m_x * fields.m_x * static_cast<double>(n_sites);
  mpo.sites.reserve(n_sites);
  for (std::size_t k = 0; k < n_sites; ++k) {
    const bool first = k == 0;
    const bool last = k + 1 == n_sites;
    MpoSite w = make_site(first ? 1 : 3, last ? 1 : 3);
    const int bottom = first ? 0 : 2;
    if (!last) {
      put(w, bottom, 0, onsite[k]);
      put(w, bottom, 1, params.J * sz);
      put(w, bottom, 2, id);
      if (!first) {
        put(w, 0, 0, id);
        put(w, 1, 0, sz);
      }
    } else {
      put(w, bottom, 0, onsite[k]);
      put(w, 0, 0, id);
      put(w, 1, 0, sz);
    }
    mpo.sites.push_back(std::move(w));
  }
  return mpo;
}

linalg::DenseMatrix mpo_to_dense(const Mpo& mpo) {
  if (mpo.n_sites > 12) throw SizeLimit("mpo_to_dense: at most 12 sites");
  // blocks[b] is the partial operator on sites 0..k with open right bond b.
  std::vector<linalg::DenseMatrix> blocks(1, linalg::DenseMatrix::Ones(1, 1));
  for (const auto& w : mpo.sites) {
    const auto dim = blocks[0].rows();
    std::vector<linalg::DenseMatrix> next(static_cast<std::size_t>(w.right_dim),
                                          linalg::DenseMatrix::Zero(2 * dim, 2 * dim));
    for (int a = 0; a < w.left_dim; ++a) {
      for (int b = 0; b < w.right_dim; ++b) {
        if (!w.has(a, b)) continue;
        const LocalOp& op = w.at(a, b);
        auto& out = next[static_cast<std::size_t>(b)];
        for (int s = 0; s < 2; ++s) {
          for (int t = 0; t < 2; ++t) {
            if (op(s, t) == 0.0) continue;
            out.block(s * dim, t * dim, dim, dim) += op(s, t) * blocks[static_cast<std::size_t>(a)];
          }
        }
      }
    }
    blocks = std::move(next);
  }
  // Kronecker order above puts the newest site in the most significant
  // position; reverse the bit order so site 1 is most significant.
  const auto n = static_cast<int>(mpo.n_sites);
  const auto dim = blocks[0].rows();
  auto reverse_bits = [n](Eigen::Index x) {
    Eigen::Index r = 0;
    for (int i = 0; i < n; ++i) r |= ((x >> i) & 1) << (n - 1 - i);
    return r;
  };
  linalg::DenseMatrix out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) out(reverse_bits(i), reverse_bits(j)) = blocks[0](i, j);
  }
  return out;
}

double expectation(const Mps& state, const Mpo& mpo) {
  if (state.n_sites() != mpo.n_sites) throw InvalidInput("expectation: size mismatch");
  std::vector<linalg::DenseMatrix> env(1, linalg::DenseMatrix::Ones(1, 1));
  linalg::DenseMatrix norm_env = linalg::DenseMatrix::Ones(1, 1);
  for (std::size_t k = 0; k < mpo.n_sites; ++k) {
    const auto& t = state.site(k);
    const auto& w = mpo.sites[k];
    std::vector<linalg::DenseMatrix> next(static_cast<std::size_t>(w.right_dim),
                                          linalg::DenseMatrix::Zero(t.right_dim(), t.right_dim()));
    for (int a = 0; a < w.left_dim; ++a) {
      for (int s = 0; s < 2; ++s) {
        const linalg::DenseMatrix la = env[static_cast<std::size_t>(a)] * t.a[s];
        for (int b = 0; b < w.right_dim; ++b) {
          if (!w.has(a, b)) continue;
          for (int u = 0; u < 2; ++u) {
            const double c = w.at(a, b)(u, s);
            if (c != 0.0) next[static_cast<std::size_t>(b)].noalias() += c * t.a[u].transpose() * la;
          }
        }
      }
    }
    env = std::move(next);
    linalg::DenseMatrix nn = linalg::DenseMatrix::Zero(t.right_dim(), t.right_dim());
    for (int s = 0; s < 2; ++s) nn.noalias() += t.a[s].transpose() * norm_env * t.a[s];
    norm_env = std::move(nn);
  }
  return env[0](0, 0) / norm_env(0, 0);
}

}  // namespace dicke::dmrg
