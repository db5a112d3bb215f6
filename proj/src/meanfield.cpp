#include "dicke/meanfield.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace dicke::mf {

double MeanFieldState::nx_A() const { return std::sin(theta_A) * std::cos(phi_A); }
double MeanFieldState::nz_A() const { return std::cos(theta_A); }
double MeanFieldState::nx_B() const { return std::sin(theta_B) * std::cos(phi_B); }
double MeanFieldState::nz_B() const { return std::cos(theta_B); }

double mf_energy(const ModelParams& p, const MeanFieldState& s) {
  const double nz_a = s.nz_A();
  const double nz_b = s.nz_B();
  return p.omega_c * s.alpha * s.alpha + p.g * s.alpha * (s.nx_A() + s.nx_B()) / 2.0 + p.eps * (nz_a + nz_b) / 2.0 +
         p.J * nz_a * nz_b;
}

double optimal_alpha(const ModelParams& p, const MeanFieldState& s) {
  return -p.g * (s.nx_A() + s.nx_B()) / (4.0 * p.omega_c);
}

namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Reduced functional of (thA, phA, thB, phB) with alpha at its optimum.
struct Reduced {
  double k;  // g^2 / (16 w)
  double eps;
  double J;

  double value(const Vec4& v) const {
    const double sx = std::sin(v(0)) * std::cos(v(1)) + std::sin(v(2)) * std::cos(v(3));
    const double za = std::cos(v(0));
    const double zb = std::cos(v(2));
    return -k * sx * sx + eps * (za + zb) / 2.0 + J * za * zb;
  }

  Vec4 gradient(const Vec4& v) const {
    const double sa = std::sin(v(0)), ca = std::cos(v(0)), sb = std::sin(v(2)), cb = std::cos(v(2));
    const double cpa = std::cos(v(1)), spa = std::sin(v(1)), cpb = std::cos(v(3)), spb = std::sin(v(3));
    const double sx = sa * cpa + sb * cpb;
    const double dsx = -2.0 * k * sx;
    Vec4 g;
    g(0) = dsx * ca * cpa - sa * (eps / 2.0 + J * cb);
    g(1) = -dsx * sa * spa;
    g(2) = dsx * cb * cpb - sb * (eps / 2.0 + J * ca);
    g(3) = -dsx * sb * spb;
    return g;
  }

  Mat4 hessian(const Vec4& v) const {
    constexpr double h = 1e-6;
    Mat4 H;
    for (int i = 0; i < 4; ++i) {
      Vec4 a = v, b = v;
      a(i) += h;
      b(i) -= h;
      H.col(i) = (gradient(a) - gradient(b)) / (2.0 * h);
    }
    return 0.5 * (H + H.transpose());
  }
};

// Saddle-free Newton with a backtracking line search; falls back to plain
// gradient steps when the Newton direction fails to descend.
Vec4 descend(const Reduced& f, Vec4 v, const MinimizeOptions& opts) {
  double fv = f.value(v);
  for (int it = 0; it < opts.max_steps; ++it) {
    const Vec4 g = f.gradient(v);
    if (g.cwiseAbs().maxCoeff() < opts.grad_tol) break;
    Eigen::SelfAdjointEigenSolver<Mat4> es(f.hessian(v));
    const Vec4 lam = es.eigenvalues().cwiseAbs().cwiseMax(1e-8);
    Vec4 dir = -es.eigenvectors() * ((es.eigenvectors().transpose() * g).cwiseQuotient(lam));
    if (!(dir.dot(g) < 0.0) || !dir.allFinite()) dir = -g;
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Vec4 trial = v + t * dir;
      const double ft = f.value(trial);
      if (ft <= fv + 1e-4 * t * dir.dot(g)) {
        v = trial;
        fv = ft;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  return v;
}

std::array<Vec4, 32> seed_table() {
  constexpr double pi = 3.14159265358979323846;
  std::array<Vec4, 32> seeds;
  std::size_t i = 0;
  // Canonical configurations first: polarized, Neel, x-tilted, x-antiparallel.
  seeds[i++] = Vec4(pi, 0.0, pi, 0.0);
  seeds[i++] = Vec4(0.0, 0.0, 0.0, 0.0);
  seeds[i++] = Vec4(0.0, 0.0, pi, 0.0);
  seeds[i++] = Vec4(pi, 0.0, 0.0, 0.0);
  seeds[i++] = Vec4(pi / 2, 0.0, pi / 2, 0.0);
  seeds[i++] = Vec4(pi / 2, 0.0, pi / 2, pi);
  // Mixed tilts off the poles so descent is not stuck on stationary points.
  const double th[] = {0.05, 0.8, 1.6, 2.4, 3.09};
  for (double a : th)
    for (double b : th) seeds[i++] = Vec4(a, 0.0, b, 0.0);
  seeds[i++] = Vec4(2.4, 0.3, 0.8, -0.3);
  return seeds;
}

MeanFieldState to_state(const ModelParams& p, const Vec4& v) {
  MeanFieldState s;
  s.theta_A = v(0);
  s.phi_A = v(1);
  s.theta_B = v(2);
  s.phi_B = v(3);
  // Canonical angles: theta in [0, pi], phi in [0, 2 pi).
  auto canon = [](double& th, double& ph) {
    constexpr double two_pi = 6.28318530717958647692;
    th = std::remainder(th, two_pi);
    if (th < 0.0) {
      th = -th;
      ph += two_pi / 2.0;
    }
    ph = std::fmod(ph, two_pi);
    if (ph < 0.0) ph += two_pi;
  };
  canon(s.theta_A, s.phi_A);
  canon(s.theta_B, s.phi_B);
  // Parity partner with non-negative total x component.
  if (s.nx_A() + s.nx_B() < 0.0) {
    constexpr double pi = 3.14159265358979323846;
    s.phi_A = std::fmod(3.0 * pi - s.phi_A, 2.0 * pi);
    s.phi_B = std::fmod(3.0 * pi - s.phi_B, 2.0 * pi);
  }
  // Sublattice A carries the larger z component.
  if (s.nz_A() < s.nz_B()) {
    std::swap(s.theta_A, s.theta_B);
    std::swap(s.phi_A, s.phi_B);
  }
  s.alpha = optimal_alpha(p, s);
  if (std::abs(s.alpha) < 1e-14) s.alpha = 0.0;  // rounding residue of sin(pi)
  s.energy_per_site = mf_energy(p, s);
  return s;
}

void check_finite(const ModelParams& p) {
  if (!std::isfinite(p.J) || !std::isfinite(p.eps) || !std::isfinite(p.g) || !(p.omega_c > 0.0))
    throw InvalidInput("mean field: parameters must be finite with omega_c > 0");
}

}  // namespace

MeanFieldState mf_minimize(const ModelParams& params, const MinimizeOptions& opts) {
  check_finite(params);
  if (opts.seeds < 1) throw InvalidInput("mf_minimize: need at least one seed");
  const Reduced f{params.g * params.g / (16.0 * params.omega_c), params.eps, params.J};
  const auto table = seed_table();
  std::vector<std::size_t> order(table.size());
  std::iota(order.begin(), order.end(), 0);
  if (opts.order_seed != 0) std::shuffle(order.begin(), order.end(), std::mt19937(opts.order_seed));
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(opts.seeds), table.size());

  Vec4 best = table[order[0]];
  std::size_t best_idx = table.size();
  double best_e = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const Vec4 v = descend(f, table[order[i]], opts);
    const double e = f.value(v);
    // Ties go to the lowest seed index, so the result does not depend on order.
    if (e < best_e - 1e-15 || (std::abs(e - best_e) <= 1e-15 && order[i] < best_idx)) {
      best_e = e;
      best = v;
      best_idx = order[i];
    }
  }
  return to_state(params, best);
}

Phase mf_classify(const MeanFieldState& s) {
  const bool sr = std::abs(s.alpha) > kMfThreshold;
  const bool af = std::abs(s.nz_A() - s.nz_B()) > kMfThreshold;
  if (af) return sr ? Phase::AS : Phase::AN;
  return sr ? Phase::PS : Phase::PN;
}

Phase mf_phase_at(const ModelParams& params) { return mf_classify(mf_minimize(params)); }

double g_crit_ferro(const ModelParams& p) {
  if (p.J > 0.0) throw InvalidInput("g_crit_ferro: requires J <= 0");
  return std::sqrt(p.omega_c * (2.0 * p.eps + 2.0 * kConnectivity * std::abs(p.J)));
}

double weak_energy_ferro(const ModelParams& p) {
  if (p.J > 0.0) throw InvalidInput("weak_energy_ferro: requires J <= 0");
  return -std::abs(p.J) * kConnectivity / 2.0 - p.eps;
}

double classical_af_boundary(double J) {
  if (!(J > 0.0)) throw InvalidInput("classical_af_boundary: requires J > 0");
  return 2.0 * J;
}

ModelParams renormalize_A2(const ModelParams& p) {
  ModelParams out = p;
  const double D = p.D.value_or(0.0);
  if (!(D >= 0.0)) throw InvalidInput("renormalize_A2: D must be >= 0");
  const double w = std::sqrt(p.omega_c * p.omega_c + 4.0 * p.omega_c * D);
  out.omega_c = w;
  out.g = std::sqrt(p.omega_c / w) * p.g;
  out.D.reset();
  return out;
}

double trk_min_D(const ModelParams& p) {
  if (!(p.eps > 0.0)) throw InvalidInput("trk_min_D: requires eps > 0");
  return p.g * p.g / (2.0 * p.eps);
}

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::g: return "g";
    case Axis::J: return "J";
    case Axis::eps: return "eps";
  }
  return "?";
}

ModelParams with_axis(const ModelParams& base, Axis axis, double value) {
  ModelParams p = base;
  switch (axis) {
    case Axis::g: p.g = value; break;
    case Axis::J: p.J = value; break;
    case Axis::eps: p.eps = value; break;
  }
  return p;
}

bool is_superradiant(Phase p) { return p == Phase::PS || p == Phase::AS; }
bool is_antiferro(Phase p) { return p == Phase::AN || p == Phase::AS; }

BisectResult mf_boundary(const ModelParams& base, Axis axis, double lo, double hi,
                         const std::function<bool(Phase)>& predicate, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("mf_boundary: tol must be > 0");
  const bool at_lo = predicate(mf_phase_at(with_axis(base, axis, lo)));
  const bool at_hi = predicate(mf_phase_at(with_axis(base, axis, hi)));
  if (at_lo == at_hi) throw BracketError("mf_boundary: predicate equal at both ends", lo, hi);
  while (std::abs(hi - lo) > 2.0 * tol) {
    const double mid = 0.5 * (lo + hi);
    if (predicate(mf_phase_at(with_axis(base, axis, mid))) == at_lo)
      lo = mid;
    else
      hi = mid;
  }
  return {0.5 * (lo + hi), 0.5 * std::abs(hi - lo)};
}

}  // namespace dicke::mf
