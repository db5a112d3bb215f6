#include "dicke/selfconsist.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <optional>
#include <sstream>

#include "dicke/mpo.hpp"

namespace dicke::sc {

std::string to_string(Mode mode) { return mode == Mode::ferro ? "ferro" : "af"; }

nlce::Mode nlce_mode(Mode mode) { return mode == Mode::ferro ? nlce::Mode::ferro_step1 : nlce::Mode::af_step2; }

ClusterSizes ClusterSizes::defaults(Mode mode) {
  return mode == Mode::ferro ? ClusterSizes{100, 101} : ClusterSizes{100, 102};
}

FixedPointConfig FixedPointConfig::tight() {
  FixedPointConfig c;
  c.tol = 1e-13;
  return c;
}

void FixedPointConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidInput("fixed point: tol must be > 0");
  if (max_iters < 1) throw InvalidInput("fixed point: max_iters must be >= 1");
  if (anderson_window < 1) throw InvalidInput("fixed point: anderson_window must be >= 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw InvalidInput("fixed point: damping must lie in (0, 1]");
  if (seed_floor < 0.0 || seed_floor > 0.5) throw InvalidInput("fixed point: seed_floor must lie in [0, 1/2]");
  if (seed_iters < 0) throw InvalidInput("fixed point: seed_iters must be >= 0");
  if (!(classify_threshold > 0.0)) throw InvalidInput("fixed point: classify_threshold must be > 0");
  if (!(stability_probe > 0.0 && stability_probe < 0.25)) throw InvalidInput("fixed point: stability_probe out of range");
  if (!(wall_amplitude > 0.0)) throw InvalidInput("fixed point: wall_amplitude must be > 0");
  if (stall_iters < 0) throw InvalidInput("fixed point: stall_iters must be >= 0");
}

Phase classify(const SelfFields& f, double threshold) {
  const bool sr = std::abs(f.m_x) > threshold;
  const bool af = std::abs(f.m_s) > threshold;
  if (af) return sr ? Phase::AS : Phase::AN;
  return sr ? Phase::PS : Phase::PN;
}

std::string to_string(SweepVar var) { return var == SweepVar::g ? "g" : "eps"; }
std::string to_string(Direction dir) { return dir == Direction::ascending ? "ascending" : "descending"; }

ModelParams with_value(const ModelParams& base, SweepVar var, double value) {
  ModelParams p = base;
  (var == SweepVar::g ? p.g : p.eps) = value;
  return p;
}

// ---------------------------------------------------------------------------

PairEvaluator::PairEvaluator(const ModelParams& params, Mode mode, ClusterSizes sizes, dmrg::DmrgSettings settings,
                             int jobs)
    : params_(params), mode_(mode), sizes_(sizes), settings_(settings), jobs_(std::max(1, jobs)) {
  params_.validate();
  settings_.validate();
  nlce::check_sizes(sizes_.small, sizes_.large, nlce_mode(mode_));
}

void PairEvaluator::set_params(const ModelParams& params) {
  params.validate();
  params_ = params;
}

dmrg::Mps PairEvaluator::initial_state(std::size_t n, const std::optional<dmrg::Mps>& warm,
                                       const SelfFields& fields) const {
  if (warm && warm->n_sites() == n) return *warm;
  using dmrg::ProductPattern;
  switch (cold_start_) {
    case ColdStart::minus_z: return dmrg::product_state(n, ProductPattern::minus_z);
    case ColdStart::plus_x: return dmrg::product_state(n, ProductPattern::plus_x);
    case ColdStart::neel: return dmrg::product_state(n, ProductPattern::neel_even_up);
    case ColdStart::automatic: break;
  }
  if (mode_ == Mode::af && fields.m_s > 1e-3) return dmrg::product_state(n, ProductPattern::neel_even_up);
  if (std::abs(fields.m_x) > 1e-3 || fields.m_s < -1e-3) return dmrg::product_state(n, ProductPattern::plus_x);
  return dmrg::product_state(n, ProductPattern::minus_z);
}

PairEvaluator::Evaluation PairEvaluator::evaluate(const SelfFields& fields_in) {
  SelfFields f = fields_in;
  if (mode_ == Mode::ferro) f.m_s = 0.0;
  f.validate();
  const bool af = mode_ == Mode::af;

  auto run = [&](std::size_t n, const std::optional<dmrg::Mps>& warm) {
    const auto mpo = dmrg::build_mpo(params_, f, n, af);
    auto sol = dmrg::dmrg_ground(mpo, initial_state(n, warm, f), settings_);
    if (warm && warm->n_sites() == n) {
      // A warm state from another phase can leave domain walls that local
      // updates cannot remove (exactly so without a transverse field). If the
      // result lies above the matching product state, start over from it.
      const auto cold = initial_state(n, std::nullopt, f);
      const double e_cold = dmrg::expectation(cold, mpo);
      if (sol.energy > e_cold + 10.0 * settings_.energy_tol * static_cast<double>(n))
        sol = dmrg::dmrg_ground(mpo, cold, settings_);
    }
    return sol;
  };
  nlce::ClusterPair pair;
  pair.mode = nlce_mode(mode_);
  if (jobs_ > 1) {
    auto large = std::async(std::launch::async, [&] { return run(sizes_.large, warm_.large); });
    pair.small = run(sizes_.small, warm_.small);
    pair.large = large.get();
  } else {
    pair.small = run(sizes_.small, warm_.small);
    pair.large = run(sizes_.large, warm_.large);
  }
  ++evaluations_;
  for (const auto* sol : {&pair.small, &pair.large}) {
    if (!sol->converged) {
      std::ostringstream os;
      os << "DMRG on the " << sol->n_sites << "-site cluster did not converge in " << sol->sweeps_used
         << " sweeps at " << describe(params_) << " m_x=" << f.m_x << " m_s=" << f.m_s;
      throw NotConverged(os.str());
    }
  }

  Evaluation e;
  e.input = f;
  e.output.m_x = std::clamp(nlce::bulk_observable(pair, nlce::Observable::sum_sx), -0.5, 0.5);
  // Without boundary fields the even clusters are reflection symmetric and the
  // staggered sum vanishes identically; DMRG would only add noise to that zero.
  e.output.m_s = af && f.m_s != 0.0
                     ? std::clamp(nlce::bulk_observable(pair, nlce::Observable::staggered_sum_sz), -0.5, 0.5)
                     : 0.0;
  {
    const auto& sz = pair.large.sz_profile;
    const std::size_t a = sz.size() / 4;
    const std::size_t b = sz.size() / 2;
    double sum = 0.0;
    for (std::size_t i = a; i < b; ++i) sum += 0.5 * std::abs(sz[i] - sz[i + 1]);
    e.bulk_staggered_amplitude = b > a ? sum / static_cast<double>(b - a) : 0.0;
  }
  e.matter_energy = nlce::bulk_energy(pair);
  e.total_energy = e.matter_energy + params_.g * params_.g / params_.omega_c * f.m_x * f.m_x;
  warm_.small = std::move(pair.small.final_state);
  warm_.large = std::move(pair.large.final_state);
  return e;
}

SelfFields fixed_point_map(PairEvaluator& evaluator, const SelfFields& fields) {
  return evaluator.evaluate(fields).output;
}

double total_energy(PairEvaluator& evaluator, const SelfFields& fields) {
  return evaluator.evaluate(fields).total_energy;
}

// ---------------------------------------------------------------------------

namespace {

using Vec = Eigen::VectorXd;

Vec to_vec(const SelfFields& f, Mode mode) {
  Vec x(mode == Mode::af ? 2 : 1);
  x(0) = f.m_x;
  if (mode == Mode::af) x(1) = f.m_s;
  return x;
}

SelfFields to_fields(const Vec& x) {
  SelfFields f;
  f.m_x = x(0);
  f.m_s = x.size() > 1 ? x(1) : 0.0;
  return f;
}

struct Box {
  Vec lo;
  Vec hi;

  static Box full(Eigen::Index n) { return {Vec::Constant(n, -0.5), Vec::Constant(n, 0.5)}; }
  Vec clamp(const Vec& x) const { return x.cwiseMax(lo).cwiseMin(hi); }
};

struct CoreResult {
  Vec x;
  Vec f;
  double residual = std::numeric_limits<double>::infinity();
  double total_energy = 0.0;
  double matter_energy = 0.0;
  double staggered_amplitude = 0.0;
  int iterations = 0;
  bool converged = false;
};

constexpr double kMinDamping = 1.0 / 64.0;

CoreResult anderson_core(PairEvaluator& ev, Vec x, const FixedPointConfig& cfg, const Box& box, bool seed,
                         int budget) {
  const Eigen::Index n = x.size();
  std::deque<Vec> dx_hist;
  std::deque<Vec> dr_hist;
  Vec x_prev;
  Vec r_prev;
  std::deque<Vec> recent;  // last iterates, for cycle detection
  double prev_res = std::numeric_limits<double>::infinity();
  double beta = cfg.damping;
  int cycle_count = 0;
  CoreResult best;
  WarmStates best_warm;

  bool pinned_s = false;  // m_s held at exactly 0 (AF mode only)
  double stall_ref = std::numeric_limits<double>::infinity();
  int stall_since = 0;
  double zero_probe_at = 1e-3;

  for (int k = 0; k < budget; ++k) {
    bool floored = false;
    if (seed && k < cfg.seed_iters) {
      for (Eigen::Index c = 0; c < n; ++c) {
        if (std::abs(x(c)) < cfg.seed_floor) {
          x(c) = x(c) < 0.0 ? -cfg.seed_floor : cfg.seed_floor;
          floored = true;
        }
      }
    }
    if (pinned_s) x(1) = 0.0;
    x = box.clamp(x);
    if (floored) {
      dx_hist.clear();
      dr_hist.clear();
      x_prev.resize(0);
    }
    const auto e = ev.evaluate(to_fields(x));
    const Vec f = to_vec(e.output, ev.mode());
    // Without coupling m_x never enters the Hamiltonian: one evaluation fixes it.
    if (ev.params().g == 0.0) x(0) = f(0);
    const Vec r = f - x;
    const double res = r.cwiseAbs().maxCoeff();
    if (res < 0.5 * stall_ref || k == 0) {
      stall_ref = res;
      stall_since = k;
    } else if (cfg.stall_iters > 0 && k - stall_since >= cfg.stall_iters) {
      // No halving of the residual for a long stretch: no root nearby.
      break;
    }
    if (res < best.residual || k == 0) {
      best.x = x;
      best.f = f;
      best.residual = res;
      best.total_energy = e.total_energy;
      best.matter_energy = e.matter_energy;
      best.staggered_amplitude = e.bulk_staggered_amplitude;
      best_warm = ev.warm();
    }
    best.iterations = k + 1;
    if (res <= cfg.tol) {
      best.x = x;
      best.f = f;
      best.residual = res;
      best.total_energy = e.total_energy;
      best.matter_energy = e.matter_energy;
      best.staggered_amplitude = e.bulk_staggered_amplitude;
      best.converged = true;
      return best;
    }

    // Through a marginal map the approach to m_x = 0 is only algebraic and
    // stalls at the noise floor; once small and heading there, test 0 itself.
    if (!(seed && k < cfg.seed_iters) && x(0) != 0.0 && std::abs(x(0)) < zero_probe_at && r(0) * x(0) < 0.0 &&
        std::abs(f(0)) < std::abs(x(0)) && box.lo(0) <= 0.0 && box.hi(0) >= 0.0) {
      const WarmStates keep = ev.warm();
      Vec z = x;
      z(0) = 0.0;
      const auto ez = ev.evaluate(to_fields(z));
      const Vec fz = to_vec(ez.output, ev.mode());
      const double rz = (fz - z).cwiseAbs().maxCoeff();
      if (rz <= cfg.tol) {
        best.x = z;
        best.f = fz;
        best.residual = rz;
        best.total_energy = ez.total_energy;
        best.matter_energy = ez.matter_energy;
        best.staggered_amplitude = ez.bulk_staggered_amplitude;
        best.converged = true;
        return best;
      }
      ev.set_warm(keep);
      zero_probe_at = std::abs(x(0)) / 4.0;
    }

    recent.push_back(x);
    if (recent.size() > 3) recent.pop_front();
    if (recent.size() == 3) {
      const double back2 = (recent[2] - recent[0]).cwiseAbs().maxCoeff();
      const double back1 = (recent[2] - recent[1]).cwiseAbs().maxCoeff();
      cycle_count = (back2 < cfg.tol && back1 > cfg.tol) ? cycle_count + 1 : 0;
      if (cycle_count >= 20)
        throw CycleDetected("fixed-point iteration oscillates with period 2 at " + describe(ev.params()) +
                            "; reduce the damping");
    }

    // A vanishing staggered moment is pinned to exactly zero once both the
    // iterate and its image sit below the classification threshold.
    if (n > 1 && !pinned_s && !(seed && k < cfg.seed_iters) && std::abs(x(1)) < cfg.classify_threshold &&
        std::abs(f(1)) < cfg.classify_threshold) {
      pinned_s = true;
      dx_hist.clear();
      dr_hist.clear();
      x_prev.resize(0);
    }

    if (x_prev.size() == n) {
      // Only an overshoot (residual grew and changed direction) calls for
      // damping; a growing residual of fixed sign means the iterate is
      // leaving an unstable point, which is progress.
      if (res > prev_res && r.dot(r_prev) < 0.0) {
        beta = std::max(0.5 * beta, kMinDamping);
        dx_hist.clear();
        dr_hist.clear();
      } else {
        beta = std::min(2.0 * beta, cfg.damping);
        dx_hist.push_back(x - x_prev);
        dr_hist.push_back(r - r_prev);
        if (static_cast<int>(dx_hist.size()) > cfg.anderson_window) {
          dx_hist.pop_front();
          dr_hist.pop_front();
        }
      }
    }
    x_prev = x;
    r_prev = r;
    prev_res = res;

    Vec next = x + beta * r;
    if (!dr_hist.empty()) {
      const auto m = static_cast<Eigen::Index>(dr_hist.size());
      Eigen::MatrixXd dX(n, m);
      Eigen::MatrixXd dR(n, m);
      for (Eigen::Index j = 0; j < m; ++j) {
        dX.col(j) = dx_hist[static_cast<std::size_t>(j)];
        dR.col(j) = dr_hist[static_cast<std::size_t>(j)];
      }
      const Vec gamma = dR.completeOrthogonalDecomposition().solve(r);
      if (gamma.allFinite()) next = x + beta * r - (dX + beta * dR) * gamma;
    }
    if (pinned_s) next(1) = 0.0;
    x = next;
  }
  ev.set_warm(best_warm);
  return best;
}

// Slope of map component c along its own axis at a fixed point.
double axis_slope(PairEvaluator& ev, const Vec& x, const Vec& f, Eigen::Index c, double probe, double dir) {
  Vec xp = x;
  xp(c) = std::clamp(x(c) + dir * probe, -0.5, 0.5);
  const double dx = xp(c) - x(c);
  if (dx == 0.0) return 0.0;
  const Vec fp = to_vec(ev.evaluate(to_fields(xp)).output, ev.mode());
  return (fp(c) - f(c)) / dx;
}

}  // namespace

ConvergedPoint anderson_solve(PairEvaluator& ev, const SelfFields& init, const FixedPointConfig& cfg) {
  cfg.validate();
  init.validate();
  const bool warm_used = !ev.warm().empty();
  const Eigen::Index n = ev.mode() == Mode::af ? 2 : 1;
  Vec x0 = to_vec(init, ev.mode());

  CoreResult res = anderson_core(ev, x0, cfg, Box::full(n), true, cfg.max_iters);
  int total_iters = res.iterations;

  // Anderson converges to unstable fixed points as readily as to stable ones
  // (m_x = 0 inside the superradiant phase, or the saddle between two
  // branches). Probe each axis and, if the map expands, bracket the stable
  // root outward and re-solve inside the bracket.
  if (cfg.stability_check && res.converged) {
    for (int round = 0; round < 3; ++round) {
      const WarmStates saved = ev.warm();
      Eigen::Index unstable = -1;
      double dir = 1.0;
      for (Eigen::Index c = 0; c < n && unstable < 0; ++c) {
        dir = res.x(c) < 0.0 ? -1.0 : 1.0;
        if (std::abs(res.x(c)) + cfg.stability_probe > 0.5) dir = -dir;
        const double slope = axis_slope(ev, res.x, res.f, c, cfg.stability_probe, dir);
        ev.set_warm(saved);
        if (slope > 1.0 + cfg.stability_margin) unstable = c;
      }
      if (unstable < 0) break;

      // r_c * dir > 0 just past the unstable point. For m_x walk outward
      // until r_c flips, which keeps the nearest stable root. For m_s walk
      // inward from the saturated value instead: weak boundary fields leave a
      // domain wall in each cluster and the map has spurious small roots.
      double lo = res.x(unstable) + dir * cfg.stability_probe;
      double hi = dir > 0 ? 0.5 : -0.5;
      auto residual_at = [&](double t) {
        Vec xt = res.x;
        xt(unstable) = t;
        const Vec ft = to_vec(ev.evaluate(to_fields(xt)).output, ev.mode());
        ++total_iters;
        return (ft(unstable) - t) * dir;
      };
      if (unstable == 1) {
        double outer = hi;
        double t = 0.5 * (res.x(unstable) + hi);
        while (std::abs(t - res.x(unstable)) > cfg.stability_probe && residual_at(t) <= 0.0) {
          outer = t;
          t = 0.5 * (res.x(unstable) + t);
        }
        lo = t;
        hi = outer;
      } else {
        double step = cfg.stability_probe;
        while (true) {
          step *= 2.0;
          double t = res.x(unstable) + dir * step;
          const bool at_bound = std::abs(t) >= 0.5;
          if (at_bound) t = dir > 0 ? 0.5 : -0.5;
          if (residual_at(t) <= 0.0 || at_bound) {
            hi = t;
            break;
          }
          lo = t;
        }
      }
      Box box = Box::full(n);
      box.lo(unstable) = std::min(lo, hi);
      box.hi(unstable) = std::max(lo, hi);
      Vec start = res.x;
      start(unstable) = 0.5 * (lo + hi);
      CoreResult again = anderson_core(ev, start, cfg, box, false, cfg.max_iters);
      total_iters += again.iterations;
      if (!again.converged) {
        // Outside the box the map may have a stable root the box excluded.
        again = anderson_core(ev, again.x, cfg, Box::full(n), false, cfg.max_iters);
        total_iters += again.iterations;
      }
      if (!again.converged) {
        res = again;
        break;
      }
      res = again;
    }
  }

  std::string remark;
  if (n > 1 && res.converged && std::abs(res.x(1)) <= cfg.classify_threshold && res.staggered_amplitude > cfg.wall_amplitude) {
    const WarmStates saved = ev.warm();
    ev.clear_warm();
    Vec start = res.x;
    start(1) = 0.5;
    CoreResult ordered = anderson_core(ev, start, cfg, Box::full(n), false, cfg.max_iters);
    total_iters += ordered.iterations;
    if (ordered.converged && std::abs(ordered.x(1)) > cfg.classify_threshold) {
      res = ordered;
      remark = "m_s = 0 solution held a domain wall; re-solved in the ordered sector";
    } else {
      ev.set_warm(saved);
    }
  }

  ConvergedPoint pt;
  pt.params = ev.params();
  pt.fields = to_fields(res.x);
  if (std::abs(pt.fields.m_x) < cfg.snap_factor * cfg.tol) pt.fields.m_x = 0.0;
  pt.matter_energy = res.matter_energy;
  pt.energy_per_site = res.total_energy;
  pt.photon_density = photon_density(pt.params, pt.fields.m_x);
  pt.iterations = total_iters;
  pt.residual = res.residual;
  pt.converged = res.converged;
  pt.warm_start_used = warm_used;
  pt.classification = classify(pt.fields, cfg.classify_threshold);
  if (!res.converged) {
    std::ostringstream os;
    os << "fixed point not converged after " << total_iters << " iterations, best residual " << res.residual;
    pt.note = os.str();
  } else {
    pt.note = remark;
  }
  return pt;
}

double hellmann_feynman_residual(PairEvaluator& ev, const SelfFields& fields, double h) {
  if (!(h > 0.0)) throw InvalidInput("hellmann_feynman_residual: step must be > 0");
  const WarmStates saved = ev.warm();
  // Fourth-order central stencil: the cluster energies carry ~1e-10 noise,
  // so the step has to stay large while the truncation error stays small.
  const double step = std::min(h, (0.5 - std::abs(fields.m_x)) / 2.0);
  auto at = [&](double dm) {
    SelfFields f = fields;
    f.m_x += dm;
    return ev.evaluate(f).total_energy;
  };
  double slope = 0.0;
  if (step > 0.1 * h) {
    slope = (at(-2.0 * step) - 8.0 * at(-step) + 8.0 * at(step) - at(2.0 * step)) / (12.0 * step);
  } else {
    // Pinned at |m_x| = 1/2: one-sided second-order difference inward.
    const double s = fields.m_x > 0.0 ? -h : h;
    SelfFields a = fields;
    SelfFields b = fields;
    a.m_x += s;
    b.m_x += 2.0 * s;
    const double e0 = ev.evaluate(fields).total_energy;
    slope = (-3.0 * e0 + 4.0 * ev.evaluate(a).total_energy - ev.evaluate(b).total_energy) / (2.0 * s);
  }
  ev.set_warm(saved);
  return std::abs(slope);
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> Landscape::local_minima() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].is_local_min) out.push_back(i);
  return out;
}

Landscape landscape_scan(PairEvaluator& ev, const std::vector<double>& grid, MsPolicy policy,
                         const FixedPointConfig& cfg) {
  if (grid.empty()) throw InvalidInput("landscape_scan: empty grid");
  for (double m : grid)
    if (!(std::abs(m) <= 0.5)) throw InvalidInput("landscape_scan: grid values must lie in [-1/2, 1/2]");

  Landscape land;
  double m_s = ev.mode() == Mode::af ? 0.25 : 0.0;
  for (double m_x : grid) {
    LandscapePoint p;
    p.m_x = m_x;
    if (policy == MsPolicy::inner_converged && ev.mode() == Mode::af) {
      // Self-consistent m_s at fixed m_x by damped secant iteration.
      double s = std::abs(m_s) < cfg.seed_floor ? cfg.seed_floor : m_s;
      double s_prev = 0.0;
      double r_prev = 0.0;
      bool have_prev = false;
      double energy = 0.0;
      for (int k = 0; k < cfg.max_iters; ++k) {
        const auto e = ev.evaluate({m_x, s});
        energy = e.total_energy;
        const double r = e.output.m_s - s;
        if (std::abs(r) <= cfg.tol) break;
        double next = s + r;
        if (have_prev && r != r_prev) {
          const double secant = s - r * (s - s_prev) / (r - r_prev);
          if (std::isfinite(secant)) next = secant;
        }
        s_prev = s;
        r_prev = r;
        have_prev = true;
        s = std::clamp(next, -0.5, 0.5);
      }
      m_s = s;
      p.m_s = s;
      p.energy = energy;
    } else {
      p.m_s = 0.0;
      p.energy = ev.evaluate({m_x, 0.0}).total_energy;
    }
    land.points.push_back(p);
  }
  auto& pts = land.points;
  // Runs of equal energy (within solver noise) form one plateau; a plateau
  // lower than both outer neighbours is one minimum, marked at its middle node.
  constexpr double kFlat = 1e-12;
  for (std::size_t i = 0; i < pts.size();) {
    std::size_t j = i;
    while (j + 1 < pts.size() && std::abs(pts[j + 1].energy - pts[i].energy) <= kFlat) ++j;
    const bool left_ok = i == 0 || pts[i].energy < pts[i - 1].energy;
    const bool right_ok = j + 1 == pts.size() || pts[j].energy < pts[j + 1].energy;
    if (pts.size() > 1 && left_ok && right_ok) pts[(i + j) / 2].is_local_min = true;
    i = j + 1;
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i].energy < pts[land.global_min].energy) land.global_min = i;
  return land;
}

// ---------------------------------------------------------------------------

ConvergedPoint solve_point(const SweepSetup& setup, double value, const SelfFields& init, const WarmStates* warm,
                           WarmStates* warm_out) {
  PairEvaluator ev(with_value(setup.params_template, setup.var, value), setup.mode, setup.sizes, setup.dmrg,
                   setup.jobs);
  if (warm) ev.set_warm(*warm);
  ConvergedPoint pt;
  try {
    pt = anderson_solve(ev, init, setup.fixed_point);
  } catch (const Error& e) {
    pt.params = ev.params();
    pt.fields = init;
    pt.converged = false;
    pt.note = e.what();
  }
  if (warm_out) *warm_out = ev.warm();
  return pt;
}

SweepBranch adiabatic_sweep(const SweepSetup& setup, const std::vector<double>& values) {
  if (values.empty()) throw InvalidInput("adiabatic_sweep: no sweep values");
  if (!(setup.refine_step >= 0.0)) throw InvalidInput("adiabatic_sweep: refine_step must be >= 0");
  SweepBranch branch;
  branch.swept = setup.var;
  branch.direction = values.size() > 1 && values[1] < values[0] ? Direction::descending : Direction::ascending;
  const double sign = branch.direction == Direction::ascending ? 1.0 : -1.0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!((values[k] - values[k - 1]) * sign > 0.0))
      throw InvalidInput("adiabatic_sweep: values must be strictly monotone");
  }

  PairEvaluator ev(with_value(setup.params_template, setup.var, values.front()), setup.mode, setup.sizes, setup.dmrg,
                   setup.jobs);
  SelfFields fields = setup.init;
  WarmStates good_warm;
  std::optional<Phase> last_class;
  double last_good_value = 0.0;
  std::vector<std::pair<double, double>> refined;  // gaps already revisited
  int failures = 0;
  std::deque<double> todo(values.begin(), values.end());
  while (!todo.empty()) {
    const double v = todo.front();
    todo.pop_front();
    ev.set_params(with_value(setup.params_template, setup.var, v));
    ConvergedPoint pt;
    try {
      pt = anderson_solve(ev, fields, setup.fixed_point);
    } catch (const Error& e) {
      pt.params = ev.params();
      pt.fields = fields;
      pt.converged = false;
      pt.note = e.what();
    }
    if (!pt.converged) {
      // A metastable branch past its spinodal has no root near the previous
      // fields and its ghost traps the iteration; restart cold from m_x = 0
      // (ordered in AF mode), then from the branch seed.
      const std::string first_note = pt.note;
      for (const SelfFields& start : {SelfFields{0.0, ev.mode() == Mode::af ? 0.5 : 0.0}, setup.init}) {
        ev.clear_warm();
        try {
          auto alt = anderson_solve(ev, start, setup.fixed_point);
          if (alt.converged) {
            pt = alt;
            pt.note = "restarted after: " + first_note + (alt.note.empty() ? "" : "; " + alt.note);
            break;
          }
        } catch (const Error&) {
        }
      }
    }

    const bool in_refined = std::any_of(refined.begin(), refined.end(), [&](const auto& gap) {
      return v >= std::min(gap.first, gap.second) && v <= std::max(gap.first, gap.second);
    });
    if (setup.refine_step > 0.0 && pt.converged && last_class && pt.classification != *last_class && !in_refined &&
        std::abs(v - last_good_value) > 1.5 * setup.refine_step) {
      // Rewind to the last good point and approach v on the fine grid.
      refined.emplace_back(last_good_value, v);
      ev.set_warm(good_warm);
      todo.push_front(v);
      for (double t = v - sign * setup.refine_step; (t - last_good_value) * sign > 0.5 * setup.refine_step;
           t -= sign * setup.refine_step)
        todo.push_front(t);
      continue;
    }

    if (pt.converged && setup.hellmann_feynman) {
      try {
        pt.hf_residual = hellmann_feynman_residual(ev, pt.fields, setup.hf_step);
      } catch (const Error&) {
        // left as NaN; the caller sees a missing residual
      }
    }
    branch.values.push_back(v);
    if (pt.converged) {
      failures = 0;
      fields = pt.fields;
      good_warm = ev.warm();
    } else {
      ++failures;
      ev.set_warm(good_warm);
    }
    branch.points.push_back(pt);
    branch.states.push_back(ev.warm());
    const std::size_t k = branch.points.size();
    if (k >= 3) {
      const auto& a = branch.points[k - 3];
      const auto& b = branch.points[k - 2];
      const auto& c = branch.points[k - 1];
      if (a.classification == b.classification && b.classification == c.classification && b.converged)
        branch.states[k - 2] = {};
    }
    if (pt.converged) {
      last_class = pt.classification;
      last_good_value = v;
    }
    if (failures >= 3) {
      branch.aborted = true;
      break;
    }
  }
  return branch;
}

}  // namespace dicke::sc
