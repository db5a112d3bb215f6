#include "dicke/phase_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "dicke/meanfield.hpp"

namespace dicke::phase {

std::string to_string(Kind kind) { return kind == Kind::first_order ? "first_order" : "continuous"; }

std::string to_string(Evidence evidence) {
  switch (evidence) {
    case Evidence::branch_crossing: return "branch_crossing";
    case Evidence::order_onset: return "order_onset";
    case Evidence::delta_e: return "delta_e";
  }
  return "?";
}

std::string to_string(Profile profile) { return profile == Profile::standard ? "default" : "tight"; }

Profile profile_from_string(const std::string& name) {
  if (name == "default") return Profile::standard;
  if (name == "tight") return Profile::tight;
  throw InvalidInput("unknown profile '" + name + "' (expected default or tight)");
}

ProfileSettings profile_settings(Profile profile) {
  ProfileSettings s;
  if (profile == Profile::tight) {
    s.dmrg = dmrg::DmrgSettings::tight();
    s.fixed_point = sc::FixedPointConfig::tight();
    s.delta_e_floor = 1e-12;
  } else {
    s.dmrg = dmrg::DmrgSettings::default_profile();
    s.fixed_point = sc::FixedPointConfig{};
    s.delta_e_floor = 1e-10;
  }
  return s;
}

namespace {

struct Sample {
  double x;
  double energy;
  Phase phase;
  double mx;
  double ms;
  std::size_t index;  // position in the branch
};

// Converged points sorted by parameter value.
std::vector<Sample> samples(const SweepBranch& b) {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    const auto& p = b.points[i];
    if (!p.converged) continue;
    out.push_back({b.values[i], p.energy_per_site, p.classification, p.fields.m_x, p.fields.m_s, i});
  }
  std::sort(out.begin(), out.end(), [](const Sample& a, const Sample& c) { return a.x < c.x; });
  return out;
}

double interp_energy(const std::vector<Sample>& s, double x) {
  auto it = std::lower_bound(s.begin(), s.end(), x, [](const Sample& a, double v) { return a.x < v; });
  if (it == s.end()) return s.back().energy;
  if (it->x == x || it == s.begin()) return it->energy;
  const auto& b = *it;
  const auto& a = *(it - 1);
  return a.energy + (b.energy - a.energy) * (x - a.x) / (b.x - a.x);
}

Phase nearest_phase(const std::vector<Sample>& s, double x) {
  const Sample* best = &s.front();
  for (const auto& p : s)
    if (std::abs(p.x - x) < std::abs(best->x - x)) best = &p;
  return best->phase;
}

std::pair<double, double> range_of(const SweepBranch& b) {
  if (b.values.empty()) throw InvalidInput("phase analysis: empty branch");
  const auto [lo, hi] = std::minmax_element(b.values.begin(), b.values.end());
  return {*lo, *hi};
}

}  // namespace

std::optional<PhaseBoundary> detect_first_order(const SweepBranch& up, const SweepBranch& down) {
  if (up.swept != down.swept) throw InvalidInput("detect_first_order: branches sweep different variables");
  const auto ru = range_of(up);
  const auto rd = range_of(down);
  const double scale = std::max({1.0, std::abs(ru.first), std::abs(ru.second)});
  // An aborted branch stops short; the comparison then runs over the overlap.
  if (!up.aborted && !down.aborted &&
      (std::abs(ru.first - rd.first) > 1e-9 * scale || std::abs(ru.second - rd.second) > 1e-9 * scale))
    throw InvalidInput("detect_first_order: branches cover different intervals");

  const auto su = samples(up);
  const auto sd = samples(down);
  if (su.size() < 2 || sd.size() < 2) return std::nullopt;

  std::vector<double> grid;
  for (const auto& s : su) grid.push_back(s.x);
  for (const auto& s : sd) grid.push_back(s.x);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             grid.end());
  const double lo_common = std::max(su.front().x, sd.front().x);
  const double hi_common = std::min(su.back().x, sd.back().x);
  std::vector<double> u;
  for (double x : grid)
    if (x >= lo_common - 1e-12 && x <= hi_common + 1e-12) u.push_back(x);
  if (u.size() < 2) return std::nullopt;

  std::size_t w_first = u.size();
  std::size_t w_last = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (nearest_phase(su, u[i]) != nearest_phase(sd, u[i])) {
      w_first = std::min(w_first, i);
      w_last = i;
    }
  }
  if (w_first == u.size()) return std::nullopt;
  const std::size_t a = w_first > 0 ? w_first - 1 : 0;
  const std::size_t b = std::min(w_last + 1, u.size() - 1);

  std::vector<double> d(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) d[i] = interp_energy(su, u[i]) - interp_energy(sd, u[i]);

  // Sign of the gap with a noise band: where both branches sit in the same
  // state the difference is zero up to solver noise and carries no sign.
  constexpr double kNoise = 1e-9;
  auto sign = [&](std::size_t i) { return d[i] > kNoise ? 1 : (d[i] < -kNoise ? -1 : 0); };

  // The most decisive sign change between consecutive signed nodes inside the
  // window widened by one node.
  std::size_t cross = u.size();
  std::size_t cross_to = u.size();
  double jump = -1.0;
  std::size_t prev = u.size();
  for (std::size_t i = a; i <= b; ++i) {
    if (sign(i) == 0) continue;
    if (prev != u.size() && sign(prev) != sign(i) && std::abs(d[i] - d[prev]) > jump) {
      jump = std::abs(d[i] - d[prev]);
      cross = prev;
      cross_to = i;
    }
    prev = i;
  }

  PhaseBoundary pb;
  pb.swept = up.swept;
  pb.kind = Kind::first_order;
  pb.evidence = Evidence::branch_crossing;
  if (cross == u.size()) {
    // One branch stays lower throughout: the transition sits where it ends.
    const bool up_lower = d[w_first] < 0.0;
    const auto& lower = up_lower ? su : sd;
    const auto& upper = up_lower ? sd : su;
    const double x_lo = u[w_first];
    const double x_hi = u[w_last];
    // The lower branch's own phase change marks its end.
    const bool ends_high = nearest_phase(lower, x_hi) != nearest_phase(lower, u[b]) || b == w_last;
    const std::size_t e0 = ends_high ? w_last : a;
    const std::size_t e1 = ends_high ? b : w_first;
    pb.location = 0.5 * (u[e0] + u[e1]);
    pb.uncertainty = std::max(0.5 * std::abs(u[e1] - u[e0]), 1e-12);
    pb.below = nearest_phase(ends_high ? lower : upper, u[e0]);
    pb.above = nearest_phase(ends_high ? upper : lower, u[e1]);
    pb.low_confidence = true;
    pb.window_lo = x_lo;
    pb.window_hi = x_hi;
    return pb;
  }

  const double x0 = u[cross];
  const double x1 = u[cross_to];
  const double lin = x0 - d[cross] * (x1 - x0) / (d[cross_to] - d[cross]);
  double spacing = 0.0;
  for (std::size_t i = cross; i < cross_to; ++i) spacing = std::max(spacing, u[i + 1] - u[i]);
  // Quadratic through a third neighbouring signed node, for the interpolation residual.
  double residual = 0.0;
  std::size_t k = u.size();
  for (std::size_t i = cross_to + 1; i <= b && k == u.size(); ++i)
    if (sign(i) != 0) k = i;
  for (std::size_t i = cross; i-- > a && k == u.size();)
    if (sign(i) != 0) k = i;
  if (k < u.size()) {
    const double xa = x0, xb = x1, xc = u[k];
    const double fa = d[cross], fb = d[cross_to], fc = d[k];
    const double c2 = ((fc - fa) / (xc - xa) - (fb - fa) / (xb - xa)) / (xc - xb);
    const double c1 = (fb - fa) / (xb - xa) - c2 * (xa + xb);
    const double c0 = fa - c1 * xa - c2 * xa * xa;
    double root = lin;
    if (std::abs(c2) > 1e-300) {
      const double disc = c1 * c1 - 4.0 * c2 * c0;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double r1 = (-c1 + sq) / (2.0 * c2);
        const double r2 = (-c1 - sq) / (2.0 * c2);
        root = std::abs(r1 - lin) < std::abs(r2 - lin) ? r1 : r2;
      }
    }
    if (root >= std::min(x0, x1) && root <= std::max(x0, x1)) residual = std::abs(root - lin);
  }
  pb.location = lin;
  pb.uncertainty = std::max(spacing, residual);
  pb.window_lo = u[w_first];
  pb.window_hi = u[w_last];
  const bool up_lower_before = d[cross] < 0.0;
  pb.below = nearest_phase(up_lower_before ? su : sd, x0);
  pb.above = nearest_phase(up_lower_before ? sd : su, x1);
  return pb;
}

Refiner make_refiner(const sc::SweepSetup& setup) {
  return [setup](double value, const sc::ConvergedPoint& near, const sc::WarmStates* warm) {
    return sc::solve_point(setup, value, near.fields, warm);
  };
}

namespace {

bool ordered(double value, double threshold) { return std::abs(value) > threshold; }

double order_value(const Sample& s, OrderParam op) { return op == OrderParam::m_x ? s.mx : s.ms; }

double order_value(const sc::ConvergedPoint& p, OrderParam op) {
  return op == OrderParam::m_x ? p.fields.m_x : p.fields.m_s;
}

constexpr double kThreshold = 1e-6;

struct Onset {
  std::size_t i;  // samples[i] and samples[i + 1] straddle the threshold
};

std::vector<Onset> onsets(const std::vector<Sample>& s, OrderParam op) {
  std::vector<Onset> out;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (ordered(order_value(s[i], op), kThreshold) != ordered(order_value(s[i + 1], op), kThreshold))
      out.push_back({i});
  return out;
}

// Slope jump across the gap (i, i+1) against the local curvature scale.
bool slope_continuous(const std::vector<Sample>& s, std::size_t i, double factor) {
  if (i < 2 || i + 3 >= s.size()) return true;
  auto slope = [&](std::size_t a, std::size_t b) { return (s[b].energy - s[a].energy) / (s[b].x - s[a].x); };
  const double left = slope(i - 1, i);
  const double right = slope(i + 1, i + 2);
  const double curv_l = std::abs(left - slope(i - 2, i - 1)) / (s[i].x - s[i - 2].x) * 2.0;
  const double curv_r = std::abs(slope(i + 2, i + 3) - right) / (s[i + 3].x - s[i + 1].x) * 2.0;
  const double span = s[i + 2].x - s[i - 1].x;
  const double allowed = factor * std::max(curv_l, curv_r) * span;
  return std::abs(right - left) <= std::max(allowed, 1e-10);
}

}  // namespace

std::vector<PhaseBoundary> detect_continuous(const SweepBranch& branch, OrderParam order, const Refiner* refine,
                                             const ContinuousOptions& opts) {
  if (!(opts.tol > 0.0)) throw InvalidInput("detect_continuous: tol must be > 0");
  const auto s = samples(branch);
  std::vector<PhaseBoundary> out;
  const bool ascending = branch.direction == sc::Direction::ascending;

  std::vector<Sample> partner;
  if (opts.partner) partner = samples(*opts.partner);

  for (const auto& on : onsets(s, order)) {
    const Sample& a = s[on.i];
    const Sample& b = s[on.i + 1];
    PhaseBoundary pb;
    pb.swept = branch.swept;
    pb.kind = Kind::continuous;
    pb.evidence = Evidence::order_onset;
    pb.below = a.phase;
    pb.above = b.phase;
    // Unconverged points between the two samples weaken the bracket.
    for (std::size_t i = std::min(a.index, b.index); i <= std::max(a.index, b.index); ++i)
      if (!branch.points[i].converged) pb.low_confidence = true;

    double lo = a.x;
    double hi = b.x;
    const bool lo_ordered = ordered(order_value(a, order), kThreshold);
    // The sweep reached this gap from the earlier point, whose state is the
    // adiabatic starting point for fresh solves.
    const Sample& from = ascending ? a : b;
    const sc::WarmStates* warm = nullptr;
    if (from.index < branch.states.size() && !branch.states[from.index].empty()) warm = &branch.states[from.index];
    if (refine) {
      while (hi - lo > 2.0 * opts.tol) {
        const double mid = 0.5 * (lo + hi);
        const auto pt = (*refine)(mid, branch.points[from.index], warm);
        if (!pt.converged) {
          pb.low_confidence = true;
          break;
        }
        if (ordered(order_value(pt, order), kThreshold) == lo_ordered)
          lo = mid;
        else
          hi = mid;
      }
    }
    pb.location = 0.5 * (lo + hi);
    pb.uncertainty = 0.5 * (hi - lo);
    pb.window_lo = pb.window_hi = pb.location;

    bool agrees = true;
    if (opts.partner) {
      agrees = false;
      for (const auto& p : onsets(partner, order)) {
        const double plo = partner[p.i].x - 2.0 * opts.tol;
        const double phi = partner[p.i + 1].x + 2.0 * opts.tol;
        if (pb.location >= plo && pb.location <= phi) agrees = true;
      }
    }
    if (!agrees || !slope_continuous(s, on.i, opts.slope_factor)) pb.kind = Kind::first_order;
    out.push_back(pb);
  }
  return out;
}

DeltaEResult delta_e_at_mf_critical(double J, double eps, const DeltaEOptions& opts) {
  if (!(J < 0.0)) throw InvalidInput("delta_e_at_mf_critical: requires J < 0");
  auto ps = profile_settings(opts.profile);
  if (opts.dmrg) ps.dmrg = *opts.dmrg;
  if (opts.fixed_point) ps.fixed_point = *opts.fixed_point;
  ModelParams p;
  p.J = J;
  p.eps = eps;
  p.g = mf::g_crit_ferro(p);

  DeltaEResult r;
  r.eps = eps;
  r.g_eval = p.g;
  r.e_weak = mf::weak_energy_ferro(p);

  auto run = [&](sc::ColdStart start, double mx0, const char* name) {
    sc::PairEvaluator ev(p, sc::Mode::ferro, opts.sizes, ps.dmrg, opts.jobs);
    ev.set_cold_start(start);
    sc::ConvergedPoint pt;
    try {
      pt = sc::anderson_solve(ev, {mx0, 0.0}, ps.fixed_point);
    } catch (const Error& e) {
      throw NotConverged(std::string("delta_e: the ") + name + " start failed at " + describe(p) + ": " + e.what());
    }
    if (!pt.converged)
      throw NotConverged(std::string("delta_e: the ") + name + " start did not converge at " + describe(p) + ": " +
                         pt.note);
    if (opts.hellmann_feynman) {
      const double hf = sc::hellmann_feynman_residual(ev, pt.fields);
      r.hf_residual = std::isnan(r.hf_residual) ? hf : std::max(r.hf_residual, hf);
    }
    return pt.energy_per_site;
  };
  r.e_minus_z = run(sc::ColdStart::minus_z, 0.0, "-z");
  r.e_plus_x = run(sc::ColdStart::plus_x, 0.5, "+x");
  r.e_numeric = std::min(r.e_minus_z, r.e_plus_x);
  r.delta_e = r.e_numeric - r.e_weak;
  r.below_floor = std::abs(r.delta_e) < opts.floor.value_or(ps.delta_e_floor);
  return r;
}

MulticriticalResult multicritical_bisect(const std::function<DeltaEResult(double)>& delta_e, double eps_lo,
                                         double eps_hi, double eps_tol) {
  if (!(eps_lo < eps_hi)) throw InvalidInput("multicritical_bisect: need eps_lo < eps_hi");
  if (!(eps_tol > 0.0)) throw InvalidInput("multicritical_bisect: eps_tol must be > 0");
  MulticriticalResult res;
  const auto r_lo = delta_e(eps_lo);
  const auto r_hi = delta_e(eps_hi);
  res.steps = {r_lo, r_hi};
  if (r_lo.below_floor || !r_hi.below_floor) {
    std::ostringstream os;
    os.precision(6);
    os << "multicritical_bisect: need delta_e above the floor at eps_lo and below it at eps_hi; got delta_e("
       << eps_lo << ") = " << r_lo.delta_e << ", delta_e(" << eps_hi << ") = " << r_hi.delta_e;
    throw BracketError(os.str(), eps_lo, eps_hi);
  }
  double lo = eps_lo;
  double hi = eps_hi;
  while (0.5 * (hi - lo) > eps_tol) {
    const double mid = 0.5 * (lo + hi);
    const auto r = delta_e(mid);
    res.steps.push_back(r);
    (r.below_floor ? hi : lo) = mid;
  }
  res.eps_star = 0.5 * (lo + hi);
  res.uncertainty = 0.5 * (hi - lo);
  return res;
}

MulticriticalResult multicritical_bisect(double J, double eps_lo, double eps_hi, const DeltaEOptions& opts,
                                         double eps_tol) {
  if (!(J < 0.0)) throw InvalidInput("multicritical_bisect: requires J < 0");
  return multicritical_bisect([&](double eps) { return delta_e_at_mf_critical(J, eps, opts); }, eps_lo, eps_hi,
                              eps_tol);
}

double default_eps_tol(Profile profile) { return profile == Profile::tight ? 2e-5 : 5e-4; }

std::vector<double> sweep_grid(double start, double stop, double step, const std::vector<GridWindow>& fine) {
  if (!std::isfinite(start) || !std::isfinite(stop)) throw InvalidInput("sweep grid: bounds must be finite");
  if (!(step > 0.0)) throw InvalidInput("sweep grid: step must be > 0");
  if (!(start < stop)) throw InvalidInput("sweep grid: start must be below stop");
  for (const auto& w : fine)
    if (!(w.step > 0.0) || !(w.lo < w.hi)) throw InvalidInput("sweep grid: bad refinement window");

  auto snap = [](double x) { return std::round(x * 1e12) / 1e12; };
  std::vector<double> out{start};
  double x = start;
  const double eps = 1e-12;
  while (x < stop - eps) {
    double h = step;
    for (const auto& w : fine)
      if (x >= w.lo - eps && x < w.hi - eps) h = std::min(h, w.step);
    double next = x + h;
    for (const auto& w : fine) {
      if (w.lo > x + eps && w.lo < next - eps) next = w.lo;
      if (w.hi > x + eps && w.hi < next - eps) next = w.hi;
    }
    next = std::min(snap(next), stop);
    if (next - stop > -eps) next = stop;
    out.push_back(next);
    x = next;
  }
  return out;
}

BranchPair run_sweep_pair(const sc::SweepSetup& setup, const std::vector<double>& grid, const SelfFields& init_up,
                          const SelfFields& init_down) {
  if (grid.size() < 2) throw InvalidInput("run_sweep_pair: need at least two grid values");
  std::vector<double> down_grid(grid.rbegin(), grid.rend());
  sc::SweepSetup up_setup = setup;
  sc::SweepSetup down_setup = setup;
  up_setup.init = init_up;
  down_setup.init = init_down;
  BranchPair out;
  if (setup.jobs > 1) {
    up_setup.jobs = down_setup.jobs = std::max(1, setup.jobs / 2);
    auto up = std::async(std::launch::async, [&] { return sc::adiabatic_sweep(up_setup, grid); });
    out.down = sc::adiabatic_sweep(down_setup, down_grid);
    out.up = up.get();
  } else {
    out.up = sc::adiabatic_sweep(up_setup, grid);
    out.down = sc::adiabatic_sweep(down_setup, down_grid);
  }
  return out;
}

std::vector<PhaseBoundary> analyze_sweep(const BranchPair& br, const Refiner* refine, double tol) {
  std::vector<PhaseBoundary> out;
  const auto fo = detect_first_order(br.up, br.down);
  if (fo) out.push_back(*fo);
  // Grid spacing around a value, for the distance to the crossing window.
  auto spacing = [&](double x) {
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < br.up.values.size(); ++i) {
      const double a = std::min(br.up.values[i], br.up.values[i + 1]);
      const double b = std::max(br.up.values[i], br.up.values[i + 1]);
      if (x >= a - 1e-12 && x <= b + 1e-12) h = std::min(h, b - a);
    }
    return std::isfinite(h) ? h : 0.0;
  };
  for (OrderParam op : {OrderParam::m_x, OrderParam::m_s}) {
    ContinuousOptions opts;
    opts.tol = tol;
    opts.partner = &br.down;
    for (const auto& pb : detect_continuous(br.up, op, refine, opts)) {
      if (pb.kind == Kind::first_order && fo) {
        const double h = 2.0 * spacing(pb.location);
        if (pb.location >= fo->window_lo - h && pb.location <= fo->window_hi + h) continue;
      }
      out.push_back(pb);
    }
  }
  // Unconverged points inside the bracket weaken the boundary.
  for (auto& pb : out) {
    const double lo = pb.location - pb.uncertainty;
    const double hi = pb.location + pb.uncertainty;
    for (const auto* b : {&br.up, &br.down})
      for (std::size_t i = 0; i < b->points.size(); ++i)
        if (!b->points[i].converged && b->values[i] >= lo - 1e-12 && b->values[i] <= hi + 1e-12)
          pb.low_confidence = true;
  }
  std::sort(out.begin(), out.end(), [](const PhaseBoundary& a, const PhaseBoundary& b) { return a.location < b.location; });
  return out;
}

}  // namespace dicke::phase
