#include "dicke/verify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "dicke/exact_diag.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/mpo.hpp"
#include "dicke/mps.hpp"

namespace dicke::verify {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::map<std::string, double References::*> reference_fields() {
  return {
      {"an_as", &References::an_as},
      {"as_ps", &References::as_ps},
      {"ps_pn", &References::ps_pn},
      {"table_tol", &References::table_tol},
      {"as_window_width", &References::as_window_width},
      {"as_window_tol", &References::as_window_tol},
      {"eps_star_coarse", &References::eps_star_coarse},
      {"eps_star_coarse_tol", &References::eps_star_coarse_tol},
      {"eps_star_tight_lo", &References::eps_star_tight_lo},
      {"eps_star_tight_hi", &References::eps_star_tight_hi},
      {"mf_ps_pn", &References::mf_ps_pn},
      {"mf_an_as", &References::mf_an_as},
      {"mf_tol", &References::mf_tol},
      {"ferro_onset_tol", &References::ferro_onset_tol},
  };
}

Check make_check(std::string id, std::string name, double measured, double reference, double tol,
                 std::string detail = {}) {
  Check c{std::move(id), std::move(name), measured, reference, tol, false, std::move(detail)};
  c.pass = std::isfinite(measured) && std::abs(measured - reference) <= tol;
  return c;
}

Check failed(std::string id, std::string name, double reference, double tol, std::string why) {
  return {std::move(id), std::move(name), kNaN, reference, tol, false, std::move(why)};
}

std::string fmt(double x, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

// Boundary between two phases (either order), closest to the reference.
const phase::PhaseBoundary* find_boundary(const std::vector<phase::PhaseBoundary>& bs, Phase a, Phase b,
                                          double reference) {
  const phase::PhaseBoundary* best = nullptr;
  for (const auto& pb : bs) {
    const bool match = (pb.below == a && pb.above == b) || (pb.below == b && pb.above == a);
    if (match && (!best || std::abs(pb.location - reference) < std::abs(best->location - reference))) best = &pb;
  }
  return best;
}

std::string describe_boundary(const phase::PhaseBoundary& pb) {
  return to_string(pb.below) + "-" + to_string(pb.above) + " " + phase::to_string(pb.kind) + " via " +
         phase::to_string(pb.evidence) + ", +- " + fmt(pb.uncertainty, 3) + (pb.low_confidence ? ", low confidence" : "");
}

void record_branch_hf(Report& report, const sc::SweepBranch& branch) {
  for (const auto& p : branch.points)
    if (p.converged) report.record_hf(p.hf_residual);
}

struct SweepOutcome {
  phase::BranchPair branches;
  std::vector<phase::PhaseBoundary> boundaries;
  std::size_t failures = 0;
};

SweepOutcome af_sweep(Report& report, const ModelParams& base, sc::SweepVar var, double start, double stop,
                      double step, double refine_step, const Options& opts, bool record_hf = true) {
  sc::SweepSetup setup;
  setup.params_template = base;
  setup.var = var;
  setup.mode = sc::Mode::af;
  setup.sizes = sc::ClusterSizes::defaults(sc::Mode::af);
  setup.refine_step = refine_step;
  setup.hellmann_feynman = true;
  setup.jobs = opts.jobs;
  SweepOutcome out;
  out.branches = phase::run_sweep_pair(setup, phase::sweep_grid(start, stop, step), {0.0, 0.5}, {0.5, 0.0});
  for (const auto* br : {&out.branches.up, &out.branches.down}) {
    if (record_hf) record_branch_hf(report, *br);
    for (const auto& p : br->points) out.failures += p.converged ? 0 : 1;
  }
  setup.hellmann_feynman = false;
  const auto refine = phase::make_refiner(setup);
  out.boundaries = phase::analyze_sweep(out.branches, refine_step > 0.0 ? &refine : nullptr);
  return out;
}

sc::ConvergedPoint solve_single(const ModelParams& p, sc::Mode mode, const SelfFields& init, double* hf,
                                const Options& opts) {
  sc::PairEvaluator ev(p, mode, sc::ClusterSizes::defaults(mode), dmrg::DmrgSettings::default_profile(), opts.jobs);
  auto pt = sc::anderson_solve(ev, init, sc::FixedPointConfig{});
  if (hf && pt.converged) *hf = sc::hellmann_feynman_residual(ev, pt.fields);
  return pt;
}

}  // namespace

std::vector<std::string> reference_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, v] : reference_fields()) keys.push_back(k);
  return keys;
}

References references_from_json(const std::string& text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("references " + origin + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("references " + origin + ": expected a JSON object");
  References refs = References::embedded();
  const auto fields = reference_fields();
  for (const auto& [key, value] : j.items()) {
    const auto it = fields.find(key);
    if (it == fields.end()) throw ConfigError("references " + origin + ": unknown key '" + key + "'");
    if (!value.is_number()) throw ConfigError("references " + origin + ": '" + key + "' must be a number");
    refs.*(it->second) = value.get<double>();
  }
  return refs;
}

References load_references(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("reference file not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return references_from_json(ss.str(), path);
}

void Report::add(Check check) { checks.push_back(std::move(check)); }

void Report::record_hf(double residual) {
  if (std::isnan(residual)) {
    ++hf_missing;
    return;
  }
  ++hf_points;
  hf_max = std::max(hf_max, residual);
}

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string format(const Check& c) {
  std::ostringstream os;
  os.precision(8);
  os << (c.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": measured " << c.measured
     << " reference " << c.reference << " tolerance " << c.tolerance;
  if (!c.detail.empty()) os << " (" << c.detail << ")";
  return os.str();
}

DickeOracle dicke_oracle(const ModelParams& p) {
  if (p.J != 0.0) throw InvalidInput("dicke_oracle: requires J = 0");
  const double w = p.omega_c;
  const double eps = std::abs(p.eps);
  // Nontrivial root of m = h / (2 sqrt(h^2 + eps^2)) with h = g^2 m / w.
  const double h2 = std::pow(p.g * p.g / (2.0 * w), 2) - eps * eps;
  DickeOracle o;
  if (h2 <= 0.0) {
    o.energy_per_site = -eps;
    return o;
  }
  const double h = std::sqrt(h2);
  o.m_x = h * w / (p.g * p.g);
  o.energy_per_site = -std::sqrt(h2 + eps * eps) + p.g * p.g / w * o.m_x * o.m_x;
  o.photon_density = std::pow(p.g * o.m_x / w, 2);
  return o;
}

double tfim_energy_per_site(double J, double h, int nodes) {
  if (nodes < 2) throw InvalidInput("tfim_energy_per_site: need at least two nodes");
  // Periodic integrand: the trapezoid rule converges geometrically.
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double k = 2.0 * kPi * i / nodes;
    sum += std::sqrt(J * J + h * h - 2.0 * J * h * std::cos(k));
  }
  return -sum / nodes;
}

void check_af_boundaries(Report& report, const References& refs, const Options& opts) {
  ModelParams base;
  base.J = 0.2;
  base.g = 0.52;
  const auto out = af_sweep(report, base, sc::SweepVar::eps, 0.25, 0.60, 1e-2, 1e-3, opts);
  const std::string fails = out.failures ? ", " + std::to_string(out.failures) + " unconverged points" : "";
  const struct {
    const char* id;
    const char* name;
    Phase a, b;
    double ref;
  } items[] = {{"1.an_as", "eps sweep AN-AS boundary", Phase::AN, Phase::AS, refs.an_as},
               {"1.as_ps", "eps sweep AS-PS boundary", Phase::AS, Phase::PS, refs.as_ps},
               {"1.ps_pn", "eps sweep PS-PN boundary", Phase::PS, Phase::PN, refs.ps_pn}};
  for (const auto& it : items) {
    const auto* pb = find_boundary(out.boundaries, it.a, it.b, it.ref);
    if (!pb) {
      report.add(failed(it.id, it.name, it.ref, refs.table_tol, "boundary not found" + fails));
      continue;
    }
    auto c = make_check(it.id, it.name, pb->location, it.ref, refs.table_tol, describe_boundary(*pb) + fails);
    c.pass = c.pass && !pb->low_confidence;
    report.add(c);
  }
}

void check_as_window(Report& report, const References& refs, const Options& opts) {
  ModelParams base;
  base.J = 0.2;
  base.eps = 0.3;
  const auto out = af_sweep(report, base, sc::SweepVar::g, 0.45, 0.65, 1e-2, 1e-3, opts);
  const auto* lower = find_boundary(out.boundaries, Phase::AN, Phase::AS, 0.5);
  const auto* upper = find_boundary(out.boundaries, Phase::AS, Phase::PS, 0.5);
  const char* name = "g sweep AS window width";
  if (!lower || !upper) {
    report.add(failed("2.as_window", name, refs.as_window_width, refs.as_window_tol,
                      std::string(lower ? "" : "AN-AS ") + (upper ? "" : "AS-PS ") + "boundary not found"));
    return;
  }
  const bool kinds = lower->kind == phase::Kind::continuous && upper->kind == phase::Kind::first_order &&
                     upper->evidence == phase::Evidence::branch_crossing;
  auto c = make_check("2.as_window", name, upper->location - lower->location, refs.as_window_width,
                      refs.as_window_tol,
                      "lower " + fmt(lower->location) + " " + describe_boundary(*lower) + "; upper " +
                          fmt(upper->location) + " " + describe_boundary(*upper) +
                          (kinds ? "" : "; expected continuous below and first_order above"));
  c.pass = c.pass && kinds && !lower->low_confidence && !upper->low_confidence;
  report.add(c);
}

void check_multicritical(Report& report, const References& refs, const Options& opts, phase::Profile profile) {
  const bool tight = profile == phase::Profile::tight;
  phase::DeltaEOptions de;
  de.profile = profile;
  de.jobs = opts.jobs;
  de.hellmann_feynman = true;
  const double lo = tight ? 0.198 : 0.15;
  const double hi = tight ? 0.202 : 0.30;
  const double ref = tight ? 0.5 * (refs.eps_star_tight_lo + refs.eps_star_tight_hi) : refs.eps_star_coarse;
  const double tol = tight ? 0.5 * (refs.eps_star_tight_hi - refs.eps_star_tight_lo) : refs.eps_star_coarse_tol;
  const std::string id = tight ? "3.tight" : "3.coarse";
  const std::string name = std::string("multicritical eps* (") + (tight ? "tight" : "default") + " profile)";
  try {
    const auto res = phase::multicritical_bisect(-0.2, lo, hi, de, phase::default_eps_tol(profile));
    for (const auto& s : res.steps) report.record_hf(s.hf_residual);
    report.add(make_check(id, name, res.eps_star, ref, tol,
                          "+- " + fmt(res.uncertainty, 3) + ", " + std::to_string(res.steps.size()) + " evaluations"));
  } catch (const Error& e) {
    report.add(failed(id, name, ref, tol, e.what()));
  }
}

void check_dicke(Report& report, const Options& opts) {
  ModelParams p;
  p.J = 0.0;
  p.eps = 0.3;
  p.g = 1.0;
  const auto oracle = dicke_oracle(p);
  double hf = kNaN;
  sc::ConvergedPoint pt;
  try {
    pt = solve_single(p, sc::Mode::ferro, {0.25, 0.0}, &hf, opts);
  } catch (const Error& e) {
    report.add(failed("4.m_x", "Dicke point m_x", oracle.m_x, 1e-8, e.what()));
    return;
  }
  report.record_hf(hf);
  const std::string note = pt.converged ? "" : "not converged: " + pt.note;
  auto add = [&](const char* id, const char* name, double measured, double ref, double tol) {
    auto c = make_check(id, name, measured, ref, tol, note);
    c.pass = c.pass && pt.converged;
    report.add(c);
  };
  // Either parity partner is a valid solution.
  add("4.m_x", "Dicke point |m_x|", std::abs(pt.fields.m_x), oracle.m_x, 1e-8);
  add("4.energy", "Dicke point energy per site", pt.energy_per_site, oracle.energy_per_site, 1e-8);
  add("4.photons", "Dicke point photon density", pt.photon_density, oracle.photon_density, 1e-10);

  p.g = 0.5;
  try {
    const auto below = solve_single(p, sc::Mode::ferro, {0.25, 0.0}, &hf, opts);
    report.record_hf(hf);
    auto c = make_check("4.below", "Dicke below threshold m_x", below.fields.m_x, 0.0, 0.0,
                        below.converged ? "" : "not converged: " + below.note);
    c.pass = c.pass && below.converged;
    report.add(c);
  } catch (const Error& e) {
    report.add(failed("4.below", "Dicke below threshold m_x", 0.0, 0.0, e.what()));
  }
}

void check_tfim(Report& report, const Options& opts, bool single_point) {
  std::vector<double> fields{0.05, 0.1, 0.3, 0.4, 0.5};
  std::vector<double> couplings{-0.2, 0.2};
  if (single_point) {
    fields = {0.3};
    couplings = {-0.2};
  }
  for (double J : couplings) {
    for (double h : fields) {
      ModelParams p;
      p.J = J;
      p.g = 1.0;
      const double tol = std::abs(h - std::abs(J)) < 0.01 ? 1e-6 : 1e-8;
      const std::string id = "5.J" + fmt(J, 2) + ".h" + fmt(h, 2);
      const std::string name = "TFIM bulk energy J=" + fmt(J, 2) + " h=" + fmt(h, 2);
      const double exact = tfim_energy_per_site(J, h);
      try {
        // g = omega = 1 makes h_x equal to m_x.
        sc::PairEvaluator ev(p, sc::Mode::ferro, {100, 101}, dmrg::DmrgSettings::default_profile(), opts.jobs);
        report.add(make_check(id, name, ev.evaluate({h, 0.0}).matter_energy, exact, tol));
      } catch (const Error& e) {
        report.add(failed(id, name, exact, tol, e.what()));
      }
    }
  }
}

void check_ed_suite(Report& report, const Options& opts, int draws) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<int> size(2, 12);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  std::uniform_real_distribution<double> pos(0.0, 0.5);
  const auto settings = dmrg::DmrgSettings::tight();
  double worst_e = 0.0;
  double worst_prof = 0.0;
  int profiled = 0;
  int errors = 0;
  std::string first_error;
  for (int i = 0; i < draws; ++i) {
    ModelParams p;
    p.J = unit(rng);
    p.eps = pos(rng);
    p.g = 1.0;
    const SelfFields f{unit(rng), unit(rng)};
    const bool boundary = i % 2 == 1;
    auto n = static_cast<std::size_t>(size(rng));
    if (boundary) n += n % 2;  // boundary fields need an even cluster
    try {
      const auto sol =
          dmrg::dmrg_ground(dmrg::build_mpo(p, f, n, boundary), dmrg::product_state(n, dmrg::ProductPattern::plus_x),
                            settings);
      const auto ed = dmrg::exact_diag_ground(p, f, n, boundary);
      worst_e = std::max(worst_e, std::abs(sol.energy - ed.energy));
      if (ed.gap > 1e-8) {
        ++profiled;
        for (std::size_t k = 0; k < n; ++k)
          worst_prof = std::max({worst_prof, std::abs(sol.sx_profile[k] - ed.sx_profile[k]),
                                 std::abs(sol.sz_profile[k] - ed.sz_profile[k])});
      }
    } catch (const Error& e) {
      if (errors++ == 0) first_error = e.what();
    }
  }
  const std::string err = errors ? std::to_string(errors) + " draws failed, first: " + first_error : "";
  auto ce = make_check("6.energy", "DMRG vs ED energy, max deviation", worst_e, 0.0, 1e-9,
                       std::to_string(draws) + " draws" + (err.empty() ? "" : "; " + err));
  ce.pass = ce.pass && errors == 0;
  report.add(ce);
  auto cp = make_check("6.profiles", "DMRG vs ED profiles, max deviation", worst_prof, 0.0, 1e-7,
                       std::to_string(profiled) + " gapped draws");
  cp.pass = cp.pass && errors == 0;
  report.add(cp);
}

void check_classical_af(Report& report, const Options& opts) {
  ModelParams base;
  base.J = 0.2;
  base.g = 0.0;
  const double step = 2e-3;
  const double ref = mf::classical_af_boundary(base.J);
  SweepOutcome out;
  try {
    // No stationarity record here: at g = 0 E(m_x) is flat and m_x is noise.
    out = af_sweep(report, base, sc::SweepVar::eps, 0.395, 0.405, step, 0.0, opts, false);
  } catch (const Error& e) {
    report.add(failed("7.boundary", "classical AF boundary", ref, step, e.what()));
    return;
  }
  // Staggered moment of the lower-energy branch on either side of the jump.
  auto thermo_ms = [&](double x) {
    const sc::ConvergedPoint* best = nullptr;
    for (const auto* br : {&out.branches.up, &out.branches.down})
      for (std::size_t i = 0; i < br->values.size(); ++i)
        if (std::abs(br->values[i] - x) < 1e-9 && br->points[i].converged &&
            (!best || br->points[i].energy_per_site < best->energy_per_site))
          best = &br->points[i];
    return best ? std::abs(best->fields.m_s) : kNaN;
  };
  const double ms_lo = thermo_ms(0.399);
  const double ms_hi = thermo_ms(0.401);
  report.add(make_check("7.ms_below", "g=0 staggered moment at eps=0.399", ms_lo, 0.5, 1e-6));
  report.add(make_check("7.ms_above", "g=0 staggered moment at eps=0.401", ms_hi, 0.0, 1e-6));
  const auto* pb = find_boundary(out.boundaries, Phase::AN, Phase::PN, ref);
  if (!pb) {
    report.add(failed("7.boundary", "classical AF boundary", ref, step, "boundary not found"));
    return;
  }
  auto c = make_check("7.boundary", "classical AF boundary", pb->location, ref, step, describe_boundary(*pb));
  c.pass = c.pass && pb->kind == phase::Kind::first_order;
  report.add(c);
}

void check_meanfield(Report& report, const References& refs) {
  ModelParams p;
  p.J = 0.2;
  p.g = 0.52;
  try {
    const auto ps_pn = mf::mf_boundary(p, mf::Axis::eps, 0.45, 0.60, mf::is_superradiant, 1e-6);
    report.add(make_check("8.ps_pn", "mean-field PS-PN in eps", ps_pn.location, refs.mf_ps_pn, refs.mf_tol));
    const auto an_as = mf::mf_boundary(p, mf::Axis::eps, 0.30, 0.335, mf::is_superradiant, 1e-6);
    report.add(make_check("8.an_as", "mean-field AN-AS in eps", an_as.location, refs.mf_an_as, refs.mf_tol));
    ModelParams f;
    f.J = -0.2;
    f.eps = 0.3;
    const auto onset = mf::mf_boundary(f, mf::Axis::g, 1.0, 1.4, mf::is_superradiant, 1e-7);
    report.add(make_check("8.ferro_onset", "mean-field ferro onset in g", onset.location, mf::g_crit_ferro(f),
                          refs.ferro_onset_tol));
  } catch (const Error& e) {
    report.add(failed("8.meanfield", "mean-field boundaries", kNaN, 0.0, e.what()));
  }
}

void check_invariants(Report& report, const Options& opts) {
  std::mt19937_64 rng(opts.seed + 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_int_distribution<int> len(1, 40);

  // Partial sums of reduced contributions telescope to M_N - M_{N-1}.
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> m(static_cast<std::size_t>(len(rng)));
    for (auto& x : m) x = val(rng);
    const auto red = nlce::reduced_contributions(m);
    const double sum = std::accumulate(red.begin(), red.end(), 0.0);
    const double expect = m.back() - (m.size() > 1 ? m[m.size() - 2] : 0.0);
    worst = std::max(worst, std::abs(sum - expect));
  }
  report.add(make_check("9.telescoping", "NLCE telescoping identity, 100 sequences", worst, 0.0, 1e-12));

  // E(m_x) = E(-m_x).
  try {
    ModelParams p;
    p.J = -0.2;
    p.eps = 0.1;
    p.g = 1.0;
    sc::PairEvaluator ev(p, sc::Mode::ferro, {40, 41}, dmrg::DmrgSettings::tight(), opts.jobs);
    const std::vector<double> grid{-0.4, -0.25, -0.1, 0.0, 0.1, 0.25, 0.4};
    const auto land = sc::landscape_scan(ev, grid, sc::MsPolicy::pinned_zero, sc::FixedPointConfig{});
    double asym = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      asym = std::max(asym, std::abs(land.points[i].energy - land.points[grid.size() - 1 - i].energy));
    report.add(make_check("9.landscape", "landscape symmetry E(m_x) = E(-m_x)", asym, 0.0, 1e-10));
  } catch (const Error& e) {
    report.add(failed("9.landscape", "landscape symmetry E(m_x) = E(-m_x)", 0.0, 1e-10, e.what()));
  }

  // Sweep energies never rise.
  double rise = 0.0;
  std::uniform_int_distribution<int> nsite(8, 40);
  for (int t = 0; t < 8; ++t) {
    ModelParams p;
    p.J = 0.5 * val(rng);
    p.eps = 0.25 * (val(rng) + 1.0);
    p.g = 1.0;
    const SelfFields f{0.5 * val(rng), t % 2 ? 0.5 * val(rng) : 0.0};
    auto n = static_cast<std::size_t>(nsite(rng));
    if (t % 2 == 1) n += n % 2;
    const auto pattern = t % 3 == 0 ? dmrg::ProductPattern::minus_z : dmrg::ProductPattern::plus_x;
    const auto sol = dmrg::dmrg_ground(dmrg::build_mpo(p, f, n, t % 2 == 1), dmrg::product_state(n, pattern),
                                       dmrg::DmrgSettings::default_profile());
    for (std::size_t k = 1; k < sol.sweep_energies.size(); ++k)
      rise = std::max(rise, sol.sweep_energies[k] - sol.sweep_energies[k - 1]);
  }
  // Truncation can lift a sweep energy by about the discarded weight; the
  // stopping threshold bounds what counts as a rise.
  report.add(make_check("9.monotone", "DMRG sweep energy increase, max", std::max(rise, 0.0), 0.0,
                        dmrg::DmrgSettings::default_profile().energy_tol));

  // Bogoliubov absorption of the A^2 term.
  ModelParams a;
  a.g = 0.8;
  a.D = 0.0;
  const auto r0 = mf::renormalize_A2(a);
  report.add(make_check("9.a2_zero", "A^2 identity at D=0", std::abs(r0.omega_c - 1.0) + std::abs(r0.g - a.g), 0.0,
                        1e-15));
  a.D = 0.75;
  const auto r1 = mf::renormalize_A2(a);
  report.add(make_check("9.a2_point", "A^2 renormalized frequency at D=0.75", r1.omega_c, 2.0, 1e-14,
                        "g' = " + fmt(r1.g, 15)));
  report.add(make_check("9.a2_coupling", "A^2 renormalized coupling at D=0.75", r1.g, a.g / std::sqrt(2.0), 1e-14));
}

void check_hellmann_feynman(Report& report, double limit) {
  auto c = make_check("9.hellmann_feynman", "max |dE/dm_x| over converged points", report.hf_max, 0.0, limit,
                      std::to_string(report.hf_points) + " points" +
                          (report.hf_missing ? ", " + std::to_string(report.hf_missing) + " without a residual" : ""));
  c.pass = c.pass && report.hf_points > 0 && report.hf_missing == 0;
  report.add(c);
}

void run_embedded_suite(Report& report, const References& refs, const Options& opts) {
  check_af_boundaries(report, refs, opts);
  check_dicke(report, opts);
  check_classical_af(report, opts);
  check_tfim(report, opts, true);
  check_multicritical(report, refs, opts, phase::Profile::standard);
}

}  // namespace dicke::verify
