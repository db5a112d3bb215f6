#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dicke/cli.hpp"
#include "dicke/verify.hpp"

namespace dicke::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Row = std::vector<std::string>;
using Clock = std::chrono::steady_clock;

struct Table {
  std::string file;
  Row header;
  std::vector<Row> rows;
};

struct Context {
  RunConfig config;
  Command command = Command::verify;
  Clock::time_point start = Clock::now();
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string flag(bool b) { return b ? "1" : "0"; }

// Fails before any solve when the directory cannot be written.
void prepare_output(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = fs::path(dir) / ".dicke_write_probe";
  std::ofstream f(probe);
  if (ec || !f) throw IoError("output directory not writable: " + dir);
  f.close();
  fs::remove(probe, ec);
}

void write_table(const Context& ctx, const Table& t) {
  std::ostringstream os;
  os << "# dicke " << DICKE_VERSION << "\n";
  os << "# command: " << to_string(ctx.command) << "\n";
  os << "# config:\n";
  std::istringstream cfg(to_json(ctx.config).dump(2));
  for (std::string line; std::getline(cfg, line);) os << "#   " << line << "\n";
  char rt[64];
  std::snprintf(rt, sizeof rt, "%.3f", std::chrono::duration<double>(Clock::now() - ctx.start).count());
  os << "# runtime_seconds: " << rt << "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << "\n";
  }
  const fs::path path = fs::path(ctx.config.output_dir) / t.file;
  std::ofstream f(path, std::ios::binary);
  f << os.str();
  if (!f) throw IoError("cannot write " + path.string());
  *ctx.out << "wrote " << path.string() << "\n";
}

Table branch_table(const sc::SweepBranch& b, const sc::ClusterSizes& sizes) {
  Table t;
  t.file = b.direction == sc::Direction::ascending ? "sweep_ascending.csv" : "sweep_descending.csv";
  t.header = {"sweep_value", "energy_per_site", "m_x", "m_s", "photon_density", "h_x",
              "classification", "iterations", "residual", "converged", "n_small", "n_large"};
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    const auto& p = b.points[i];
    t.rows.push_back({csv_number(b.values[i]), csv_number(p.energy_per_site), csv_number(p.fields.m_x),
                      csv_number(p.fields.m_s), csv_number(p.photon_density),
                      csv_number(effective_field(p.params, p.fields.m_x)), to_string(p.classification),
                      std::to_string(p.iterations), csv_number(p.residual), flag(p.converged),
                      std::to_string(sizes.small), std::to_string(sizes.large)});
  }
  return t;
}

int cmd_sweep(Context& ctx) {
  const auto& c = ctx.config;
  const auto& sw = *c.sweep;
  sc::SweepSetup setup;
  setup.params_template = c.model;
  setup.var = sw.variable;
  setup.mode = c.mode;
  setup.sizes = c.sizes;
  setup.dmrg = c.solver;
  setup.fixed_point = c.fixed_point;
  setup.jobs = c.jobs;
  setup.refine_step = sw.refine_step;
  const auto grid = phase::sweep_grid(sw.start, sw.stop, sw.step, sw.fine);

  std::vector<phase::PhaseBoundary> boundaries;
  std::vector<const sc::SweepBranch*> branches;
  phase::BranchPair pair;
  const auto refine = phase::make_refiner(setup);
  const phase::Refiner* refiner = sw.refine_step > 0.0 ? &refine : nullptr;
  if (sw.up && sw.down) {
    pair = phase::run_sweep_pair(setup, grid, c.init_up, c.init_down);
    boundaries = phase::analyze_sweep(pair, refiner, sw.boundary_tol);
    branches = {&pair.up, &pair.down};
  } else {
    auto& b = sw.up ? pair.up : pair.down;
    setup.init = sw.up ? c.init_up : c.init_down;
    b = sc::adiabatic_sweep(setup, sw.up ? grid : std::vector<double>(grid.rbegin(), grid.rend()));
    phase::ContinuousOptions opts;
    opts.tol = sw.boundary_tol;
    for (auto op : {phase::OrderParam::m_x, phase::OrderParam::m_s})
      for (const auto& pb : phase::detect_continuous(b, op, refiner, opts)) boundaries.push_back(pb);
    branches = {&b};
  }

  bool ok = true;
  for (const auto* b : branches) {
    write_table(ctx, branch_table(*b, c.sizes));
    for (const auto& p : b->points) ok = ok && p.converged;
    ok = ok && !b->aborted;
  }
  Table t;
  t.file = "boundaries.csv";
  t.header = {"swept", "location", "uncertainty", "kind", "phase_below", "phase_above", "evidence"};
  for (const auto& pb : boundaries) {
    t.rows.push_back({sc::to_string(pb.swept), csv_number(pb.location), csv_number(pb.uncertainty),
                      phase::to_string(pb.kind), to_string(pb.below), to_string(pb.above),
                      phase::to_string(pb.evidence)});
    *ctx.out << "boundary " << to_string(pb.below) << "-" << to_string(pb.above) << " at " << csv_number(pb.location)
             << " +- " << csv_number(pb.uncertainty) << " (" << phase::to_string(pb.kind) << ")\n";
  }
  write_table(ctx, t);
  if (!ok) *ctx.err << "sweep: some points did not converge\n";
  return ok ? 0 : 1;
}

int cmd_multicritical(Context& ctx) {
  const auto& c = ctx.config;
  phase::DeltaEOptions opts;
  opts.sizes = c.sizes;
  opts.profile = c.profile;
  opts.floor = c.multicritical.floor;
  opts.jobs = c.jobs;
  opts.dmrg = c.solver;
  opts.fixed_point = c.fixed_point;
  const double tol = c.multicritical.eps_tol.value_or(phase::default_eps_tol(c.profile));
  Table t;
  t.file = "multicritical.csv";
  t.header = {"eps", "g_eval", "e_numeric_minus_z", "e_numeric_plus_x", "e_weak", "delta_e", "below_floor"};
  std::vector<phase::DeltaEResult> steps;
  auto record = [&](double eps) {
    auto r = phase::delta_e_at_mf_critical(c.model.J, eps, opts);
    steps.push_back(r);
    *ctx.out << "eps " << csv_number(eps) << " delta_e " << csv_number(r.delta_e)
             << (r.below_floor ? " below floor\n" : " above floor\n");
    return r;
  };
  auto emit_steps = [&] {
    for (const auto& r : steps)
      t.rows.push_back({csv_number(r.eps), csv_number(r.g_eval), csv_number(r.e_minus_z), csv_number(r.e_plus_x),
                        csv_number(r.e_weak), csv_number(r.delta_e), flag(r.below_floor)});
  };
  try {
    const auto res = phase::multicritical_bisect(record, c.multicritical.eps_lo, c.multicritical.eps_hi, tol);
    emit_steps();
    t.rows.push_back({"summary", csv_number(res.eps_star), csv_number(res.uncertainty), "", "", "", ""});
    write_table(ctx, t);
    *ctx.out << "eps_star " << csv_number(res.eps_star) << " +- " << csv_number(res.uncertainty) << "\n";
    return 0;
  } catch (const Error& e) {
    emit_steps();
    write_table(ctx, t);
    *ctx.err << "multicritical: " << e.what() << "\n";
    return 1;
  }
}

int cmd_meanfield(Context& ctx) {
  const auto& c = ctx.config;
  const auto& spec = *c.meanfield;
  mf::MinimizeOptions opts;
  opts.seeds = spec.seeds;
  opts.order_seed = c.rng_seed;
  Table t;
  t.file = "mf_grid.csv";
  t.header = {"axis1", "axis2", "phase", "alpha", "nAz", "nBz", "energy_per_site"};
  for (double a : axis_values(spec.axes[0])) {
    for (double b : axis_values(spec.axes[1])) {
      const auto p = mf::with_axis(mf::with_axis(c.model, spec.axes[0].axis, a), spec.axes[1].axis, b);
      const auto s = mf::mf_minimize(p, opts);
      t.rows.push_back({csv_number(a), csv_number(b), to_string(mf::mf_classify(s)), csv_number(s.alpha),
                        csv_number(s.nz_A()), csv_number(s.nz_B()), csv_number(s.energy_per_site)});
    }
  }
  write_table(ctx, t);
  return 0;
}

int cmd_landscape(Context& ctx) {
  const auto& c = ctx.config;
  sc::PairEvaluator ev(c.model, c.mode, c.sizes, c.solver, c.jobs);
  const auto land = sc::landscape_scan(ev, landscape_grid(c.landscape), c.landscape.ms_policy, c.fixed_point);
  Table t;
  t.file = "landscape.csv";
  t.header = {"m_x", "energy_per_site", "is_local_min"};
  for (const auto& p : land.points) t.rows.push_back({csv_number(p.m_x), csv_number(p.energy), flag(p.is_local_min)});
  write_table(ctx, t);
  return 0;
}

int cmd_verify(Context& ctx, const verify::References& refs) {
  verify::Report report;
  verify::Options opts;
  opts.jobs = ctx.config.jobs;
  verify::run_embedded_suite(report, refs, opts);
  Table t;
  t.file = "verify.csv";
  t.header = {"id", "name", "measured", "reference", "tolerance", "pass", "detail"};
  for (const auto& ch : report.checks) {
    *ctx.out << verify::format(ch) << "\n";
    t.rows.push_back({ch.id, ch.name, csv_number(ch.measured), csv_number(ch.reference), csv_number(ch.tolerance),
                      flag(ch.pass), ch.detail});
  }
  write_table(ctx, t);
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dicke-Ising chain in the thermodynamic limit: linked-cluster DMRG with self-consistent cavity field"};
  app.set_version_flag("--version", std::string(DICKE_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::string profile;
  std::string sizes;
  std::string references;
  int jobs = 0;
  bool check_only = false;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--output", output, "output directory (overrides output_dir)");
  app.add_option("--profile", profile, "tolerance profile")->check(CLI::IsMember({"default", "tight"}));
  app.add_option("--jobs", jobs, "worker cap")->check(CLI::PositiveNumber);
  app.add_option("--sizes", sizes, "cluster sizes N_small,N_large");
  app.add_option("--references", references, "JSON file overriding the embedded references (verify)");
  app.add_flag("--check-config", check_only, "validate the configuration, print it resolved and exit");

  struct Sub {
    Command cmd;
    const char* help;
  };
  const Sub subs[] = {{Command::sweep, "adiabatic sweep in g or eps with boundary detection"},
                      {Command::multicritical, "multicritical point by bisection on the delta_e criterion"},
                      {Command::meanfield, "mean-field phase grid over two axes"},
                      {Command::landscape, "energy landscape E(m_x) on a symmetric grid"},
                      {Command::verify, "embedded reference suite"}};
  for (const auto& s : subs) app.add_subcommand(to_string(s.cmd), s.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  Context ctx;
  ctx.out = &out;
  ctx.err = &err;
  for (const auto& s : subs)
    if (app.got_subcommand(to_string(s.cmd))) ctx.command = s.cmd;

  try {
    Overrides ov;
    if (!output.empty()) ov.output_dir = output;
    if (!profile.empty()) ov.profile = phase::profile_from_string(profile);
    if (jobs > 0) ov.jobs = jobs;
    if (!sizes.empty()) ov.sizes = parse_sizes(sizes);
    if (!config_path.empty()) {
      ctx.config = load_config(config_path, ov);
    } else if (ctx.command == Command::verify) {
      ctx.config = parse_config(json{{"model", json::object()}}, ov);
    } else {
      throw ConfigError(to_string(ctx.command) + ": --config is required");
    }
    validate_for(ctx.config, ctx.command);
    verify::References refs = verify::References::embedded();
    if (!references.empty()) refs = verify::load_references(references);

    if (check_only) {
      out << to_json(ctx.config).dump(2) << "\n";
      return 0;
    }
    prepare_output(ctx.config.output_dir);
    switch (ctx.command) {
      case Command::sweep: return cmd_sweep(ctx);
      case Command::multicritical: return cmd_multicritical(ctx);
      case Command::meanfield: return cmd_meanfield(ctx);
      case Command::landscape: return cmd_landscape(ctx);
      case Command::verify: return cmd_verify(ctx, refs);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace dicke::cli
