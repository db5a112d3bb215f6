#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "dicke/cli.hpp"

namespace dicke::cli {

using nlohmann::json;

namespace {

// A JSON object whose keys must all be consumed.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where() + "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  template <typename T>
  void read(const std::string& key, T& target) {
    known_.insert(key);
    if (!node_.contains(key)) return;
    const auto& v = node_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.get<long long>() < 0) throw ConfigError("");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError("");
      } else {
        if (!v.is_string()) throw ConfigError("");
      }
      target = v.get<T>();
    } catch (const ConfigError&) {
      throw ConfigError(where(key) + "wrong type");
    }
  }

  template <typename T>
  void read(const std::string& key, std::optional<T>& target) {
    known_.insert(key);
    if (!node_.contains(key) || node_.at(key).is_null()) return;
    T value{};
    read(key, value);
    target = value;
  }

  const json& child(const std::string& key) {
    known_.insert(key);
    return node_.at(key);
  }

  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : node_.items())
      if (!known_.count(key)) throw ConfigError(where(key) + "unknown key");
  }

 private:
  std::string where(const std::string& key = {}) const {
    const std::string p = key.empty() ? path_ : path(key);
    return "config " + (p.empty() ? std::string("root") : p) + ": ";
  }

  const json& node_;
  std::string path_;
  std::set<std::string> known_;
};

sc::SweepVar sweep_var_from(const std::string& s, const std::string& path) {
  if (s == "g") return sc::SweepVar::g;
  if (s == "eps") return sc::SweepVar::eps;
  throw ConfigError("config " + path + ": expected g or eps, got '" + s + "'");
}

mf::Axis axis_from(const std::string& s, const std::string& path) {
  if (s == "g") return mf::Axis::g;
  if (s == "J") return mf::Axis::J;
  if (s == "eps") return mf::Axis::eps;
  throw ConfigError("config " + path + ": expected g, J or eps, got '" + s + "'");
}

SelfFields read_fields(const json& node, const std::string& path, SelfFields def) {
  Section s(node, path);
  s.read("m_x", def.m_x);
  s.read("m_s", def.m_s);
  s.finish();
  return def;
}

void read_solver(Section& s, dmrg::DmrgSettings& d) {
  s.read("cutoff", d.cutoff);
  s.read("energy_tol", d.energy_tol);
  s.read("max_bond_dim", d.max_bond_dim);
  s.read("max_sweeps", d.max_sweeps);
  s.read("lanczos_tol", d.lanczos_tol);
  s.read("lanczos_max_iter", d.lanczos_max_iter);
  s.read("noise", d.noise);
  s.read("noise_sweeps", d.noise_sweeps);
  s.read("seed", d.seed);
}

void read_fixed_point(Section& s, sc::FixedPointConfig& f) {
  s.read("tol", f.tol);
  s.read("max_iters", f.max_iters);
  s.read("anderson_window", f.anderson_window);
  s.read("damping", f.damping);
  s.read("seed_floor", f.seed_floor);
  s.read("seed_iters", f.seed_iters);
  s.read("snap_factor", f.snap_factor);
  s.read("classify_threshold", f.classify_threshold);
  s.read("stability_check", f.stability_check);
  s.read("stability_probe", f.stability_probe);
  s.read("stability_margin", f.stability_margin);
  s.read("wall_amplitude", f.wall_amplitude);
  s.read("stall_iters", f.stall_iters);
}

std::string mode_name(sc::Mode m) { return m == sc::Mode::af ? "af" : "ferro"; }

std::string policy_name(sc::MsPolicy p) { return p == sc::MsPolicy::pinned_zero ? "pinned_zero" : "inner_converged"; }

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::sweep: return "sweep";
    case Command::multicritical: return "multicritical";
    case Command::meanfield: return "meanfield";
    case Command::landscape: return "landscape";
    case Command::verify: return "verify";
  }
  return "?";
}

sc::ClusterSizes parse_sizes(const std::string& text) {
  std::size_t a = 0;
  std::size_t b = 0;
  char comma = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%zu %c %zu %c", &a, &comma, &b, &extra) != 3 || comma != ',')
    throw ConfigError("sizes: expected N_small,N_large, got '" + text + "'");
  return {a, b};
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x == 0.0 ? 0.0 : x);
  return buf;
}

RunConfig parse_config(const json& doc, const Overrides& ov) {
  Section root(doc, "");
  RunConfig c;

  std::string profile = "default";
  root.read("profile", profile);
  try {
    c.profile = ov.profile.value_or(phase::profile_from_string(profile));
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config profile: ") + e.what());
  }
  const auto ps = phase::profile_settings(c.profile);
  c.solver = ps.dmrg;
  c.fixed_point = ps.fixed_point;

  if (!root.has("model")) throw ConfigError("config: missing section 'model'");
  {
    Section m(root.child("model"), "model");
    m.read("J", c.model.J);
    m.read("eps", c.model.eps);
    m.read("g", c.model.g);
    m.read("omega_c", c.model.omega_c);
    m.read("D", c.model.D);
    m.finish();
  }
  try {
    c.model.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config model: ") + e.what());
  }

  c.mode = c.model.J > 0.0 ? sc::Mode::af : sc::Mode::ferro;
  std::string mode;
  root.read("mode", mode);
  if (mode == "af")
    c.mode = sc::Mode::af;
  else if (mode == "ferro")
    c.mode = sc::Mode::ferro;
  else if (!mode.empty())
    throw ConfigError("config mode: expected ferro or af, got '" + mode + "'");

  c.sizes = sc::ClusterSizes::defaults(c.mode);
  if (root.has("sizes")) {
    const auto& s = root.child("sizes");
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() || !s[1].is_number_unsigned())
      throw ConfigError("config sizes: expected [N_small, N_large]");
    c.sizes = {s[0].get<std::size_t>(), s[1].get<std::size_t>()};
  }
  if (ov.sizes) c.sizes = *ov.sizes;
  try {
    nlce::check_sizes(c.sizes.small, c.sizes.large, sc::nlce_mode(c.mode));
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config sizes: ") + e.what());
  }

  if (root.has("solver")) {
    Section s(root.child("solver"), "solver");
    read_solver(s, c.solver);
    s.finish();
  }
  if (root.has("fixed_point")) {
    Section s(root.child("fixed_point"), "fixed_point");
    read_fixed_point(s, c.fixed_point);
    s.finish();
  }
  try {
    c.solver.validate();
    c.fixed_point.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (root.has("sweep")) {
    Section s(root.child("sweep"), "sweep");
    SweepSpec sw;
    std::string var;
    s.read("variable", var);
    if (var.empty()) throw ConfigError("config sweep.variable: missing");
    sw.variable = sweep_var_from(var, "sweep.variable");
    for (const char* key : {"start", "stop", "step"})
      if (!s.has(key)) throw ConfigError(std::string("config sweep.") + key + ": missing");
    s.read("start", sw.start);
    s.read("stop", sw.stop);
    s.read("step", sw.step);
    std::string dirs = "both";
    s.read("directions", dirs);
    if (dirs == "up")
      sw.down = false;
    else if (dirs == "down")
      sw.up = false;
    else if (dirs != "both")
      throw ConfigError("config sweep.directions: expected up, down or both, got '" + dirs + "'");
    s.read("refine_step", sw.refine_step);
    s.read("boundary_tol", sw.boundary_tol);
    if (s.has("fine")) {
      const auto& f = s.child("fine");
      if (!f.is_array()) throw ConfigError("config sweep.fine: expected an array");
      for (std::size_t i = 0; i < f.size(); ++i) {
        Section w(f[i], "sweep.fine[" + std::to_string(i) + "]");
        phase::GridWindow gw;
        w.read("lo", gw.lo);
        w.read("hi", gw.hi);
        w.read("step", gw.step);
        w.finish();
        sw.fine.push_back(gw);
      }
    }
    s.finish();
    if (!(sw.step > 0.0)) throw ConfigError("config sweep.step: must be > 0");
    if (!(sw.start < sw.stop)) throw ConfigError("config sweep: start must be below stop (empty grid)");
    if (!(sw.refine_step >= 0.0)) throw ConfigError("config sweep.refine_step: must be >= 0");
    if (!(sw.boundary_tol > 0.0)) throw ConfigError("config sweep.boundary_tol: must be > 0");
    for (const auto& w : sw.fine)
      if (!(w.step > 0.0) || !(w.lo < w.hi)) throw ConfigError("config sweep.fine: need lo < hi and step > 0");
    c.sweep = sw;
  }

  c.init_up = c.mode == sc::Mode::af ? SelfFields{0.0, 0.5} : SelfFields{0.0, 0.0};
  c.init_down = {0.5, 0.0};
  if (root.has("init")) {
    Section s(root.child("init"), "init");
    if (s.has("up")) c.init_up = read_fields(s.child("up"), "init.up", c.init_up);
    if (s.has("down")) c.init_down = read_fields(s.child("down"), "init.down", c.init_down);
    s.finish();
  }
  for (const auto* f : {&c.init_up, &c.init_down}) {
    try {
      f->validate();
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("config init: ") + e.what());
    }
  }

  if (root.has("multicritical")) {
    Section s(root.child("multicritical"), "multicritical");
    s.read("eps_lo", c.multicritical.eps_lo);
    s.read("eps_hi", c.multicritical.eps_hi);
    s.read("eps_tol", c.multicritical.eps_tol);
    s.read("floor", c.multicritical.floor);
    s.finish();
  }

  if (root.has("meanfield")) {
    Section s(root.child("meanfield"), "meanfield");
    MeanFieldSpec spec;
    s.read("seeds", spec.seeds);
    if (s.has("axes")) {
      const auto& axes = s.child("axes");
      if (!axes.is_array()) throw ConfigError("config meanfield.axes: expected an array");
      for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string path = "meanfield.axes[" + std::to_string(i) + "]";
        Section a(axes[i], path);
        AxisSpec ax;
        std::string name;
        a.read("name", name);
        ax.axis = axis_from(name, path + ".name");
        a.read("start", ax.start);
        a.read("stop", ax.stop);
        a.read("count", ax.count);
        a.finish();
        if (ax.count < 1) throw ConfigError("config " + path + ".count: must be >= 1");
        spec.axes.push_back(ax);
      }
    }
    s.finish();
    c.meanfield = spec;
  }

  if (root.has("landscape")) {
    Section s(root.child("landscape"), "landscape");
    s.read("m_x_max", c.landscape.m_x_max);
    s.read("points", c.landscape.points);
    std::string policy = policy_name(c.landscape.ms_policy);
    s.read("ms_policy", policy);
    if (policy == "pinned_zero")
      c.landscape.ms_policy = sc::MsPolicy::pinned_zero;
    else if (policy == "inner_converged")
      c.landscape.ms_policy = sc::MsPolicy::inner_converged;
    else
      throw ConfigError("config landscape.ms_policy: expected pinned_zero or inner_converged");
    s.finish();
  }

  root.read("output_dir", c.output_dir);
  root.read("rng_seed", c.rng_seed);
  root.read("jobs", c.jobs);
  root.finish();

  if (ov.output_dir) c.output_dir = *ov.output_dir;
  if (ov.jobs) c.jobs = *ov.jobs;
  if (c.jobs < 1) throw ConfigError("jobs: must be >= 1");
  return c;
}

RunConfig load_config(const std::string& path, const Overrides& ov) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return parse_config(doc, ov);
}

void validate_for(const RunConfig& c, Command cmd) {
  switch (cmd) {
    case Command::sweep:
      if (!c.sweep) throw ConfigError("sweep: config needs a 'sweep' section");
      phase::sweep_grid(c.sweep->start, c.sweep->stop, c.sweep->step, c.sweep->fine);
      break;
    case Command::multicritical:
      if (!(c.model.J < 0.0)) throw ConfigError("multicritical: needs J < 0 (ferromagnetic ordered phase)");
      if (c.mode != sc::Mode::ferro) throw ConfigError("multicritical: needs mode ferro");
      if (!(c.multicritical.eps_lo < c.multicritical.eps_hi))
        throw ConfigError("multicritical: need eps_lo < eps_hi");
      if (c.multicritical.eps_tol && !(*c.multicritical.eps_tol > 0.0))
        throw ConfigError("multicritical.eps_tol: must be > 0");
      if (c.multicritical.floor && !(*c.multicritical.floor > 0.0))
        throw ConfigError("multicritical.floor: must be > 0");
      break;
    case Command::meanfield:
      if (!c.meanfield) throw ConfigError("meanfield: config needs a 'meanfield' section");
      if (c.meanfield->axes.size() != 2)
        throw ConfigError("meanfield: exactly two grid axes required, got " +
                          std::to_string(c.meanfield->axes.size()));
      if (c.meanfield->axes[0].axis == c.meanfield->axes[1].axis)
        throw ConfigError("meanfield: the two axes must differ");
      if (c.meanfield->seeds < 1 || c.meanfield->seeds > 32) throw ConfigError("meanfield.seeds: must lie in [1, 32]");
      break;
    case Command::landscape:
      if (!(c.landscape.m_x_max > 0.0 && c.landscape.m_x_max <= 0.5))
        throw ConfigError("landscape.m_x_max: grid must lie within [-1/2, 1/2]");
      if (c.landscape.points < 3 || c.landscape.points % 2 == 0)
        throw ConfigError("landscape.points: must be odd and >= 3 (symmetric grid through zero)");
      break;
    case Command::verify: break;
  }
}

json to_json(const RunConfig& c) {
  json j;
  j["profile"] = phase::to_string(c.profile);
  j["mode"] = mode_name(c.mode);
  j["model"] = {{"J", c.model.J}, {"eps", c.model.eps}, {"g", c.model.g}, {"omega_c", c.model.omega_c}};
  if (c.model.D) j["model"]["D"] = *c.model.D;
  j["sizes"] = {c.sizes.small, c.sizes.large};
  j["solver"] = {{"cutoff", c.solver.cutoff},
                 {"energy_tol", c.solver.energy_tol},
                 {"max_bond_dim", c.solver.max_bond_dim},
                 {"max_sweeps", c.solver.max_sweeps},
                 {"lanczos_tol", c.solver.lanczos_tol},
                 {"lanczos_max_iter", c.solver.lanczos_max_iter},
                 {"noise", c.solver.noise},
                 {"noise_sweeps", c.solver.noise_sweeps},
                 {"seed", c.solver.seed}};
  const auto& f = c.fixed_point;
  j["fixed_point"] = {{"tol", f.tol},
                      {"max_iters", f.max_iters},
                      {"anderson_window", f.anderson_window},
                      {"damping", f.damping},
                      {"seed_floor", f.seed_floor},
                      {"seed_iters", f.seed_iters},
                      {"snap_factor", f.snap_factor},
                      {"classify_threshold", f.classify_threshold},
                      {"stability_check", f.stability_check},
                      {"stability_probe", f.stability_probe},
                      {"stability_margin", f.stability_margin},
                      {"wall_amplitude", f.wall_amplitude},
                      {"stall_iters", f.stall_iters}};
  if (c.sweep) {
    const auto& s = *c.sweep;
    j["sweep"] = {{"variable", sc::to_string(s.variable)},
                  {"start", s.start},
                  {"stop", s.stop},
                  {"step", s.step},
                  {"directions", s.up && s.down ? "both" : (s.up ? "up" : "down")},
                  {"refine_step", s.refine_step},
                  {"boundary_tol", s.boundary_tol},
                  {"fine", json::array()}};
    for (const auto& w : s.fine) j["sweep"]["fine"].push_back({{"lo", w.lo}, {"hi", w.hi}, {"step", w.step}});
  }
  j["init"] = {{"up", {{"m_x", c.init_up.m_x}, {"m_s", c.init_up.m_s}}},
               {"down", {{"m_x", c.init_down.m_x}, {"m_s", c.init_down.m_s}}}};
  j["multicritical"] = {{"eps_lo", c.multicritical.eps_lo}, {"eps_hi", c.multicritical.eps_hi}};
  j["multicritical"]["eps_tol"] = c.multicritical.eps_tol.value_or(phase::default_eps_tol(c.profile));
  j["multicritical"]["floor"] = c.multicritical.floor.value_or(phase::profile_settings(c.profile).delta_e_floor);
  if (c.meanfield) {
    j["meanfield"] = {{"seeds", c.meanfield->seeds}, {"axes", json::array()}};
    for (const auto& a : c.meanfield->axes)
      j["meanfield"]["axes"].push_back(
          {{"name", mf::to_string(a.axis)}, {"start", a.start}, {"stop", a.stop}, {"count", a.count}});
  }
  j["landscape"] = {{"m_x_max", c.landscape.m_x_max},
                    {"points", c.landscape.points},
                    {"ms_policy", policy_name(c.landscape.ms_policy)}};
  j["output_dir"] = c.output_dir;
  j["rng_seed"] = c.rng_seed;
  j["jobs"] = c.jobs;
  return j;
}

std::vector<double> landscape_grid(const LandscapeSpec& spec) {
  const int n = spec.points;
  std::vector<double> grid(static_cast<std::size_t>(n));
  const int half = n / 2;
  for (int i = 0; i <= half; ++i) {
    const double m = spec.m_x_max * (half - i) / half;
    grid[static_cast<std::size_t>(i)] = -m;
    grid[static_cast<std::size_t>(n - 1 - i)] = m;
  }
  grid[static_cast<std::size_t>(half)] = 0.0;
  return grid;
}

std::vector<double> axis_values(const AxisSpec& a) {
  if (a.count == 1) return {a.start};
  std::vector<double> v(static_cast<std::size_t>(a.count));
  for (int i = 0; i < a.count; ++i) v[static_cast<std::size_t>(i)] = a.start + (a.stop - a.start) * i / (a.count - 1);
  return v;
}

}  // namespace dicke::cli
