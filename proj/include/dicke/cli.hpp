#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dicke/meanfield.hpp"
#include "dicke/phase_analysis.hpp"

namespace dicke::cli {

enum class Command { sweep, multicritical, meanfield, landscape, verify };

std::string to_string(Command command);

struct SweepSpec {
  sc::SweepVar variable = sc::SweepVar::g;
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
  bool up = true;
  bool down = true;
  double refine_step = 1e-3;
  double boundary_tol = 5e-4;
  std::vector<phase::GridWindow> fine;
};

struct MulticriticalSpec {
  double eps_lo = 0.15;
  double eps_hi = 0.30;
  std::optional<double> eps_tol;  // profile default when unset
  std::optional<double> floor;
};

struct AxisSpec {
  mf::Axis axis = mf::Axis::g;
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
};

struct MeanFieldSpec {
  std::vector<AxisSpec> axes;
  int seeds = 32;
};

struct LandscapeSpec {
  double m_x_max = 0.5;
  int points = 41;  // odd, symmetric about zero
  sc::MsPolicy ms_policy = sc::MsPolicy::pinned_zero;
};

struct RunConfig {
  ModelParams model;
  sc::Mode mode = sc::Mode::ferro;
  phase::Profile profile = phase::Profile::standard;
  std::optional<SweepSpec> sweep;
  sc::ClusterSizes sizes;
  dmrg::DmrgSettings solver;
  sc::FixedPointConfig fixed_point;
  SelfFields init_up;
  SelfFields init_down;
  MulticriticalSpec multicritical;
  std::optional<MeanFieldSpec> meanfield;
  LandscapeSpec landscape;
  std::string output_dir = ".";
  unsigned rng_seed = 0;
  int jobs = 1;
};

// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::string> output_dir;
  std::optional<phase::Profile> profile;
  std::optional<int> jobs;
  std::optional<sc::ClusterSizes> sizes;
};

// Profile defaults first, then the file, then the overrides. Unknown keys
// and type mismatches raise ConfigError with the key path.
RunConfig parse_config(const nlohmann::json& doc, const Overrides& overrides = {});
RunConfig load_config(const std::string& path, const Overrides& overrides = {});

// Checks the parts a command needs; throws ConfigError.
void validate_for(const RunConfig& config, Command command);

// Fully resolved configuration, echoed into every CSV header.
nlohmann::json to_json(const RunConfig& config);

// Parses "N_small,N_large".
sc::ClusterSizes parse_sizes(const std::string& text);

// 15 significant digits.
std::string csv_number(double x);

std::vector<double> landscape_grid(const LandscapeSpec& spec);
std::vector<double> axis_values(const AxisSpec& axis);

// Entry point of the dicke tool. Returns the process exit status: 0 when every
// solve converged and every verification passed, 1 otherwise, 2 for
// configuration errors, 3 for I/O errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dicke::cli
