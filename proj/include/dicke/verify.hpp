#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dicke/phase_analysis.hpp"

namespace dicke::verify {

struct Check {
  std::string id;
  std::string name;
  double measured = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

// Reference values compared against. Closed-form oracles are computed, not
// stored; only the reference numbers and their tolerances live here.
struct References {
  double an_as = 0.3254;
  double as_ps = 0.3369;
  double ps_pn = 0.5355;
  double table_tol = 1e-3;
  double as_window_width = 0.02;
  double as_window_tol = 0.01;
  double eps_star_coarse = 0.200;
  double eps_star_coarse_tol = 1e-3;
  double eps_star_tight_lo = 0.19987;
  double eps_star_tight_hi = 0.19997;
  double mf_ps_pn = 0.5352;
  double mf_an_as = 0.3254;
  double mf_tol = 5e-4;
  double ferro_onset_tol = 1e-3;

  static References embedded() { return {}; }
};

// Overrides embedded values from a flat JSON object. Unknown keys, non-numeric
// values and a missing file raise ConfigError naming the source.
References load_references(const std::string& path);
References references_from_json(const std::string& text, const std::string& origin);
std::vector<std::string> reference_keys();

struct Options {
  int jobs = 1;
  std::uint64_t seed = 20240607;
};

// Checks accumulate here; converged points along the way contribute their
// Hellmann-Feynman residual to a shared maximum.
struct Report {
  std::vector<Check> checks;
  double hf_max = 0.0;
  std::size_t hf_points = 0;
  std::size_t hf_missing = 0;

  void add(Check check);
  void record_hf(double residual);
  bool all_pass() const;
};

std::string format(const Check& check);

// Closed-form self-consistent Dicke point (J = 0) in the thermodynamic limit.
struct DickeOracle {
  double m_x = 0.0;
  double energy_per_site = 0.0;
  double photon_density = 0.0;
};
DickeOracle dicke_oracle(const ModelParams& params);

// Infinite transverse-field Ising chain: -(1/2pi) int_0^2pi sqrt(J^2 + h^2 - 2 J h cos k) dk.
double tfim_energy_per_site(double J, double h, int nodes = 4096);

// AF boundary triple from an epsilon sweep at J = 0.2, g = 0.52.
void check_af_boundaries(Report& report, const References& refs, const Options& opts);
// AS window in g at J = 0.2, eps = 0.3.
void check_as_window(Report& report, const References& refs, const Options& opts);
// Multicritical point at J = -0.2 on the given profile.
void check_multicritical(Report& report, const References& refs, const Options& opts, phase::Profile profile);
void check_dicke(Report& report, const Options& opts);
// All five transverse fields at J = +-0.2, or a single point.
void check_tfim(Report& report, const Options& opts, bool single_point = false);
void check_ed_suite(Report& report, const Options& opts, int draws = 50);
void check_classical_af(Report& report, const Options& opts);
void check_meanfield(Report& report, const References& refs);
// Telescoping, landscape symmetry, DMRG monotonicity and the A^2 identity.
void check_invariants(Report& report, const Options& opts);
// Turns the accumulated Hellmann-Feynman residuals into one check.
void check_hellmann_feynman(Report& report, double limit = 1e-6);

// The reference suite behind the verify command.
void run_embedded_suite(Report& report, const References& refs, const Options& opts);

}  // namespace dicke::verify
