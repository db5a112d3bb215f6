#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dicke/selfconsist.hpp"

namespace dicke::phase {

using sc::SweepBranch;
using sc::SweepVar;

enum class Kind { first_order, continuous };
enum class Evidence { branch_crossing, order_onset, delta_e };
enum class OrderParam { m_x, m_s };

std::string to_string(Kind kind);
std::string to_string(Evidence evidence);

struct PhaseBoundary {
  SweepVar swept = SweepVar::g;
  double location = 0.0;
  double uncertainty = 0.0;
  Kind kind = Kind::continuous;
  Phase below = Phase::PN;  // phase on the smaller-parameter side
  Phase above = Phase::PN;
  Evidence evidence = Evidence::order_onset;
  bool low_confidence = false;
  // Hysteresis window of a branch crossing (equal to location otherwise).
  double window_lo = 0.0;
  double window_hi = 0.0;
};

// Energy crossing of two hysteresis branches. The window is where the
// branches disagree on the classification; the crossing of their linearly
// interpolated energies inside it (widened by one grid step) is the
// transition. Returns nothing without a window.
std::optional<PhaseBoundary> detect_first_order(const SweepBranch& up, const SweepBranch& down);

// Re-solves one parameter value, warm-started from a neighbouring point.
using Refiner = std::function<sc::ConvergedPoint(double value, const sc::ConvergedPoint& near,
                                                 const sc::WarmStates* warm)>;

Refiner make_refiner(const sc::SweepSetup& setup);

struct ContinuousOptions {
  double tol = 5e-4;             // bisection target in the swept parameter
  double slope_factor = 10.0;    // allowed slope jump over local curvature
  const SweepBranch* partner = nullptr;  // opposite direction, for the direction check
};

// Onsets of the order parameter across the classification threshold between
// neighbouring converged points, bisected with fresh solves when a refiner is
// given. A boundary stays continuous only if the partner branch (when given)
// agrees within twice the refinement tolerance and the energy slope has no
// jump beyond slope_factor times the local curvature scale.
std::vector<PhaseBoundary> detect_continuous(const SweepBranch& branch, OrderParam order, const Refiner* refine,
                                             const ContinuousOptions& opts = {});

enum class Profile { standard, tight };

std::string to_string(Profile profile);
Profile profile_from_string(const std::string& name);

struct ProfileSettings {
  dmrg::DmrgSettings dmrg;
  sc::FixedPointConfig fixed_point;
  double delta_e_floor = 1e-10;
};

ProfileSettings profile_settings(Profile profile);

struct DeltaEResult {
  double eps = 0.0;
  double g_eval = 0.0;
  double e_numeric = 0.0;   // lower of the two starts
  double e_minus_z = 0.0;
  double e_plus_x = 0.0;
  double e_weak = 0.0;
  double delta_e = 0.0;     // e_numeric - e_weak
  bool below_floor = false;
  // Larger |dE/dm_x| of the two solutions when requested, NaN otherwise.
  double hf_residual = std::numeric_limits<double>::quiet_NaN();
};

struct DeltaEOptions {
  sc::ClusterSizes sizes{100, 101};
  Profile profile = Profile::standard;
  std::optional<double> floor;  // defaults to the profile floor
  int jobs = 1;
  bool hellmann_feynman = false;
  // Override the profile's solver settings.
  std::optional<dmrg::DmrgSettings> dmrg;
  std::optional<sc::FixedPointConfig> fixed_point;
};

// Total energy at g_crit_ferro(eps) from a -z and a +x initial state against
// the weak-coupling energy. Either start failing to converge is an error.
DeltaEResult delta_e_at_mf_critical(double J, double eps, const DeltaEOptions& opts = {});

struct MulticriticalResult {
  double eps_star = 0.0;
  double uncertainty = 0.0;
  std::vector<DeltaEResult> steps;  // endpoints first, then each bisection point
};

// Bisection on below_floor between an above-floor lo and a below-floor hi,
// until the half-width is at most eps_tol.
MulticriticalResult multicritical_bisect(const std::function<DeltaEResult(double)>& delta_e, double eps_lo,
                                         double eps_hi, double eps_tol);

MulticriticalResult multicritical_bisect(double J, double eps_lo, double eps_hi, const DeltaEOptions& opts,
                                         double eps_tol);

// Default bisection tolerance per profile.
double default_eps_tol(Profile profile);

// Uniform grid from start to stop (inclusive within rounding) with a finer
// step inside the given windows.
struct GridWindow {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
};

std::vector<double> sweep_grid(double start, double stop, double step, const std::vector<GridWindow>& fine = {});

struct BranchPair {
  SweepBranch up;
  SweepBranch down;
};

// Runs the ascending grid from init_up and the reversed grid from
// init_down; concurrently when setup.jobs > 1 (each branch then gets half).
BranchPair run_sweep_pair(const sc::SweepSetup& setup, const std::vector<double>& grid, const SelfFields& init_up,
                          const SelfFields& init_down);

// Merges boundaries from both branches: a branch crossing takes precedence
// over onsets near its hysteresis window; remaining onsets are kept with the
// kind detect_continuous assigned.
std::vector<PhaseBoundary> analyze_sweep(const BranchPair& branches, const Refiner* refine, double tol = 5e-4);

}  // namespace dicke::phase
