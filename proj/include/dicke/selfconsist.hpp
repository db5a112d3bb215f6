#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dicke/dmrg.hpp"
#include "dicke/model.hpp"
#include "dicke/nlce.hpp"

namespace dicke::sc {

enum class Mode { ferro, af };

std::string to_string(Mode mode);
nlce::Mode nlce_mode(Mode mode);

struct ClusterSizes {
  std::size_t small = 100;
  std::size_t large = 101;

  // (100, 101) ferro, (100, 102) AF.
  static ClusterSizes defaults(Mode mode);
};

struct FixedPointConfig {
  double tol = 1e-10;
  int max_iters = 500;
  int anderson_window = 5;
  double damping = 1.0;        // initial mixing, halved on overshoot
  double seed_floor = 1e-5;    // |m_x| (and |m_s| in AF mode) floor
  int seed_iters = 3;          // iterations the floor is applied for
  double snap_factor = 10.0;   // final |m_x| < snap_factor * tol becomes 0
  double classify_threshold = 1e-6;
  bool stability_check = true;
  double stability_probe = 1e-3;
  double stability_margin = 1e-4;
  // AF mode: an m_s = 0 solution whose clusters are Neel ordered in the bulk
  // holds a domain wall rather than a paramagnet, and is re-solved from the
  // ordered sector.
  double wall_amplitude = 0.25;
  // Give up once the residual has not halved for this many iterations (0: never).
  int stall_iters = 100;

  // Self-consistency 1e-13.
  static FixedPointConfig tight();
  void validate() const;
};

using dicke::Phase;

Phase classify(const SelfFields& fields, double threshold);

struct ConvergedPoint {
  ModelParams params;
  SelfFields fields;
  double energy_per_site = 0.0;  // matter bulk + (g^2/omega_c) m_x^2
  double matter_energy = 0.0;
  double photon_density = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  bool warm_start_used = false;
  Phase classification = Phase::PN;
  // |dE/dm_x| at the solution when requested by the sweep, NaN otherwise.
  double hf_residual = std::numeric_limits<double>::quiet_NaN();
  std::string note;  // failure reason when converged is false; otherwise remarks
};

struct WarmStates {
  std::optional<dmrg::Mps> small;
  std::optional<dmrg::Mps> large;

  bool empty() const { return !small || !large; }
};

// Initial product state for a cold cluster solve.
enum class ColdStart { automatic, minus_z, plus_x, neel };

// Evaluates the self-consistency map at given fields for one parameter set,
// carrying the cluster states from call to call as warm starts.
class PairEvaluator {
 public:
  PairEvaluator(const ModelParams& params, Mode mode, ClusterSizes sizes, dmrg::DmrgSettings settings,
                int jobs = 1);

  struct Evaluation {
    SelfFields input;
    SelfFields output;
    double matter_energy = 0.0;
    double total_energy = 0.0;
    // Mean staggered amplitude |sz_i - sz_{i+1}|/2 over the second quarter
    // of the larger cluster. Near 1 when that cluster is locally Neel ordered.
    double bulk_staggered_amplitude = 0.0;
  };

  // Throws NotConverged if either DMRG run fails to converge.
  Evaluation evaluate(const SelfFields& fields);

  const ModelParams& params() const { return params_; }
  void set_params(const ModelParams& params);
  Mode mode() const { return mode_; }
  const ClusterSizes& sizes() const { return sizes_; }
  const dmrg::DmrgSettings& settings() const { return settings_; }

  const WarmStates& warm() const { return warm_; }
  void set_warm(WarmStates warm) { warm_ = std::move(warm); }
  void clear_warm() { warm_ = {}; }
  void set_cold_start(ColdStart start) { cold_start_ = start; }
  int evaluations() const { return evaluations_; }

 private:
  dmrg::Mps initial_state(std::size_t n, const std::optional<dmrg::Mps>& warm, const SelfFields& fields) const;

  ModelParams params_;
  Mode mode_;
  ClusterSizes sizes_;
  dmrg::DmrgSettings settings_;
  int jobs_;
  WarmStates warm_;
  ColdStart cold_start_ = ColdStart::automatic;
  int evaluations_ = 0;
};

// One application of the map (m_x, m_s) -> (m_x', m_s'). Ferro mode pins
// m_s = 0 and applies no boundary fields.
SelfFields fixed_point_map(PairEvaluator& evaluator, const SelfFields& fields);

// Bulk matter energy plus (g^2/omega_c) m_x^2, per site.
double total_energy(PairEvaluator& evaluator, const SelfFields& fields);

// Anderson-accelerated self-consistency. Raises CycleDetected on a
// persistent period-2 oscillation; exhausting max_iters returns a point
// with converged = false.
ConvergedPoint anderson_solve(PairEvaluator& evaluator, const SelfFields& init, const FixedPointConfig& config);

// |dE/dm_x| at fixed m_s by central differences of total_energy.
double hellmann_feynman_residual(PairEvaluator& evaluator, const SelfFields& fields, double h = 1e-3);

enum class MsPolicy { pinned_zero, inner_converged };

struct LandscapePoint {
  double m_x = 0.0;
  double m_s = 0.0;
  double energy = 0.0;
  bool is_local_min = false;
};

struct Landscape {
  std::vector<LandscapePoint> points;
  std::size_t global_min = 0;

  std::vector<std::size_t> local_minima() const;
};

Landscape landscape_scan(PairEvaluator& evaluator, const std::vector<double>& mx_grid, MsPolicy policy,
                         const FixedPointConfig& config);

enum class SweepVar { g, eps };
enum class Direction { ascending, descending };

std::string to_string(SweepVar var);
std::string to_string(Direction dir);

struct SweepBranch {
  Direction direction = Direction::ascending;
  SweepVar swept = SweepVar::g;
  std::vector<double> values;
  std::vector<ConvergedPoint> points;
  // Cluster states, kept only next to classification changes (empty
  // elsewhere) so long sweeps stay within memory.
  std::vector<WarmStates> states;
  bool aborted = false;
};

struct SweepSetup {
  ModelParams params_template;
  SweepVar var = SweepVar::g;
  Mode mode = Mode::ferro;
  ClusterSizes sizes;
  dmrg::DmrgSettings dmrg;
  FixedPointConfig fixed_point;
  SelfFields init{0.25, 0.25};
  int jobs = 1;
  // When > 0, a classification change between neighbouring values is
  // revisited on this finer step, continuing from the last point before it.
  double refine_step = 0.0;
  bool hellmann_feynman = false;  // fill ConvergedPoint::hf_residual
  double hf_step = 1e-3;
};

ModelParams with_value(const ModelParams& base, SweepVar var, double value);

// Solves every value in order, warm-starting fields and cluster states from
// the previous good point. Three consecutive failures abort the branch.
// Refined points are inserted into the branch in sweep order.
SweepBranch adiabatic_sweep(const SweepSetup& setup, const std::vector<double>& values);

// Re-solves a single point from the warm data of a neighbouring converged
// point (used for grid refinement).
ConvergedPoint solve_point(const SweepSetup& setup, double value, const SelfFields& init, const WarmStates* warm,
                           WarmStates* warm_out = nullptr);

}  // namespace dicke::sc
