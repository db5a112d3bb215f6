#pragma once

#include <functional>

#include "dicke/model.hpp"

namespace dicke::mf {

// Coherent photon amplitude alpha = <a>/sqrt(N) times a classical spin state
// with a two-site unit cell (sublattices A and B).
struct MeanFieldState {
  double alpha = 0.0;
  double theta_A = 0.0;
  double phi_A = 0.0;
  double theta_B = 0.0;
  double phi_B = 0.0;
  double energy_per_site = 0.0;

  double nx_A() const;
  double nz_A() const;
  double nx_B() const;
  double nz_B() const;
};

// e = w a^2 + g a (nAx + nBx)/2 + eps (nAz + nBz)/2 + J nAz nBz
double mf_energy(const ModelParams& params, const MeanFieldState& state);

// Optimal amplitude for fixed spin angles.
double optimal_alpha(const ModelParams& params, const MeanFieldState& state);

struct MinimizeOptions {
  int seeds = 32;            // multi-start count, at most 32 deterministic seeds
  unsigned order_seed = 0;   // permutes the seed order only
  double grad_tol = 1e-13;
  int max_steps = 2000;
};

// Global minimum over the four angles with alpha eliminated. The reported
// representative has nAx + nBx >= 0 (alpha <= 0) and nAz >= nBz.
MeanFieldState mf_minimize(const ModelParams& params, const MinimizeOptions& opts = {});

constexpr double kMfThreshold = 1e-6;

// Superradiant iff |alpha| > 1e-6; antiferromagnetic iff |nAz - nBz| > 1e-6.
Phase mf_classify(const MeanFieldState& state);
Phase mf_phase_at(const ModelParams& params);

// Chain connectivity used by the closed forms.
constexpr double kConnectivity = 2.0;

// sqrt(w (2 eps + 2 c |J|)); J > 0 is rejected.
double g_crit_ferro(const ModelParams& params);

// -|J| c/2 - eps; J > 0 is rejected.
double weak_energy_ferro(const ModelParams& params);

// 2J for J > 0.
double classical_af_boundary(double J);

// Bogoliubov absorption of the A^2 term: w' = sqrt(w^2 + 4 w D), g' = sqrt(w/w') g.
ModelParams renormalize_A2(const ModelParams& params);

// Thomas-Reiche-Kuhn lower bound g^2 / (2 eps).
double trk_min_D(const ModelParams& params);

enum class Axis { g, J, eps };

std::string to_string(Axis axis);
ModelParams with_axis(const ModelParams& base, Axis axis, double value);

// Bisection on a phase predicate between lo and hi, where the predicate
// differs at the two ends. Returns the bracket midpoint.
struct BisectResult {
  double location = 0.0;
  double half_width = 0.0;
};

BisectResult mf_boundary(const ModelParams& base, Axis axis, double lo, double hi,
                         const std::function<bool(Phase)>& predicate, double tol = 1e-5);

bool is_superradiant(Phase p);
bool is_antiferro(Phase p);

}  // namespace dicke::mf
