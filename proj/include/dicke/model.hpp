#pragma once

#include <optional>
#include <string>

#include "dicke/errors.hpp"

namespace dicke {

// Couplings of the Dicke-Ising chain, all in units of the photon frequency.
// J < 0 is ferromagnetic, J > 0 antiferromagnetic.
struct ModelParams {
  double J = 0.0;
  double eps = 0.0;
  double g = 0.0;
  double omega_c = 1.0;
  std::optional<double> D;  // diamagnetic A^2 coefficient

  void validate() const;
};

// Self-consistent transverse magnetization m_x = <S_x>/N and staggered
// magnetization m_s = (1/2N) sum_i (-1)^i <sigma^z_i>, both in [-1/2, 1/2].
struct SelfFields {
  double m_x = 0.0;
  double m_s = 0.0;

  void validate() const;
};

// Transverse field h_x = g^2 m_x / omega_c seen by every spin.
double effective_field(const ModelParams& params, double m_x);

// Photons per site of the displaced coherent field, (g m_x / omega_c)^2.
double photon_density(const ModelParams& params, double m_x);

std::string describe(const ModelParams& params);

// Paramagnetic/antiferromagnetic x normal/superradiant.
enum class Phase { PN, PS, AN, AS };

std::string to_string(Phase phase);

}  // namespace dicke
