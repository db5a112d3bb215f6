#include "dicke/model.hpp"

#include <cmath>
#include <sstream>

namespace dicke {

void ModelParams::validate() const {
  if (!std::isfinite(J) || !std::isfinite(eps) || !std::isfinite(g) || !std::isfinite(omega_c)) {
    throw InvalidInput("model parameters must be finite");
  }
  if (!(omega_c > 0.0)) throw InvalidInput("omega_c must be > 0");
  if (g < 0.0) throw InvalidInput("g must be >= 0");
  if (eps < 0.0) throw InvalidInput("eps must be >= 0");
  if (D && !(*D >= 0.0)) throw InvalidInput("D must be >= 0");
}

void SelfFields::validate() const {
  constexpr double bound = 0.5 + 1e-9;
  if (!(std::abs(m_x) <= bound) || !(std::abs(m_s) <= bound)) {
    throw InvalidInput("self-consistent fields must lie in [-1/2, 1/2]");
  }
}

double effective_field(const ModelParams& params, double m_x) {
  return params.g * params.g * m_x / params.omega_c;
}

double photon_density(const ModelParams& params, double m_x) {
  const double a = params.g * m_x / params.omega_c;
  return a * a;
}

std::string describe(const ModelParams& params) {
  std::ostringstream os;
  os.precision(15);
  os << "J=" << params.J << " eps=" << params.eps << " g=" << params.g << " omega_c=" << params.omega_c;
  if (params.D) os << " D=" << *params.D;
  return os.str();
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::PN: return "PN";
    case Phase::PS: return "PS";
    case Phase::AN: return "AN";
    case Phase::AS: return "AS";
  }
  return "?";
}

}  // namespace dicke
