#include "cqed/cavity.hpp"

#include <cmath>
#include <string>

namespace cqed {

namespace {
using namespace std::complex_literals;
}

void CavityParams::validate() const {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(g >= 0.0)) throw std::invalid_argument("g must be non-negative");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
  if (!std::isfinite(big_delta) || !std::isfinite(delta_prime) || !std::isfinite(g) ||
      !std::isfinite(gamma) || !std::isfinite(kappa)) {
    throw std::invalid_argument("cavity parameters must be finite");
  }
}

std::complex<double> reflect_empty(const CavityParams& p) {
  p.validate();
  const std::complex<double> half_kappa = 0.5i * p.kappa;
  return (p.delta_prime - half_kappa) / (p.delta_prime + half_kappa);
}

std::complex<double> reflect_coupled(const CavityParams& p) {
  p.validate();
  const std::complex<double> half_kappa = 0.5i * p.kappa;
  const std::complex<double> dipole = p.big_delta + 0.5i * p.gamma;
  const double g2 = p.g * p.g;
  const std::complex<double> num = (p.delta_prime - half_kappa) * dipole - g2;
  const std::complex<double> den = (p.delta_prime + half_kappa) * dipole - g2;
  if (std::abs(den) < 1e-15) {
    throw SingularParameters("reflection coefficient is singular for these parameters");
  }
  return num / den;
}

ReflectionPair reflection_pair(const CavityParams& p) {
  return {reflect_empty(p), reflect_coupled(p)};
}

ReflectionPair reflection_pair(const CavityParams& p, Mode mode) {
  if (mode == Mode::Ideal) return kIdealReflection;
  return reflection_pair(p);
}

LinearOp reflection_operator(const Subsystem& photon, const Subsystem& ensemble,
                             const ReflectionPair& c) {
  if (photon.kind != SubsystemKind::PhotonPolarization || photon.dimension != 2) {
    throw std::invalid_argument("'" + photon.name + "' is not a photon polarization");
  }
  if (ensemble.kind != SubsystemKind::EnsembleQubit || ensemble.dimension != 2) {
    throw std::invalid_argument("'" + ensemble.name + "' is not an ensemble qubit");
  }
  // Basis order: hG, hS, vG, vS.
  LinearOp::Matrix m = LinearOp::Matrix::Identity(4, 4);
  m(0, 0) = c.r0;
  m(1, 1) = c.r;
  return LinearOp({photon, ensemble}, m);
}

LinearOp reflection_operator(const Subsystem& photon, const Subsystem& ensemble,
                             const CavityParams& p, Mode mode) {
  return reflection_operator(photon, ensemble, reflection_pair(p, mode));
}

}  // namespace cqed
