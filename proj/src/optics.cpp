#include "cqed/optics.hpp"

#include <cmath>
#include <stdexcept>

namespace cqed {

namespace {

void require_polarization(const Subsystem& s) {
  if (s.kind != SubsystemKind::PhotonPolarization || s.dimension != 2) {
    throw std::invalid_argument("'" + s.name + "' is not a photon polarization");
  }
}

void require_path(const Subsystem& s) {
  if (s.kind != SubsystemKind::PhotonPath) {
    throw std::invalid_argument("'" + s.name + "' is not a photon path");
  }
}

}  // namespace

Photon make_photon(const std::string& name, int path_modes) {
  return {polarization(name), path(name + ".path", path_modes)};
}

PureState diagonal_photon(const Photon& photon) {
  const double s = 1.0 / std::sqrt(2.0);
  PureState::Vector amps = PureState::Vector::Zero(2 * photon.path.dimension);
  amps(level::h * photon.path.dimension + arm::transmitted) = s;
  amps(level::v * photon.path.dimension + arm::transmitted) = s;
  return PureState({photon.polarization, photon.path}, amps);
}

LinearOp hwp_sigma_x(const Subsystem& pol) {
  require_polarization(pol);
  return sigma_x(pol);
}

LinearOp photon_hadamard(const Subsystem& pol) {
  require_polarization(pol);
  return hadamard(pol);
}

LinearOp ubs_split(double reflection) {
  return ubs_split(reflection, path("ubs"), 0, 1);
}

LinearOp ubs_split(double reflection, const Subsystem& p, int kept, int error) {
  require_path(p);
  if (!(reflection >= 0.0 && reflection <= 1.0)) {
    throw std::invalid_argument("UBS reflection coefficient must lie in [0, 1]");
  }
  if (kept == error || kept < 0 || error < 0 || kept >= p.dimension || error >= p.dimension) {
    throw std::invalid_argument("UBS needs two distinct levels of the path");
  }
  const double transmission = std::sqrt(1.0 - reflection * reflection);
  LinearOp::Matrix m = LinearOp::Matrix::Identity(p.dimension, p.dimension);
  m(kept, kept) = reflection;
  m(error, kept) = transmission;
  m(kept, error) = -transmission;
  m(error, error) = reflection;
  return LinearOp({p}, m);
}

LinearOp pbs_route(const Subsystem& pol, const Subsystem& p) {
  require_polarization(pol);
  require_path(p);
  const int d = p.dimension;
  if (d < 2) throw std::invalid_argument("PBS needs at least two path arms");
  LinearOp::Matrix m = LinearOp::Matrix::Identity(2 * d, 2 * d);
  const int v0 = level::v * d + arm::transmitted;
  const int v1 = level::v * d + arm::reflected;
  m(v0, v0) = 0.0;
  m(v1, v1) = 0.0;
  m(v1, v0) = 1.0;
  m(v0, v1) = 1.0;
  return LinearOp({pol, p}, m);
}

LinearOp on_arm(const Photon& photon, int which_arm, const LinearOp& op) {
  return controlled(photon.path, which_arm, op);
}

}  // namespace cqed
