// Linear-optical elements acting on a single photon described by a
// polarization qubit and a spatial path mode.
#ifndef CQED_OPTICS_HPP
#define CQED_OPTICS_HPP

#include "cqed/qstate.hpp"

#include <string>

namespace cqed {

/// Path levels used by the circuits: arm 0 carries the PBS-transmitted
/// (h) light and is the output port, arm 1 the PBS-reflected (v) light,
/// and arm 2, when present, is the UBS error port watched by D'_v.
namespace arm {
inline constexpr int transmitted = 0;
inline constexpr int reflected = 1;
inline constexpr int error = 2;
}  // namespace arm

struct Photon {
  Subsystem polarization;
  Subsystem path;
};

/// Polarization subsystem `name` plus path subsystem `name.path`.
Photon make_photon(const std::string& name, int path_modes = 2);

/// (|h> + |v>)/sqrt2 entering on the transmitted arm.
PureState diagonal_photon(const Photon& photon);

/// Half-wave plate at pi/4: |h><v| + |v><h|.
LinearOp hwp_sigma_x(const Subsystem& polarization);

/// Half-wave plate at pi/8: |h> -> (|h>+|v>)/sqrt2, |v> -> (|h>-|v>)/sqrt2.
LinearOp photon_hadamard(const Subsystem& polarization);

/// Unbalanced beam splitter on a two-level path (level 0 kept, level 1
/// error). An amplitude a on the kept mode becomes R a on the kept mode and
/// sqrt(1-R^2) a on the error mode. Both outputs carry the input sign.
LinearOp ubs_split(double reflection);

/// Same element embedded on levels `kept` and `error` of a wider path.
LinearOp ubs_split(double reflection, const Subsystem& path, int kept, int error);

/// Polarizing beam splitter: h stays on its arm, v swaps arms 0 and 1.
/// Other path levels pass untouched. It is its own inverse, so the same
/// element both splits and recombines.
LinearOp pbs_route(const Subsystem& polarization, const Subsystem& path);

/// `op` applied only to the photon component travelling on `which_arm`.
LinearOp on_arm(const Photon& photon, int which_arm, const LinearOp& op);

}  // namespace cqed

#endif  // CQED_OPTICS_HPP
