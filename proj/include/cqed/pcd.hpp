// Nondestructive parity-check detector on two local ensembles, driven by a
// single probe photon.
#ifndef CQED_PCD_HPP
#define CQED_PCD_HPP

#include "cqed/cavity.hpp"
#include "cqed/qstate.hpp"

#include <string_view>
#include <vector>

namespace cqed {

enum class Parity { Even, Odd, Loss };

struct ParityOutcome {
  Parity parity;
  double probability;
  /// Normalized state of everything except the consumed probe photon.
  PureState post_state;
  /// Unnormalized branch; squared norm equals `probability`.
  PureState branch;
};

struct PcdResult {
  ParityOutcome even;  // D_h clicked
  ParityOutcome odd;   // D_v clicked
  /// Input norm^2 minus the two detector probabilities.
  double loss_probability;

  /// {even, odd, loss}; the loss entry carries empty states.
  std::vector<ParityOutcome> outcomes() const;
};

/// Runs the probe photon (|h>+|v>)/sqrt2 through PBS -> HWP on the reflected
/// arm -> cavity reflections (e1 on the transmitted arm, e2 on the reflected
/// arm) -> HWP -> PBS -> Hadamard -> polarization detection.
///
/// With ideal reflection the unnormalized branches are
///   even: -(a1|GG> - a4|SS>),  odd: -(a2|GS> - a3|SG>)
/// for a1|GG> + a2|GS> + a3|SG> + a4|SS>; the overall -1 is the global phase
/// picked up by |G> reflections on both arms.
PcdResult pcd_apply(const PureState& s, std::string_view e1, std::string_view e2,
                    const ReflectionPair& first_cavity, const ReflectionPair& second_cavity);

/// Both cavities share `p`.
PcdResult pcd_apply(const PureState& s, std::string_view e1, std::string_view e2,
                    const CavityParams& p, Mode mode);

/// Separate parameters for the two cavities.
PcdResult pcd_apply(const PureState& s, std::string_view e1, std::string_view e2,
                    const CavityParams& first, const CavityParams& second, Mode mode);

}  // namespace cqed

#endif  // CQED_PCD_HPP
