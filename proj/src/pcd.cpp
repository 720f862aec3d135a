#include "cqed/pcd.hpp"

#include "cqed/optics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cqed {

namespace {

const Subsystem& ensemble_named(const PureState& s, std::string_view name) {
  const int p = s.index_of(name);
  if (p < 0) throw std::invalid_argument("state has no subsystem '" + std::string(name) + "'");
  const Subsystem& sub = s.subsystems()[p];
  if (sub.kind != SubsystemKind::EnsembleQubit) {
    throw std::invalid_argument("'" + sub.name + "' is not an ensemble qubit");
  }
  return sub;
}

std::string fresh_probe_name(const PureState& s) {
  std::string name = "pcd.probe";
  while (s.has(name) || s.has(name + ".path")) name += "'";
  return name;
}

}  // namespace

std::vector<ParityOutcome> PcdResult::outcomes() const {
  return {even, odd, {Parity::Loss, loss_probability, PureState(), PureState()}};
}

PcdResult pcd_apply(const PureState& s, std::string_view e1, std::string_view e2,
                    const ReflectionPair& first_cavity, const ReflectionPair& second_cavity) {
  if (e1 == e2) throw std::invalid_argument("parity check needs two distinct ensembles");
  const Subsystem first = ensemble_named(s, e1);
  const Subsystem second = ensemble_named(s, e2);

  const Photon probe = make_photon(fresh_probe_name(s));
  const LinearOp pbs = pbs_route(probe.polarization, probe.path);
  const LinearOp flip = on_arm(probe, arm::reflected, hwp_sigma_x(probe.polarization));

  PureState x = tensor(diagonal_photon(probe), s);
  x = cqed::apply(pbs, x);
  x = cqed::apply(flip, x);
  const LinearOp reflect_first = on_arm(probe, arm::transmitted,
                                        reflection_operator(probe.polarization, first, first_cavity));
  const LinearOp reflect_second = on_arm(probe, arm::reflected,
                                         reflection_operator(probe.polarization, second, second_cavity));
  x = cqed::apply(reflect_first, x);
  x = cqed::apply(reflect_second, x);
  x = cqed::apply(flip, x);
  x = cqed::apply(pbs, x);

  if (project(x, probe.path.name, arm::reflected).norm2() > kTolerance) {
    throw std::logic_error("PBS recombination left light on the reflected arm");
  }
  x = project(x, probe.path.name, arm::transmitted);
  x = cqed::apply(photon_hadamard(probe.polarization), x);

  auto detected = measure(x, probe.polarization.name);
  PcdResult out{
      {Parity::Even, detected[level::h].probability, detected[level::h].post_state,
       detected[level::h].branch},
      {Parity::Odd, detected[level::v].probability, detected[level::v].post_state,
       detected[level::v].branch},
      0.0};
  out.loss_probability =
      std::max(0.0, s.norm2() - out.even.probability - out.odd.probability);
  return out;
}

PcdResult pcd_apply(const PureState& s, std::string_view e1, std::string_view e2,
                    const CavityParams& p, Mode mode) {
  const ReflectionPair c = reflection_pair(p, mode);
  return pcd_apply(s, e1, e2, c, c);
}

PcdResult pcd_apply(const PureState& s, std::string_view e1, std::string_view e2,
                    const CavityParams& first, const CavityParams& second, Mode mode) {
  return pcd_apply(s, e1, e2, reflection_pair(first, mode), reflection_pair(second, mode));
}

}  // namespace cqed
