// Reflection of a single photon from a single-sided cavity holding an
// atomic ensemble, and the reflection operators built from it.
#ifndef CQED_CAVITY_HPP
#define CQED_CAVITY_HPP

#include "cqed/qstate.hpp"

#include <complex>
#include <stdexcept>

namespace cqed {

/// Cavity and photon parameters. Rates are conventionally given in units of
/// kappa, so kappa defaults to 1. Defaults match the fibre-cavity BEC
/// experiment (gamma/kappa = 3/53) probed at delta'/kappa = gamma/kappa.
struct CavityParams {
  double g = 0.8;
  double kappa = 1.0;
  double gamma = 0.0566;
  double big_delta = 0.0;    // omega_0 - omega_c
  double delta_prime = 0.0566;  // omega - omega_c

  void validate() const;
};

enum class Mode { Ideal, Practical };

/// Reflection amplitudes for the decoupled (|G>) and coupled (|S>) ensemble.
struct ReflectionPair {
  std::complex<double> r0;
  std::complex<double> r;
};

/// The ideal reflection pair (r0, r) = (-1, 1).
inline constexpr ReflectionPair kIdealReflection{{-1.0, 0.0}, {1.0, 0.0}};

class SingularParameters : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (delta' - i kappa/2) / (delta' + i kappa/2)
std::complex<double> reflect_empty(const CavityParams& p);

/// [(delta' - i kappa/2)(Delta + i gamma/2) - g^2] / [(delta' + i kappa/2)(Delta + i gamma/2) - g^2]
///
/// Throws SingularParameters when the denominator magnitude drops below 1e-15.
std::complex<double> reflect_coupled(const CavityParams& p);

ReflectionPair reflection_pair(const CavityParams& p);

/// kIdealReflection in ideal mode, otherwise the coefficients computed from `p`.
ReflectionPair reflection_pair(const CavityParams& p, Mode mode);

/// |h><h| (r0 |G><G| + r |S><S|) + |v><v| (x) I on (polarization, ensemble).
LinearOp reflection_operator(const Subsystem& photon, const Subsystem& ensemble,
                             const ReflectionPair& coefficients);

LinearOp reflection_operator(const Subsystem& photon, const Subsystem& ensemble,
                             const CavityParams& p, Mode mode);

}  // namespace cqed

#endif  // CQED_CAVITY_HPP
