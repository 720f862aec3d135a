// Closed-form efficiencies and fidelities of the distillation protocols with
// practical reflection coefficients (r0, r). These are an independent route
// to the numbers the state-vector protocols produce; nothing here calls the
// simulator.
//
// |z|^2 is always the squared complex modulus.
#ifndef CQED_ANALYTICS_HPP
#define CQED_ANALYTICS_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cqed::analytics {

namespace detail {
template <typename Real>
Real abs2(const std::complex<Real>& z) {
  return std::norm(z);
}
}  // namespace detail

/// Optimal concentration efficiency (both success detectors):
/// 1/4 (a^2|r+1|^2 + a^4/b^2 |r-1|^2 + b^2|r0+1|^2 + a^2|r0-1|^2).
template <typename Real>
Real eta_c(Real alpha, Real beta, std::complex<Real> r, std::complex<Real> r0) {
  using detail::abs2;
  if (beta == Real(0)) throw std::invalid_argument("eta_c is undefined for beta = 0");
  const Real a2 = alpha * alpha;
  const Real b2 = beta * beta;
  const Real one(1);
  return (a2 * abs2(r + one) + (a2 * a2 / b2) * abs2(r - one) + b2 * abs2(r0 + one) +
          a2 * abs2(r0 - one)) /
         Real(4);
}

/// Fidelity to psi+ of the D_h branch of the optimal concentration, after
/// sigma_z on E_B. With u = r(1 + a/b) + 1 - a/b and u0 likewise for r0:
///   |a u - b u0|^2 / (2 (|a u|^2 + |b u0|^2)).
template <typename Real>
Real f_c(Real alpha, Real beta, std::complex<Real> r, std::complex<Real> r0) {
  using detail::abs2;
  if (beta == Real(0)) throw std::invalid_argument("f_c is undefined for beta = 0");
  const Real q = alpha / beta;
  const std::complex<Real> u = r * (Real(1) + q) + Real(1) - q;
  const std::complex<Real> u0 = r0 * (Real(1) + q) + Real(1) - q;
  const Real den = abs2(alpha * u) + abs2(beta * u0);
  if (den == Real(0)) throw std::invalid_argument("f_c denominator vanishes");
  return abs2(alpha * u - beta * u0) / (Real(2) * den);
}

/// Parity-check concentration efficiency (|a|^2 - |a|^4)|r0 - r|^2 / 2.
template <typename Real>
Real eta_c_prime(std::complex<Real> alpha, std::complex<Real> r, std::complex<Real> r0) {
  using detail::abs2;
  const Real a2 = abs2(alpha);
  return (a2 - a2 * a2) * abs2(r0 - r) / Real(2);
}

template <typename Real>
Real eta_c_prime(Real alpha, std::complex<Real> r, std::complex<Real> r0) {
  return eta_c_prime(std::complex<Real>(alpha), r, r0);
}

/// With identical input pairs the odd-parity output is psi+ for any (r0, r).
template <typename Real = double>
constexpr Real f_c_prime() {
  return Real(1);
}

/// Success probability of a second concentration round in the ideal
/// limit: 2|ab|^4 / (|a|^4 + |b|^4)^2.
template <typename Real>
Real eta_c_prime_second_round_ideal(std::complex<Real> alpha, std::complex<Real> beta) {
  using detail::abs2;
  const Real a2 = abs2(alpha), b2 = abs2(beta);
  const Real s = a2 * a2 + b2 * b2;
  return Real(2) * a2 * a2 * b2 * b2 / (s * s);
}

/// eta1 + (1 - eta1)/2 * eta2 with ideal round efficiencies.
template <typename Real>
Real eta_c_prime_two_round_total_ideal(std::complex<Real> alpha, std::complex<Real> beta) {
  using detail::abs2;
  const Real eta1 = Real(2) * abs2(alpha) * abs2(beta);
  const Real eta2 = eta_c_prime_second_round_ideal(alpha, beta);
  return eta1 + (Real(1) - eta1) / Real(2) * eta2;
}

/// GHZ-class concentration success probability 2|alpha|^2 (ideal).
template <typename Real>
Real ghz_success_ideal(Real alpha) {
  return Real(2) * alpha * alpha;
}

template <typename Real>
struct EppCoefficients {
  Real c00, c01, c10, c11;
};

/// Coincidence probabilities per pair of mixture components.
template <typename Real>
EppCoefficients<Real> epp_success_coefficients(std::complex<Real> r, std::complex<Real> r0) {
  using detail::abs2;
  const std::complex<Real> sum = r + r0;
  const std::complex<Real> diff = r - r0;
  const Real cross = (abs2(sum * sum) + abs2(diff * diff)) / Real(32);
  const Real c00 = abs2(r0 * r) / Real(2) + cross;
  const Real c11 = (abs2(r0) * abs2(r0) + abs2(r) * abs2(r)) / Real(4) + cross;
  const Real c01 = (abs2(r0 * sum) + abs2(r * sum)) / Real(8);
  return {c00, c01, c01, c11};
}

/// Weights of the D_h & D'_h branch per mixture component (primed set).
template <typename Real>
EppCoefficients<Real> epp_fidelity_coefficients(std::complex<Real> r, std::complex<Real> r0) {
  using detail::abs2;
  const std::complex<Real> sum = r + r0;
  const std::complex<Real> quarter = sum * sum / Real(4);
  const Real c00 = Real(2) * abs2(r0 * r + quarter);
  const Real c11 = abs2(r0 * r0 + quarter) + abs2(r * r + quarter);
  const Real c01 = abs2(sum) * abs2(sum) / Real(2);
  const Real c10 = abs2(r0 * sum) + abs2(r * sum);
  return {c00, c01, c10, c11};
}

/// Purification success: f0^2 c00 + f0(1-f0)(c01 + c10) + (1-f0)^2 c11.
template <typename Real>
Real eta_p(Real f0, std::complex<Real> r, std::complex<Real> r0) {
  if (!(f0 >= Real(0) && f0 <= Real(1))) throw std::invalid_argument("f0 must lie in [0, 1]");
  const auto c = epp_success_coefficients(r, r0);
  const Real g = Real(1) - f0;
  return f0 * f0 * c.c00 + f0 * g * c.c01 + f0 * g * c.c10 + g * g * c.c11;
}

/// Fidelity of the D_h & D'_h branch:
/// (f0^2 c'00 + f0(1-f0) c'01) / (f0^2 c'00 + f0(1-f0)(c'01 + c'10) + (1-f0)^2 c'11).
template <typename Real>
Real f_p(Real f0, std::complex<Real> r, std::complex<Real> r0) {
  if (!(f0 >= Real(0) && f0 <= Real(1))) throw std::invalid_argument("f0 must lie in [0, 1]");
  const auto c = epp_fidelity_coefficients(r, r0);
  const Real g = Real(1) - f0;
  const Real num = f0 * f0 * c.c00 + f0 * g * c.c01;
  const Real den = num + f0 * g * c.c10 + g * g * c.c11;
  if (den == Real(0)) throw std::invalid_argument("f_p denominator vanishes");
  return num / den;
}

template <typename Real>
struct PracticalMetrics {
  Real eta_c, f_c, eta_c_prime, eta_p, f_p;
  EppCoefficients<Real> c;
  EppCoefficients<Real> c_prime;
};

/// Every closed form at once for real alpha (beta = sqrt(1 - alpha^2)) and f0.
template <typename Real>
PracticalMetrics<Real> practical_metrics(Real alpha, Real f0, std::complex<Real> r,
                                         std::complex<Real> r0) {
  const Real beta = std::sqrt(Real(1) - alpha * alpha);
  return {eta_c(alpha, beta, r, r0),
          f_c(alpha, beta, r, r0),
          eta_c_prime(alpha, r, r0),
          eta_p(f0, r, r0),
          f_p(f0, r, r0),
          epp_success_coefficients(r, r0),
          epp_fidelity_coefficients(r, r0)};
}

}  // namespace cqed::analytics

#endif  // CQED_ANALYTICS_HPP
