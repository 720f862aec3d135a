#include "cqed/protocols.hpp"

#include "cqed/analytics.hpp"

#include <doctest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace cqed;

namespace {

CavityParams at_g(double g) {
  CavityParams p;
  p.g = g;
  return p;
}

double total_probability(const ProtocolResult& r) {
  double s = r.loss_probability;
  for (const auto& b : r.branches) s += b.probability;
  return s;
}

void check_ideal_successes(const ProtocolResult& r) {
  CHECK(std::abs(total_probability(r) - 1.0) <= 1e-12);
  CHECK(r.loss_probability <= 1e-12);
  for (const auto& b : r.branches) {
    if (b.success && b.probability > 1e-15) CHECK(std::abs(b.fidelity - 1.0) <= 1e-12);
  }
}

}  // namespace

TEST_CASE("optimal concentration in the ideal limit") {
  const auto r = optimal_ecp(0.6, 0.8, {}, Mode::Ideal);
  CHECK(r.success_probability == doctest::Approx(0.72).epsilon(1e-12));
  CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.target_name == "psi+");
  check_ideal_successes(r);
  const auto* err = r.find_branch({{"D'_v", "click"}});
  REQUIRE(err != nullptr);
  CHECK(err->probability == doctest::Approx(0.28).epsilon(1e-12));

  const double s = 1.0 / std::sqrt(2.0);
  const auto balanced = optimal_ecp(s, s, {}, Mode::Ideal);
  CHECK(balanced.success_probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(balanced.find_branch({{"D'_v", "click"}})->probability <= 1e-12);
}

TEST_CASE("optimal concentration with the larger coefficient first") {
  const auto r = optimal_ecp(0.8, 0.6, {}, Mode::Ideal);
  CHECK(r.success_probability == doctest::Approx(0.72).epsilon(1e-12));
  CHECK(r.find_branch({{"D'_h", "click"}}) != nullptr);
  check_ideal_successes(r);
}

TEST_CASE("optimal concentration rejects unnormalized coefficients") {
  CHECK_THROWS_AS(optimal_ecp(0.6, 0.7, {}, Mode::Ideal), std::invalid_argument);
}

TEST_CASE("practical optimal concentration matches the closed forms") {
  const CavityParams p = at_g(0.8);
  const ReflectionPair c = reflection_pair(p);
  const auto r = optimal_ecp(0.6, 0.8, p, Mode::Practical);
  CHECK(std::abs(r.success_probability - analytics::eta_c(0.6, 0.8, c.r, c.r0)) <= 1e-9);
  const auto* dh = r.find_branch({{"D_h", "click"}});
  REQUIRE(dh != nullptr);
  CHECK(std::abs(dh->fidelity - analytics::f_c(0.6, 0.8, c.r, c.r0)) <= 1e-9);
  CHECK(dh->fidelity == doctest::Approx(0.98240).epsilon(1e-4));
  CHECK(std::abs(total_probability(r) - 1.0) <= 1e-12);
}

TEST_CASE("optimal concentration when both reflections coincide") {
  CavityParams p = at_g(0.0);
  p.gamma = 0.5;
  const ReflectionPair c = reflection_pair(p);
  REQUIRE(std::abs(c.r - c.r0) < 1e-12);
  const auto r = optimal_ecp(0.6, 0.8, p, Mode::Practical);
  const auto* dh = r.find_branch({{"D_h", "click"}});
  CHECK(std::abs(dh->fidelity - analytics::f_c(0.6, 0.8, c.r, c.r0)) <= 1e-9);
  CHECK(std::abs(r.success_probability - analytics::eta_c(0.6, 0.8, c.r, c.r0)) <= 1e-9);
}

TEST_CASE("GHZ-class concentration") {
  const auto r3 = ghz_concentrate(0.5, std::sqrt(0.75), 3, {}, Mode::Ideal);
  CHECK(r3.success_probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r3.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r3.target_name == "GHZ_3");
  check_ideal_successes(r3);

  const auto r2 = ghz_concentrate(0.6, 0.8, 2, {}, Mode::Ideal);
  CHECK(r2.success_probability ==
        doctest::Approx(optimal_ecp(0.6, 0.8, {}, Mode::Ideal).success_probability).epsilon(1e-12));

  const double s = 1.0 / std::sqrt(2.0);
  CHECK(ghz_concentrate(s, s, 5, {}, Mode::Ideal).success_probability ==
        doctest::Approx(1.0).epsilon(1e-12));

  for (int n = 2; n <= 6; ++n) {
    const auto r = ghz_concentrate(0.3, std::sqrt(0.91), n, {}, Mode::Ideal);
    CHECK(r.success_probability == doctest::Approx(0.18).epsilon(1e-12));
    check_ideal_successes(r);
  }

  CHECK_THROWS_AS(ghz_concentrate(0.6, 0.8, 1, {}, Mode::Ideal), std::invalid_argument);
  CHECK_THROWS_AS(ghz_concentrate(0.8, 0.6, 3, {}, Mode::Ideal), std::invalid_argument);

  const auto practical = ghz_concentrate(0.4, std::sqrt(0.84), 4, at_g(1.2), Mode::Practical);
  CHECK(std::abs(total_probability(practical) - 1.0) <= 1e-12);
  CHECK(practical.fidelity <= 1.0);
}

TEST_CASE("parity-check concentration, first round") {
  const auto r = efficient_ecp(0.6, 0.8, {}, Mode::Ideal);
  CHECK(r.first_round.success_probability == doctest::Approx(0.4608).epsilon(1e-12));
  CHECK(r.first_round.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  check_ideal_successes(r.first_round);
  int odd_branches = 0;
  for (const auto& b : r.first_round.branches) {
    if (b.success) {
      ++odd_branches;
      CHECK(b.probability == doctest::Approx(0.4608 / 4).epsilon(1e-12));
    }
  }
  CHECK(odd_branches == 4);
  CHECK_THROWS_AS(efficient_ecp(0.6, 0.8, {}, Mode::Ideal, 0), std::invalid_argument);
  CHECK_THROWS_AS(efficient_ecp(0.6, 0.6, {}, Mode::Ideal), std::invalid_argument);
}

TEST_CASE("parity-check concentration recursion") {
  const auto r = efficient_ecp(0.6, 0.8, {}, Mode::Ideal, 2);
  REQUIRE(r.trace.rounds.size() == 2);
  const auto& second = r.trace.rounds[1];
  REQUIRE(second.inputs.size() == 1);
  const double expected = 0.36 / std::sqrt(0.36 * 0.36 + 0.64 * 0.64);
  CHECK(std::abs(second.inputs[0].alpha - expected) <= 1e-12);
  CHECK(std::abs(second.inputs[0].alpha) == doctest::Approx(0.49026).epsilon(1e-5));
  CHECK(second.reach_probability == doctest::Approx((1.0 - 0.4608) / 2).epsilon(1e-12));

  const double a4 = 0.36 * 0.36, b4 = 0.64 * 0.64;
  const double eta2 = 2 * a4 * b4 / ((a4 + b4) * (a4 + b4));
  CHECK(second.success_probability == doctest::Approx(eta2).epsilon(1e-12));
  CHECK(std::abs(r.trace.cumulative_success_probability - (0.4608 + (1 - 0.4608) / 2 * eta2)) <= 1e-9);

  double by_rounds = 0.0;
  for (const auto& rec : r.trace.rounds) by_rounds += rec.reach_probability * rec.success_probability;
  CHECK(std::abs(by_rounds - r.trace.cumulative_success_probability) <= 1e-12);
}

TEST_CASE("parity-check concentration with complex coefficients") {
  const Complex alpha = std::polar(0.45, 1.1), beta = std::polar(std::sqrt(1 - 0.45 * 0.45), -0.4);
  const auto r = efficient_ecp(alpha, beta, {}, Mode::Ideal, 3);
  CHECK(r.first_round.success_probability ==
        doctest::Approx(2 * std::norm(alpha) * std::norm(beta)).epsilon(1e-12));
  CHECK(r.first_round.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.trace.rounds.size() == 3);
  for (const auto& rec : r.trace.rounds) CHECK(rec.fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parity-check concentration keeps fidelity one with practical cavities") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> g(0.05, 5.0), d(-1.0, 1.0), gam(0.0, 1.0), a(0.05, 0.95);
  for (int t = 0; t < 100; ++t) {
    CavityParams p;
    p.g = g(rng);
    p.delta_prime = d(rng);
    p.gamma = gam(rng);
    const double alpha = a(rng);
    const auto r = efficient_ecp(alpha, std::sqrt(1 - alpha * alpha), p, Mode::Practical, 2);
    CHECK(std::abs(r.first_round.fidelity - 1.0) <= 1e-12);
    CHECK(std::abs(total_probability(r.first_round) - 1.0) <= 1e-12);
    const ReflectionPair c = reflection_pair(p);
    CHECK(std::abs(r.first_round.success_probability - analytics::eta_c_prime(alpha, c.r, c.r0)) <= 1e-9);
  }
}

TEST_CASE("practical parity-check concentration branches into several round-two inputs") {
  const auto r = efficient_ecp(0.6, 0.8, at_g(0.8), Mode::Practical, 3);
  REQUIRE(r.trace.rounds.size() == 3);
  CHECK(r.trace.rounds[1].inputs.size() > 1);
  double w = 0.0;
  for (const auto& in : r.trace.rounds[1].inputs) w += in.weight;
  CHECK(w == doctest::Approx(r.trace.rounds[1].reach_probability).epsilon(1e-12));
  double by_rounds = 0.0;
  for (const auto& rec : r.trace.rounds) by_rounds += rec.reach_probability * rec.success_probability;
  CHECK(std::abs(by_rounds - r.trace.cumulative_success_probability) <= 1e-12);
}

TEST_CASE("purification in the ideal limit") {
  const auto r = epp_round(0.7, {}, Mode::Ideal);
  CHECK(std::abs(r.result.success_probability - 0.58) <= 1e-12);
  CHECK(std::abs(r.new_fidelity - 0.49 / 0.58) <= 1e-12);
  CHECK(std::abs(total_probability(r.result) - 1.0) <= 1e-12);
  CHECK(r.result.loss_probability <= 1e-12);
  for (const auto& b : r.result.branches) {
    if (!b.success || b.probability < 1e-15) continue;
    // psi+ pairs always come out as psi+, phi+ pairs as phi+.
    const bool from_psi = std::find(b.clicks.begin(), b.clicks.end(), Click{"term", "1x1"}) != b.clicks.end();
    CHECK(std::abs(b.fidelity - (from_psi ? 1.0 : 0.0)) <= 1e-12);
  }
  CHECK(std::abs(r.probability_hh - 0.29) <= 1e-12);
  CHECK(std::abs(r.probability_vv - 0.29) <= 1e-12);
  CHECK(std::abs(r.fidelity_hh - 0.49 / 0.58) <= 1e-12);
  CHECK(std::abs(r.fidelity_vv - 0.49 / 0.58) <= 1e-12);

  CHECK(epp_round(0.5, {}, Mode::Ideal).new_fidelity == doctest::Approx(0.5).epsilon(1e-12));
  const auto pure = epp_round(1.0, {}, Mode::Ideal);
  CHECK(pure.result.success_probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pure.new_fidelity == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(epp_round(1.1, {}, Mode::Ideal), std::invalid_argument);
  CHECK_THROWS_AS(epp_round(-0.1, {}, Mode::Ideal), std::invalid_argument);
}

TEST_CASE("purification improves every fidelity above one half") {
  for (int i = 1; i < 50; ++i) {
    const double f = 0.5 + 0.5 * i / 50.0;
    CHECK(epp_round(f, {}, Mode::Ideal).new_fidelity > f);
  }
}

TEST_CASE("practical purification") {
  const CavityParams p = at_g(0.8);
  const ReflectionPair c = reflection_pair(p);
  const auto r = epp_round(0.7, p, Mode::Practical);
  CHECK(std::abs(r.result.success_probability - analytics::eta_p(0.7, c.r, c.r0)) <= 1e-9);
  CHECK(std::abs(r.fidelity_hh_agreeing - analytics::f_p(0.7, c.r, c.r0)) <= 1e-9);
  CHECK(r.fidelity_hh_agreeing == doctest::Approx(0.8349110010806795).epsilon(1e-12));
  CHECK(std::abs(total_probability(r.result) - 1.0) <= 1e-12);
  CHECK(r.fidelity_vv > 0.0);
  CHECK(r.probability_hh + r.probability_vv == doctest::Approx(r.result.success_probability));
}

TEST_CASE("phase-flip mixtures convert to the bit-flip form") {
  const Subsystem a = ensemble("a"), b = ensemble("b");
  const MixedEnsemble phase({{0.8, bell_phi(a, b, -1)}, {0.2, bell_phi(a, b)}});
  const auto converted = phase_flip_to_bit_flip(phase);
  CHECK(fidelity(converted, bell_psi(a, b)) == doctest::Approx(0.8).epsilon(1e-12));
  const auto ideal = epp_round(converted, {}, Mode::Ideal);
  CHECK(ideal.new_fidelity == doctest::Approx(0.64 / 0.68).epsilon(1e-12));
}

TEST_CASE("purification rejects inputs off two ensembles") {
  const Subsystem a = ensemble("a"), p = polarization("p");
  const MixedEnsemble bad({{1.0, PureState::basis({a, p}, {0, 0})}});
  CHECK_THROWS_AS(epp_round(bad, {}, Mode::Ideal), std::invalid_argument);
}

TEST_CASE("iterated purification matches a high-precision map") {
  using Big = boost::multiprecision::cpp_dec_float_50;
  Big f = Big(7) / 10;
  const auto trace = epp_iterate(0.7, 3, {}, Mode::Ideal);
  REQUIRE(trace.rounds.size() == 3);
  Big chain = 1;
  for (const auto& rec : trace.rounds) {
    const Big q = f * f + (1 - f) * (1 - f);
    chain *= q;
    f = f * f / q;
    CHECK(std::abs(rec.fidelity - f.convert_to<double>()) <= 1e-12);
  }
  CHECK(trace.rounds[1].fidelity == doctest::Approx(0.967).epsilon(1e-3));
  CHECK(trace.rounds[2].fidelity == doctest::Approx(0.99886).epsilon(1e-5));
  CHECK(std::abs(trace.cumulative_success_probability - chain.convert_to<double>()) <= 1e-12);

  for (double f0 : {0.5}) {
    const auto fixed = epp_iterate(f0, 4, {}, Mode::Ideal);
    CHECK(fixed.rounds.back().fidelity == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK_THROWS_AS(epp_iterate(0.7, 0, {}, Mode::Ideal), std::invalid_argument);
}

TEST_CASE("named states") {
  const Subsystem a = ensemble("a"), b = ensemble("b"), c = ensemble("c");
  CHECK(fidelity(bell_psi(a, b), bell_psi(a, b, -1)) == doctest::Approx(0.0));
  CHECK(fidelity(bell_phi(a, b), bell_psi(a, b)) == doctest::Approx(0.0));
  const auto ghz = ghz_state({a, b, c});
  CHECK(ghz.norm2() == doctest::Approx(1.0));
  CHECK(std::abs(ghz.amplitude({1, 1, 1}) - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("branch labels") {
  const auto r = efficient_ecp(0.6, 0.8, {}, Mode::Ideal);
  const auto* b = r.first_round.find_branch({{"D_v", "click"}, {"E_A2", "G"}, {"E_B2", "S"}});
  REQUIRE(b != nullptr);
  CHECK(b->label() == "D_v,E_A2=G,E_B2=S");
  CHECK(r.first_round.find_branch({{"D_x", "click"}}) == nullptr);
}
