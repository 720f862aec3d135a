#include "cqed/protocols.hpp"

#include "cqed/optics.hpp"
#include "cqed/pcd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqed {

namespace {

constexpr double kCoefficientTolerance = 1e-9;

const Subsystem kEA = ensemble("E_A");
const Subsystem kEB = ensemble("E_B");
const Subsystem kEA1 = ensemble("E_A1");
const Subsystem kEB1 = ensemble("E_B1");
const Subsystem kEA2 = ensemble("E_A2");
const Subsystem kEB2 = ensemble("E_B2");

PureState relabel(const PureState& s, std::vector<Subsystem> subs) {
  return PureState(std::move(subs), s.amplitudes());
}

/// alpha|GS> + beta|SG> on (a, b).
PureState schmidt_pair(const Subsystem& a, const Subsystem& b, Complex alpha, Complex beta) {
  return PureState::from_terms({a, b}, {{{level::G, level::S}, alpha}, {{level::S, level::G}, beta}});
}

BranchRecord make_record(std::vector<Click> clicks, const PureState& branch, bool success,
                         const PureState* target) {
  BranchRecord rec;
  rec.clicks = std::move(clicks);
  rec.probability = branch.norm2();
  rec.success = success;
  rec.state = branch.normalized();
  if (target != nullptr && rec.probability > 0.0) rec.fidelity = fidelity(rec.state, *target);
  return rec;
}

void finish(ProtocolResult& result, double input_norm2, const PureState& target) {
  double detected = 0.0;
  std::vector<WeightedState> terms;
  for (const auto& b : result.branches) {
    detected += b.probability;
    if (b.success && b.probability > 0.0) {
      result.success_probability += b.probability;
      terms.push_back({b.probability, b.state});
    }
  }
  result.loss_probability = std::max(0.0, input_norm2 - detected);
  if (!terms.empty()) {
    for (auto& t : terms) t.weight /= result.success_probability;
    // Renormalize exactly so the weights sum to one.
    double sum = 0.0;
    for (const auto& t : terms) sum += t.weight;
    for (auto& t : terms) t.weight /= sum;
    result.output = MixedEnsemble(std::move(terms));
    result.fidelity = fidelity(*result.output, target);
  }
}

void require_unit_norm(double norm2) {
  if (std::abs(norm2 - 1.0) > kCoefficientTolerance) {
    throw std::invalid_argument("coefficients must satisfy |alpha|^2 + |beta|^2 = 1");
  }
}

/// One photon reflected off `cavity_ensemble`'s cavity (h) or the mirror (v),
/// then H1, a UBS filter on the arm holding the larger coefficient, H2 and
/// detection. `h_arm` / `v_arm` are the magnitudes that land on each arm
/// after H1 in the ideal limit.
ProtocolResult single_photon_filter(const PureState& state, const Subsystem& cavity_ensemble,
                                    double h_arm, double v_arm, const ReflectionPair& c,
                                    const Subsystem& correct_on, const PureState& target,
                                    std::string target_name) {
  const Photon photon = make_photon("b", 3);
  const Subsystem& pol = photon.polarization;
  const LinearOp pbs = pbs_route(pol, photon.path);
  const LinearOp h_out = on_arm(photon, arm::transmitted, photon_hadamard(pol));

  PureState x = tensor(diagonal_photon(photon), state);
  x = cqed::apply(pbs, x);
  x = cqed::apply(on_arm(photon, arm::transmitted, reflection_operator(pol, cavity_ensemble, c)), x);
  x = cqed::apply(pbs, x);  // mirror M on the reflected arm adds no phase
  x = cqed::apply(h_out, x);
  x = cqed::apply(pbs, x);

  Click error_click{"D'_v", "click"};
  int error_pol = level::v;
  if (v_arm > h_arm) {
    x = cqed::apply(ubs_split(h_arm / v_arm, photon.path, arm::reflected, arm::error), x);
  } else if (h_arm > v_arm) {
    x = cqed::apply(ubs_split(v_arm / h_arm, photon.path, arm::transmitted, arm::error), x);
    error_click.detector = "D'_h";
    error_pol = level::h;
  }
  x = cqed::apply(pbs, x);
  x = cqed::apply(h_out, x);

  if (project(x, photon.path.name, arm::reflected).norm2() > kTolerance) {
    throw std::logic_error("light left on the reflected arm after recombination");
  }

  ProtocolResult result;
  result.target_name = std::move(target_name);

  const PureState error_port = project(x, photon.path.name, arm::error);
  if (project(error_port, pol.name, 1 - error_pol).norm2() > kTolerance) {
    throw std::logic_error("unexpected polarization at the UBS error port");
  }
  result.branches.push_back(
      make_record({error_click}, project(error_port, pol.name, error_pol), false, &target));

  const PureState output_port = project(x, photon.path.name, arm::transmitted);
  auto detected = measure(output_port, pol.name);
  const PureState dh = cqed::apply(sigma_z(correct_on), detected[level::h].branch);
  result.branches.push_back(make_record({{"D_h", "click"}}, dh, true, &target));
  result.branches.push_back(
      make_record({{"D_v", "click"}}, detected[level::v].branch, true, &target));

  finish(result, state.norm2(), target);
  return result;
}

/// Hadamard on E_A2 and E_B2, then `basis` readout of both; sigma_z on E_A1
/// when the readouts agree (`flip_when_equal`) or differ (otherwise).
struct Readout {
  int outcome_a2;
  int outcome_b2;
  PureState branch;
};

std::vector<Readout> read_out(const PureState& s, bool hadamard_first,
                              const std::vector<PureState::Vector>& basis, bool flip_when_equal) {
  PureState y = s;
  if (hadamard_first) {
    y = cqed::apply(hadamard(kEA2), y);
    y = cqed::apply(hadamard(kEB2), y);
  }
  std::vector<Readout> out;
  for (const auto& oa : measure(y, kEA2.name, basis)) {
    for (const auto& ob : measure(oa.branch, kEB2.name, basis)) {
      PureState z = ob.branch;
      if ((oa.outcome == ob.outcome) == flip_when_equal) z = cqed::apply(sigma_z(kEA1), z);
      out.push_back({oa.outcome, ob.outcome, std::move(z)});
    }
  }
  return out;
}

std::vector<PureState::Vector> computational_basis() {
  return {PureState::Vector::Unit(2, 0), PureState::Vector::Unit(2, 1)};
}

const char* gs_name(int l) { return l == level::G ? "G" : "S"; }
const char* pm_name(int l) { return l == 0 ? "+" : "-"; }

struct EcpAttempt {
  ProtocolResult result;
  std::vector<RoundInput> recycled;  // weight = absolute branch probability
};

/// Rotates (alpha, beta) so that beta (or alpha, if beta = 0) is real and
/// non-negative.
std::pair<Complex, Complex> canonical_phase(Complex alpha, Complex beta) {
  const Complex ref = std::abs(beta) > 0.0 ? beta : alpha;
  if (std::abs(ref) == 0.0) return {alpha, beta};
  const Complex phase = std::conj(ref) / std::abs(ref);
  return {alpha * phase, beta * phase};
}

EcpAttempt efficient_ecp_attempt(Complex alpha, Complex beta, const ReflectionPair& c) {
  const PureState state =
      tensor(schmidt_pair(kEA1, kEB1, alpha, beta), schmidt_pair(kEA2, kEB2, alpha, beta));
  const PureState target = bell_psi(kEA1, kEB1);
  const PcdResult pcd = pcd_apply(state, kEB1.name, kEB2.name, c, c);

  EcpAttempt attempt;
  attempt.result.target_name = "psi+";
  for (const auto& r : read_out(pcd.odd.branch, true, computational_basis(), true)) {
    attempt.result.branches.push_back(make_record(
        {{"D_v", "click"}, {kEA2.name, gs_name(r.outcome_a2)}, {kEB2.name, gs_name(r.outcome_b2)}},
        r.branch, true, &target));
  }
  for (const auto& r : read_out(pcd.even.branch, true, computational_basis(), true)) {
    attempt.result.branches.push_back(make_record(
        {{"D_h", "click"}, {kEA2.name, gs_name(r.outcome_a2)}, {kEB2.name, gs_name(r.outcome_b2)}},
        r.branch, false, &target));
    const double w = r.branch.norm2();
    if (w <= 0.0) continue;
    const PureState n = r.branch.normalized();
    const double stray = std::norm(n.amplitude({level::G, level::G})) +
                         std::norm(n.amplitude({level::S, level::S}));
    if (stray > kTolerance) throw std::logic_error("recycled pair left the {GS, SG} subspace");
    const auto [a, b] =
        canonical_phase(n.amplitude({level::G, level::S}), n.amplitude({level::S, level::G}));
    attempt.recycled.push_back({w, a, b});
  }
  finish(attempt.result, state.norm2(), target);
  return attempt;
}

}  // namespace

// --- named states ----------------------------------------------------------

PureState bell_psi(const Subsystem& a, const Subsystem& b, int sign) {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState::from_terms({a, b},
                               {{{level::G, level::S}, s}, {{level::S, level::G}, sign * s}});
}

PureState bell_phi(const Subsystem& a, const Subsystem& b, int sign) {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState::from_terms({a, b},
                               {{{level::G, level::G}, s}, {{level::S, level::S}, sign * s}});
}

PureState ghz_state(const std::vector<Subsystem>& parties) {
  const double s = 1.0 / std::sqrt(2.0);
  PureState::Vector amps = PureState::Vector::Zero(detail::total_dimension(parties));
  amps(0) = s;
  amps(amps.size() - 1) = s;
  return PureState(parties, amps);
}

// --- result helpers --------------------------------------------------------

std::string BranchRecord::label() const {
  std::string out;
  for (const auto& c : clicks) {
    if (!out.empty()) out += ',';
    out += c.detector;
    if (c.outcome != "click") out += "=" + c.outcome;
  }
  return out;
}

const BranchRecord* ProtocolResult::find_branch(const std::vector<Click>& pattern) const {
  for (const auto& b : branches) {
    const bool match = std::all_of(pattern.begin(), pattern.end(), [&](const Click& c) {
      return std::find(b.clicks.begin(), b.clicks.end(), c) != b.clicks.end();
    });
    if (match) return &b;
  }
  return nullptr;
}

std::pair<double, double> ProtocolResult::aggregate(const std::vector<Click>& pattern) const {
  double prob = 0.0, fid = 0.0;
  for (const auto& b : branches) {
    const bool match = std::all_of(pattern.begin(), pattern.end(), [&](const Click& c) {
      return std::find(b.clicks.begin(), b.clicks.end(), c) != b.clicks.end();
    });
    if (!match) continue;
    prob += b.probability;
    fid += b.probability * b.fidelity;
  }
  return {prob, prob > 0.0 ? fid / prob : 0.0};
}

// --- concentration with known coefficients ---------------------------------

ProtocolResult optimal_ecp(double alpha, double beta, const CavityParams& p, Mode mode) {
  require_unit_norm(alpha * alpha + beta * beta);
  const ReflectionPair c = reflection_pair(p, mode);
  // E_B = S in alpha|GS> (r = +1) lands on the h arm after H1.
  return single_photon_filter(schmidt_pair(kEA, kEB, alpha, beta), kEB, std::abs(alpha),
                              std::abs(beta), c, kEB, bell_psi(kEA, kEB), "psi+");
}

ProtocolResult ghz_concentrate(double alpha, double beta, int n, const CavityParams& p,
                               Mode mode) {
  if (n < 2) throw std::invalid_argument("GHZ concentration needs at least two ensembles");
  require_unit_norm(alpha * alpha + beta * beta);
  if (std::abs(alpha) > std::abs(beta) + kCoefficientTolerance) {
    throw std::invalid_argument("GHZ concentration expects |alpha| <= |beta|");
  }
  std::vector<Subsystem> parties;
  for (int i = 1; i <= n; ++i) parties.push_back(ensemble("E_" + std::to_string(i)));
  PureState::Vector amps = PureState::Vector::Zero(detail::total_dimension(parties));
  amps(0) = alpha;
  amps(amps.size() - 1) = beta;
  const PureState state(parties, amps);
  const ReflectionPair c = reflection_pair(p, mode);
  return single_photon_filter(state, parties.back(), std::abs(beta), std::abs(alpha), c,
                              parties.front(), ghz_state(parties), "GHZ_" + std::to_string(n));
}

// --- concentration with unknown coefficients -------------------------------

EfficientEcpResult efficient_ecp(Complex alpha, Complex beta, const CavityParams& p, Mode mode,
                                 int rounds) {
  if (rounds < 1) throw std::invalid_argument("at least one round is required");
  require_unit_norm(std::norm(alpha) + std::norm(beta));
  const ReflectionPair c = reflection_pair(p, mode);

  EfficientEcpResult out;
  std::vector<RoundInput> nodes{{1.0, alpha, beta}};
  for (int k = 1; k <= rounds && !nodes.empty(); ++k) {
    RoundRecord rec;
    rec.round = k;
    rec.inputs = nodes;
    double success_mass = 0.0, fidelity_mass = 0.0, input_fid = 0.0;
    std::vector<RoundInput> next;
    for (const auto& node : nodes) {
      rec.reach_probability += node.weight;
      EcpAttempt attempt = efficient_ecp_attempt(node.alpha, node.beta, c);
      const double eta = attempt.result.success_probability;
      success_mass += node.weight * eta;
      fidelity_mass += node.weight * eta * attempt.result.fidelity;
      input_fid += node.weight *
                   fidelity(schmidt_pair(kEA1, kEB1, node.alpha, node.beta), bell_psi(kEA1, kEB1));
      for (const auto& child : attempt.recycled) {
        // Two failed attempts supply one next-round attempt.
        const double w = node.weight * child.weight / 2.0;
        auto same = std::find_if(next.begin(), next.end(), [&](const RoundInput& r) {
          return std::abs(r.alpha - child.alpha) <= kTolerance &&
                 std::abs(r.beta - child.beta) <= kTolerance;
        });
        if (same != next.end()) {
          same->weight += w;
        } else {
          next.push_back({w, child.alpha, child.beta});
        }
      }
      if (k == 1) out.first_round = std::move(attempt.result);
    }
    rec.success_probability = rec.reach_probability > 0.0 ? success_mass / rec.reach_probability : 0.0;
    rec.fidelity = success_mass > 0.0 ? fidelity_mass / success_mass : 0.0;
    rec.input_fidelity = rec.reach_probability > 0.0 ? input_fid / rec.reach_probability : 0.0;
    out.trace.cumulative_success_probability += success_mass;
    out.trace.rounds.push_back(std::move(rec));
    nodes = std::move(next);
  }
  return out;
}

// --- purification ----------------------------------------------------------

MixedEnsemble bit_flip_mixture(double f0, const Subsystem& a, const Subsystem& b) {
  if (!(f0 >= 0.0 && f0 <= 1.0)) throw std::invalid_argument("f0 must lie in [0, 1]");
  return MixedEnsemble({{f0, bell_psi(a, b)}, {1.0 - f0, bell_phi(a, b)}});
}

MixedEnsemble phase_flip_to_bit_flip(const MixedEnsemble& pair_state) {
  const auto& subs = pair_state.subsystems();
  if (subs.size() != 2) throw std::invalid_argument("expected a two-ensemble mixture");
  std::vector<WeightedState> terms;
  for (const auto& t : pair_state.terms()) {
    PureState s = cqed::apply(hadamard(subs[0]), t.state);
    s = cqed::apply(hadamard(subs[1]), s);
    terms.push_back({t.weight, std::move(s)});
  }
  return MixedEnsemble(std::move(terms));
}

EppRoundResult epp_round(const MixedEnsemble& pair_state, const CavityParams& p, Mode mode) {
  const auto& subs = pair_state.subsystems();
  if (subs.size() != 2 || subs[0].kind != SubsystemKind::EnsembleQubit ||
      subs[1].kind != SubsystemKind::EnsembleQubit) {
    throw std::invalid_argument("purification input must be a mixture on two ensemble qubits");
  }
  const ReflectionPair c = reflection_pair(p, mode);
  const PureState target = bell_psi(kEA1, kEB1);
  const auto pm = plus_minus_basis();

  EppRoundResult out;
  ProtocolResult& result = out.result;
  result.target_name = "psi+";

  const auto& terms = pair_state.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const double w = terms[i].weight * terms[j].weight;
      if (w == 0.0) continue;
      const PureState s = tensor(relabel(terms[i].state, {kEA1, kEB1}),
                                 relabel(terms[j].state, {kEA2, kEB2}))
                              .scaled(std::sqrt(w));
      const Click term{"term", std::to_string(i + 1) + "x" + std::to_string(j + 1)};
      const PcdResult alice = pcd_apply(s, kEA1.name, kEA2.name, c, c);
      for (const ParityOutcome* pa : {&alice.even, &alice.odd}) {
        const PcdResult bob = pcd_apply(pa->branch, kEB1.name, kEB2.name, c, c);
        const bool alice_even = pa->parity == Parity::Even;
        const Click ca{alice_even ? "D_h" : "D_v", "click"};
        for (const ParityOutcome* pb : {&bob.even, &bob.odd}) {
          const Click cb{pb->parity == Parity::Even ? "D'_h" : "D'_v", "click"};
          if (pa->parity != pb->parity) {
            result.branches.push_back(make_record({ca, cb, term}, pb->branch, false, nullptr));
            continue;
          }
          for (const auto& r : read_out(pb->branch, false, pm, false)) {
            result.branches.push_back(make_record(
                {ca, cb, {kEA2.name, pm_name(r.outcome_a2)}, {kEB2.name, pm_name(r.outcome_b2)}, term},
                r.branch, true, &target));
          }
        }
      }
    }
  }
  finish(result, 1.0, target);
  out.new_fidelity = result.fidelity;

  const Click dh{"D_h", "click"}, dh2{"D'_h", "click"}, dv{"D_v", "click"}, dv2{"D'_v", "click"};
  std::tie(out.probability_hh, out.fidelity_hh) = result.aggregate({dh, dh2});
  std::tie(out.probability_vv, out.fidelity_vv) = result.aggregate({dv, dv2});
  double agree_p = 0.0, agree_f = 0.0;
  for (const char* sign : {"+", "-"}) {
    const auto [pr, f] = result.aggregate({dh, dh2, {kEA2.name, sign}, {kEB2.name, sign}});
    agree_p += pr;
    agree_f += pr * f;
  }
  out.probability_hh_agreeing = agree_p;
  out.fidelity_hh_agreeing = agree_p > 0.0 ? agree_f / agree_p : 0.0;
  return out;
}

EppRoundResult epp_round(double f0, const CavityParams& p, Mode mode) {
  return epp_round(bit_flip_mixture(f0, kEA, kEB), p, mode);
}

IterationTrace epp_iterate(double f0, int rounds, const CavityParams& p, Mode mode) {
  if (rounds < 1) throw std::invalid_argument("at least one round is required");
  IterationTrace trace;
  double f = f0;
  double reach = 1.0;
  for (int k = 1; k <= rounds; ++k) {
    const EppRoundResult r = epp_round(f, p, mode);
    RoundRecord rec;
    rec.round = k;
    rec.reach_probability = reach;
    rec.success_probability = r.result.success_probability;
    rec.input_fidelity = f;
    rec.fidelity = r.new_fidelity;
    trace.rounds.push_back(rec);
    reach *= r.result.success_probability;
    f = std::clamp(r.new_fidelity, 0.0, 1.0);
  }
  trace.cumulative_success_probability = reach;
  return trace;
}

}  // namespace cqed
