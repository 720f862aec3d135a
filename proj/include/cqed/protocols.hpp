// Entanglement distillation protocols as exact state traces: the optimal
// concentration with known coefficients (two ensembles and its N-party GHZ
// form), the parity-check concentration for unknown coefficients, and the
// parity-check purification of bit-flip mixtures.
#ifndef CQED_PROTOCOLS_HPP
#define CQED_PROTOCOLS_HPP

#include "cqed/cavity.hpp"
#include "cqed/qstate.hpp"

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cqed {

/// (|GS> + sign |SG>)/sqrt2 on (a, b).
PureState bell_psi(const Subsystem& a, const Subsystem& b, int sign = +1);
/// (|GG> + sign |SS>)/sqrt2 on (a, b).
PureState bell_phi(const Subsystem& a, const Subsystem& b, int sign = +1);
/// (|G...G> + |S...S>)/sqrt2.
PureState ghz_state(const std::vector<Subsystem>& parties);

struct Click {
  std::string detector;
  std::string outcome;

  friend bool operator==(const Click&, const Click&) = default;
};

/// One terminal branch of a protocol run, after any prescribed correction.
struct BranchRecord {
  std::vector<Click> clicks;
  double probability = 0.0;
  bool success = false;
  /// Normalized surviving state (zero when probability is 0).
  PureState state;
  double fidelity = 0.0;

  /// "det=outcome,det=outcome,..."
  std::string label() const;
};

struct ProtocolResult {
  double success_probability = 0.0;
  /// Probability mass that reached no detector (practical |r| < 1).
  double loss_probability = 0.0;
  std::vector<BranchRecord> branches;
  /// Mixture of the successful branches; empty if none can occur.
  std::optional<MixedEnsemble> output;
  double fidelity = 0.0;
  std::string target_name;

  /// First branch whose clicks include every click in `pattern`.
  const BranchRecord* find_branch(const std::vector<Click>& pattern) const;
  /// Total probability and fidelity over branches matching `pattern`.
  std::pair<double, double> aggregate(const std::vector<Click>& pattern) const;
};

struct RoundInput {
  double weight = 0.0;
  std::complex<double> alpha;
  std::complex<double> beta;
};

struct RoundRecord {
  int round = 0;
  /// Probability mass (per starting pair) that enters this round.
  double reach_probability = 0.0;
  /// Success probability of one attempt, conditional on reaching the round.
  double success_probability = 0.0;
  double input_fidelity = 0.0;
  double fidelity = 0.0;
  /// Concentration only: the distinct input coefficient pairs of the round.
  std::vector<RoundInput> inputs;
};

struct IterationTrace {
  std::vector<RoundRecord> rounds;
  /// Concentration: sum over rounds of reach x success.
  /// Purification: product of the per-round success probabilities.
  double cumulative_success_probability = 0.0;
};

/// Known-coefficient concentration of alpha|GS> + beta|SG> with one photon
/// reflected off E_B's cavity and a UBS filter on the arm carrying the
/// larger coefficient. Success branches are D_h (followed by sigma_z on E_B)
/// and D_v; the filter's error port is D'_v (or D'_h when |alpha| > |beta|).
ProtocolResult optimal_ecp(double alpha, double beta, const CavityParams& p, Mode mode);

/// GHZ-class concentration of alpha|G..G> + beta|S..S> on n ensembles.
/// Requires |alpha| <= |beta|.
ProtocolResult ghz_concentrate(double alpha, double beta, int n, const CavityParams& p,
                               Mode mode);

struct EfficientEcpResult {
  ProtocolResult first_round;
  IterationTrace trace;
};

/// Unknown-coefficient concentration from two copies of alpha|GS> + beta|SG>
/// using a parity check on Bob's ensembles. Odd parity yields psi+ after
/// Hadamards and G/S readout of E_A2, E_B2 (sigma_z on E_A1 when the two
/// readouts agree). Even parity leaves alpha^2|GS> + beta^2|SG> (up to
/// normalization and the same correction), which is recycled: two failed
/// attempts supply the two copies for the next round.
EfficientEcpResult efficient_ecp(std::complex<double> alpha, std::complex<double> beta,
                                 const CavityParams& p, Mode mode, int rounds = 1);

/// f0 |psi+><psi+| + (1 - f0) |phi+><phi+| on (a, b).
MixedEnsemble bit_flip_mixture(double f0, const Subsystem& a, const Subsystem& b);

/// Hadamard on both ensembles of every component. A phase-flip mixture
/// f |phi-><phi-| + (1 - f) |phi+><phi+| becomes the bit-flip form above.
MixedEnsemble phase_flip_to_bit_flip(const MixedEnsemble& pair_state);

struct EppRoundResult {
  /// Kept = coincident parity (D_h & D'_h or D_v & D'_v), after the +/-
  /// readout of E_A2, E_B2 and sigma_z on E_A1 when the readouts differ.
  ProtocolResult result;
  double new_fidelity = 0.0;
  double probability_hh = 0.0;
  double probability_vv = 0.0;
  double fidelity_hh = 0.0;
  double fidelity_vv = 0.0;
  /// D_h & D'_h with equal +/- readouts, where no correction is applied.
  double probability_hh_agreeing = 0.0;
  double fidelity_hh_agreeing = 0.0;
};

/// One purification round on two copies of `pair_state`, a mixture on two
/// ensemble qubits (any names; relabelled to E_A, E_B order as given).
EppRoundResult epp_round(const MixedEnsemble& pair_state, const CavityParams& p, Mode mode);

EppRoundResult epp_round(double f0, const CavityParams& p, Mode mode);

/// Repeated purification. Each round re-prepares the bit-flip mixture at the
/// previous round's kept fidelity.
IterationTrace epp_iterate(double f0, int rounds, const CavityParams& p, Mode mode);

}  // namespace cqed

#endif  // CQED_PROTOCOLS_HPP
