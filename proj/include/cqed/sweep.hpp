// Single-point evaluation and cartesian parameter sweeps that pair every
// simulated number with its closed-form counterpart.
#ifndef CQED_SWEEP_HPP
#define CQED_SWEEP_HPP

#include "cqed/cavity.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cqed {

enum class Protocol { OptimalEcp, GhzEcp, EfficientEcp, Epp };

Protocol parse_protocol(std::string_view name);
std::string_view to_string(Protocol p);
Mode parse_mode(std::string_view name);
std::string_view to_string(Mode m);

/// Parameter names accepted for axes and fixed values.
inline constexpr std::string_view kParameterNames[] = {
    "alpha", "f0", "g-over-kappa", "delta-over-kappa", "big-delta-over-kappa",
    "gamma-over-kappa", "rounds", "ghz-size"};

struct Axis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;

  /// Evenly spaced values; a single step yields `start`.
  std::vector<double> values() const;
};

/// Parses NAME:START:STOP:STEPS.
Axis parse_axis(std::string_view text);

struct PointParams {
  double alpha = 0.6;
  double f0 = 0.7;
  double g_over_kappa = 0.8;
  double delta_over_kappa = 0.0566;
  double big_delta_over_kappa = 0.0;
  double gamma_over_kappa = 0.0566;
  int rounds = 1;
  int ghz_size = 3;

  void set(std::string_view name, double value);
  CavityParams cavity() const;
};

struct SweepSpec {
  Protocol protocol = Protocol::OptimalEcp;
  Mode mode = Mode::Ideal;
  std::vector<Axis> axes;
  std::map<std::string, double> fixed;
  /// Finite-shot sampling of eta_sim; off unless a seed is given.
  std::optional<std::uint64_t> seed;
  int shots = 10000;

  /// Throws std::invalid_argument on unknown names, steps < 1, an axis
  /// repeated, or a parameter both swept and fixed.
  void validate() const;
};

struct ResultRow {
  Protocol protocol = Protocol::OptimalEcp;
  Mode mode = Mode::Ideal;
  PointParams params;
  double eta_sim = 0.0;
  double eta_analytic = 0.0;     // NaN when no closed form exists
  double fidelity_sim = 0.0;
  double fidelity_analytic = 0.0;
  double abs_d_eta = 0.0;
  double abs_d_fidelity = 0.0;
  /// Concentration: cumulative success over `rounds`. Purification: chain
  /// success over `rounds`.
  double eta_total_sim = 0.0;
  /// Fidelity after the last round.
  double fidelity_final_sim = 0.0;
  std::optional<double> eta_sampled;
};

/// Evaluates one parameter point. The paired columns are:
///   optimal-ecp   eta = D_h + D_v,           fidelity = D_h branch
///   ghz-ecp       eta = D_h + D_v,           fidelity = both branches
///   efficient-ecp eta = first-round success, fidelity = odd-parity output
///   epp           eta = coincidence rate,    fidelity = D_h & D'_h, agreeing readouts
ResultRow run(Protocol protocol, Mode mode, const PointParams& params);

/// Cartesian product of the axes, first axis outermost. Points are evaluated
/// concurrently; row order is deterministic.
std::vector<ResultRow> sweep(const SweepSpec& spec);

enum class OutputFormat { Csv, Json };
OutputFormat parse_format(std::string_view name);

void write_rows(std::ostream& os, const std::vector<ResultRow>& rows, OutputFormat format);

}  // namespace cqed

#endif  // CQED_SWEEP_HPP
