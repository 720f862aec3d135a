// cqed_distill: evaluate, sweep and verify the cavity-QED distillation
// protocols from the command line.
//
//   cqed_distill run    --protocol epp --mode practical --f0 0.7
//   cqed_distill sweep  --protocol epp --axis g-over-kappa:0.2:4:20 --axis f0:0.6:0.9:4
//   cqed_distill verify
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid arguments, 3 failed checks.
#include "cqed/sweep.hpp"
#include "cqed/verification.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerify = 3;

struct Options {
  std::string protocol = "optimal-ecp";
  std::string mode = "ideal";
  std::string format = "csv";
  std::string out;
  std::optional<std::uint64_t> seed;
  int shots = 10000;
  std::vector<std::string> axes;
  std::optional<double> alpha, f0, g, delta, big_delta, gamma;
  std::optional<int> rounds, ghz_size;
};

void add_point_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--protocol", o.protocol, "optimal-ecp | ghz-ecp | efficient-ecp | epp")
      ->capture_default_str();
  cmd->add_option("--mode", o.mode, "ideal | practical")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "coefficient alpha of the less-entangled pair");
  cmd->add_option("--f0", o.f0, "initial fidelity of the mixed pairs");
  cmd->add_option("--g-over-kappa", o.g, "coupling strength g/kappa");
  cmd->add_option("--delta-over-kappa", o.delta, "photon-cavity detuning delta'/kappa");
  cmd->add_option("--big-delta-over-kappa", o.big_delta, "atom-cavity detuning Delta/kappa");
  cmd->add_option("--gamma-over-kappa", o.gamma, "ensemble decay rate gamma/kappa");
  cmd->add_option("--rounds", o.rounds, "concentration or purification rounds");
  cmd->add_option("--ghz-size", o.ghz_size, "parties of the GHZ-class state");
  cmd->add_option("--format", o.format, "csv | json")->capture_default_str();
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--seed", o.seed, "enable finite-shot sampling of eta with this seed");
  cmd->add_option("--shots", o.shots, "shots per point when sampling")->capture_default_str();
}

cqed::SweepSpec build_spec(const Options& o) {
  cqed::SweepSpec spec;
  spec.protocol = cqed::parse_protocol(o.protocol);
  spec.mode = cqed::parse_mode(o.mode);
  for (const auto& text : o.axes) spec.axes.push_back(cqed::parse_axis(text));
  auto fix = [&](const char* name, const auto& value) {
    if (value) spec.fixed[name] = static_cast<double>(*value);
  };
  fix("alpha", o.alpha);
  fix("f0", o.f0);
  fix("g-over-kappa", o.g);
  fix("delta-over-kappa", o.delta);
  fix("big-delta-over-kappa", o.big_delta);
  fix("gamma-over-kappa", o.gamma);
  fix("rounds", o.rounds);
  fix("ghz-size", o.ghz_size);
  spec.seed = o.seed;
  spec.shots = o.shots;
  spec.validate();
  return spec;
}

int emit(const Options& o, const std::vector<cqed::ResultRow>& rows) {
  const cqed::OutputFormat format = cqed::parse_format(o.format);
  std::ostringstream buffer;
  cqed::write_rows(buffer, rows, format);
  if (o.out.empty()) {
    std::cout << buffer.str();
    return std::cout ? 0 : kExitIo;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open '" << o.out << "' for writing\n";
    return kExitIo;
  }
  file << buffer.str();
  file.close();
  if (!file) {
    std::cerr << "error: failed writing '" << o.out << "'\n";
    return kExitIo;
  }
  return 0;
}

int verify() {
  int failed = 0;
  for (const auto& check : cqed::verification::run_all()) {
    std::printf("[%s] %d %s: %s\n", check.passed ? "PASS" : "FAIL", check.id, check.name.c_str(),
                check.detail.c_str());
    if (!check.passed) ++failed;
  }
  std::printf("%s\n", failed == 0 ? "all checks passed" : "verification failed");
  return failed == 0 ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity-QED entanglement concentration and purification"};
  app.require_subcommand(1);

  Options run_opts, sweep_opts;
  CLI::App* run = app.add_subcommand("run", "evaluate one parameter point");
  add_point_options(run, run_opts);
  CLI::App* sweep = app.add_subcommand("sweep", "evaluate a cartesian parameter grid");
  add_point_options(sweep, sweep_opts);
  sweep->add_option("--axis", sweep_opts.axes, "NAME:START:STOP:STEPS (repeatable)")->required();
  app.add_subcommand("verify", "run the acceptance and invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed()) {
      const cqed::SweepSpec spec = build_spec(run_opts);
      return emit(run_opts, cqed::sweep(spec));
    }
    if (sweep->parsed()) {
      const cqed::SweepSpec spec = build_spec(sweep_opts);
      return emit(sweep_opts, cqed::sweep(spec));
    }
    return verify();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
