#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qss/simlab.hpp"

// qsslab — seeded Monte Carlo simulator of two quantum secret-sharing
// protocols, a fake-signal-and-cheating attack, an intercept-resend baseline,
// and the decoy-photon countermeasure.
//
// Exit codes: 0 success, 1 invalid configuration or I/O failure,
//             2 identity-verification failure.

namespace {

using qss::simlab::Defense;
using qss::simlab::Format;
using qss::simlab::Protocol;
using qss::simlab::SimConfig;

int run_command(const SimConfig& config, Format format,
                const std::string& out_path) {
  qss::simlab::SimReport report;
  try {
    report = qss::simlab::run_experiment(config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 1;
  }
  const std::string text = qss::simlab::serialize_report(report, format);
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "cannot write report to " << out_path << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum secret-sharing attack and defense simulator"};
  app.require_subcommand(1);

  // --- run ---
  auto* run = app.add_subcommand("run", "Run a seeded Monte Carlo experiment");
  std::string protocol, attack, cheat_mode, state_reveal, defense;
  std::string format = "json", out_path;
  double decoy_p = 0.0, sample_frac = 0.0;
  std::int64_t rounds = 0;
  std::uint64_t seed = 0;

  run->add_option("--protocol", protocol, "Protocol to simulate")
      ->required()
      ->check(CLI::IsMember({"hbb99", "kki"}));
  run->add_option("--attack", attack, "Channel-C attack strategy")
      ->required()
      ->check(CLI::IsMember({"none", "intercept-resend", "fake-signal"}));
  auto* cheat_opt =
      run->add_option("--cheat-mode", cheat_mode,
                      "How the kki fake-signal cheat survives sample checks")
          ->check(CLI::IsMember({"forge", "unitary"}));
  auto* reveal_opt =
      run->add_option("--state-reveal", state_reveal,
                      "When Alice announces the kki signal tag during checks")
          ->check(CLI::IsMember({"before", "after"}));
  run->add_option("--defense", defense, "Countermeasure")
      ->required()
      ->check(CLI::IsMember({"none", "decoy"}));
  auto* decoy_p_opt =
      run->add_option("--decoy-p", decoy_p,
                      "Probability that a round is a protocol round "
                      "(complement = decoy substitution rate; default 0.8)");
  run->add_option("--rounds", rounds, "Number of rounds")->required();
  run->add_option("--sample-frac", sample_frac,
                  "Probability that a kept round is parity-checked")
      ->required();
  run->add_option("--seed", seed, "64-bit RNG seed")->required();
  run->add_option("--format", format, "Report format")
      ->required()
      ->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--out", out_path, "Write the report here instead of stdout");

  // --- verify-identities ---
  auto* verify = app.add_subcommand(
      "verify-identities",
      "Check the algebraic identities and cheat-transparency grids");
  double tol = 1e-10;
  verify->add_option("--tol", tol, "Overlap tolerance (default 1e-10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // --help exits 0; any parse error is exit 1
  }

  if (run->parsed()) {
    SimConfig config;
    config.protocol = protocol == "hbb99" ? Protocol::Hbb99 : Protocol::Kki;
    config.attack =
        attack == "none" ? qss::adversary::AttackKind::None
        : attack == "intercept-resend"
            ? qss::adversary::AttackKind::InterceptResend
            : qss::adversary::AttackKind::FakeSignalCheat;
    if (cheat_opt->count() > 0) {
      config.cheat_mode = cheat_mode == "forge"
                              ? qss::adversary::CheatMode::Forge
                              : qss::adversary::CheatMode::Unitary;
    }
    if (reveal_opt->count() > 0) {
      config.state_reveal = state_reveal == "before"
                                ? qss::kki::StateReveal::Before
                                : qss::kki::StateReveal::After;
    }
    config.defense = defense == "none" ? Defense::None : Defense::Decoy;
    if (decoy_p_opt->count() > 0) config.decoy_p = decoy_p;
    config.rounds = rounds;
    config.sample_frac = sample_frac;
    config.seed = seed;

    try {
      qss::simlab::validate_config(config);
    } catch (const std::invalid_argument& e) {
      std::cerr << "invalid configuration: " << e.what() << "\n";
      return 1;
    }
    return run_command(config, format == "json" ? Format::Json : Format::Csv,
                       out_path);
  }

  return qss::simlab::verify_identities(tol, std::cout) ? 0 : 2;
}
