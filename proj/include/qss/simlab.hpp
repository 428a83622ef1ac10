#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qss/adversary.hpp"
#include "qss/decoy.hpp"
#include "qss/hbb99.hpp"
#include "qss/kki.hpp"

// Experiment harness: seeded Monte Carlo over independent protocol/decoy
// rounds, aggregation into a flat report, and JSON/CSV serialization.  Every
// round consumes only its own RNG stream, derived from (seed, round_id), so a
// run is reproducible bit-for-bit and parallel execution matches serial.

namespace qss::simlab {

enum class Protocol : std::uint8_t { Hbb99, Kki };
enum class Defense : std::uint8_t { None, Decoy };
enum class Format : std::uint8_t { Json, Csv };

struct SimConfig {
  Protocol protocol = Protocol::Hbb99;
  adversary::AttackKind attack = adversary::AttackKind::None;
  // kki + fake-signal only; Forge when unset.
  std::optional<adversary::CheatMode> cheat_mode;
  // kki only; After when unset.  Unitary cheating requires Before.
  std::optional<kki::StateReveal> state_reveal;
  Defense defense = Defense::None;
  // Probability that a round is a protocol round (decoy defense only); the
  // complement is the decoy-substitution rate.  0.8 when unset.
  std::optional<double> decoy_p;
  std::int64_t rounds = 1;
  double sample_frac = 0.2;
  std::uint64_t seed = 0;
};

// Throws std::invalid_argument with a human-readable diagnostic when fields
// are out of range or contradict each other.
void validate_config(const SimConfig& config);

struct SimReport {
  SimConfig config;

  // Counts.  kept + discarded = config.rounds - decoy_rounds; samples counts
  // the kept rounds that were parity-checked.
  std::int64_t decoy_rounds = 0;
  std::int64_t kept = 0;
  std::int64_t discarded = 0;
  std::int64_t samples = 0;
  std::int64_t sample_errors = 0;
  std::int64_t matched_decoys_b = 0;
  std::int64_t matched_decoys_c = 0;
  std::int64_t decoy_errors_b = 0;
  std::int64_t decoy_errors_c = 0;

  // Rates; absent whenever the denominator is zero.
  std::optional<double> sift_rate;
  std::optional<double> sample_error_rate;
  std::optional<double> decoy_error_rate_b;
  std::optional<double> decoy_error_rate_c;

  // Detection verdict over the sample checks and both decoy channels.
  bool detected = false;

  // Fraction of Charlie's non-sample sifted bits the attacker recovered;
  // absent without an attack (or without any such round).
  std::optional<double> attacker_recovery_rate;
  // Whether K_B xor (stolen K_C) reproduced K_A bit-for-bit; GHZ protocol
  // under attack only, absent otherwise.
  std::optional<bool> alice_key_recovered;
};

// Runs the configured experiment.  `threads` splits the rounds across workers
// (1 = serial); the report is identical either way.
SimReport run_experiment(const SimConfig& config, int threads = 1);

// JSON: one object, config echoed under "config", fixed key order, floats at
// 6 significant digits.  CSV: a header row and one data row of the same
// fields flattened in the same order; absent values are empty cells.
std::string serialize_report(const SimReport& report, Format format);

// Parses serialize_report's JSON form back (used to round-trip reports).
SimReport report_from_json(const std::string& text);

// Deterministic algebraic checks behind the simulator: the entanglement-swap
// branch table, the fake-branch parity pairings, the generic two-qubit swap
// identity on random states, and the exhaustive cheat-transparency grids for
// both protocols.  Logs one line per group to `out`; true iff all pass.
bool verify_identities(double tol, std::ostream& out);

}  // namespace qss::simlab
