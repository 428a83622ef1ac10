#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "qss/adversary.hpp"
#include "qss/qstate.hpp"
#include "qss/rng.hpp"

// One round of the GHZ-based three-party secret-sharing protocol (hbb99):
// Alice prepares (|000> + |111>)/sqrt(2), keeps A, and sends B to Bob and C to
// Charlie through an attacker-interceptable channel.  Everyone measures in a
// random basis from {X, Y}; rounds whose basis triple is XXX (outcome parity
// always even) or has exactly two Y (parity always odd) are kept, the rest are
// discarded.  On sampled kept rounds the agents announce their bits and Alice
// checks the parity; on the others the bits become key material with
// K_A = b_A xor expected_parity, so K_A = K_B xor K_C.

namespace qss::hbb99 {

enum class Party : std::uint8_t { Alice, Bob, Charlie };

// Agent basis set in canonical draw order (a uniform index picks from it).
inline constexpr std::array<Basis, 2> kAgentBases = {Basis::X, Basis::Y};

struct HbbRound {
  std::int64_t round_id = 0;
  std::array<Basis, 3> bases{};         // Alice, Bob, Charlie
  std::array<Bit, 3> true_bits{};
  std::array<Bit, 3> announced_bits{};  // differ from true only for a cheated Bob
  std::optional<Bit> expected_parity;   // engaged iff the round sifted Kept
  bool is_sample = false;
  std::optional<bool> check_passed;     // engaged iff is_sample and Kept
  std::optional<adversary::AttackLog> attacker_log;

  bool kept() const { return expected_parity.has_value(); }
};

// Kept(parity) for XXX (0) and the three two-Y triples (1); nullopt otherwise.
// Throws on a Z basis, which the protocol never uses.
std::optional<Bit> sift_decision(Basis a, Basis b, Basis c);

// Runs one full round: prepare, tap, random bases, measurements, sifting, and
// (on sampled kept rounds) the announcement/parity check with Bob's
// announcement routed through the attack strategy.  All randomness comes from
// `rng` in a fixed canonical order, so a round replays from its stream alone.
HbbRound run_round(std::int64_t round_id, const adversary::AttackStrategy& attack,
                   bool is_sample, RngStream& rng);

// Key bits of a kept, non-sample round (throws otherwise):
// K_A folds the expected parity into Alice's bit so K_A = K_B xor K_C.
Bit alice_key_bit(const HbbRound& r);
Bit agent_key_bit(const HbbRound& r, Party p);

}  // namespace qss::hbb99
