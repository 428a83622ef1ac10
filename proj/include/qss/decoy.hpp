#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "qss/adversary.hpp"
#include "qss/qstate.hpp"
#include "qss/rng.hpp"

// Decoy-photon countermeasure: with probability 1-p Alice substitutes both
// channel photons with independent single photons drawn from
// {|+x>, |-x>, |+y>, |-y>} and runs no protocol round.  After the agents
// announce bases and outcomes, she compares each channel's matched decoys
// (agent basis == preparation basis) against her preparation log.  The check
// for channel C needs no data from Bob, so a dishonest Bob cannot launder it:
// the delivered half of his fake Bell pair is maximally mixed and fails half
// of the matched checks.

namespace qss::decoy {

enum class Channel : std::uint8_t { B, C };

// How decoy photons are produced: drawn directly from the four states, or
// distilled from a GHZ triplet by measuring two of its photons (the third
// collapses onto one of the same four states, so downstream checking is
// identical).
enum class SourceKind : std::uint8_t { Direct, GhzMeasured };

struct DecoyRecord {
  std::int64_t round_id = 0;
  Channel channel = Channel::B;
  Basis prep_basis = Basis::X;
  Bit prep_bit;
  Basis agent_basis = Basis::X;
  Bit agent_bit;
  bool matched = false;  // agent measured in the preparation basis
  bool error = false;    // matched and the outcome disagrees
};

struct DecoyPrep {
  PureState photon;
  Basis prep_basis = Basis::X;
  Bit prep_bit;
};

// One decoy photon uniform over {|+x>, |-x>, |+y>, |-y>} (one index draw, in
// that canonical order).
DecoyPrep decoy_source(const std::string& label, RngStream& rng);

// Builds a GHZ triplet, measures two photons in random X/Y bases (four draws:
// two bases, two outcomes), and returns the third photon, which has collapsed
// onto a known state of the same four-state set: an X eigenstate when the two
// bases agree, a Y eigenstate when they differ.  The triplet is consumed.
DecoyPrep ghz_decoy_source(const std::string& label, RngStream& rng);

// Gate draw for a decoy-defended run: true -> protocol round (probability p).
bool is_protocol_round(double p, RngStream& rng);

struct DecoyRoundResult {
  DecoyRecord b;
  DecoyRecord c;
  std::optional<adversary::AttackLog> attacker_log;
};

// One decoy round: both channel photons replaced by fresh decoys, channel C
// routed through the attack strategy (the attacker cannot tell decoy rounds
// apart), each agent measuring in a random basis from the protocol's set.
DecoyRoundResult run_decoy_round(std::int64_t round_id,
                                 const adversary::AttackStrategy& attack,
                                 std::span<const Basis> agent_bases,
                                 SourceKind source, RngStream& rng);

struct ChannelCheck {
  std::int64_t matched = 0;
  std::int64_t errors = 0;
  std::optional<double> error_rate;  // absent when nothing matched
};

// Per-channel comparison of Alice's preparation log with the agent's
// announcements; unmatched records are discarded.  Reads only the one agent's
// data, so the other (possibly dishonest) agent's cooperation is never used.
ChannelCheck decoy_check(std::span<const DecoyRecord> records, Channel channel);

// A channel is flagged as attacked when any error shows up across at least
// `min_count` checked values, or when the error rate exceeds `rate_threshold`
// on a smaller batch.  Zero checked values never flag.
bool detection_rule(std::int64_t checked, std::int64_t errors,
                    std::int64_t min_count = 4, double rate_threshold = 0.10);

}  // namespace qss::decoy
