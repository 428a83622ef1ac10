#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

#include "qss/adversary.hpp"
#include "qss/qstate.hpp"
#include "qss/rng.hpp"

// One round of the two-qubit secret-sharing scheme (kki): Alice draws one of
// four entangled signal states uniformly, keeps nothing, and sends photon B to
// Bob and photon C to Charlie (through the attackable channel).  The agents
// measure in random bases from {X, Z} and keep the rounds whose basis pair is
// correlated for the announced signal; kept pairs have a deterministic outcome
// parity.  Only error rates and attack transparency are modeled — the scheme's
// key maps beyond sample checking are out of scope here.

namespace qss::kki {

using qss::KkiSignal;

enum class KkiClass : std::uint8_t { A, B };

// Whether Alice announces the signal tag before or after Bob's announcement
// during sample checking.  The unitary-correction cheat needs Before.
enum class StateReveal : std::uint8_t { Before, After };

// Agent basis set in canonical draw order.
inline constexpr std::array<Basis, 2> kAgentBases = {Basis::X, Basis::Z};

// ClassA: the two Bell-state signals; ClassB: the two superposition signals.
KkiClass signal_class(KkiSignal s);

// The two (basis_B, basis_C) pairs with deterministic correlation:
// ClassA -> {(Z,Z), (X,X)}; ClassB -> {(Z,X), (X,Z)}.
std::array<std::pair<Basis, Basis>, 2> correlated_bases(KkiSignal s);

// Deterministic value of b_B xor b_C on a correlated pair; throws otherwise.
Bit expected_parity(KkiSignal s, Basis basis_b, Basis basis_c);

struct KkiRound {
  std::int64_t round_id = 0;
  KkiSignal signal = KkiSignal::PsiPlus;
  std::array<Basis, 2> bases{};         // Bob, Charlie
  std::array<Bit, 2> true_bits{};
  std::array<Bit, 2> announced_bits{};  // differ from true only for a cheated Bob
  std::optional<Bit> expected_parity;   // engaged iff the round sifted Kept
  bool is_sample = false;
  std::optional<bool> check_passed;     // engaged iff is_sample and Kept
  std::optional<adversary::AttackLog> attacker_log;

  bool kept() const { return expected_parity.has_value(); }
};

// Runs one full round.  Under attack, Bob's own measurement (and any swap or
// corrective unitary on checked rounds) happens only after bases are public;
// `reveal` gates the unitary cheat, which needs the signal tag first.
KkiRound run_round(std::int64_t round_id, const adversary::AttackStrategy& attack,
                   bool is_sample, StateReveal reveal, RngStream& rng);

}  // namespace qss::kki
