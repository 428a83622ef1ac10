#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "qss/qstate.hpp"
#include "qss/rng.hpp"

// Pluggable attack strategies for the channel that carries Charlie's photon:
//
//  * None            — passthrough.
//  * InterceptResend — measure the in-flight photon in a random basis from the
//                      protocol's agent-basis set and resend the eigenstate.
//  * FakeSignalCheat — keep the original photon, deliver one half of a fresh
//                      phi+ pair instead, and survive sample checks either by
//                      forging announcements (after a Bell measurement reveals
//                      which Pauli the swap imprinted on the delivered qubit)
//                      or, on the two-qubit protocol, by undoing that Pauli
//                      with a local unitary on the attacker's own photon.
//
// On rounds that are never checked, the attacker measures the retained qubits
// once all bases are public and recovers Charlie's outcome exactly.

namespace qss::adversary {

enum class AttackKind : std::uint8_t { None, InterceptResend, FakeSignalCheat };
enum class CheatMode : std::uint8_t { Forge, Unitary };

struct AttackStrategy {
  AttackKind kind = AttackKind::None;
  // Only meaningful for FakeSignalCheat on the two-qubit (kki) protocol.
  std::optional<CheatMode> cheat_mode;
};

// Labels of the attacker's fake Bell pair: the held half and the delivered half.
inline constexpr const char* kHeldLabel = "B'";
inline constexpr const char* kFakeLabel = "C'";

// Per-round attacker transcript.
struct AttackLog {
  // Joint residual still in the attacker's hands at the end of the round
  // (contains the stored original photon and/or the held pair half).
  std::optional<PureState> stored;
  std::optional<BellOutcome> bsm_outcome;
  // Pauli imprinted on the delivered qubit by the Bell measurement; fixed
  // table phi+ -> I, phi- -> Z, psi+ -> X, psi- -> XZ.  I when no BSM ran.
  PauliOp induced_pauli = PauliOp::I;
  bool flipped_announcement = false;
  // Recovered copy of Charlie's outcome (non-sample kept rounds).
  std::optional<Bit> stolen_bit;
  // Outcome of the stored original photon measured in Charlie's basis; on the
  // GHZ protocol this is the bit that completes Alice's key relation.
  std::optional<Bit> stolen_key_bit;
  // Intercept-resend bookkeeping.
  std::optional<Basis> intercept_basis;
  std::optional<Bit> intercept_bit;
};

struct TapResult {
  PureState state;        // joint state after the tap
  std::string delivered;  // label of the qubit that continues on to Charlie
  AttackLog log;
};

// Applies the strategy to the in-flight qubit `channel_label`.
//   None:            unchanged, delivered = channel_label.
//   InterceptResend: one basis draw over `agent_bases` (in the given order),
//                    one measurement draw; the eigenstate is resent under the
//                    same label.
//   FakeSignalCheat: appends bell(phi+, B', C') and delivers C'; the original
//                    photon and B' stay unmeasured in the joint state.
TapResult tap_channel(const PureState& state, const std::string& channel_label,
                      std::span<const Basis> agent_bases,
                      const AttackStrategy& attack, RngStream& rng);

// The Pauli the entanglement swap leaves on the delivered qubit per outcome.
PauliOp induced_pauli(BellOutcome o);

// Bell-measures the ordered pair (original photon, held half) on a checked
// round, recording outcome and induced Pauli in `log`.  Returns the outcome
// and the residual joint state.
std::pair<BellOutcome, PureState> swap_on_sample(const PureState& state,
                                                 const std::string& original_label,
                                                 AttackLog& log, RngStream& rng);

// Whether the attacker must invert his announced bit so the parity check
// still passes: true iff `e` anticommutes with the observable Charlie
// measured.  I never flips; Z flips unless Charlie measured Z; X flips unless
// X; XZ (proportional to Y) flips unless Y.
bool compensation_flip(PauliOp e, Basis charlie_basis);

// The announcement actually published on a checked round.
Bit cheat_announce(Bit own_bit, PauliOp e, Basis charlie_basis);

// The local Pauli on the attacker's own photon B that restores the two-qubit
// signal after the swap imprinted `e` on the delivered qubit:  U such that
// (U (x) e) |signal> equals |signal> up to global phase.  For the Bell-state
// signals U = e itself; for the superposition signals Z and X trade places.
PauliOp unitary_correction(KkiSignal signal, PauliOp e);

struct StealResult {
  Bit stolen_bit;                    // Charlie's outcome, recovered exactly
  std::optional<Bit> stolen_key_bit; // stored original, measured in his basis
  PureState residual;
};

// After bases are public on an unchecked kept round: measures the held pair
// half in Charlie's announced basis (inverting the outcome when that basis is
// Y, where phi+ correlations are opposite) and, when `original_label` is
// given, the stored original photon in the same basis.
StealResult steal_key(const PureState& stored, Basis charlie_basis,
                      const std::optional<std::string>& original_label,
                      RngStream& rng);

}  // namespace qss::adversary
