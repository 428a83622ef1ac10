#include "qss/adversary.hpp"

#include <stdexcept>

namespace qss::adversary {

TapResult tap_channel(const PureState& state, const std::string& channel_label,
                      std::span<const Basis> agent_bases,
                      const AttackStrategy& attack, RngStream& rng) {
  label_position(state, channel_label);  // precondition: qubit is in flight

  TapResult out;
  switch (attack.kind) {
    case AttackKind::None:
      out.state = state;
      out.delivered = channel_label;
      return out;

    case AttackKind::InterceptResend: {
      if (agent_bases.empty()) {
        throw std::invalid_argument("intercept-resend needs a basis set");
      }
      const Basis basis =
          agent_bases[static_cast<std::size_t>(rng.next_index(static_cast<int>(agent_bases.size())))];
      auto [bit, rest] = measure_one(state, channel_label, basis, rng.next_uniform());
      out.state = tensor(rest, make_ket(bit, basis, channel_label));
      out.delivered = channel_label;
      out.log.intercept_basis = basis;
      out.log.intercept_bit = bit;
      return out;
    }

    case AttackKind::FakeSignalCheat:
      out.state = tensor(state, bell(BellOutcome::PhiPlus, kHeldLabel, kFakeLabel));
      out.delivered = kFakeLabel;
      return out;
  }
  throw std::logic_error("bad AttackKind tag");
}

PauliOp induced_pauli(BellOutcome o) {
  switch (o) {
    case BellOutcome::PhiPlus: return PauliOp::I;
    case BellOutcome::PhiMinus: return PauliOp::Z;
    case BellOutcome::PsiPlus: return PauliOp::X;
    case BellOutcome::PsiMinus: return PauliOp::XZ;
  }
  throw std::logic_error("bad BellOutcome tag");
}

std::pair<BellOutcome, PureState> swap_on_sample(const PureState& state,
                                                 const std::string& original_label,
                                                 AttackLog& log, RngStream& rng) {
  auto [outcome, residual] =
      measure_bell(state, original_label, kHeldLabel, rng.next_uniform());
  log.bsm_outcome = outcome;
  log.induced_pauli = induced_pauli(outcome);
  return {outcome, std::move(residual)};
}

bool compensation_flip(PauliOp e, Basis charlie_basis) {
  switch (e) {
    case PauliOp::I: return false;
    case PauliOp::Z: return charlie_basis != Basis::Z;
    case PauliOp::X: return charlie_basis != Basis::X;
    case PauliOp::XZ: return charlie_basis != Basis::Y;
  }
  throw std::logic_error("bad PauliOp tag");
}

Bit cheat_announce(Bit own_bit, PauliOp e, Basis charlie_basis) {
  return own_bit ^ Bit(compensation_flip(e, charlie_basis));
}

PauliOp unitary_correction(KkiSignal signal, PauliOp e) {
  const bool superposition_signal =
      signal == KkiSignal::CapPsiPlus || signal == KkiSignal::CapPhiMinus;
  if (!superposition_signal) return e;
  switch (e) {
    case PauliOp::Z: return PauliOp::X;
    case PauliOp::X: return PauliOp::Z;
    case PauliOp::I: return PauliOp::I;
    case PauliOp::XZ: return PauliOp::XZ;
  }
  throw std::logic_error("bad PauliOp tag");
}

StealResult steal_key(const PureState& stored, Basis charlie_basis,
                      const std::optional<std::string>& original_label,
                      RngStream& rng) {
  auto [held_bit, rest] =
      measure_one(stored, kHeldLabel, charlie_basis, rng.next_uniform());
  StealResult out;
  // phi+ reads equal on both halves in Z and X and inverted in Y.
  out.stolen_bit = held_bit ^ Bit(charlie_basis == Basis::Y);
  if (original_label) {
    auto [orig_bit, rest2] =
        measure_one(rest, *original_label, charlie_basis, rng.next_uniform());
    out.stolen_key_bit = orig_bit;
    out.residual = std::move(rest2);
  } else {
    out.residual = std::move(rest);
  }
  return out;
}

}  // namespace qss::adversary
