#include "qss/kki.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace qss::kki {

KkiClass signal_class(KkiSignal s) {
  switch (s) {
    case KkiSignal::PsiPlus:
    case KkiSignal::PhiMinus: return KkiClass::A;
    case KkiSignal::CapPsiPlus:
    case KkiSignal::CapPhiMinus: return KkiClass::B;
  }
  throw std::logic_error("bad KkiSignal tag");
}

std::array<std::pair<Basis, Basis>, 2> correlated_bases(KkiSignal s) {
  if (signal_class(s) == KkiClass::A) {
    return {{{Basis::Z, Basis::Z}, {Basis::X, Basis::X}}};
  }
  return {{{Basis::Z, Basis::X}, {Basis::X, Basis::Z}}};
}

Bit expected_parity(KkiSignal s, Basis basis_b, Basis basis_c) {
  for (const auto& [bb, bc] : correlated_bases(s)) {
    if (bb == basis_b && bc == basis_c) {
      switch (s) {
        case KkiSignal::PsiPlus: return Bit(basis_b == Basis::Z);   // ZZ:1 XX:0
        case KkiSignal::PhiMinus: return Bit(basis_b == Basis::X);  // ZZ:0 XX:1
        case KkiSignal::CapPsiPlus: return Bit(false);              // ZX/XZ: 0
        case KkiSignal::CapPhiMinus: return Bit(true);              // ZX/XZ: 1
      }
      throw std::logic_error("bad KkiSignal tag");
    }
  }
  throw std::invalid_argument("expected_parity: basis pair is uncorrelated for this signal");
}

KkiRound run_round(std::int64_t round_id, const adversary::AttackStrategy& attack,
                   bool is_sample, StateReveal reveal, RngStream& rng) {
  using adversary::AttackKind;
  using adversary::CheatMode;

  const bool fake = attack.kind == AttackKind::FakeSignalCheat;
  const CheatMode mode = attack.cheat_mode.value_or(CheatMode::Forge);
  if (fake && mode == CheatMode::Unitary && reveal != StateReveal::Before) {
    throw std::invalid_argument(
        "the unitary cheat needs the signal announced before Bob's outcome "
        "(state_reveal = before)");
  }

  KkiRound r;
  r.round_id = round_id;
  r.is_sample = is_sample;

  // Canonical draw order: signal, tap draws, bases (Bob, Charlie), Charlie's
  // measurement, swap draw (checked rounds), Bob's measurement, steal draw.
  r.signal = kKkiSignalOrder[static_cast<std::size_t>(rng.next_index(4))];
  auto tap = adversary::tap_channel(kki_source(r.signal, "B", "C"), "C",
                                    kAgentBases, attack, rng);
  PureState state = std::move(tap.state);
  adversary::AttackLog log = std::move(tap.log);

  for (auto& basis : r.bases) {
    basis = kAgentBases[static_cast<std::size_t>(rng.next_index(2))];
  }

  std::tie(r.true_bits[1], state) =
      measure_one(state, tap.delivered, r.bases[1], rng.next_uniform());

  const bool correlated = [&] {
    for (const auto& [bb, bc] : correlated_bases(r.signal)) {
      if (bb == r.bases[0] && bc == r.bases[1]) return true;
    }
    return false;
  }();
  if (correlated) {
    r.expected_parity = expected_parity(r.signal, r.bases[0], r.bases[1]);
  }

  // Swap-and-correct before Bob's own measurement on checked rounds; on every
  // other path the pending operators act on disjoint qubits, so the canonical
  // order below realizes Bob's "measure after the bases are public" timing.
  if (r.kept() && is_sample && fake) {
    auto [outcome, residual] = adversary::swap_on_sample(state, "C", log, rng);
    state = std::move(residual);
    if (mode == CheatMode::Unitary) {
      state = apply_pauli(state, "B",
                          adversary::unitary_correction(r.signal, log.induced_pauli));
    }
  }

  std::tie(r.true_bits[0], state) =
      measure_one(state, "B", r.bases[0], rng.next_uniform());
  r.announced_bits = r.true_bits;

  if (r.kept() && is_sample) {
    if (fake && mode == CheatMode::Forge) {
      r.announced_bits[0] =
          adversary::cheat_announce(r.true_bits[0], log.induced_pauli, r.bases[1]);
      log.flipped_announcement = r.announced_bits[0] != r.true_bits[0];
    }
    r.check_passed =
        (r.announced_bits[0] ^ r.announced_bits[1]) == *r.expected_parity;
  } else if (r.kept()) {
    if (fake) {
      auto steal = adversary::steal_key(state, r.bases[1], std::nullopt, rng);
      log.stolen_bit = steal.stolen_bit;
      state = std::move(steal.residual);
    } else if (attack.kind == AttackKind::InterceptResend) {
      log.stolen_bit = log.intercept_bit;
    }
  }

  if (attack.kind != AttackKind::None) {
    if (state.num_qubits() > 0) log.stored = std::move(state);
    r.attacker_log = std::move(log);
  }
  return r;
}

}  // namespace qss::kki
