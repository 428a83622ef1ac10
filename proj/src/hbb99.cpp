#include "qss/hbb99.hpp"

#include <stdexcept>
#include <utility>

namespace qss::hbb99 {

std::optional<Bit> sift_decision(Basis a, Basis b, Basis c) {
  int y_count = 0;
  for (const Basis basis : {a, b, c}) {
    if (basis == Basis::Z) {
      throw std::invalid_argument("hbb99 sifting is defined for X/Y bases only");
    }
    if (basis == Basis::Y) ++y_count;
  }
  if (y_count == 0) return Bit(false);  // XXX: even parity
  if (y_count == 2) return Bit(true);   // two-Y triples: odd parity
  return std::nullopt;
}

HbbRound run_round(std::int64_t round_id, const adversary::AttackStrategy& attack,
                   bool is_sample, RngStream& rng) {
  using adversary::AttackKind;

  HbbRound r;
  r.round_id = round_id;
  r.is_sample = is_sample;

  // Canonical draw order: tap draws, then bases (Alice, Bob, Charlie), then
  // measurements (Alice, Bob, Charlie's delivered qubit), then attack draws.
  auto tap = adversary::tap_channel(ghz3("A", "B", "C"), "C", kAgentBases,
                                    attack, rng);
  PureState state = std::move(tap.state);
  adversary::AttackLog log = std::move(tap.log);

  for (auto& basis : r.bases) {
    basis = kAgentBases[static_cast<std::size_t>(rng.next_index(2))];
  }

  // Under the fake-signal attack Bob physically postpones his measurements
  // until the bases are public; the observables involved act on disjoint
  // qubits and commute, so one canonical measurement order reproduces the
  // joint distribution of that timing exactly.
  std::tie(r.true_bits[0], state) =
      measure_one(state, "A", r.bases[0], rng.next_uniform());
  std::tie(r.true_bits[1], state) =
      measure_one(state, "B", r.bases[1], rng.next_uniform());
  std::tie(r.true_bits[2], state) =
      measure_one(state, tap.delivered, r.bases[2], rng.next_uniform());
  r.announced_bits = r.true_bits;

  r.expected_parity = sift_decision(r.bases[0], r.bases[1], r.bases[2]);

  if (r.kept() && is_sample) {
    if (attack.kind == AttackKind::FakeSignalCheat) {
      auto [outcome, residual] = adversary::swap_on_sample(state, "C", log, rng);
      state = std::move(residual);
      r.announced_bits[1] =
          adversary::cheat_announce(r.true_bits[1], log.induced_pauli, r.bases[2]);
      log.flipped_announcement = r.announced_bits[1] != r.true_bits[1];
    }
    r.check_passed = (r.announced_bits[0] ^ r.announced_bits[1] ^
                      r.announced_bits[2]) == *r.expected_parity;
  } else if (r.kept()) {
    if (attack.kind == AttackKind::FakeSignalCheat) {
      auto steal = adversary::steal_key(state, r.bases[2], std::string("C"), rng);
      log.stolen_bit = steal.stolen_bit;
      log.stolen_key_bit = steal.stolen_key_bit;
      state = std::move(steal.residual);
    } else if (attack.kind == AttackKind::InterceptResend) {
      // The intercepted bit is the attacker's estimate of Charlie's outcome.
      log.stolen_bit = log.intercept_bit;
    }
  }

  if (attack.kind != AttackKind::None) {
    if (state.num_qubits() > 0) log.stored = std::move(state);
    r.attacker_log = std::move(log);
  }
  return r;
}

namespace {

void require_key_round(const HbbRound& r) {
  if (!r.kept()) throw std::invalid_argument("key bits exist only for kept rounds");
  if (r.is_sample) {
    throw std::invalid_argument("sampled rounds are consumed by checking");
  }
}

}  // namespace

Bit alice_key_bit(const HbbRound& r) {
  require_key_round(r);
  return r.true_bits[0] ^ *r.expected_parity;
}

Bit agent_key_bit(const HbbRound& r, Party p) {
  require_key_round(r);
  switch (p) {
    case Party::Bob: return r.true_bits[1];
    case Party::Charlie: return r.true_bits[2];
    case Party::Alice:
      throw std::invalid_argument("Alice is not an agent; use alice_key_bit");
  }
  throw std::logic_error("bad Party tag");
}

}  // namespace qss::hbb99
