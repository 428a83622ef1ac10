#include "qss/decoy.hpp"

#include <stdexcept>
#include <utility>

namespace qss::decoy {

namespace {

// Canonical order of the decoy state set for the single index draw.
constexpr std::array<std::pair<Basis, bool>, 4> kDecoyStates = {{
    {Basis::X, false}, {Basis::X, true}, {Basis::Y, false}, {Basis::Y, true}}};

}  // namespace

DecoyPrep decoy_source(const std::string& label, RngStream& rng) {
  const auto [basis, one] =
      kDecoyStates[static_cast<std::size_t>(rng.next_index(4))];
  DecoyPrep out;
  out.prep_basis = basis;
  out.prep_bit = Bit(one);
  out.photon = make_ket(out.prep_bit, basis, label);
  return out;
}

DecoyPrep ghz_decoy_source(const std::string& label, RngStream& rng) {
  constexpr std::array<Basis, 2> xy = {Basis::X, Basis::Y};
  const Basis basis_b = xy[static_cast<std::size_t>(rng.next_index(2))];
  const Basis basis_c = xy[static_cast<std::size_t>(rng.next_index(2))];

  PureState state = ghz3("ghz:A", "ghz:B", "ghz:C");
  auto [bit_b, after_b] = measure_one(state, "ghz:B", basis_b, rng.next_uniform());
  auto [bit_c, survivor] =
      measure_one(after_b, "ghz:C", basis_c, rng.next_uniform());

  // The surviving photon is one of the four decoy states; identify which.
  for (const auto& [basis, one] : kDecoyStates) {
    if (same_up_to_phase(survivor, make_ket(Bit(one), basis, "ghz:A"), 1e-10)) {
      DecoyPrep out;
      out.prep_basis = basis;
      out.prep_bit = Bit(one);
      out.photon = make_ket(out.prep_bit, basis, label);
      return out;
    }
  }
  throw std::logic_error("GHZ-measured photon fell outside the decoy state set");
}

bool is_protocol_round(double p, RngStream& rng) {
  return rng.next_uniform() < p;
}

DecoyRoundResult run_decoy_round(std::int64_t round_id,
                                 const adversary::AttackStrategy& attack,
                                 std::span<const Basis> agent_bases,
                                 SourceKind source, RngStream& rng) {
  const auto draw = source == SourceKind::Direct ? decoy_source : ghz_decoy_source;

  // Canonical draw order: decoy B, decoy C, tap draws, Bob's basis, Charlie's
  // basis, Bob's measurement, Charlie's measurement.
  const DecoyPrep prep_b = draw("B", rng);
  const DecoyPrep prep_c = draw("C", rng);

  auto tap = adversary::tap_channel(tensor(prep_b.photon, prep_c.photon), "C",
                                    agent_bases, attack, rng);
  PureState state = std::move(tap.state);

  const int n_bases = static_cast<int>(agent_bases.size());
  const Basis bob_basis =
      agent_bases[static_cast<std::size_t>(rng.next_index(n_bases))];
  const Basis charlie_basis =
      agent_bases[static_cast<std::size_t>(rng.next_index(n_bases))];

  auto [bob_bit, after_bob] = measure_one(state, "B", bob_basis, rng.next_uniform());
  auto [charlie_bit, rest] =
      measure_one(after_bob, tap.delivered, charlie_basis, rng.next_uniform());

  const auto record = [round_id](Channel ch, const DecoyPrep& prep, Basis basis,
                                 Bit bit) {
    DecoyRecord rec;
    rec.round_id = round_id;
    rec.channel = ch;
    rec.prep_basis = prep.prep_basis;
    rec.prep_bit = prep.prep_bit;
    rec.agent_basis = basis;
    rec.agent_bit = bit;
    rec.matched = basis == prep.prep_basis;
    rec.error = rec.matched && !(bit == prep.prep_bit);
    return rec;
  };

  DecoyRoundResult out;
  out.b = record(Channel::B, prep_b, bob_basis, bob_bit);
  out.c = record(Channel::C, prep_c, charlie_basis, charlie_bit);
  if (attack.kind != adversary::AttackKind::None) {
    auto log = std::move(tap.log);
    if (rest.num_qubits() > 0) log.stored = std::move(rest);
    out.attacker_log = std::move(log);
  }
  return out;
}

ChannelCheck decoy_check(std::span<const DecoyRecord> records, Channel channel) {
  ChannelCheck out;
  for (const auto& rec : records) {
    if (rec.channel != channel || !rec.matched) continue;
    ++out.matched;
    if (rec.error) ++out.errors;
  }
  if (out.matched > 0) {
    out.error_rate = static_cast<double>(out.errors) / static_cast<double>(out.matched);
  }
  return out;
}

bool detection_rule(std::int64_t checked, std::int64_t errors,
                    std::int64_t min_count, double rate_threshold) {
  if (checked <= 0) return false;
  if (checked >= min_count) return errors > 0;
  return static_cast<double>(errors) / static_cast<double>(checked) > rate_threshold;
}

}  // namespace qss::decoy
