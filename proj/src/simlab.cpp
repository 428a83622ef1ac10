#include "qss/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qss::simlab {

void validate_config(const SimConfig& c) {
  using adversary::AttackKind;
  using adversary::CheatMode;

  if (c.rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  if (!(c.sample_frac >= 0.0 && c.sample_frac <= 1.0)) {
    throw std::invalid_argument("sample-frac must lie in [0,1]");
  }
  if (c.decoy_p) {
    if (c.defense != Defense::Decoy) {
      throw std::invalid_argument("decoy-p is only meaningful with the decoy defense");
    }
    if (!(*c.decoy_p >= 0.0 && *c.decoy_p <= 1.0)) {
      throw std::invalid_argument("decoy-p must lie in [0,1]");
    }
  }
  if (c.cheat_mode) {
    if (c.attack != AttackKind::FakeSignalCheat) {
      throw std::invalid_argument("cheat-mode applies only to the fake-signal attack");
    }
    if (c.protocol != Protocol::Kki) {
      throw std::invalid_argument(
          "cheat-mode applies only to the kki protocol (the GHZ cheat has one mode)");
    }
  }
  if (c.state_reveal && c.protocol != Protocol::Kki) {
    throw std::invalid_argument("state-reveal applies only to the kki protocol");
  }
  if (c.protocol == Protocol::Kki && c.attack == AttackKind::FakeSignalCheat &&
      c.cheat_mode.value_or(CheatMode::Forge) == CheatMode::Unitary &&
      c.state_reveal.value_or(kki::StateReveal::After) != kki::StateReveal::Before) {
    throw std::invalid_argument(
        "cheat-mode unitary requires state-reveal before: the corrective "
        "unitary depends on the signal tag");
  }
}

namespace {

// Order-independent per-chunk aggregate.
struct Acc {
  std::int64_t decoy_rounds = 0, kept = 0, discarded = 0;
  std::int64_t samples = 0, sample_errors = 0;
  std::int64_t matched_b = 0, matched_c = 0, errors_b = 0, errors_c = 0;
  std::int64_t recovery_total = 0, recovery_hits = 0;
  std::int64_t key_total = 0, key_hits = 0;

  Acc& operator+=(const Acc& o) {
    decoy_rounds += o.decoy_rounds;
    kept += o.kept;
    discarded += o.discarded;
    samples += o.samples;
    sample_errors += o.sample_errors;
    matched_b += o.matched_b;
    matched_c += o.matched_c;
    errors_b += o.errors_b;
    errors_c += o.errors_c;
    recovery_total += o.recovery_total;
    recovery_hits += o.recovery_hits;
    key_total += o.key_total;
    key_hits += o.key_hits;
    return *this;
  }
};

void tally_decoy(Acc& acc, const decoy::DecoyRecord& rec) {
  if (!rec.matched) return;
  if (rec.channel == decoy::Channel::B) {
    ++acc.matched_b;
    if (rec.error) ++acc.errors_b;
  } else {
    ++acc.matched_c;
    if (rec.error) ++acc.errors_c;
  }
}

void run_one_round(const SimConfig& c, std::int64_t round_id, Acc& acc) {
  using adversary::AttackKind;

  const adversary::AttackStrategy attack{c.attack, c.cheat_mode};
  RngStream rng(c.seed, static_cast<std::uint64_t>(round_id));

  const bool hbb = c.protocol == Protocol::Hbb99;
  const auto agent_bases = hbb ? std::span<const Basis>(hbb99::kAgentBases)
                               : std::span<const Basis>(kki::kAgentBases);

  if (c.defense == Defense::Decoy &&
      !decoy::is_protocol_round(c.decoy_p.value_or(0.8), rng)) {
    ++acc.decoy_rounds;
    const auto res = decoy::run_decoy_round(round_id, attack, agent_bases,
                                            decoy::SourceKind::Direct, rng);
    tally_decoy(acc, res.b);
    tally_decoy(acc, res.c);
    return;
  }

  const bool sample_flag = rng.next_uniform() < c.sample_frac;

  bool round_kept = false;
  std::optional<bool> check_passed;
  std::optional<Bit> stolen, charlie_bit;
  std::optional<Bit> key_guess, key_truth;

  if (hbb) {
    const auto r = hbb99::run_round(round_id, attack, sample_flag, rng);
    round_kept = r.kept();
    check_passed = r.check_passed;
    if (round_kept && !r.is_sample && r.attacker_log) {
      stolen = r.attacker_log->stolen_bit;
      charlie_bit = r.true_bits[2];
      // The attacker's key-channel bit: the stored original under the
      // fake-signal cheat, the intercepted bit under intercept-resend.
      const auto key_channel = r.attacker_log->stolen_key_bit
                                   ? r.attacker_log->stolen_key_bit
                                   : r.attacker_log->stolen_bit;
      if (key_channel) {
        key_guess = hbb99::agent_key_bit(r, hbb99::Party::Bob) ^ *key_channel;
        key_truth = hbb99::alice_key_bit(r);
      }
    }
  } else {
    const auto r = kki::run_round(round_id, attack, sample_flag,
                                  c.state_reveal.value_or(kki::StateReveal::After),
                                  rng);
    round_kept = r.kept();
    check_passed = r.check_passed;
    if (round_kept && !r.is_sample && r.attacker_log) {
      stolen = r.attacker_log->stolen_bit;
      charlie_bit = r.true_bits[1];
    }
  }

  if (round_kept) {
    ++acc.kept;
  } else {
    ++acc.discarded;
  }
  if (check_passed) {
    ++acc.samples;
    if (!*check_passed) ++acc.sample_errors;
  }
  if (stolen && charlie_bit) {
    ++acc.recovery_total;
    if (*stolen == *charlie_bit) ++acc.recovery_hits;
  }
  if (key_guess && key_truth) {
    ++acc.key_total;
    if (*key_guess == *key_truth) ++acc.key_hits;
  }
}

Acc run_range(const SimConfig& c, std::int64_t begin, std::int64_t end) {
  Acc acc;
  for (std::int64_t r = begin; r < end; ++r) run_one_round(c, r, acc);
  return acc;
}

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
  if (den <= 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

SimReport run_experiment(const SimConfig& config, int threads) {
  validate_config(config);

  Acc acc;
  if (threads <= 1) {
    acc = run_range(config, 0, config.rounds);
  } else {
    const int n = std::min<std::int64_t>(threads, config.rounds);
    std::vector<Acc> parts(static_cast<std::size_t>(n));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
      const std::int64_t begin = config.rounds * t / n;
      const std::int64_t end = config.rounds * (t + 1) / n;
      workers.emplace_back([&config, &parts, t, begin, end] {
        parts[static_cast<std::size_t>(t)] = run_range(config, begin, end);
      });
    }
    for (auto& w : workers) w.join();
    // Sums of counts are order-independent; fold in index order regardless.
    for (const auto& part : parts) acc += part;
  }

  SimReport rep;
  rep.config = config;
  rep.decoy_rounds = acc.decoy_rounds;
  rep.kept = acc.kept;
  rep.discarded = acc.discarded;
  rep.samples = acc.samples;
  rep.sample_errors = acc.sample_errors;
  rep.matched_decoys_b = acc.matched_b;
  rep.matched_decoys_c = acc.matched_c;
  rep.decoy_errors_b = acc.errors_b;
  rep.decoy_errors_c = acc.errors_c;
  rep.sift_rate = ratio(acc.kept, config.rounds - acc.decoy_rounds);
  rep.sample_error_rate = ratio(acc.sample_errors, acc.samples);
  rep.decoy_error_rate_b = ratio(acc.errors_b, acc.matched_b);
  rep.decoy_error_rate_c = ratio(acc.errors_c, acc.matched_c);
  rep.detected = decoy::detection_rule(acc.samples, acc.sample_errors) ||
                 decoy::detection_rule(acc.matched_b, acc.errors_b) ||
                 decoy::detection_rule(acc.matched_c, acc.errors_c);
  rep.attacker_recovery_rate = ratio(acc.recovery_hits, acc.recovery_total);
  if (acc.key_total > 0) {
    rep.alice_key_recovered = acc.key_hits == acc.key_total;
  }
  return rep;
}

namespace {

// Bit of `packed` for qubit q of n, MSB-first (matching outcome_distribution).
int tuple_bit(Eigen::Index packed, int q, int n) {
  return static_cast<int>((packed >> (n - 1 - q)) & 1);
}

// Every outcome with support must satisfy `ok(packed)`; zero support fails.
template <class Pred>
bool support_satisfies(const Eigen::VectorXd& dist, Pred ok) {
  bool any = false;
  for (Eigen::Index t = 0; t < dist.size(); ++t) {
    if (dist[t] <= 1e-12) continue;
    any = true;
    if (!ok(t)) return false;
  }
  return any;
}

bool check_swap_branch_table(double tol, std::ostream& out) {
  const auto joint =
      tensor(ghz3("A", "B", "C"), bell(BellOutcome::PhiPlus, "B'", "C'"));
  const auto branches = bell_decompose(joint, "C", "B'");
  bool ok = true;
  for (const auto& br : branches) {
    ok = ok && std::abs(br.probability - 0.25) <= 1e-12 && br.residual &&
         same_up_to_phase(*br.residual,
                          apply_pauli(ghz3("A", "B", "C'"), "C'",
                                      adversary::induced_pauli(br.outcome)),
                          tol);
  }
  out << (ok ? "ok   " : "FAIL ")
      << "entanglement-swap branch table (four uniform branches, Pauli residuals)\n";
  return ok;
}

bool check_fake_branch_parities(std::ostream& out) {
  // Parity of each swapped GHZ branch under the two kept basis patterns that
  // pin it down: all-X, and YY on the first two with X on the delivered qubit.
  const std::vector<Basis> xxx = {Basis::X, Basis::X, Basis::X};
  const std::vector<Basis> yyx = {Basis::Y, Basis::Y, Basis::X};
  bool ok = true;
  for (const auto outcome : kBellOrder) {
    const PauliOp e = adversary::induced_pauli(outcome);
    const auto branch = apply_pauli(ghz3("A", "B", "C'"), "C'", e);
    const int want_xxx = e == PauliOp::Z || e == PauliOp::XZ ? 1 : 0;
    const int want_yyx = 1 - want_xxx;
    const auto parity_is = [](int want) {
      return [want](Eigen::Index t) {
        return (tuple_bit(t, 0, 3) ^ tuple_bit(t, 1, 3) ^ tuple_bit(t, 2, 3)) == want;
      };
    };
    ok = ok && support_satisfies(outcome_distribution(branch, xxx), parity_is(want_xxx));
    ok = ok && support_satisfies(outcome_distribution(branch, yyx), parity_is(want_yyx));
  }
  out << (ok ? "ok   " : "FAIL ")
      << "fake-branch parity pairings (all-X and two-Y patterns per branch)\n";
  return ok;
}

bool check_generic_swap_identity(double tol, std::ostream& out) {
  std::mt19937_64 gen(0x51AB5EEDull);
  std::normal_distribution<double> nd(0.0, 1.0);
  bool ok = true;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    PureState psi;
    psi.labels = {"B", "C"};
    psi.amps.resize(4);
    for (int i = 0; i < 4; ++i) psi.amps[i] = std::complex<double>(nd(gen), nd(gen));
    psi.amps.normalize();

    const auto joint = tensor(psi, bell(BellOutcome::PhiPlus, "B'", "C'"));
    PureState relabeled;  // the same signal living on (B, C')
    relabeled.labels = {"B", "C'"};
    relabeled.amps = psi.amps;

    for (const auto& br : bell_decompose(joint, "C", "B'")) {
      ok = ok && std::abs(br.probability - 0.25) <= 1e-12 && br.residual &&
           same_up_to_phase(*br.residual,
                            apply_pauli(relabeled, "C'",
                                        adversary::induced_pauli(br.outcome)),
                            tol);
    }
  }
  out << (ok ? "ok   " : "FAIL ")
      << "generic two-qubit swap identity (100 random signals)\n";
  return ok;
}

bool check_ghz_cheat_grid(std::ostream& out) {
  // Every kept basis triple x every swap outcome: the forged announcement
  // keeps the parity check satisfied on all outcomes with support.
  const std::array<std::array<Basis, 3>, 4> kept_triples = {{
      {Basis::X, Basis::X, Basis::X},
      {Basis::X, Basis::Y, Basis::Y},
      {Basis::Y, Basis::X, Basis::Y},
      {Basis::Y, Basis::Y, Basis::X}}};
  bool ok = true;
  for (const auto& bases : kept_triples) {
    const Bit parity = *hbb99::sift_decision(bases[0], bases[1], bases[2]);
    for (const auto outcome : kBellOrder) {
      const PauliOp e = adversary::induced_pauli(outcome);
      const auto branch = apply_pauli(ghz3("A", "B", "C'"), "C'", e);
      const std::vector<Basis> bv(bases.begin(), bases.end());
      const bool flip = adversary::compensation_flip(e, bases[2]);
      ok = ok && support_satisfies(
                     outcome_distribution(branch, bv), [&](Eigen::Index t) {
                       const Bit announced =
                           Bit(tuple_bit(t, 1, 3) != 0) ^ Bit(flip);
                       return (Bit(tuple_bit(t, 0, 3) != 0) ^ announced ^
                               Bit(tuple_bit(t, 2, 3) != 0)) == parity;
                     });
    }
  }
  out << (ok ? "ok   " : "FAIL ")
      << "cheat transparency, GHZ protocol (4 kept triples x 4 swap outcomes)\n";
  return ok;
}

bool check_kki_forge_grid(std::ostream& out) {
  bool ok = true;
  for (const auto signal : kKkiSignalOrder) {
    for (const auto& [bb, bc] : kki::correlated_bases(signal)) {
      const Bit parity = kki::expected_parity(signal, bb, bc);
      for (const auto outcome : kBellOrder) {
        const PauliOp e = adversary::induced_pauli(outcome);
        const auto branch = apply_pauli(kki_source(signal, "B", "C'"), "C'", e);
        const std::vector<Basis> bv = {bb, bc};
        const bool flip = adversary::compensation_flip(e, bc);
        ok = ok && support_satisfies(
                       outcome_distribution(branch, bv), [&](Eigen::Index t) {
                         const Bit announced =
                             Bit(tuple_bit(t, 0, 2) != 0) ^ Bit(flip);
                         return (announced ^ Bit(tuple_bit(t, 1, 2) != 0)) == parity;
                       });
      }
    }
  }
  out << (ok ? "ok   " : "FAIL ")
      << "cheat transparency, kki forge mode (4 signals x 2 pairs x 4 outcomes)\n";
  return ok;
}

bool check_kki_unitary_grid(double tol, std::ostream& out) {
  bool ok = true;
  for (const auto signal : kKkiSignalOrder) {
    for (const auto outcome : kBellOrder) {
      const PauliOp e = adversary::induced_pauli(outcome);
      const PauliOp u = adversary::unitary_correction(signal, e);
      const auto source = kki_source(signal, "B", "C'");
      const auto restored = apply_pauli(apply_pauli(source, "C'", e), "B", u);
      // The corrective unitary restores the signal itself ...
      ok = ok && same_up_to_phase(restored, source, tol);
      // ... hence every kept basis pair keeps its deterministic parity.
      for (const auto& [bb, bc] : kki::correlated_bases(signal)) {
        const Bit parity = kki::expected_parity(signal, bb, bc);
        const std::vector<Basis> bv = {bb, bc};
        ok = ok && support_satisfies(
                       outcome_distribution(restored, bv), [&](Eigen::Index t) {
                         return (Bit(tuple_bit(t, 0, 2) != 0) ^
                                 Bit(tuple_bit(t, 1, 2) != 0)) == parity;
                       });
      }
    }
  }
  out << (ok ? "ok   " : "FAIL ")
      << "cheat transparency, kki unitary mode (4 signals x 4 outcomes, all pairs)\n";
  return ok;
}

}  // namespace

bool verify_identities(double tol, std::ostream& out) {
  bool ok = true;
  ok &= check_swap_branch_table(tol, out);
  ok &= check_fake_branch_parities(out);
  ok &= check_generic_swap_identity(tol, out);
  ok &= check_ghz_cheat_grid(out);
  ok &= check_kki_forge_grid(out);
  ok &= check_kki_unitary_grid(tol, out);
  out << (ok ? "all identity checks passed\n" : "identity checks FAILED\n");
  return ok;
}

}  // namespace qss::simlab
