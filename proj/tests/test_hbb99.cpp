#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "qss/hbb99.hpp"

using namespace qss;
using namespace qss::adversary;
using namespace qss::hbb99;

namespace {

HbbRound honest_round(std::uint64_t seed, std::int64_t id, bool sample) {
  RngStream rng(seed, static_cast<std::uint64_t>(id));
  return run_round(id, AttackStrategy{}, sample, rng);
}

}  // namespace

TEST_CASE("sift_decision keeps all-X (even) and exactly-two-Y (odd) rounds") {
  using enum Basis;
  CHECK(sift_decision(X, X, X) == Bit(false));
  CHECK(sift_decision(Y, Y, X) == Bit(true));
  CHECK(sift_decision(Y, X, Y) == Bit(true));
  CHECK(sift_decision(X, Y, Y) == Bit(true));
  CHECK_FALSE(sift_decision(Y, Y, Y).has_value());
  CHECK_FALSE(sift_decision(X, X, Y).has_value());
  CHECK_FALSE(sift_decision(X, Y, X).has_value());
  CHECK_FALSE(sift_decision(Y, X, X).has_value());
  CHECK_THROWS_AS(sift_decision(Z, X, X), std::invalid_argument);
}

TEST_CASE("honest rounds: checks always pass and the key identity holds") {
  int kept = 0, samples = 0;
  int basis_y[3] = {0, 0, 0};
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const bool sample = (i % 4 == 0);
    const auto r = honest_round(101, i, sample);
    CHECK(r.round_id == i);
    CHECK_FALSE(r.attacker_log.has_value());
    for (int q = 0; q < 3; ++q) {
      CHECK(r.announced_bits[q] == r.true_bits[q]);  // nobody lies
      if (r.bases[q] == Basis::Y) ++basis_y[q];
    }
    if (!r.kept()) {
      CHECK_FALSE(r.check_passed.has_value());
      continue;
    }
    ++kept;
    if (r.is_sample) {
      ++samples;
      REQUIRE(r.check_passed.has_value());
      CHECK(*r.check_passed);
    } else {
      const auto ka = alice_key_bit(r);
      const auto kb = agent_key_bit(r, Party::Bob);
      const auto kc = agent_key_bit(r, Party::Charlie);
      CHECK(ka == (kb ^ kc));
    }
  }
  // Half of all basis triples survive the sift.
  const double sift = double(kept) / n;
  CHECK(std::abs(sift - 0.5) < 4 * std::sqrt(0.25 / n));
  CHECK(samples > 0);
  // Each participant draws X and Y evenly.
  for (const int y : basis_y) {
    CHECK(std::abs(double(y) / n - 0.5) < 4 * std::sqrt(0.25 / n));
  }
}

TEST_CASE("fake-signal rounds: samples stay clean, keys leak completely") {
  const AttackStrategy fake{AttackKind::FakeSignalCheat, std::nullopt};
  int samples = 0, key_rounds = 0;
  for (int i = 0; i < 3000; ++i) {
    RngStream rng(202, static_cast<std::uint64_t>(i));
    const bool sample = (i % 3 == 0);
    const auto r = run_round(i, fake, sample, rng);
    REQUIRE(r.attacker_log.has_value());
    if (!r.kept()) continue;
    if (r.is_sample) {
      ++samples;
      REQUIRE(r.check_passed.has_value());
      CHECK(*r.check_passed);  // the compensation makes every check pass
      REQUIRE(r.attacker_log->bsm_outcome.has_value());
      // Bob's announcement differs from his honest bit exactly when the
      // imprinted Pauli anticommutes with Charlie's check observable.
      const bool flip = compensation_flip(r.attacker_log->induced_pauli,
                                          r.bases[2]);
      CHECK(r.announced_bits[1] == (r.true_bits[1] ^ Bit(flip)));
      CHECK(r.attacker_log->flipped_announcement == flip);
      CHECK(r.announced_bits[0] == r.true_bits[0]);
      CHECK(r.announced_bits[2] == r.true_bits[2]);
    } else {
      ++key_rounds;
      REQUIRE(r.attacker_log->stolen_bit.has_value());
      REQUIRE(r.attacker_log->stolen_key_bit.has_value());
      // Channel 1: the held pair half reproduces Charlie's outcome always.
      CHECK(*r.attacker_log->stolen_bit == r.true_bits[2]);
      // Channel 2: the stored original photon completes Alice's key relation.
      const auto guess =
          agent_key_bit(r, Party::Bob) ^ *r.attacker_log->stolen_key_bit;
      CHECK(guess == alice_key_bit(r));
    }
  }
  CHECK(samples > 300);
  CHECK(key_rounds > 600);
}

TEST_CASE("intercept-resend rounds: quarter error rate, 3/4 recovery") {
  const AttackStrategy ir{AttackKind::InterceptResend, std::nullopt};
  int checks = 0, errors = 0, key_rounds = 0, recovered = 0;
  for (int i = 0; i < 12000; ++i) {
    RngStream rng(303, static_cast<std::uint64_t>(i));
    const auto r = run_round(i, ir, i % 2 == 0, rng);
    if (!r.kept()) continue;
    if (r.is_sample) {
      ++checks;
      if (!*r.check_passed) ++errors;
    } else {
      ++key_rounds;
      REQUIRE(r.attacker_log.has_value());
      REQUIRE(r.attacker_log->stolen_bit.has_value());
      CHECK_FALSE(r.attacker_log->stolen_key_bit.has_value());
      if (*r.attacker_log->stolen_bit == r.true_bits[2]) ++recovered;
    }
  }
  const double err = double(errors) / checks;
  CHECK(std::abs(err - 0.25) < 4 * std::sqrt(0.25 * 0.75 / checks));
  const double rec = double(recovered) / key_rounds;
  CHECK(std::abs(rec - 0.75) < 4 * std::sqrt(0.25 * 0.75 / key_rounds));
}

TEST_CASE("key bits are only defined for kept non-sample rounds") {
  const auto first_round_where = [](std::uint64_t seed, bool sample, bool want_kept) {
    for (std::int64_t i = 0;; ++i) {
      const auto r = honest_round(seed, i, sample);
      if (r.kept() == want_kept) return r;
    }
  };
  const auto sampled = first_round_where(404, true, true);
  CHECK_THROWS_AS(alice_key_bit(sampled), std::invalid_argument);
  CHECK_THROWS_AS(agent_key_bit(sampled, Party::Bob), std::invalid_argument);

  const auto discarded = first_round_where(405, false, false);
  CHECK_THROWS_AS(alice_key_bit(discarded), std::invalid_argument);

  const auto key_round = first_round_where(406, false, true);
  CHECK_NOTHROW(alice_key_bit(key_round));
  CHECK_NOTHROW(agent_key_bit(key_round, Party::Charlie));
  CHECK_THROWS_AS(agent_key_bit(key_round, Party::Alice), std::invalid_argument);
}

TEST_CASE("rounds replay bit-for-bit from the same seeded stream") {
  for (const auto kind :
       {AttackKind::None, AttackKind::InterceptResend, AttackKind::FakeSignalCheat}) {
    const AttackStrategy strat{kind, std::nullopt};
    for (std::int64_t i = 0; i < 40; ++i) {
      RngStream a(515, static_cast<std::uint64_t>(i));
      RngStream b(515, static_cast<std::uint64_t>(i));
      const auto r1 = run_round(i, strat, i % 2 == 0, a);
      const auto r2 = run_round(i, strat, i % 2 == 0, b);
      CHECK(r1.bases == r2.bases);
      CHECK(r1.true_bits == r2.true_bits);
      CHECK(r1.announced_bits == r2.announced_bits);
      CHECK(r1.check_passed == r2.check_passed);
      CHECK(r1.attacker_log.has_value() == r2.attacker_log.has_value());
      if (r1.attacker_log) {
        CHECK(r1.attacker_log->stolen_bit == r2.attacker_log->stolen_bit);
        CHECK(r1.attacker_log->stolen_key_bit == r2.attacker_log->stolen_key_bit);
      }
    }
  }
}
