#include "owaqc/protocol.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "brute_force.h"

namespace owaqc {
namespace {

constexpr double kPi = std::numbers::pi;

SessionConfig ideal(std::uint64_t pulses, std::uint64_t seed = 1) {
  SessionConfig c;
  c.pulses = pulses;
  c.seed = seed;
  return c;
}

TEST(Bb84, PreparedPhases) {
  EXPECT_EQ(prepare(Basis::kZ, 0).encoded_phase, 0.0);
  EXPECT_EQ(prepare(Basis::kZ, 1).encoded_phase, kPi);
  EXPECT_EQ(prepare(Basis::kX, 0).encoded_phase, kPi / 2);
  EXPECT_EQ(prepare(Basis::kX, 1).encoded_phase, 1.5 * kPi);
}

TEST(Bb84, MatchedBasesAreDeterministic) {
  for (Protocol p : {Protocol::kAqc, Protocol::kOwAqc}) {
    for (Basis b : {Basis::kZ, Basis::kX}) {
      for (int bit : {0, 1}) {
        const auto s = PhaseSchedule::bb84(0.0, prepare(b, bit).encoded_phase,
                                           0.0, measurement_phase(b));
        const OutcomeProbabilities o = readout_probabilities(p, s, {1.0, 1.0});
        EXPECT_NEAR(bit == 0 ? o.port0 : o.port1, 1.0, 1e-15);
        EXPECT_NEAR(bit == 0 ? o.port1 : o.port0, 0.0, 1e-15);
      }
    }
  }
}

TEST(Bb84, MismatchedBasesAreFair) {
  const auto s = PhaseSchedule::bb84(0.0, prepare(Basis::kZ, 1).encoded_phase,
                                     0.0, measurement_phase(Basis::kX));
  const OutcomeProbabilities o = readout_probabilities(Protocol::kOwAqc, s, {1.0, 1.0});
  EXPECT_NEAR(o.port0, 0.5, 1e-15);
  EXPECT_NEAR(o.port1, 0.5, 1e-15);
}

TEST(Readout, OutcomesSumToTotalCoincidenceWeight) {
  const auto s = PhaseSchedule::bb84(0.0, 1.0, 0.0, 0.0);
  const OutcomeProbabilities o = readout_probabilities(Protocol::kOwAqc, s, {1.0, 0.75});
  // Background counts fall equally in both outcomes.
  EXPECT_NEAR(o.total(), 1.0, 1e-15);
  EXPECT_NEAR(readout_probabilities(Protocol::kOwAqc, s, {1.0, 2.0}).total(), 0.0, 1e-15);
}

TEST(InterceptResend, SameBasisResendsAliceState) {
  for (Basis b : {Basis::kZ, Basis::kX}) {
    for (int bit : {0, 1}) {
      const Bb84Choice a = prepare(b, bit);
      EXPECT_EQ(apply_intercept_resend(a, b, 0.999), a.encoded_phase);
      EXPECT_EQ(apply_intercept_resend(a, b, 0.0), a.encoded_phase);
    }
  }
}

TEST(InterceptResend, OtherBasisSplitsEvenly) {
  const Bb84Choice a = prepare(Basis::kZ, 0);
  EXPECT_EQ(apply_intercept_resend(a, Basis::kX, 0.49),
            prepare(Basis::kX, 0).encoded_phase);
  EXPECT_EQ(apply_intercept_resend(a, Basis::kX, 0.51),
            prepare(Basis::kX, 1).encoded_phase);
}

TEST(BruteForce, InterceptResendExpectation) {
  EXPECT_NEAR(testing::intercept_resend_qber(), 0.25, 1e-15);
  EXPECT_NEAR(testing::intercept_resend_qber(0.5), 0.125, 1e-15);
  EXPECT_EQ(testing::intercept_resend_qber(0.0), 0.0);
}

TEST(Session, IdealChannelNoErrors) {
  for (Protocol p : {Protocol::kAqc, Protocol::kOwAqc}) {
    const SessionResult r = run_session(p, ideal(20000));
    EXPECT_EQ(r.errors, 0u);
    EXPECT_EQ(r.qber, 0.0);
    EXPECT_NEAR(r.sifted_fraction(), 0.5, 0.02);
    EXPECT_EQ(r.alice_key, r.bob_key);
    EXPECT_EQ(r.alice_key.size(), r.sifted_length);
  }
}

TEST(Session, InterceptResendMatchesEnumeration) {
  SessionConfig c = ideal(100000, 3);
  c.attack.kind = AttackKind::kInterceptResend;
  const SessionResult r = run_session(Protocol::kOwAqc, c);
  EXPECT_NEAR(r.qber, testing::intercept_resend_qber(), 0.01);
  c.attack.fraction = 0.5;
  EXPECT_NEAR(run_session(Protocol::kOwAqc, c).qber,
              testing::intercept_resend_qber(0.5), 0.01);
}

TEST(Session, DeterministicForSeed) {
  SessionConfig c = ideal(5000, 42);
  c.channel.dark_count_probability_per_gate = 0.01;
  c.drift.phase_drift_stddev_per_pulse = 0.1;
  EXPECT_EQ(run_session(Protocol::kOwAqc, c), run_session(Protocol::kOwAqc, c));
  SessionConfig d = c;
  d.seed = 43;
  EXPECT_NE(run_session(Protocol::kOwAqc, c).alice_key,
            run_session(Protocol::kOwAqc, d).alice_key);
}

TEST(Session, PostselectionHalvesDetections) {
  SessionConfig c = ideal(100000, 5);
  const auto with = run_session(Protocol::kOwAqc, c);
  c.channel.postselection_enabled = false;
  const auto without = run_session(Protocol::kOwAqc, c);
  EXPECT_NEAR(with.detection_rate(), 0.5, 0.01);
  EXPECT_NEAR(without.detection_rate(), 1.0, 1e-12);
}

TEST(Session, LossCountsPerPhoton) {
  SessionConfig c = ideal(200000, 6);
  c.channel.per_photon_transmittance = 0.5;
  const double aqc = run_session(Protocol::kAqc, c).detection_rate();
  const double ow = run_session(Protocol::kOwAqc, c).detection_rate();
  EXPECT_NEAR(aqc, 0.25, 0.005);
  EXPECT_NEAR(ow, 0.125, 0.005);
  EXPECT_NEAR(ow / aqc, 0.5, 0.05);
}

// Common-mode phase drift must not show up in the statistics: compare error
// counts with and without drift on the same seed.
TEST(Session, PhaseDriftIsCompensated) {
  SessionConfig c = ideal(50000, 7);
  c.channel.dark_count_probability_per_gate = 0.005;
  const auto still = run_session(Protocol::kOwAqc, c);
  c.drift.phase_drift_stddev_per_pulse = 0.5;
  c.alice_common_phase = 17.0;
  c.bob_common_phase = -3.0;
  const auto drifting = run_session(Protocol::kOwAqc, c);
  EXPECT_EQ(drifting.detections, still.detections);
  EXPECT_EQ(drifting.errors, still.errors);

  SessionConfig ideal_drift = ideal(20000, 8);
  ideal_drift.drift.phase_drift_stddev_per_pulse = 1.0;
  EXPECT_EQ(run_session(Protocol::kAqc, ideal_drift).errors, 0u);
  EXPECT_EQ(run_session(Protocol::kOwAqc, ideal_drift).errors, 0u);
}

TEST(Session, DelayMismatchLowersVisibility) {
  SessionConfig c = ideal(200000, 9);
  c.timing.tau = 0.75;
  const auto r = run_session(Protocol::kOwAqc, c);
  const double v = 1.0 - 2.0 * r.qber;
  const double se = 2.0 * std::sqrt(r.qber * (1.0 - r.qber) / r.sifted_length);
  EXPECT_NEAR(v, *visibility(c.timing), 3.0 * se);
}

TEST(Session, DelayTableCycles) {
  DriftModel d;
  d.delay_table = {0.5, 1.0};
  EXPECT_EQ(d.tau_at(0, 1.0), 0.5);
  EXPECT_EQ(d.tau_at(3, 1.0), 1.0);
  DriftModel rate;
  rate.delay_rate_per_pulse = 1e-3;
  EXPECT_NEAR(rate.tau_at(100, 1.0), 1.1, 1e-12);
  rate.delay_rate_per_pulse = -1.0;
  EXPECT_EQ(rate.tau_at(10, 1.0), 0.0);
}

TEST(Session, QberGrowsWithDarkCounts) {
  double previous = -1.0;
  for (double dark : {0.0, 0.01, 0.05, 0.2}) {
    SessionConfig c = ideal(50000, 10);
    c.channel.per_photon_transmittance = 0.5;
    c.channel.dark_count_probability_per_gate = dark;
    const double q = run_session(Protocol::kOwAqc, c).qber;
    EXPECT_GT(q, previous);
    previous = q;
  }
}

TEST(Session, BackscatterHurtsOnlyRoundTrip) {
  SessionConfig c = ideal(50000, 11);
  const auto ow_clean = run_session(Protocol::kOwAqc, c);
  double previous = -1.0;
  for (double b : {0.0, 0.02, 0.1}) {
    c.channel.backscatter_click_probability = b;
    const double q = run_session(Protocol::kAqc, c).qber;
    EXPECT_GT(q, previous);
    previous = q;
    EXPECT_EQ(run_session(Protocol::kOwAqc, c), ow_clean);
  }
}

TEST(Session, RejectsInvalidConfig) {
  EXPECT_THROW(run_session(Protocol::kOwAqc, ideal(0)), std::invalid_argument);
  SessionConfig c = ideal(10);
  c.channel.per_photon_transmittance = 0.0;
  EXPECT_THROW(run_session(Protocol::kOwAqc, c), std::invalid_argument);
  c = ideal(10);
  c.channel.dark_count_probability_per_gate = 1.0;
  EXPECT_THROW(run_session(Protocol::kOwAqc, c), std::invalid_argument);
  c = ideal(10);
  c.attack.fraction = 1.5;
  EXPECT_THROW(run_session(Protocol::kOwAqc, c), std::invalid_argument);
  c = ideal(10);
  c.timing.tau = -1.0;
  EXPECT_THROW(run_session(Protocol::kOwAqc, c), std::invalid_argument);
}

TEST(Session, JsonFieldNames) {
  const auto r = run_session(Protocol::kOwAqc, ideal(100));
  const auto j = to_json(r, true);
  for (const char* key : {"protocol", "seed", "pulses_sent", "detections",
                          "sifted_length", "errors", "qber", "per_basis",
                          "alice_key", "bob_key"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["protocol"], "ow-aqc");
  EXPECT_FALSE(to_json(r).contains("alice_key"));
}

TEST(Fringe, CountsFollowOutcomeProbability) {
  SessionConfig c = ideal(100000, 12);
  c.channel.postselection_enabled = false;
  const FringeCounts f = measure_fringe_point(Protocol::kOwAqc, c, kPi / 3);
  const double p0 = (1.0 + std::cos(kPi / 3)) / 2.0;
  const double frac = static_cast<double>(f.port0) / f.pulses;
  EXPECT_NEAR(frac, p0, 4.0 * std::sqrt(p0 * (1 - p0) / f.pulses));
  EXPECT_EQ(f.port0 + f.port1, f.pulses);
}

TEST(TrojanHorse, Classification) {
  EXPECT_EQ(trojan_horse_exposure(Protocol::kOwAqc, true).exposure, Exposure::kImmune);
  EXPECT_EQ(trojan_horse_exposure(Protocol::kOwAqc, false).exposure, Exposure::kExposed);
  EXPECT_EQ(trojan_horse_exposure(Protocol::kAqc, true).exposure, Exposure::kExposed);
  EXPECT_EQ(trojan_horse_exposure(Protocol::kAqc, false).exposure, Exposure::kExposed);
}

TEST(ProtocolNames, RoundTrip) {
  EXPECT_EQ(parse_protocol("aqc"), Protocol::kAqc);
  EXPECT_EQ(parse_protocol(to_string(Protocol::kOwAqc)), Protocol::kOwAqc);
  EXPECT_THROW(parse_protocol("AQC"), std::invalid_argument);
}

}  // namespace
}  // namespace owaqc
