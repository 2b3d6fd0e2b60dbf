#include "owaqc/oracle.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "owaqc/phase_core.h"

namespace owaqc::oracle {
namespace {

constexpr double kPi = std::numbers::pi;

PhaseSchedule random_schedule(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  return {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
}

TEST(BuildState, UnitNormUniformMagnitude) {
  const TwoPhotonAmplitude state = build_state({1.0, 1.0}, 512);
  EXPECT_NEAR(state.squared_norm(), 1.0, 1e-12);
  ASSERT_EQ(state.values().size(), 256u);
  for (const Complex& v : state.values()) {
    EXPECT_NEAR(std::abs(v), 1.0 / 16.0, 1e-15);
  }
  EXPECT_EQ(state.bin_width(), 4.0 / 512);
}

TEST(BuildState, EmissionTimesAntiCorrelated) {
  const TwoPhotonAmplitude state = build_state({1.0, 1.0}, 64);
  const std::vector<double> sum = state.emission_sum_marginal();
  ASSERT_EQ(sum.size(), 129u);
  EXPECT_NEAR(sum[64], 1.0, 1e-12);
  double elsewhere = 0.0;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    if (i != 64) elsewhere += sum[i];
  }
  EXPECT_EQ(elsewhere, 0.0);
}

TEST(BuildState, DifferenceMarginalUniformOverZeroToFourT) {
  const TwoPhotonAmplitude state = build_state({1.0, 1.0}, 64);
  const std::vector<double> diff = state.emission_difference_marginal();
  ASSERT_EQ(diff.size(), 32u);
  for (double p : diff) EXPECT_NEAR(p, 1.0 / 32.0, 1e-15);
}

TEST(BuildState, RejectsBadGrid) {
  EXPECT_THROW(build_state({1.0, 1.0}, 511), std::invalid_argument);
  EXPECT_THROW(build_state({1.0, 1.0}, 4), std::invalid_argument);
  EXPECT_THROW(build_state({1.0, 1.0}, 0), std::invalid_argument);
}

TEST(Grid, BinLookupRoundTrip) {
  const TwoPhotonAmplitude state = build_state({1.0, 1.0}, 16);
  for (int k = 0; k < 16; ++k) EXPECT_EQ(state.bin_of(state.bin_center(k)), k);
  EXPECT_EQ(state.bin_of(-2.0), 0);
  EXPECT_EQ(state.bin_of(2.0), -1);
  EXPECT_EQ(state.bin_of(-2.1), -1);
}

TEST(Grid, PairAmplitudeOnlyOnAntiDiagonal) {
  const TwoPhotonAmplitude state = build_state({1.0, 1.0}, 16);
  const double t = state.bin_center(3);
  EXPECT_NE(state.pair_amplitude(t, -t), Complex{});
  EXPECT_EQ(state.pair_amplitude(-t, t), state.pair_amplitude(t, -t));
  EXPECT_EQ(state.pair_amplitude(t, -t + state.bin_width()), Complex{});
  EXPECT_EQ(state.pair_amplitude(-2.5, 2.5), Complex{});
}

TEST(PhaseInterval, ReflectedLabels) {
  EXPECT_EQ(phase_interval(-1.5, 1.0), 2);
  EXPECT_EQ(phase_interval(-0.5, 1.0), 1);
  EXPECT_EQ(phase_interval(0.5, 1.0), 3);
  EXPECT_EQ(phase_interval(1.5, 1.0), 4);
  EXPECT_EQ(phase_interval(-1.0, 1.0), 1);
  EXPECT_EQ(phase_interval(0.0, 1.0), 3);
  EXPECT_EQ(phase_interval(2.0, 1.0), 0);
  EXPECT_EQ(phase_interval(-2.0001, 1.0), 0);
}

TEST(Gates, OpenIntervals) {
  const GateWindows g = GateWindows::for_window(1.0);
  EXPECT_TRUE(g.in_early(-0.5));
  EXPECT_FALSE(g.in_early(-1.0));
  EXPECT_FALSE(g.in_early(0.0));
  EXPECT_TRUE(g.in_late(1.5));
  EXPECT_FALSE(g.in_late(1.0));
  EXPECT_FALSE(g.in_late(2.0));
}

TEST(CoincidenceAmplitude, MatchedDelayTwoEqualConstructiveTerms) {
  const TimingConfig t{1.0, 1.0};
  const TwoPhotonAmplitude state = build_state(t, 512);
  const Complex amp = coincidence_amplitude(state, PhaseSchedule{}, t, -0.5, 1.5);
  // Short-short and long-long pairings each contribute one state amplitude.
  EXPECT_NEAR(std::abs(amp), 2.0 / 16.0, 1e-12);
}

TEST(CoincidenceAmplitude, OutsideGatesIsZero) {
  const TimingConfig t{1.0, 1.0};
  const TwoPhotonAmplitude state = build_state(t, 512);
  EXPECT_EQ(coincidence_amplitude(state, {}, t, 0.5, 1.5), Complex{});
  EXPECT_EQ(coincidence_amplitude(state, {}, t, -0.5, 0.5), Complex{});
  EXPECT_EQ(coincidence_amplitude(state, {}, t, -1.5, 1.5), Complex{});
}

TEST(CoincidenceAmplitude, ZeroDelayIgnoresPhase) {
  const TimingConfig t{1.0, 0.0};
  const TwoPhotonAmplitude state = build_state(t, 512);
  std::mt19937_64 rng(2);
  const double ref = std::abs(coincidence_amplitude(state, {}, t, -0.3, 0.3 + 1.0));
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(std::abs(coincidence_amplitude(state, random_schedule(rng), t,
                                               -0.3, 0.3 + 1.0)),
                ref, 1e-12);
  }
}

TEST(Numeric, MatchedDelayDestructive) {
  const TimingConfig t{1.0, 1.0};
  const TwoPhotonAmplitude state = build_state(t, 512);
  const auto r = numeric_coincidence_probability(
      state, PhaseSchedule::bb84(0.0, kPi, 0.0, 0.0), t);
  EXPECT_NEAR(r.normalized, 0.0, 1e-12);
  EXPECT_EQ(r.tau_effective, 1.0);
  EXPECT_EQ(r.delay_bins, 128);
}

TEST(Numeric, TwoWindowDelayNoCoincidence) {
  const TimingConfig t{1.0, 2.0};
  const TwoPhotonAmplitude state = build_state(t, 512);
  EXPECT_EQ(numeric_coincidence_probability(state, {}, t).normalized, 0.0);
}

TEST(Numeric, ThreeQuarterDelayFringeRatio) {
  const TimingConfig t{1.0, 0.75};
  const TwoPhotonAmplitude state = build_state(t, 512);
  const double hi = numeric_coincidence_probability(state, {}, t).normalized;
  const double lo = numeric_coincidence_probability(
                        state, PhaseSchedule::bb84(0.0, kPi, 0.0, 0.0), t)
                        .normalized;
  EXPECT_NEAR(hi / lo, 7.0, 1e-9);
}

TEST(Numeric, AgreesWithClosedFormUpToOneWindow) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> delay_bins(0, 128);
  const TwoPhotonAmplitude state = build_state({1.0, 1.0}, 512);
  for (int i = 0; i < 100; ++i) {
    const TimingConfig t{1.0, delay_bins(rng) * state.bin_width()};
    const PhaseSchedule s = random_schedule(rng);
    EXPECT_NEAR(numeric_coincidence_probability(state, s, t).normalized,
                owaqc_coincidence_probability(s, t).normalized_value, 1e-12)
        << "tau " << t.tau;
  }
}

// Beyond one window the late-late background of the closed form has no
// counterpart in the two-photon sum; the gap is exactly a quarter of the
// second triangle.
TEST(Numeric, BeyondOneWindowMissesLateBackground) {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> delay_bins(129, 256);
  const TwoPhotonAmplitude state = build_state({1.0, 1.0}, 512);
  for (int i = 0; i < 50; ++i) {
    const TimingConfig t{1.0, delay_bins(rng) * state.bin_width()};
    const PhaseSchedule s = random_schedule(rng);
    const double closed = owaqc_coincidence_probability(s, t).normalized_value;
    const double numeric = numeric_coincidence_probability(state, s, t).normalized;
    EXPECT_NEAR(closed - numeric, 0.25 * triangle((t.tau - 1.5) / 0.5), 1e-12);
  }
}

TEST(Numeric, ConvergesAtUnalignedDelays) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> tau(0.0, 1.0);
  double coarse = 0.0;
  double fine = 0.0;
  const TwoPhotonAmplitude s512 = build_state({1.0, 1.0}, 512);
  const TwoPhotonAmplitude s1024 = build_state({1.0, 1.0}, 1024);
  for (int i = 0; i < 40; ++i) {
    const TimingConfig t{1.0, tau(rng)};
    const PhaseSchedule s = random_schedule(rng);
    const double want = owaqc_coincidence_probability(s, t).normalized_value;
    coarse = std::max(coarse, std::abs(numeric_coincidence_probability(s512, s, t).normalized - want));
    fine = std::max(fine, std::abs(numeric_coincidence_probability(s1024, s, t).normalized - want));
  }
  EXPECT_LT(fine, coarse);
  EXPECT_LT(coarse, 4.0 / 512);
}

TEST(Numeric, CommonModeImmune) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> kappa(0.0, 100.0);
  const TimingConfig t{1.0, 0.8};
  const TwoPhotonAmplitude state = build_state(t, 256);
  for (int i = 0; i < 20; ++i) {
    const PhaseSchedule s = random_schedule(rng);
    EXPECT_NEAR(
        numeric_coincidence_probability(state, s.with_common_offsets(kappa(rng), kappa(rng)), t).normalized,
        numeric_coincidence_probability(state, s, t).normalized, 1e-12);
  }
}

TEST(Numeric, NonNegative) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> tau(0.0, 2.0);
  const TwoPhotonAmplitude state = build_state({1.0, 1.0}, 128);
  for (int i = 0; i < 100; ++i) {
    EXPECT_GE(numeric_coincidence_probability(state, random_schedule(rng),
                                              {1.0, tau(rng)}).normalized,
              0.0);
  }
}

TEST(Numeric, WorkerCountDoesNotChangeResult) {
  std::mt19937_64 rng(26);
  const TimingConfig t{1.0, 0.6};
  const TwoPhotonAmplitude state = build_state(t, 512);
  const PhaseSchedule s = random_schedule(rng);
  const auto one = numeric_coincidence_probability(state, s, t, 1);
  for (unsigned w : {2u, 3u, 8u}) {
    const auto many = numeric_coincidence_probability(state, s, t, w);
    EXPECT_EQ(many.raw_sum, one.raw_sum);
    EXPECT_EQ(many.normalized, one.normalized);
  }
}

TEST(Numeric, RejectsMismatchedWindow) {
  const TwoPhotonAmplitude state = build_state({1.0, 1.0}, 64);
  EXPECT_THROW(numeric_coincidence_probability(state, {}, {2.0, 1.0}),
               std::invalid_argument);
}

TEST(Numeric, ReportsDelayRounding) {
  const TwoPhotonAmplitude state = build_state({1.0, 1.0}, 512);
  const auto r = numeric_coincidence_probability(state, {}, {1.0, 0.7});
  EXPECT_LE(std::abs(r.tau_rounding()), state.bin_width() / 2);
  EXPECT_EQ(r.tau_requested, 0.7);
}

}  // namespace
}  // namespace owaqc::oracle
