#pragma once

// Phase algebra shared by the round-trip (AQC) and one-way entangled-photon
// (OW-AQC) autocompensating schemes.
//
// Conventions:
//   * all phases are radians, unwrapped;
//   * all times are in the same arbitrary unit, with the detector position
//     absorbed into a zero time origin;
//   * "raw" probabilities are the unnormalized right-hand sides, "normalized"
//     divides by 2 so the ideal maximum at tau == T is exactly 1.

#include <optional>

namespace owaqc {

// Modulator settings for the four time intervals, Alice (a*) and Bob (b*).
struct PhaseSchedule {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a4 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double b4 = 0.0;

  double delta_a() const { return a4 - a3; }
  double delta_b() const { return b4 - b3; }

  bool is_finite() const;

  // Schedule used for interferometric BB84: the first two intervals share a
  // common setting, the last two differ by the encoded phase.
  static PhaseSchedule bb84(double alice_common, double alice_delta,
                            double bob_common, double bob_delta);

  // Adds kappa_a to every Alice phase and kappa_b to every Bob phase.
  PhaseSchedule with_common_offsets(double kappa_a, double kappa_b) const;

  bool operator==(const PhaseSchedule&) const = default;
};

struct TimingConfig {
  double t_window = 1.0;  // T > 0
  double tau = 1.0;       // Mach-Zehnder delay, >= 0

  // Throws std::invalid_argument unless T > 0 and tau >= 0 (both finite).
  void validate() const;
};

struct InterferenceResult {
  double raw_value = 0.0;
  double normalized_value = 0.0;
  double interference_phase = 0.0;
};

// The three triangle weights of the coincidence probability: the interfering
// term and the two non-interfering background terms.
struct CoincidenceWeights {
  double interfering = 0.0;        // Lambda((tau - T) / T)
  double early_background = 0.0;   // Lambda((tau - T/2) / (T/2))
  double late_background = 0.0;    // Lambda((tau - 3T/2) / (T/2))

  double background() const { return 0.5 * (early_background + late_background); }
  bool any_coincidence() const {
    return interfering > 0.0 || early_background > 0.0 || late_background > 0.0;
  }
};

// Lambda(x) = 1 - |x| on the open interval (-1, 1), zero elsewhere.
double triangle(double x);

// (a2 - a1) + (b2 - b1) + (a4 - a3) + (b4 - b3).
double interference_phase(const PhaseSchedule& s);

InterferenceResult aqc_detection_probability(const PhaseSchedule& s);

CoincidenceWeights coincidence_weights(const TimingConfig& t);

// Throws std::invalid_argument for an invalid schedule or timing.
InterferenceResult owaqc_coincidence_probability(const PhaseSchedule& s,
                                                 const TimingConfig& t);

// Fringe visibility of the coincidence rate as the interference phase is
// scanned. std::nullopt is the no-coincidence marker (all weights zero,
// e.g. tau >= 2T).
std::optional<double> visibility(const TimingConfig& t);

// Maps a round-trip schedule onto the one-way schedule obtained by reflecting
// the outbound traces about t = 0. Under the interval labels used here the
// reflection leaves every field in place, so the mapping is the identity; it
// exists so the equivalence can be exercised directly.
PhaseSchedule reflect_aqc_to_owaqc(const PhaseSchedule& s);

}  // namespace owaqc
