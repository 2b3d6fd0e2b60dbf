#pragma once

// Interferometric BB84 over either autocompensating scheme.
//
// Bob's readout is modelled as a two-outcome measurement: outcome 0 fires
// with the normalized interference value, outcome 1 with its complement
// (the opposite fringe). A matched-basis outcome 0 means cos(phase) = +1, i.e.
// bit 0.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "owaqc/phase_core.h"
#include "owaqc/rng.h"

namespace owaqc {

enum class Protocol { kAqc, kOwAqc };

std::string_view to_string(Protocol p);
// Accepts "aqc" and "ow-aqc" (case-sensitive). Throws std::invalid_argument.
Protocol parse_protocol(std::string_view name);

// Photons crossing the channel (and hitting Bob's detector) per event.
int photons_per_event(Protocol p);

enum class Basis { kZ, kX };

std::string_view to_string(Basis b);

struct Bb84Choice {
  Basis basis = Basis::kZ;
  int bit = 0;
  double encoded_phase = 0.0;
};

// Alice's phase difference: basis offset (0 or pi/2) + bit * pi.
Bb84Choice prepare(Basis basis, int bit);

// Measurement phase difference for Bob (or Eve): 0 for Z, -pi/2 for X.
double measurement_phase(Basis basis);

struct OutcomeProbabilities {
  double port0 = 0.0;
  double port1 = 0.0;

  double total() const { return port0 + port1; }
};

OutcomeProbabilities readout_probabilities(Protocol p, const PhaseSchedule& s,
                                           const TimingConfig& t);

struct ChannelModel {
  // Exactly 1/2: gating keeps only the long/short path combinations.
  static constexpr double kPostselectionFactor = 0.5;

  double per_photon_transmittance = 1.0;          // (0, 1]
  double detector_efficiency = 1.0;               // (0, 1]
  double dark_count_probability_per_gate = 0.0;   // [0, 1)
  double backscatter_click_probability = 0.0;     // [0, 1), AQC only
  bool postselection_enabled = true;

  void validate() const;

  // postselection * (transmittance * efficiency)^photons
  double event_factor(Protocol p) const;
};

struct DriftModel {
  // Standard deviation of the per-pulse step of a common-mode random walk,
  // drawn independently for Alice's and Bob's modulators.
  double phase_drift_stddev_per_pulse = 0.0;
  // Linear delay drift: tau grows by this much per pulse.
  double delay_rate_per_pulse = 0.0;
  // Explicit delay per pulse (cycled). Overrides the nominal tau when set.
  std::vector<double> delay_table;

  void validate() const;
  double tau_at(std::uint64_t pulse, double nominal_tau) const;
};

enum class AttackKind { kNone, kInterceptResend };

struct AttackModel {
  AttackKind kind = AttackKind::kNone;
  double fraction = 1.0;  // share of pulses Eve intercepts, [0, 1]

  void validate() const;
};

struct SessionConfig {
  std::uint64_t pulses = 10000;
  TimingConfig timing{};
  ChannelModel channel{};
  DriftModel drift{};
  AttackModel attack{};
  // Absolute modulator settings; the outcome statistics do not depend on them.
  double alice_common_phase = 0.0;
  double bob_common_phase = 0.0;
  std::uint64_t seed = 1;
  bool keep_keys = true;

  void validate() const;
};

struct BasisTally {
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;

  bool operator==(const BasisTally&) const = default;
};

struct SessionResult {
  Protocol protocol = Protocol::kOwAqc;
  std::uint64_t pulses_sent = 0;
  std::uint64_t detections = 0;
  std::uint64_t multi_click_events = 0;
  std::uint64_t sifted_length = 0;
  std::uint64_t errors = 0;
  double qber = 0.0;
  std::array<BasisTally, 2> per_basis{};  // indexed by Basis
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> alice_key;
  std::vector<std::uint8_t> bob_key;

  double detection_rate() const;
  double sifted_fraction() const;
  bool operator==(const SessionResult&) const = default;
};

// Canonical form, used for config hashes and output sidecars.
nlohmann::ordered_json to_json(const SessionConfig& c);

// Throws std::invalid_argument on an invalid config (including zero pulses).
SessionResult run_session(Protocol protocol, const SessionConfig& config);

// Stable field names; keys are emitted as '0'/'1' strings when with_keys.
nlohmann::ordered_json to_json(const SessionResult& r, bool with_keys = false);

// Eve measures in eve_basis and resends the state matching her outcome.
// eve_uniform in [0, 1) decides her outcome: bit 0 when it is below the
// outcome-0 probability from the phase algebra.
double apply_intercept_resend(const Bb84Choice& alice, Basis eve_basis,
                              double eve_uniform);

struct FringeCounts {
  std::uint64_t pulses = 0;
  std::uint64_t port0 = 0;
  std::uint64_t port1 = 0;
};

// Runs the detection model with a fixed schedule whose interference phase is
// phase_sum (Alice's difference setting carries it, Bob's is 0). No basis
// choices or sifting.
FringeCounts measure_fringe_point(Protocol protocol, const SessionConfig& config,
                                  double phase_sum);

enum class Exposure { kImmune, kExposed };

std::string_view to_string(Exposure e);

struct ExposureReport {
  Protocol protocol = Protocol::kOwAqc;
  bool has_isolator = false;
  Exposure exposure = Exposure::kExposed;
  std::string reason;
};

ExposureReport trojan_horse_exposure(Protocol protocol, bool has_isolator);

}  // namespace owaqc
