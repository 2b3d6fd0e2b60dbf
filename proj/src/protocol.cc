#include "owaqc/protocol.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace owaqc {

std::string_view to_string(Protocol p) {
  return p == Protocol::kAqc ? "aqc" : "ow-aqc";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "aqc") return Protocol::kAqc;
  if (name == "ow-aqc") return Protocol::kOwAqc;
  throw std::invalid_argument("unknown protocol '" + std::string(name) +
                              "' (expected aqc or ow-aqc)");
}

int photons_per_event(Protocol p) { return p == Protocol::kAqc ? 1 : 2; }

std::string_view to_string(Basis b) { return b == Basis::kZ ? "Z" : "X"; }

Bb84Choice prepare(Basis basis, int bit) {
  const double offset = basis == Basis::kZ ? 0.0 : std::numbers::pi / 2.0;
  return {basis, bit, offset + bit * std::numbers::pi};
}

double measurement_phase(Basis basis) {
  return basis == Basis::kZ ? 0.0 : -std::numbers::pi / 2.0;
}

OutcomeProbabilities readout_probabilities(Protocol p, const PhaseSchedule& s,
                                           const TimingConfig& t) {
  if (p == Protocol::kAqc) {
    const InterferenceResult r = aqc_detection_probability(s);
    return {r.normalized_value,
            (1.0 - std::cos(r.interference_phase)) / 2.0};
  }
  const InterferenceResult r = owaqc_coincidence_probability(s, t);
  const CoincidenceWeights w = coincidence_weights(t);
  return {r.normalized_value,
          (w.interfering * (1.0 - std::cos(r.interference_phase)) +
           w.background()) /
              2.0};
}

namespace {

void require_probability(double p, bool open_low, bool open_high,
                         const char* name) {
  const bool ok = std::isfinite(p) && (open_low ? p > 0.0 : p >= 0.0) &&
                  (open_high ? p < 1.0 : p <= 1.0);
  if (!ok) {
    throw std::invalid_argument(std::string("channel: ") + name +
                                " out of range: " + std::to_string(p));
  }
}

}  // namespace

void ChannelModel::validate() const {
  require_probability(per_photon_transmittance, true, false,
                      "per_photon_transmittance");
  require_probability(detector_efficiency, true, false, "detector_efficiency");
  require_probability(dark_count_probability_per_gate, false, true,
                      "dark_count_probability_per_gate");
  require_probability(backscatter_click_probability, false, true,
                      "backscatter_click_probability");
}

double ChannelModel::event_factor(Protocol p) const {
  const int k = photons_per_event(p);
  const double post = postselection_enabled ? kPostselectionFactor : 1.0;
  return post * std::pow(per_photon_transmittance, k) *
         std::pow(detector_efficiency, k);
}

void DriftModel::validate() const {
  if (!std::isfinite(phase_drift_stddev_per_pulse) ||
      phase_drift_stddev_per_pulse < 0.0) {
    throw std::invalid_argument("drift: phase_drift_stddev_per_pulse must be >= 0");
  }
  if (!std::isfinite(delay_rate_per_pulse)) {
    throw std::invalid_argument("drift: delay_rate_per_pulse must be finite");
  }
  for (double tau : delay_table) {
    if (!std::isfinite(tau) || tau < 0.0) {
      throw std::invalid_argument("drift: delay_table entries must be >= 0");
    }
  }
}

double DriftModel::tau_at(std::uint64_t pulse, double nominal_tau) const {
  if (!delay_table.empty()) return delay_table[pulse % delay_table.size()];
  return std::max(0.0, nominal_tau +
                           delay_rate_per_pulse * static_cast<double>(pulse));
}

void AttackModel::validate() const {
  if (!std::isfinite(fraction) || fraction < 0.0 || fraction > 1.0) {
    throw std::invalid_argument("attack: fraction must be in [0, 1]");
  }
}

void SessionConfig::validate() const {
  if (pulses == 0) throw std::invalid_argument("session: pulses must be > 0");
  timing.validate();
  channel.validate();
  drift.validate();
  attack.validate();
  if (!std::isfinite(alice_common_phase) || !std::isfinite(bob_common_phase)) {
    throw std::invalid_argument("session: common phases must be finite");
  }
}

double SessionResult::detection_rate() const {
  return pulses_sent == 0 ? 0.0
                          : static_cast<double>(detections) /
                                static_cast<double>(pulses_sent);
}

double SessionResult::sifted_fraction() const {
  return detections == 0 ? 0.0
                         : static_cast<double>(sifted_length) /
                               static_cast<double>(detections);
}

namespace {

struct Click {
  bool fired = false;
  int bit = 0;
  bool multi = false;
};

// Fixed number of draws per call so paired runs stay aligned pulse by pulse.
Click detect(const OutcomeProbabilities& p, double factor,
             const ChannelModel& ch, bool with_backscatter, RandomStream& rng) {
  const double u_signal = rng.uniform();
  const double u_port = rng.uniform();
  const double u_dark0 = rng.uniform();
  const double u_dark1 = rng.uniform();
  const double u_back = rng.uniform();
  const double u_back_port = rng.uniform();
  const double u_tie = rng.uniform();

  const double p_event = factor * p.total();
  if (p_event > 1.0 + 1e-12) {
    throw std::invalid_argument("event probability exceeds 1: " +
                                std::to_string(p_event));
  }

  int sources = 0;
  int bit = 0;
  if (u_signal < p_event) {
    ++sources;
    bit = u_port * p.total() < p.port0 ? 0 : 1;
  }
  if (u_dark0 < ch.dark_count_probability_per_gate) {
    ++sources;
    bit = 0;
  }
  if (u_dark1 < ch.dark_count_probability_per_gate) {
    ++sources;
    bit = 1;
  }
  if (with_backscatter && u_back < ch.backscatter_click_probability) {
    ++sources;
    bit = u_back_port < 0.5 ? 0 : 1;
  }

  Click c;
  if (sources == 0) return c;
  c.fired = true;
  c.multi = sources > 1;
  c.bit = c.multi ? (u_tie < 0.5 ? 0 : 1) : bit;
  return c;
}

Basis draw_basis(RandomStream& rng) {
  return rng.bit() == 0 ? Basis::kZ : Basis::kX;
}

}  // namespace

double apply_intercept_resend(const Bb84Choice& alice, Basis eve_basis,
                              double eve_uniform) {
  const double p0 =
      (1.0 + std::cos(alice.encoded_phase + measurement_phase(eve_basis))) / 2.0;
  const int eve_bit = eve_uniform < p0 ? 0 : 1;
  return prepare(eve_basis, eve_bit).encoded_phase;
}

SessionResult run_session(Protocol protocol, const SessionConfig& config) {
  config.validate();

  RandomStream choices(config.seed, "bb84");
  RandomStream channel(config.seed, "channel");
  RandomStream eve(config.seed, "eve");
  RandomStream drift(config.seed, "drift");

  const double factor = config.channel.event_factor(protocol);
  const bool backscatter = protocol == Protocol::kAqc;
  const double sigma = config.drift.phase_drift_stddev_per_pulse;

  SessionResult r;
  r.protocol = protocol;
  r.pulses_sent = config.pulses;
  r.seed = config.seed;

  double walk_a = 0.0;
  double walk_b = 0.0;
  for (std::uint64_t i = 0; i < config.pulses; ++i) {
    const Basis alice_basis = draw_basis(choices);
    const int alice_bit = choices.bit();
    const Basis bob_basis = draw_basis(choices);
    const Bb84Choice alice = prepare(alice_basis, alice_bit);

    walk_a += sigma * drift.normal();
    walk_b += sigma * drift.normal();

    const double u_attack = eve.uniform();
    const Basis eve_basis = draw_basis(eve);
    const double u_eve = eve.uniform();
    double sent_phase = alice.encoded_phase;
    if (config.attack.kind == AttackKind::kInterceptResend &&
        u_attack < config.attack.fraction) {
      sent_phase = apply_intercept_resend(alice, eve_basis, u_eve);
    }

    const PhaseSchedule schedule = PhaseSchedule::bb84(
        config.alice_common_phase + walk_a, sent_phase,
        config.bob_common_phase + walk_b, measurement_phase(bob_basis));
    TimingConfig timing = config.timing;
    timing.tau = config.drift.tau_at(i, config.timing.tau);

    const Click click =
        detect(readout_probabilities(protocol, schedule, timing), factor,
               config.channel, backscatter, channel);
    if (!click.fired) continue;
    ++r.detections;
    if (click.multi) ++r.multi_click_events;
    if (alice_basis != bob_basis) continue;

    ++r.sifted_length;
    BasisTally& tally = r.per_basis[static_cast<std::size_t>(alice_basis)];
    ++tally.sifted;
    if (click.bit != alice_bit) {
      ++r.errors;
      ++tally.errors;
    }
    if (config.keep_keys) {
      r.alice_key.push_back(static_cast<std::uint8_t>(alice_bit));
      r.bob_key.push_back(static_cast<std::uint8_t>(click.bit));
    }
  }
  r.qber = r.sifted_length == 0 ? 0.0
                                : static_cast<double>(r.errors) /
                                      static_cast<double>(r.sifted_length);
  return r;
}

FringeCounts measure_fringe_point(Protocol protocol, const SessionConfig& config,
                                  double phase_sum) {
  config.validate();
  RandomStream channel(config.seed, "channel");
  const double factor = config.channel.event_factor(protocol);
  const PhaseSchedule schedule = PhaseSchedule::bb84(
      config.alice_common_phase, phase_sum, config.bob_common_phase, 0.0);

  FringeCounts counts;
  counts.pulses = config.pulses;
  for (std::uint64_t i = 0; i < config.pulses; ++i) {
    TimingConfig timing = config.timing;
    timing.tau = config.drift.tau_at(i, config.timing.tau);
    const Click click =
        detect(readout_probabilities(protocol, schedule, timing), factor,
               config.channel, protocol == Protocol::kAqc, channel);
    if (!click.fired) continue;
    (click.bit == 0 ? counts.port0 : counts.port1) += 1;
  }
  return counts;
}

nlohmann::ordered_json to_json(const SessionConfig& c) {
  nlohmann::ordered_json j;
  j["pulses"] = c.pulses;
  j["seed"] = c.seed;
  j["timing"] = {{"t_window", c.timing.t_window}, {"tau", c.timing.tau}};
  j["channel"] = {
      {"per_photon_transmittance", c.channel.per_photon_transmittance},
      {"detector_efficiency", c.channel.detector_efficiency},
      {"dark_count_probability_per_gate",
       c.channel.dark_count_probability_per_gate},
      {"backscatter_click_probability", c.channel.backscatter_click_probability},
      {"postselection_enabled", c.channel.postselection_enabled}};
  j["drift"] = {
      {"phase_drift_stddev_per_pulse", c.drift.phase_drift_stddev_per_pulse},
      {"delay_rate_per_pulse", c.drift.delay_rate_per_pulse},
      {"delay_table", c.drift.delay_table}};
  j["attack"] = {
      {"kind", c.attack.kind == AttackKind::kNone ? "none" : "intercept-resend"},
      {"fraction", c.attack.fraction}};
  j["alice_common_phase"] = c.alice_common_phase;
  j["bob_common_phase"] = c.bob_common_phase;
  return j;
}

nlohmann::ordered_json to_json(const SessionResult& r, bool with_keys) {
  nlohmann::ordered_json j;
  j["protocol"] = std::string(to_string(r.protocol));
  j["seed"] = r.seed;
  j["pulses_sent"] = r.pulses_sent;
  j["detections"] = r.detections;
  j["multi_click_events"] = r.multi_click_events;
  j["sifted_length"] = r.sifted_length;
  j["errors"] = r.errors;
  j["qber"] = r.qber;
  j["detection_rate"] = r.detection_rate();
  j["sifted_fraction"] = r.sifted_fraction();
  nlohmann::ordered_json per_basis;
  for (Basis b : {Basis::kZ, Basis::kX}) {
    const BasisTally& t = r.per_basis[static_cast<std::size_t>(b)];
    per_basis[std::string(to_string(b))] = {{"sifted", t.sifted},
                                            {"errors", t.errors}};
  }
  j["per_basis"] = per_basis;
  if (with_keys) {
    std::string alice;
    std::string bob;
    for (auto b : r.alice_key) alice.push_back(static_cast<char>('0' + b));
    for (auto b : r.bob_key) bob.push_back(static_cast<char>('0' + b));
    j["alice_key"] = alice;
    j["bob_key"] = bob;
  }
  return j;
}

std::string_view to_string(Exposure e) {
  return e == Exposure::kImmune ? "immune" : "exposed";
}

ExposureReport trojan_horse_exposure(Protocol protocol, bool has_isolator) {
  ExposureReport r;
  r.protocol = protocol;
  r.has_isolator = has_isolator;
  if (protocol == Protocol::kAqc) {
    r.exposure = Exposure::kExposed;
    r.reason = has_isolator
                   ? "bidirectional signal flow through Alice's modulator rules out an isolator"
                   : "no isolator; injected light reaches Alice's modulator";
  } else if (has_isolator) {
    r.exposure = Exposure::kImmune;
    r.reason = "one-way signal flow; isolator blocks light injected toward Alice";
  } else {
    r.exposure = Exposure::kExposed;
    r.reason = "no isolator; injected light reaches Alice's modulator";
  }
  return r;
}

}  // namespace owaqc
