#include "owaqc/phase_core.h"

#include <cmath>
#include <stdexcept>

namespace owaqc {

bool PhaseSchedule::is_finite() const {
  for (double v : {a1, a2, a3, a4, b1, b2, b3, b4}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

PhaseSchedule PhaseSchedule::bb84(double alice_common, double alice_delta,
                                  double bob_common, double bob_delta) {
  PhaseSchedule s;
  s.a1 = s.a2 = s.a3 = alice_common;
  s.a4 = alice_common + alice_delta;
  s.b1 = s.b2 = s.b3 = bob_common;
  s.b4 = bob_common + bob_delta;
  return s;
}

PhaseSchedule PhaseSchedule::with_common_offsets(double kappa_a,
                                                 double kappa_b) const {
  PhaseSchedule s = *this;
  s.a1 += kappa_a;
  s.a2 += kappa_a;
  s.a3 += kappa_a;
  s.a4 += kappa_a;
  s.b1 += kappa_b;
  s.b2 += kappa_b;
  s.b3 += kappa_b;
  s.b4 += kappa_b;
  return s;
}

void TimingConfig::validate() const {
  if (!std::isfinite(t_window) || !(t_window > 0.0)) {
    throw std::invalid_argument("timing: t_window must be finite and > 0");
  }
  if (!std::isfinite(tau) || tau < 0.0) {
    throw std::invalid_argument("timing: tau must be finite and >= 0");
  }
}

double triangle(double x) {
  if (x > -1.0 && x < 1.0) return 1.0 - std::abs(x);
  return 0.0;
}

double interference_phase(const PhaseSchedule& s) {
  return (s.b2 - s.b1) + (s.a2 - s.a1) + (s.a4 - s.a3) + (s.b4 - s.b3);
}

namespace {

void require_finite(const PhaseSchedule& s) {
  if (!s.is_finite()) {
    throw std::invalid_argument("phase schedule contains a non-finite phase");
  }
}

}  // namespace

InterferenceResult aqc_detection_probability(const PhaseSchedule& s) {
  require_finite(s);
  InterferenceResult r;
  r.interference_phase = interference_phase(s);
  r.raw_value = 1.0 + std::cos(r.interference_phase);
  r.normalized_value = r.raw_value / 2.0;
  return r;
}

CoincidenceWeights coincidence_weights(const TimingConfig& t) {
  t.validate();
  const double T = t.t_window;
  const double half = T / 2.0;
  CoincidenceWeights w;
  w.interfering = triangle((t.tau - T) / T);
  w.early_background = triangle((t.tau - half) / half);
  w.late_background = triangle((t.tau - 1.5 * T) / half);
  return w;
}

InterferenceResult owaqc_coincidence_probability(const PhaseSchedule& s,
                                                 const TimingConfig& t) {
  require_finite(s);
  const CoincidenceWeights w = coincidence_weights(t);
  InterferenceResult r;
  r.interference_phase = interference_phase(s);
  // At tau == T the weights are exactly (1, 0, 0), so this is bit-identical
  // to the round-trip expression.
  r.raw_value = w.interfering * (1.0 + std::cos(r.interference_phase)) +
                w.background();
  r.normalized_value = r.raw_value / 2.0;
  return r;
}

std::optional<double> visibility(const TimingConfig& t) {
  const CoincidenceWeights w = coincidence_weights(t);
  if (!w.any_coincidence()) return std::nullopt;
  return w.interfering / (w.interfering + w.background());
}

PhaseSchedule reflect_aqc_to_owaqc(const PhaseSchedule& s) { return s; }

}  // namespace owaqc
