#pragma once

// Brute-force two-photon amplitude oracle.
//
// The frequency-correlated pair has perfectly anti-correlated emission times:
// the early photon leaves in (-2T, 0) and its partner at the mirrored time in
// (0, 2T). The state is stored exactly on the anti-diagonal of a uniform time
// grid of n_bins bins spanning [-2T, 2T). Coincidences are obtained by pushing
// every (t1, t2) detection-time pair back through Bob's interferometer, looking
// up the emission amplitude of each path pairing, and integrating |amp|^2 over
// the two gate windows. No closed-form expression is used.

#include <complex>
#include <cstddef>
#include <vector>

#include "owaqc/phase_core.h"

namespace owaqc::oracle {

using Complex = std::complex<double>;

class TwoPhotonAmplitude {
 public:
  TwoPhotonAmplitude(double t_window, int grid_size,
                     std::vector<Complex> early_values);

  double t_window() const { return t_window_; }
  int grid_size() const { return grid_size_; }
  double bin_width() const { return bin_width_; }

  // One value per early-photon emission bin; the partner sits in the mirrored
  // bin grid_size - 1 - k.
  const std::vector<Complex>& values() const { return values_; }

  // Center time of grid bin k in [0, grid_size).
  double bin_center(int k) const;

  // Bin containing time t (left-closed), or -1 outside [-2T, 2T).
  int bin_of(double t) const;

  // Joint amplitude for photons emitted at times x and y (either order).
  // Nonzero only when x + y == 0 to within half a bin and the earlier time
  // lies in (-2T, 0).
  Complex pair_amplitude(double x, double y) const;

  double squared_norm() const;

  // Histogram of t_e + t_l, in bins of width bin_width centred on 0
  // (index 0 <-> sum 0). Returns probability mass per offset -n..n.
  std::vector<double> emission_sum_marginal() const;

  // Probability mass of t_l - t_e over bins of width 2*bin_width spanning
  // [0, 4T].
  std::vector<double> emission_difference_marginal() const;

 private:
  double t_window_;
  int grid_size_;
  double bin_width_;
  std::vector<Complex> values_;
};

// Detector gates with the detector position at time zero.
struct GateWindows {
  double early_lo;
  double early_hi;
  double late_lo;
  double late_hi;

  static GateWindows for_window(double t_window);
  bool in_early(double t) const { return t > early_lo && t < early_hi; }
  bool in_late(double t) const { return t > late_lo && t < late_hi; }
};

// Index (1..4) of the modulator setting seen by a photon emitted at time t,
// or 0 outside [-2T, 2T). Intervals are left-closed. The early half is
// labelled in reflected order: [-2T,-T) -> 2, [-T,0) -> 1, [0,T) -> 3,
// [T,2T) -> 4, so that the short path into the early gate carries A1+B1.
int phase_interval(double t, double t_window);

// Uniform-magnitude, unit-norm state. n_bins must be even and >= 8.
TwoPhotonAmplitude build_state(const TimingConfig& timing, int n_bins);

// <0| E_e(t1) E_l(t2) |Psi>. Zero unless t1 is in the early gate and t2 in the
// late gate.
Complex coincidence_amplitude(const TwoPhotonAmplitude& state,
                              const PhaseSchedule& s,
                              const TimingConfig& timing, double t1, double t2);

struct NumericCoincidence {
  double raw_sum = 0.0;        // sum |amp|^2 * bin area at the effective delay
  double reference_sum = 0.0;  // same sum at tau = T, zero phases
  double normalized = 0.0;     // raw_sum / reference_sum
  double tau_requested = 0.0;
  double tau_effective = 0.0;  // tau rounded to a whole number of bins
  long delay_bins = 0;

  double tau_rounding() const { return tau_effective - tau_requested; }
};

// Riemann sum over the gate-window product at bin centres. The delay is rounded
// to the nearest whole bin. workers > 1 splits the early-gate rows across
// threads; the result is independent of the split. Throws std::invalid_argument
// when state and timing disagree on T.
NumericCoincidence numeric_coincidence_probability(
    const TwoPhotonAmplitude& state, const PhaseSchedule& s,
    const TimingConfig& timing, unsigned workers = 1);

}  // namespace owaqc::oracle
