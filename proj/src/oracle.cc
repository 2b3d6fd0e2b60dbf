#include "owaqc/oracle.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace owaqc::oracle {

TwoPhotonAmplitude::TwoPhotonAmplitude(double t_window, int grid_size,
                                       std::vector<Complex> early_values)
    : t_window_(t_window),
      grid_size_(grid_size),
      bin_width_(4.0 * t_window / grid_size),
      values_(std::move(early_values)) {
  if (!(t_window > 0.0) || !std::isfinite(t_window)) {
    throw std::invalid_argument("two-photon amplitude: t_window must be > 0");
  }
  if (grid_size < 8 || grid_size % 2 != 0) {
    throw std::invalid_argument(
        "two-photon amplitude: grid size must be even and >= 8, got " +
        std::to_string(grid_size));
  }
  if (static_cast<int>(values_.size()) != grid_size / 2) {
    throw std::invalid_argument(
        "two-photon amplitude: expected grid_size/2 early-bin values");
  }
}

double TwoPhotonAmplitude::bin_center(int k) const {
  return -2.0 * t_window_ + (k + 0.5) * bin_width_;
}

int TwoPhotonAmplitude::bin_of(double t) const {
  const double lo = -2.0 * t_window_;
  if (!(t >= lo) || !(t < 2.0 * t_window_)) return -1;
  const int k = static_cast<int>(std::floor((t - lo) / bin_width_));
  return std::min(k, grid_size_ - 1);
}

Complex TwoPhotonAmplitude::pair_amplitude(double x, double y) const {
  if (std::abs(x + y) >= 0.5 * bin_width_) return {0.0, 0.0};
  const double early = std::min(x, y);
  if (!(early > -2.0 * t_window_ && early < 0.0)) return {0.0, 0.0};
  const int k = bin_of(early);
  if (k < 0 || k >= grid_size_ / 2) return {0.0, 0.0};
  return values_[static_cast<std::size_t>(k)];
}

double TwoPhotonAmplitude::squared_norm() const {
  double sum = 0.0;
  for (const Complex& v : values_) sum += std::norm(v);
  return sum;
}

std::vector<double> TwoPhotonAmplitude::emission_sum_marginal() const {
  std::vector<double> marginal(static_cast<std::size_t>(2 * grid_size_ + 1),
                               0.0);
  for (int k = 0; k < grid_size_ / 2; ++k) {
    const double t_e = bin_center(k);
    const double t_l = bin_center(grid_size_ - 1 - k);
    const long offset = std::lround((t_e + t_l) / bin_width_);
    marginal[static_cast<std::size_t>(offset + grid_size_)] +=
        std::norm(values_[static_cast<std::size_t>(k)]);
  }
  return marginal;
}

std::vector<double> TwoPhotonAmplitude::emission_difference_marginal() const {
  const int n = grid_size_ / 2;
  std::vector<double> marginal(static_cast<std::size_t>(n), 0.0);
  const double width = 2.0 * bin_width_;
  for (int k = 0; k < n; ++k) {
    const double diff = bin_center(grid_size_ - 1 - k) - bin_center(k);
    const int slot = std::clamp(static_cast<int>(std::floor(diff / width)), 0,
                                n - 1);
    marginal[static_cast<std::size_t>(slot)] +=
        std::norm(values_[static_cast<std::size_t>(k)]);
  }
  return marginal;
}

GateWindows GateWindows::for_window(double t_window) {
  return {-t_window, 0.0, t_window, 2.0 * t_window};
}

int phase_interval(double t, double t_window) {
  if (t < -2.0 * t_window || t >= 2.0 * t_window) return 0;
  if (t < -t_window) return 2;
  if (t < 0.0) return 1;
  if (t < t_window) return 3;
  return 4;
}

TwoPhotonAmplitude build_state(const TimingConfig& timing, int n_bins) {
  timing.validate();
  if (n_bins < 8 || n_bins % 2 != 0) {
    throw std::invalid_argument("build_state: n_bins must be even and >= 8, got " +
                                std::to_string(n_bins));
  }
  const int n = n_bins / 2;
  const double magnitude = 1.0 / std::sqrt(static_cast<double>(n));
  return TwoPhotonAmplitude(timing.t_window, n_bins,
                            std::vector<Complex>(static_cast<std::size_t>(n),
                                                 Complex(magnitude, 0.0)));
}

namespace {

// exp(i (A_k + B_k)) for k = 1..4, index 0 unused.
using Phasors = std::array<Complex, 5>;

Phasors make_phasors(const PhaseSchedule& s) {
  return {Complex(0.0, 0.0), std::polar(1.0, s.a1 + s.b1),
          std::polar(1.0, s.a2 + s.b2), std::polar(1.0, s.a3 + s.b3),
          std::polar(1.0, s.a4 + s.b4)};
}

Complex photon_phase(const Phasors& p, double t, double t_window) {
  return p[static_cast<std::size_t>(phase_interval(t, t_window))];
}

// Sum over the four path pairings (short/long at each gate). Gate membership
// is the caller's job.
Complex gated_amplitude(const TwoPhotonAmplitude& state, const Phasors& p,
                        double tau, double t1, double t2) {
  const double T = state.t_window();
  const std::array<double, 2> early_paths = {t1, t1 - tau};
  const std::array<double, 2> late_paths = {t2, t2 - tau};
  Complex total(0.0, 0.0);
  for (double x : early_paths) {
    for (double y : late_paths) {
      const Complex a = state.pair_amplitude(x, y);
      if (a == Complex(0.0, 0.0)) continue;
      total += photon_phase(p, x, T) * photon_phase(p, y, T) * a;
    }
  }
  return total;
}

void check_matching_window(const TwoPhotonAmplitude& state,
                           const TimingConfig& timing) {
  timing.validate();
  const double scale = std::max(std::abs(state.t_window()), 1.0);
  if (std::abs(state.t_window() - timing.t_window) > 1e-12 * scale) {
    throw std::invalid_argument(
        "oracle: state was built for T = " + std::to_string(state.t_window()) +
        " but timing has T = " + std::to_string(timing.t_window));
  }
}

double gated_sum(const TwoPhotonAmplitude& state, const Phasors& p,
                 double tau, unsigned workers) {
  const GateWindows gates = GateWindows::for_window(state.t_window());
  std::vector<double> early_times;
  std::vector<double> late_times;
  for (int k = 0; k < state.grid_size(); ++k) {
    const double c = state.bin_center(k);
    if (gates.in_early(c)) early_times.push_back(c);
    if (gates.in_late(c)) late_times.push_back(c);
  }

  std::vector<double> row_sums(early_times.size(), 0.0);
  auto run_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double row = 0.0;
      for (double t2 : late_times) {
        row += std::norm(gated_amplitude(state, p, tau, early_times[i], t2));
      }
      row_sums[i] = row;
    }
  };

  const std::size_t rows = early_times.size();
  const std::size_t n_workers =
      std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(rows, 1));
  if (n_workers == 1) {
    run_rows(0, rows);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (rows + n_workers - 1) / n_workers;
    for (std::size_t begin = 0; begin < rows; begin += chunk) {
      pool.emplace_back(run_rows, begin, std::min(rows, begin + chunk));
    }
    for (auto& th : pool) th.join();
  }

  // Ordered reduction keeps the result independent of the partitioning.
  double total = 0.0;
  for (double r : row_sums) total += r;
  const double area = state.bin_width() * state.bin_width();
  return total * area;
}

}  // namespace

Complex coincidence_amplitude(const TwoPhotonAmplitude& state,
                              const PhaseSchedule& s,
                              const TimingConfig& timing, double t1,
                              double t2) {
  check_matching_window(state, timing);
  const GateWindows gates = GateWindows::for_window(timing.t_window);
  if (!gates.in_early(t1) || !gates.in_late(t2)) return {0.0, 0.0};
  return gated_amplitude(state, make_phasors(s), timing.tau, t1, t2);
}

NumericCoincidence numeric_coincidence_probability(
    const TwoPhotonAmplitude& state, const PhaseSchedule& s,
    const TimingConfig& timing, unsigned workers) {
  check_matching_window(state, timing);
  if (!s.is_finite()) {
    throw std::invalid_argument("oracle: phase schedule contains a non-finite phase");
  }
  const double h = state.bin_width();

  NumericCoincidence out;
  out.tau_requested = timing.tau;
  out.delay_bins = std::lround(timing.tau / h);
  out.tau_effective = static_cast<double>(out.delay_bins) * h;
  out.raw_sum = gated_sum(state, make_phasors(s), out.tau_effective, workers);

  const double tau_ref = static_cast<double>(std::lround(timing.t_window / h)) * h;
  out.reference_sum =
      gated_sum(state, make_phasors(PhaseSchedule{}), tau_ref, workers);
  out.normalized = out.raw_sum / out.reference_sum;
  return out;
}

}  // namespace owaqc::oracle
