#pragma once

// Experiment harness: fringe scans, visibility sweeps, drift and loss sweeps,
// and paired AQC / OW-AQC comparisons. Every table row carries the seed and a
// hash of the session config so a row can be re-run bit-exactly.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "owaqc/phase_core.h"
#include "owaqc/protocol.h"

namespace owaqc::analysis {

// Rectangular table of preformatted cells, written as CSV with one header row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_csv() const;
};

// %.17g, or "none" for the no-coincidence marker.
std::string format_number(double v);
std::string format_number(const std::optional<double>& v);

std::uint64_t config_hash(const SessionConfig& c);
std::string hex64(std::uint64_t v);

// y = offset + amplitude * cos(w * x + phase), linear least squares in
// (offset, a cos, a sin) at fixed angular frequency w.
struct FringeFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  std::optional<double> visibility;  // amplitude / offset; none if offset <= 0
  double visibility_stderr = 0.0;
  double rss = 0.0;
};

// variances, when non-empty, are the per-point sampling variances and drive
// the standard error (sandwich estimator); otherwise the residual variance is
// used. Needs at least 3 points.
FringeFit fit_fringe(std::span<const double> phases,
                     std::span<const double> values,
                     std::span<const double> variances = {},
                     double angular_frequency = 1.0);

// Period 2*pi/w of the w minimising the fit residual, searched over
// w in [0.25, 4].
double estimate_fringe_period(std::span<const double> phases,
                              std::span<const double> values);

enum class SweepVariable { kTau, kPhaseSum, kTransmittance, kDriftStddev };

std::string_view to_string(SweepVariable v);
SweepVariable parse_sweep_variable(std::string_view name);

struct SweepSpec {
  SweepVariable variable = SweepVariable::kTau;
  double lo = 0.0;
  double hi = 1.0;
  int points = 2;
  SessionConfig baseline{};

  void validate() const;
  std::vector<double> grid() const;
};

struct FringeScanRow {
  double phase_sum = 0.0;
  double p_closed = 0.0;
  double p_oracle = 0.0;
};

struct FringeScan {
  std::vector<FringeScanRow> rows;
  FringeFit closed_fit;
  FringeFit oracle_fit;
  double closed_period = 0.0;
  double tau_effective = 0.0;  // delay used by the oracle after grid rounding
};

// Scans the interference phase over [0, 2*pi) in `points` steps (>= 8),
// starting from schedule_base with its Alice difference setting shifted.
FringeScan fringe_scan(const PhaseSchedule& schedule_base,
                       const TimingConfig& timing, int points,
                       int n_bins = 512);

Table to_table(const FringeScan& scan);

struct VisibilityOptions {
  Protocol protocol = Protocol::kOwAqc;
  int phase_points = 16;
  int n_bins = 512;
  bool with_monte_carlo = true;
};

struct VisibilityRow {
  double tau = 0.0;
  std::optional<double> closed_form;
  std::optional<double> oracle;
  std::optional<double> monte_carlo;
  double monte_carlo_stderr = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

// spec.variable must be kTau with the range inside [0, 2T]. Monte Carlo points
// use spec.baseline.pulses pulses per phase point.
std::vector<VisibilityRow> visibility_sweep(const SweepSpec& spec,
                                            const VisibilityOptions& options = {});

Table to_table(const std::vector<VisibilityRow>& rows);

struct ComparisonRow {
  double transmittance = 0.0;
  double backscatter = 0.0;
  SessionResult aqc;
  SessionResult ow_aqc;
  std::uint64_t config_hash = 0;

  double rate_ratio() const;  // OW-AQC rate / AQC rate
  double qber_difference() const;  // OW-AQC - AQC
};

// One paired cell per (transmittance, backscatter); both protocols share the
// baseline seed in every cell.
std::vector<ComparisonRow> protocol_comparison(
    std::span<const double> transmittances, std::span<const double> backscatters,
    const SessionConfig& baseline);

Table to_table(const std::vector<ComparisonRow>& rows);

struct OracleSample {
  PhaseSchedule schedule;
  double tau_requested = 0.0;
  double tau_effective = 0.0;      // grid-aligned delay at n_bins
  double closed_aligned = 0.0;     // closed form at tau_effective
  double numeric = 0.0;            // oracle at n_bins
  double residual_aligned = 0.0;   // relative, oracle vs closed at tau_effective
  double closed_requested = 0.0;   // closed form at tau_requested
  double residual_coarse = 0.0;    // relative, oracle(n_bins) vs closed(tau_requested)
  double residual_fine = 0.0;      // relative, oracle(2 n_bins) vs closed(tau_requested)
};

struct OracleCheck {
  int n_bins = 0;
  std::uint64_t seed = 0;
  std::vector<OracleSample> samples;

  double max_residual_aligned() const;
  // Restricted to grid-aligned delays <= T (inclusive) or > T.
  double max_residual_aligned(bool delay_above_window) const;
  double max_residual_coarse() const;
  double max_residual_fine() const;
};

// |a - b| / max(|b|, 1e-9).
double relative_residual(double value, double reference);

// Random schedules (phases uniform in [0, 2 pi)) and tau uniform in [0, 2T],
// drawn from the "oracle-check" stream of seed. T = 1.
OracleCheck oracle_check(int samples, int n_bins, std::uint64_t seed);

Table to_table(const OracleCheck& check);

// Sweeps over transmittance or drift_stddev run sessions; phase_sum runs a
// fringe scan over the range; tau runs visibility_sweep.
Table run_sweep(const SweepSpec& spec, Protocol protocol, int n_bins = 512);

}  // namespace owaqc::analysis
