#include "owaqc/analysis.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "owaqc/oracle.h"
#include "owaqc/rng.h"

namespace owaqc::analysis {

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("table row has " + std::to_string(row.size()) +
                           " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::string out;
  auto append_line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out.push_back(',');
      out += cells[i];
    }
    out.push_back('\n');
  };
  append_line(columns);
  for (const auto& r : rows) append_line(r);
  return out;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_number(const std::optional<double>& v) {
  return v ? format_number(*v) : "none";
}

std::uint64_t config_hash(const SessionConfig& c) {
  return fnv1a64(to_json(c).dump());
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

FringeFit fit_fringe(std::span<const double> phases,
                     std::span<const double> values,
                     std::span<const double> variances,
                     double angular_frequency) {
  const auto n = static_cast<Eigen::Index>(phases.size());
  if (phases.size() != values.size() || n < 3) {
    throw std::invalid_argument("fit_fringe: need >= 3 matching points");
  }
  if (!variances.empty() && variances.size() != phases.size()) {
    throw std::invalid_argument("fit_fringe: variances size mismatch");
  }

  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double arg = angular_frequency * phases[static_cast<std::size_t>(i)];
    X(i, 0) = 1.0;
    X(i, 1) = std::cos(arg);
    X(i, 2) = std::sin(arg);
    y(i) = values[static_cast<std::size_t>(i)];
  }
  const Eigen::Matrix3d normal = X.transpose() * X;
  const Eigen::Matrix3d normal_inv = normal.inverse();
  const Eigen::Vector3d c = normal_inv * (X.transpose() * y);
  const Eigen::VectorXd resid = y - X * c;

  FringeFit fit;
  fit.offset = c(0);
  fit.amplitude = std::hypot(c(1), c(2));
  fit.phase = std::atan2(-c(2), c(1));
  fit.rss = resid.squaredNorm();

  Eigen::Matrix3d cov;
  if (!variances.empty()) {
    Eigen::MatrixXd weighted = X;
    for (Eigen::Index i = 0; i < n; ++i) {
      weighted.row(i) *= variances[static_cast<std::size_t>(i)];
    }
    cov = normal_inv * (X.transpose() * weighted) * normal_inv;
  } else {
    const double sigma2 = n > 3 ? fit.rss / static_cast<double>(n - 3) : 0.0;
    cov = sigma2 * normal_inv;
  }

  if (fit.offset > 0.0) {
    const double v = fit.amplitude / fit.offset;
    fit.visibility = v;
    Eigen::Vector3d grad;
    if (fit.amplitude > 0.0) {
      grad << -v / fit.offset, c(1) / (fit.amplitude * fit.offset),
          c(2) / (fit.amplitude * fit.offset);
      fit.visibility_stderr = std::sqrt(std::max(0.0, grad.dot(cov * grad)));
    } else {
      fit.visibility_stderr =
          std::sqrt(std::max(0.0, 0.5 * (cov(1, 1) + cov(2, 2)))) / fit.offset;
    }
  }
  return fit;
}

double estimate_fringe_period(std::span<const double> phases,
                              std::span<const double> values) {
  auto rss = [&](double w) { return fit_fringe(phases, values, {}, w).rss; };
  constexpr double lo = 0.25;
  constexpr double hi = 4.0;
  constexpr int steps = 750;
  const double step = (hi - lo) / steps;
  double best_w = lo;
  double best = rss(lo);
  for (int i = 1; i <= steps; ++i) {
    const double w = lo + i * step;
    const double r = rss(w);
    if (r < best) {
      best = r;
      best_w = w;
    }
  }
  // Golden-section refinement around the coarse minimum.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(lo, best_w - step);
  double b = std::min(hi, best_w + step);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = rss(x1);
  double f2 = rss(x2);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = rss(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = rss(x2);
    }
  }
  return 2.0 * std::numbers::pi / (0.5 * (a + b));
}

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kTau:
      return "tau";
    case SweepVariable::kPhaseSum:
      return "phase_sum";
    case SweepVariable::kTransmittance:
      return "transmittance";
    case SweepVariable::kDriftStddev:
      return "drift_stddev";
  }
  return "tau";
}

SweepVariable parse_sweep_variable(std::string_view name) {
  for (SweepVariable v : {SweepVariable::kTau, SweepVariable::kPhaseSum,
                          SweepVariable::kTransmittance,
                          SweepVariable::kDriftStddev}) {
    if (to_string(v) == name) return v;
  }
  throw std::invalid_argument("unknown sweep variable '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  if (!(lo < hi)) throw std::invalid_argument("sweep: lo must be < hi");
  if (points < 2) throw std::invalid_argument("sweep: points must be >= 2");
  baseline.validate();
}

std::vector<double> SweepSpec::grid() const {
  validate();
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    g[static_cast<std::size_t>(i)] =
        i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1);
  }
  return g;
}

namespace {

unsigned oracle_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

PhaseSchedule with_phase_sum(const PhaseSchedule& base, double phase_sum) {
  PhaseSchedule s = base;
  s.a4 += phase_sum - interference_phase(base);
  return s;
}

std::vector<double> phase_grid(int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    g[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * k / points;
  }
  return g;
}

}  // namespace

FringeScan fringe_scan(const PhaseSchedule& schedule_base,
                       const TimingConfig& timing, int points, int n_bins) {
  if (points < 8) throw std::invalid_argument("fringe_scan: points must be >= 8");
  timing.validate();
  const oracle::TwoPhotonAmplitude state = oracle::build_state(timing, n_bins);

  FringeScan scan;
  std::vector<double> phases;
  std::vector<double> closed;
  std::vector<double> numeric;
  for (double phi : phase_grid(points)) {
    const PhaseSchedule s = with_phase_sum(schedule_base, phi);
    const InterferenceResult c = owaqc_coincidence_probability(s, timing);
    const oracle::NumericCoincidence o =
        oracle::numeric_coincidence_probability(state, s, timing, oracle_workers());
    scan.tau_effective = o.tau_effective;
    scan.rows.push_back({c.interference_phase, c.normalized_value, o.normalized});
    phases.push_back(c.interference_phase);
    closed.push_back(c.normalized_value);
    numeric.push_back(o.normalized);
  }
  scan.closed_fit = fit_fringe(phases, closed);
  scan.oracle_fit = fit_fringe(phases, numeric);
  scan.closed_period = estimate_fringe_period(phases, closed);
  return scan;
}

Table to_table(const FringeScan& scan) {
  Table t{{"phase_sum", "p_closed", "p_oracle"}, {}};
  for (const auto& r : scan.rows) {
    t.add_row({format_number(r.phase_sum), format_number(r.p_closed),
               format_number(r.p_oracle)});
  }
  return t;
}

std::vector<VisibilityRow> visibility_sweep(const SweepSpec& spec,
                                            const VisibilityOptions& options) {
  if (spec.variable != SweepVariable::kTau) {
    throw std::invalid_argument("visibility_sweep: sweep variable must be tau");
  }
  const double T = spec.baseline.timing.t_window;
  if (spec.lo < 0.0 || spec.hi > 2.0 * T) {
    throw std::invalid_argument("visibility_sweep: tau range must lie in [0, 2T]");
  }
  if (options.phase_points < 8) {
    throw std::invalid_argument("visibility_sweep: phase_points must be >= 8");
  }
  const std::vector<double> phis = phase_grid(options.phase_points);
  const oracle::TwoPhotonAmplitude state =
      oracle::build_state(spec.baseline.timing, options.n_bins);

  std::vector<VisibilityRow> rows;
  const std::vector<double> taus = spec.grid();
  for (std::size_t i = 0; i < taus.size(); ++i) {
    SessionConfig cfg = spec.baseline;
    cfg.timing.tau = taus[i];

    VisibilityRow row;
    row.tau = taus[i];
    row.seed = spec.baseline.seed;
    row.config_hash = config_hash(cfg);
    row.closed_form = visibility(cfg.timing);

    std::vector<double> oracle_values;
    for (double phi : phis) {
      const PhaseSchedule s = PhaseSchedule::bb84(0.0, phi, 0.0, 0.0);
      oracle_values.push_back(oracle::numeric_coincidence_probability(
                                  state, s, cfg.timing, oracle_workers())
                                  .normalized);
    }
    row.oracle = fit_fringe(phis, oracle_values).visibility;

    if (options.with_monte_carlo) {
      std::vector<double> rates;
      std::vector<double> variances;
      const double n = static_cast<double>(cfg.pulses);
      for (std::size_t k = 0; k < phis.size(); ++k) {
        SessionConfig point = cfg;
        point.seed = derive_stream_seed(
            spec.baseline.seed,
            "visibility/" + std::to_string(i) + "/" + std::to_string(k));
        const FringeCounts counts =
            measure_fringe_point(options.protocol, point, phis[k]);
        const double r = static_cast<double>(counts.port0) / n;
        rates.push_back(r);
        variances.push_back(r * (1.0 - r) / n);
      }
      const FringeFit fit = fit_fringe(phis, rates, variances);
      row.monte_carlo = fit.visibility;
      row.monte_carlo_stderr = fit.visibility_stderr;
    }
    rows.push_back(row);
  }
  return rows;
}

Table to_table(const std::vector<VisibilityRow>& rows) {
  Table t{{"tau", "closed_form_V", "oracle_V", "montecarlo_V", "stderr", "seed",
           "config_hash"},
          {}};
  for (const auto& r : rows) {
    t.add_row({format_number(r.tau), format_number(r.closed_form),
               format_number(r.oracle), format_number(r.monte_carlo),
               format_number(r.monte_carlo_stderr), std::to_string(r.seed),
               hex64(r.config_hash)});
  }
  return t;
}

double ComparisonRow::rate_ratio() const {
  const double a = aqc.detection_rate();
  return a > 0.0 ? ow_aqc.detection_rate() / a : 0.0;
}

double ComparisonRow::qber_difference() const { return ow_aqc.qber - aqc.qber; }

std::vector<ComparisonRow> protocol_comparison(
    std::span<const double> transmittances, std::span<const double> backscatters,
    const SessionConfig& baseline) {
  if (transmittances.empty() || backscatters.empty()) {
    throw std::invalid_argument("protocol_comparison: empty grid");
  }
  std::vector<ComparisonRow> rows;
  for (double t : transmittances) {
    for (double b : backscatters) {
      SessionConfig cfg = baseline;
      cfg.channel.per_photon_transmittance = t;
      cfg.channel.backscatter_click_probability = b;
      cfg.keep_keys = false;
      ComparisonRow row;
      row.transmittance = t;
      row.backscatter = b;
      row.aqc = run_session(Protocol::kAqc, cfg);
      row.ow_aqc = run_session(Protocol::kOwAqc, cfg);
      row.config_hash = config_hash(cfg);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

Table to_table(const std::vector<ComparisonRow>& rows) {
  Table t{{"transmittance", "backscatter", "aqc_rate", "aqc_qber", "owaqc_rate",
           "owaqc_qber", "rate_ratio", "qber_difference", "seed", "config_hash"},
          {}};
  for (const auto& r : rows) {
    t.add_row({format_number(r.transmittance), format_number(r.backscatter),
               format_number(r.aqc.detection_rate()), format_number(r.aqc.qber),
               format_number(r.ow_aqc.detection_rate()),
               format_number(r.ow_aqc.qber), format_number(r.rate_ratio()),
               format_number(r.qber_difference()), std::to_string(r.aqc.seed),
               hex64(r.config_hash)});
  }
  return t;
}

double relative_residual(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-9);
}

namespace {

template <typename Pred, typename Field>
double max_over(const std::vector<OracleSample>& samples, Pred keep, Field f) {
  double m = 0.0;
  for (const auto& s : samples) {
    if (keep(s)) m = std::max(m, f(s));
  }
  return m;
}

}  // namespace

double OracleCheck::max_residual_aligned() const {
  return max_over(samples, [](const auto&) { return true; },
                  [](const auto& s) { return s.residual_aligned; });
}

double OracleCheck::max_residual_aligned(bool delay_above_window) const {
  return max_over(
      samples,
      [&](const OracleSample& s) { return (s.tau_effective > 1.0) == delay_above_window; },
      [](const auto& s) { return s.residual_aligned; });
}

double OracleCheck::max_residual_coarse() const {
  return max_over(samples, [](const auto&) { return true; },
                  [](const auto& s) { return s.residual_coarse; });
}

double OracleCheck::max_residual_fine() const {
  return max_over(samples, [](const auto&) { return true; },
                  [](const auto& s) { return s.residual_fine; });
}

OracleCheck oracle_check(int samples, int n_bins, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("oracle_check: samples must be >= 1");
  const TimingConfig base{1.0, 1.0};
  const oracle::TwoPhotonAmplitude coarse = oracle::build_state(base, n_bins);
  const oracle::TwoPhotonAmplitude fine = oracle::build_state(base, 2 * n_bins);
  RandomStream rng(seed, "oracle-check");

  OracleCheck check;
  check.n_bins = n_bins;
  check.seed = seed;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < samples; ++i) {
    OracleSample s;
    for (double* field : {&s.schedule.a1, &s.schedule.a2, &s.schedule.a3,
                          &s.schedule.a4, &s.schedule.b1, &s.schedule.b2,
                          &s.schedule.b3, &s.schedule.b4}) {
      *field = two_pi * rng.uniform();
    }
    s.tau_requested = 2.0 * rng.uniform();
    const TimingConfig requested{1.0, s.tau_requested};

    const oracle::NumericCoincidence c = oracle::numeric_coincidence_probability(
        coarse, s.schedule, requested, oracle_workers());
    const oracle::NumericCoincidence f = oracle::numeric_coincidence_probability(
        fine, s.schedule, requested, oracle_workers());
    s.tau_effective = c.tau_effective;
    s.numeric = c.normalized;
    s.closed_aligned =
        owaqc_coincidence_probability(s.schedule, {1.0, c.tau_effective})
            .normalized_value;
    s.closed_requested =
        owaqc_coincidence_probability(s.schedule, requested).normalized_value;
    s.residual_aligned = relative_residual(s.numeric, s.closed_aligned);
    s.residual_coarse = relative_residual(c.normalized, s.closed_requested);
    s.residual_fine = relative_residual(f.normalized, s.closed_requested);
    check.samples.push_back(s);
  }
  return check;
}

Table to_table(const OracleCheck& check) {
  Table t{{"sample", "tau_requested", "tau_effective", "interference_phase",
           "closed_form", "numeric", "rel_residual", "closed_form_requested",
           "rel_residual_requested", "rel_residual_requested_fine", "seed"},
          {}};
  for (std::size_t i = 0; i < check.samples.size(); ++i) {
    const OracleSample& s = check.samples[i];
    t.add_row({std::to_string(i), format_number(s.tau_requested),
               format_number(s.tau_effective),
               format_number(interference_phase(s.schedule)),
               format_number(s.closed_aligned), format_number(s.numeric),
               format_number(s.residual_aligned),
               format_number(s.closed_requested),
               format_number(s.residual_coarse), format_number(s.residual_fine),
               std::to_string(check.seed)});
  }
  return t;
}

Table run_sweep(const SweepSpec& spec, Protocol protocol, int n_bins) {
  spec.validate();
  switch (spec.variable) {
    case SweepVariable::kTau: {
      VisibilityOptions opts;
      opts.protocol = protocol;
      opts.n_bins = n_bins;
      return to_table(visibility_sweep(spec, opts));
    }
    case SweepVariable::kPhaseSum: {
      const TimingConfig& timing = spec.baseline.timing;
      const oracle::TwoPhotonAmplitude state = oracle::build_state(timing, n_bins);
      Table t{{"phase_sum", "p_closed", "p_oracle"}, {}};
      for (double phi : spec.grid()) {
        const PhaseSchedule s = PhaseSchedule::bb84(0.0, phi, 0.0, 0.0);
        t.add_row({format_number(phi),
                   format_number(owaqc_coincidence_probability(s, timing)
                                     .normalized_value),
                   format_number(oracle::numeric_coincidence_probability(
                                     state, s, timing, oracle_workers())
                                     .normalized)});
      }
      return t;
    }
    case SweepVariable::kTransmittance:
    case SweepVariable::kDriftStddev: {
      Table t{{std::string(to_string(spec.variable)), "detection_rate", "qber",
               "sifted_fraction", "detections", "sifted_length", "seed",
               "config_hash"},
              {}};
      for (double v : spec.grid()) {
        SessionConfig cfg = spec.baseline;
        cfg.keep_keys = false;
        if (spec.variable == SweepVariable::kTransmittance) {
          cfg.channel.per_photon_transmittance = v;
        } else {
          cfg.drift.phase_drift_stddev_per_pulse = v;
        }
        const SessionResult r = run_session(protocol, cfg);
        t.add_row({format_number(v), format_number(r.detection_rate()),
                   format_number(r.qber), format_number(r.sifted_fraction()),
                   std::to_string(r.detections), std::to_string(r.sifted_length),
                   std::to_string(cfg.seed), hex64(config_hash(cfg))});
      }
      return t;
    }
  }
  throw std::logic_error("unreachable sweep variable");
}

}  // namespace owaqc::analysis
