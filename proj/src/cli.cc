#include "owaqc/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <type_traits>

#include "CLI11.hpp"
#include "owaqc/analysis.h"

namespace owaqc::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string join_path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Reads keys out of one JSON object and rejects any key nobody asked for.
class Section {
 public:
  Section(const json& node, std::string path)
      : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      throw ConfigError("config key '" + path_ + "' must be an object");
    }
  }

  template <typename T>
  void read(const std::string& key, T& target) {
    seen_.insert(key);
    auto it = node_.find(key);
    if (it == node_.end()) return;
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
      if (!it->is_number_unsigned()) {
        throw ConfigError("config key '" + join_path(path_, key) +
                          "' must be a non-negative integer");
      }
    }
    try {
      target = it->get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config key '" + join_path(path_, key) +
                        "' has the wrong type");
    }
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    static const json empty = json::object();
    return Section(it == node_.end() ? empty : *it, join_path(path_, key));
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError("unknown config key '" + join_path(path_, it.key()) +
                          "'");
      }
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_schedule(Section s, PhaseSchedule& p) {
  s.read("a1", p.a1);
  s.read("a2", p.a2);
  s.read("a3", p.a3);
  s.read("a4", p.a4);
  s.read("b1", p.b1);
  s.read("b2", p.b2);
  s.read("b3", p.b3);
  s.read("b4", p.b4);
  s.finish();
}

template <typename Fn>
void validated(const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid value for '" + key + "': " + e.what());
  }
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("invalid value for '" + key + "': " + what);
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig c;
  Section root(doc, "");

  int version = kConfigVersion;
  root.read("version", version);
  require(version == kConfigVersion, "version",
          "unsupported config version " + std::to_string(version));

  std::string protocol = std::string(to_string(c.protocol));
  root.read("protocol", protocol);
  validated("protocol", [&] { c.protocol = parse_protocol(protocol); });
  root.read("seed", c.session.seed);

  {
    Section timing = root.child("timing");
    double tau_over_t = 1.0;
    timing.read("tau_over_t", tau_over_t);
    timing.finish();
    c.session.timing = TimingConfig{1.0, tau_over_t};
    validated("timing.tau_over_t", [&] { c.session.timing.validate(); });
  }
  {
    Section session = root.child("session");
    session.read("pulses", c.session.pulses);
    session.read("alice_common_phase", c.session.alice_common_phase);
    session.read("bob_common_phase", c.session.bob_common_phase);
    session.read("emit_keys", c.emit_keys);
    session.finish();
    require(c.session.pulses > 0, "session.pulses", "must be > 0");
  }
  {
    Section ch = root.child("channel");
    ChannelModel& m = c.session.channel;
    ch.read("per_photon_transmittance", m.per_photon_transmittance);
    ch.read("detector_efficiency", m.detector_efficiency);
    ch.read("dark_count_probability_per_gate", m.dark_count_probability_per_gate);
    ch.read("backscatter_click_probability", m.backscatter_click_probability);
    ch.read("postselection_enabled", m.postselection_enabled);
    ch.finish();
    validated("channel", [&] { m.validate(); });
  }
  {
    Section dr = root.child("drift");
    DriftModel& d = c.session.drift;
    dr.read("phase_drift_stddev_per_pulse", d.phase_drift_stddev_per_pulse);
    dr.read("delay_rate_per_pulse", d.delay_rate_per_pulse);
    dr.read("delay_table", d.delay_table);
    dr.finish();
    validated("drift", [&] { d.validate(); });
  }
  {
    Section at = root.child("attack");
    std::string kind = "none";
    at.read("kind", kind);
    at.read("fraction", c.session.attack.fraction);
    at.finish();
    if (kind == "none") {
      c.session.attack.kind = AttackKind::kNone;
    } else if (kind == "intercept-resend") {
      c.session.attack.kind = AttackKind::kInterceptResend;
    } else {
      throw ConfigError("invalid value for 'attack.kind': '" + kind +
                        "' (expected none or intercept-resend)");
    }
    validated("attack.fraction", [&] { c.session.attack.validate(); });
  }
  {
    Section fr = root.child("fringe");
    fr.read("points", c.fringe.points);
    fr.read("bins", c.fringe.bins);
    read_schedule(fr.child("base_schedule"), c.fringe.base);
    fr.finish();
    require(c.fringe.points >= 8, "fringe.points", "must be >= 8");
    require(c.fringe.bins >= 8 && c.fringe.bins % 2 == 0, "fringe.bins",
            "must be even and >= 8");
    require(c.fringe.base.is_finite(), "fringe.base_schedule",
            "phases must be finite");
  }
  {
    Section vs = root.child("visibility_scan");
    VisibilityScanSettings& v = c.visibility_scan;
    vs.read("tau_over_t_lo", v.tau_over_t_lo);
    vs.read("tau_over_t_hi", v.tau_over_t_hi);
    vs.read("points", v.points);
    vs.read("phase_points", v.phase_points);
    vs.read("bins", v.bins);
    vs.finish();
    require(v.tau_over_t_lo >= 0.0 && v.tau_over_t_hi <= 2.0 &&
                v.tau_over_t_lo < v.tau_over_t_hi,
            "visibility_scan.tau_over_t_lo",
            "need 0 <= tau_over_t_lo < tau_over_t_hi <= 2");
    require(v.points >= 2, "visibility_scan.points", "must be >= 2");
    require(v.phase_points >= 16, "visibility_scan.phase_points", "must be >= 16");
    require(v.bins >= 8 && v.bins % 2 == 0, "visibility_scan.bins",
            "must be even and >= 8");
  }
  {
    Section oc = root.child("oracle_check");
    oc.read("bins", c.oracle_check.bins);
    oc.read("samples", c.oracle_check.samples);
    oc.read("tolerance", c.oracle_check.tolerance);
    oc.finish();
    require(c.oracle_check.bins >= 8 && c.oracle_check.bins % 2 == 0,
            "oracle_check.bins", "must be even and >= 8");
    require(c.oracle_check.samples >= 1, "oracle_check.samples", "must be >= 1");
    require(c.oracle_check.tolerance > 0.0, "oracle_check.tolerance",
            "must be > 0");
  }
  {
    Section cmp = root.child("compare");
    cmp.read("transmittance", c.compare.transmittance);
    cmp.read("backscatter", c.compare.backscatter);
    cmp.finish();
    require(!c.compare.transmittance.empty(), "compare.transmittance",
            "must not be empty");
    require(!c.compare.backscatter.empty(), "compare.backscatter",
            "must not be empty");
    for (double t : c.compare.transmittance) {
      require(t > 0.0 && t <= 1.0, "compare.transmittance",
              "entries must be in (0, 1]");
    }
    for (double b : c.compare.backscatter) {
      require(b >= 0.0 && b < 1.0, "compare.backscatter",
              "entries must be in [0, 1)");
    }
  }
  root.finish();
  return c;
}

ordered_json to_json(const RunConfig& c) {
  const SessionConfig& s = c.session;
  ordered_json j;
  j["version"] = kConfigVersion;
  j["protocol"] = std::string(to_string(c.protocol));
  j["seed"] = s.seed;
  j["timing"] = {{"tau_over_t", s.timing.tau / s.timing.t_window}};
  j["session"] = {{"pulses", s.pulses},
                  {"alice_common_phase", s.alice_common_phase},
                  {"bob_common_phase", s.bob_common_phase},
                  {"emit_keys", c.emit_keys}};
  j["channel"] = {
      {"per_photon_transmittance", s.channel.per_photon_transmittance},
      {"detector_efficiency", s.channel.detector_efficiency},
      {"dark_count_probability_per_gate", s.channel.dark_count_probability_per_gate},
      {"backscatter_click_probability", s.channel.backscatter_click_probability},
      {"postselection_enabled", s.channel.postselection_enabled}};
  j["drift"] = {
      {"phase_drift_stddev_per_pulse", s.drift.phase_drift_stddev_per_pulse},
      {"delay_rate_per_pulse", s.drift.delay_rate_per_pulse},
      {"delay_table", s.drift.delay_table}};
  j["attack"] = {
      {"kind", s.attack.kind == AttackKind::kNone ? "none" : "intercept-resend"},
      {"fraction", s.attack.fraction}};
  const PhaseSchedule& b = c.fringe.base;
  j["fringe"] = {{"points", c.fringe.points},
                 {"bins", c.fringe.bins},
                 {"base_schedule",
                  {{"a1", b.a1}, {"a2", b.a2}, {"a3", b.a3}, {"a4", b.a4},
                   {"b1", b.b1}, {"b2", b.b2}, {"b3", b.b3}, {"b4", b.b4}}}};
  const VisibilityScanSettings& v = c.visibility_scan;
  j["visibility_scan"] = {{"tau_over_t_lo", v.tau_over_t_lo},
                          {"tau_over_t_hi", v.tau_over_t_hi},
                          {"points", v.points},
                          {"phase_points", v.phase_points},
                          {"bins", v.bins}};
  j["oracle_check"] = {{"bins", c.oracle_check.bins},
                       {"samples", c.oracle_check.samples},
                       {"tolerance", c.oracle_check.tolerance}};
  j["compare"] = {{"transmittance", c.compare.transmittance},
                  {"backscatter", c.compare.backscatter}};
  return j;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;
  }

  json* node = &doc;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) throw ConfigError("override key '" + path + "' is malformed");
    if (!node->is_object()) {
      throw ConfigError("override key '" + path + "' descends into a non-object");
    }
    if (i + 1 == parts.size()) {
      (*node)[parts[i]] = value;
    } else {
      node = &(*node)[parts[i]];
      if (node->is_null()) *node = json::object();
    }
  }
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

void write_json(const fs::path& path, const ordered_json& j) {
  write_file(path, j.dump(2) + "\n");
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json fit_json(const analysis::FringeFit& f) {
  return {{"offset", f.offset},
          {"amplitude", f.amplitude},
          {"phase", f.phase},
          {"visibility", optional_json(f.visibility)},
          {"visibility_stderr", f.visibility_stderr}};
}

int cmd_fringe(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const analysis::FringeScan scan = analysis::fringe_scan(
      c.fringe.base, c.session.timing, c.fringe.points, c.fringe.bins);
  write_file(dir / "fringe.csv", analysis::to_table(scan).to_csv());
  ordered_json j;
  j["config"] = to_json(c);
  j["tau_over_t"] = c.session.timing.tau;
  j["oracle_tau_effective"] = scan.tau_effective;
  j["closed_form_fit"] = fit_json(scan.closed_fit);
  j["closed_form_fit"]["period"] = scan.closed_period;
  j["oracle_fit"] = fit_json(scan.oracle_fit);
  write_json(dir / "fringe.json", j);
  out << "fitted visibility: closed form "
      << analysis::format_number(scan.closed_fit.visibility) << ", oracle "
      << analysis::format_number(scan.oracle_fit.visibility) << "\n";
  return kExitOk;
}

int cmd_visibility_scan(const RunConfig& c, const fs::path& dir,
                        std::ostream& out) {
  analysis::SweepSpec spec;
  spec.variable = analysis::SweepVariable::kTau;
  spec.lo = c.visibility_scan.tau_over_t_lo;
  spec.hi = c.visibility_scan.tau_over_t_hi;
  spec.points = c.visibility_scan.points;
  spec.baseline = c.session;
  analysis::VisibilityOptions opts;
  opts.protocol = c.protocol;
  opts.phase_points = c.visibility_scan.phase_points;
  opts.n_bins = c.visibility_scan.bins;
  const auto rows = analysis::visibility_sweep(spec, opts);
  write_file(dir / "visibility_scan.csv", analysis::to_table(rows).to_csv());

  ordered_json j;
  j["config"] = to_json(c);
  ordered_json points = ordered_json::array();
  for (const auto& r : rows) {
    points.push_back({{"tau", r.tau},
                      {"closed_form_V", optional_json(r.closed_form)},
                      {"oracle_V", optional_json(r.oracle)},
                      {"montecarlo_V", optional_json(r.monte_carlo)},
                      {"stderr", r.monte_carlo_stderr}});
    out << "tau/T " << analysis::format_number(r.tau) << ": V closed "
        << analysis::format_number(r.closed_form) << ", oracle "
        << analysis::format_number(r.oracle) << ", monte carlo "
        << analysis::format_number(r.monte_carlo) << " +/- "
        << analysis::format_number(r.monte_carlo_stderr) << "\n";
  }
  j["points"] = points;
  write_json(dir / "visibility_scan.json", j);
  return kExitOk;
}

int cmd_keyexchange(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const SessionResult r = run_session(c.protocol, c.session);
  ordered_json j;
  j["config"] = to_json(c);
  j["result"] = owaqc::to_json(r, c.emit_keys);
  write_json(dir / "keyexchange.json", j);
  out << to_string(c.protocol) << ": " << r.detections << " detections, "
      << r.sifted_length << " sifted, QBER "
      << analysis::format_number(r.qber) << "\n";
  return kExitOk;
}

int cmd_oracle_check(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const analysis::OracleCheck check = analysis::oracle_check(
      c.oracle_check.samples, c.oracle_check.bins, c.session.seed);
  write_file(dir / "oracle_residuals.csv", analysis::to_table(check).to_csv());
  const double max_res = check.max_residual_aligned();
  ordered_json j;
  j["config"] = to_json(c);
  j["bins"] = check.n_bins;
  j["samples"] = check.samples.size();
  j["tolerance"] = c.oracle_check.tolerance;
  j["max_residual"] = max_res;
  j["max_residual_tau_le_T"] = check.max_residual_aligned(false);
  j["max_residual_tau_gt_T"] = check.max_residual_aligned(true);
  j["max_residual_requested_tau"] = check.max_residual_coarse();
  j["max_residual_requested_tau_double_bins"] = check.max_residual_fine();
  j["within_tolerance"] = max_res <= c.oracle_check.tolerance;
  write_json(dir / "oracle_check.json", j);
  out << "max residual: " << analysis::format_number(max_res) << " (tau <= T: "
      << analysis::format_number(check.max_residual_aligned(false))
      << ", tau > T: "
      << analysis::format_number(check.max_residual_aligned(true)) << ")\n";
  return kExitOk;
}

int cmd_compare(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const auto rows = analysis::protocol_comparison(
      c.compare.transmittance, c.compare.backscatter, c.session);
  const analysis::Table table = analysis::to_table(rows);
  write_file(dir / "compare.csv", table.to_csv());
  ordered_json j;
  j["config"] = to_json(c);
  ordered_json cells = ordered_json::array();
  for (const auto& r : rows) {
    cells.push_back({{"transmittance", r.transmittance},
                     {"backscatter", r.backscatter},
                     {"aqc", owaqc::to_json(r.aqc)},
                     {"ow_aqc", owaqc::to_json(r.ow_aqc)},
                     {"rate_ratio", r.rate_ratio()},
                     {"qber_difference", r.qber_difference()}});
  }
  j["cells"] = cells;
  write_json(dir / "compare.json", j);
  out << table.to_csv();
  return kExitOk;
}

int cmd_trojan_report(const RunConfig& c, const fs::path& dir,
                      std::ostream& out) {
  analysis::Table t{{"protocol", "isolator", "exposure", "reason"}, {}};
  ordered_json j;
  j["config"] = to_json(c);
  ordered_json cases = ordered_json::array();
  for (Protocol p : {Protocol::kAqc, Protocol::kOwAqc}) {
    for (bool iso : {false, true}) {
      const ExposureReport r = trojan_horse_exposure(p, iso);
      t.add_row({std::string(to_string(p)), iso ? "true" : "false",
                 std::string(to_string(r.exposure)), r.reason});
      cases.push_back({{"protocol", std::string(to_string(p))},
                       {"isolator", iso},
                       {"exposure", std::string(to_string(r.exposure))},
                       {"reason", r.reason}});
    }
  }
  j["cases"] = cases;
  write_file(dir / "trojan_report.csv", t.to_csv());
  write_json(dir / "trojan_report.json", j);
  out << t.to_csv();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "Autocompensating QKD simulator: closed-form interference, brute-force "
      "two-photon oracle, and Monte Carlo BB84 sessions.\n"
      "Config files are JSON (\"version\": 1); phases in radians, times in "
      "units of the interval length T."};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string output_dir = "results";
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  std::string protocol;
  std::uint64_t pulses = 0;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--output-dir", output_dir, "Directory for CSV/JSON outputs")
      ->capture_default_str();
  app.add_option("--set", overrides,
                 "Override a config key, e.g. --set channel.per_photon_transmittance=0.5")
      ->take_all()
      ->expected(1);
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "Top-level RNG seed (overrides config 'seed')");
  CLI::Option* protocol_opt =
      app.add_option("--protocol", protocol, "aqc or ow-aqc (overrides config 'protocol')");
  CLI::Option* pulses_opt =
      app.add_option("--pulses", pulses, "Pulses per session or per Monte Carlo phase point");

  // Subcommand flags below map onto dotted config keys, applied after --set.
  double tau_over_t = 1.0;
  int points = 0;
  int bins = 0;
  int samples = 0;
  int phase_points = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::string attack;
  bool emit_keys = false;
  std::vector<double> transmittances;
  std::vector<double> backscatters;

  CLI::App* fringe = app.add_subcommand("fringe", "Phase-fringe scan: closed form vs oracle, fitted visibility");
  CLI::Option* f_tau = fringe->add_option("--tau-over-t", tau_over_t, "Delay tau in units of T");
  CLI::Option* f_points = fringe->add_option("--points", points, "Phase points (>= 8)");
  CLI::Option* f_bins = fringe->add_option("--bins", bins, "Oracle grid bins (even, >= 8)");

  CLI::App* scan = app.add_subcommand("visibility-scan", "Visibility vs delay: closed form, oracle, Monte Carlo");
  CLI::Option* v_lo = scan->add_option("--lo", lo, "Lowest tau/T");
  CLI::Option* v_hi = scan->add_option("--hi", hi, "Highest tau/T");
  CLI::Option* v_points = scan->add_option("--points", points, "Delay points (>= 2)");
  CLI::Option* v_phase = scan->add_option("--phase-points", phase_points, "Phase points per delay (>= 16)");
  CLI::Option* v_bins = scan->add_option("--bins", bins, "Oracle grid bins");

  CLI::App* key = app.add_subcommand("keyexchange", "Run one BB84 session");
  CLI::Option* k_attack = key->add_option("--attack", attack, "none or intercept-resend");
  CLI::Option* k_keys = key->add_flag("--emit-keys", emit_keys, "Include sifted keys in the JSON output");
  CLI::Option* k_tau = key->add_option("--tau-over-t", tau_over_t, "Delay tau in units of T");

  CLI::App* oracle_cmd = app.add_subcommand("oracle-check", "Random oracle vs closed-form residual table");
  CLI::Option* o_bins = oracle_cmd->add_option("--bins", bins, "Oracle grid bins");
  CLI::Option* o_samples = oracle_cmd->add_option("--samples", samples, "Random samples");

  CLI::App* compare = app.add_subcommand("compare", "Paired AQC vs OW-AQC sessions over a loss/backscatter grid");
  CLI::Option* c_t = compare->add_option("--transmittance", transmittances, "Per-photon transmittance grid");
  CLI::Option* c_b = compare->add_option("--backscatter", backscatters, "AQC backscatter click probability grid");

  app.add_subcommand("trojan-report", "Trojan-horse exposure classification");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig config;
  try {
    json doc = json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot open config file '" + config_path + "'");
      try {
        doc = json::parse(f);
      } catch (const json::exception& e) {
        throw ConfigError("config file '" + config_path + "' is not valid JSON: " +
                          e.what());
      }
      if (!doc.is_object() || !doc.contains("version")) {
        throw ConfigError("config file '" + config_path +
                          "' must be an object with a 'version' key");
      }
    }
    for (const auto& o : overrides) apply_override(doc, o);

    auto set_if = [&doc](CLI::Option* opt, const std::string& path, json v) {
      if (opt->count() == 0) return;
      apply_override(doc, path + "=" + v.dump());
    };
    set_if(seed_opt, "seed", seed);
    set_if(protocol_opt, "protocol", protocol);
    set_if(pulses_opt, "session.pulses", pulses);
    set_if(f_tau, "timing.tau_over_t", tau_over_t);
    set_if(k_tau, "timing.tau_over_t", tau_over_t);
    set_if(f_points, "fringe.points", points);
    set_if(f_bins, "fringe.bins", bins);
    set_if(v_lo, "visibility_scan.tau_over_t_lo", lo);
    set_if(v_hi, "visibility_scan.tau_over_t_hi", hi);
    set_if(v_points, "visibility_scan.points", points);
    set_if(v_phase, "visibility_scan.phase_points", phase_points);
    set_if(v_bins, "visibility_scan.bins", bins);
    set_if(k_attack, "attack.kind", attack);
    set_if(k_keys, "session.emit_keys", emit_keys);
    set_if(o_bins, "oracle_check.bins", bins);
    set_if(o_samples, "oracle_check.samples", samples);
    set_if(c_t, "compare.transmittance", transmittances);
    set_if(c_b, "compare.backscatter", backscatters);

    config = parse_config(doc);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const fs::path dir(output_dir);
    fs::create_directories(dir);
    if (command == "fringe") return cmd_fringe(config, dir, out);
    if (command == "visibility-scan") return cmd_visibility_scan(config, dir, out);
    if (command == "keyexchange") return cmd_keyexchange(config, dir, out);
    if (command == "oracle-check") return cmd_oracle_check(config, dir, out);
    if (command == "compare") return cmd_compare(config, dir, out);
    return cmd_trojan_report(config, dir, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace owaqc::cli
