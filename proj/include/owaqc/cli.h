#pragma once

// Command-line front end. Kept as a library so tests can drive it in-process.
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration error (bad flag,
// missing config file, unknown key, out-of-range value).

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "owaqc/phase_core.h"
#include "owaqc/protocol.h"

namespace owaqc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

inline constexpr int kConfigVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FringeSettings {
  int points = 32;
  int bins = 512;
  PhaseSchedule base{};
};

struct VisibilityScanSettings {
  double tau_over_t_lo = 0.5;
  double tau_over_t_hi = 1.0;
  int points = 3;
  int phase_points = 16;
  int bins = 512;
};

struct OracleCheckSettings {
  int bins = 512;
  int samples = 100;
  double tolerance = 1e-6;
};

struct CompareSettings {
  std::vector<double> transmittance{0.5, 1.0};
  std::vector<double> backscatter{0.0, 0.01, 0.05};
};

// Fully resolved configuration. Times are in units of T (T = 1), phases in
// radians.
struct RunConfig {
  Protocol protocol = Protocol::kOwAqc;
  SessionConfig session{};
  bool emit_keys = false;
  FringeSettings fringe{};
  VisibilityScanSettings visibility_scan{};
  OracleCheckSettings oracle_check{};
  CompareSettings compare{};
};

// Strict parse: unknown keys and wrongly typed values throw ConfigError naming
// the dotted key path.
RunConfig parse_config(const nlohmann::json& doc);

// Echo of the resolved configuration (stable key order).
nlohmann::ordered_json to_json(const RunConfig& c);

// Sets doc[a][b]... = value for a dotted path "a.b.c". The value is parsed as
// JSON when possible, otherwise stored as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace owaqc::cli
