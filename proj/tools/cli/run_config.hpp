#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace pseudofrac::cli {

/// Bad flag, bad value or bad config file; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown after --help has been printed.
struct HelpRequested {};

enum class Format { csv, json };

struct RunConfig {
  std::string command;
  std::string domain = "ball:1";
  double s = 0.5;
  double p = 2.0;
  std::vector<double> p_list{2, 4, 8, 16, 32};
  std::vector<double> s_list{0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
  std::optional<double> h;  // diameter / 24 when unset
  double boundary_spacing = 0.01;
  std::uint64_t seed = 0;
  int restarts = 1;
  double grad_tol = 1e-8;
  int max_iters = 20000;
  std::string out = ".";
  Format format = Format::csv;
  std::string suite = "inequalities";
  bool local = false;          // eig: solve the local problem instead
  bool record_timing = true;   // false writes wall_time_ms = 0

  bool operator==(const RunConfig&) const = default;
};

inline constexpr const char* kCommands[] = {"eig",     "sweep-p", "sweep-s",  "geom",
                                            "diagram", "check",   "viscosity"};
inline constexpr const char* kSuites[] = {"inequalities", "oracle"};

/// Command line plus the file named by --config; flags win over the file.
RunConfig parse_config(int argc, const char* const* argv);

/// Rejects unknown keys and values of the wrong type.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);
std::string serialize(const RunConfig& config);

/// Range checks shared by both entry points. Throws UsageError naming the flag.
void validate(const RunConfig& config);

}  // namespace pseudofrac::cli
