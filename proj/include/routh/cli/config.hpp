#pragma once

#include "routh/core.hpp"
#include "routh/systems.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace routh::cli {

/// Invalid or inconsistent configuration. Maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string system = "satellite";  // satellite | dsp
  double j2 = 0.05;
  DspParams dsp;
  std::string method = "sprk";  // del | sprk | dr | rsprk | rk4
  int order = 4;                // 2 | 4, stage count of the Gauss tableau
  std::optional<double> h;      // default 0.3 (satellite), 0.01 (dsp)
  long steps = 1000;
  std::optional<double> mu;
  // Full initial condition (q, qdot) or reduced (x, xdot).
  std::optional<Vector> q;
  std::optional<Vector> qdot;
  std::optional<Vector> x;
  std::optional<Vector> xdot;
  std::string out = ".";
  std::set<std::string> emit = {"trajectory"};

  double step() const;
  bool reduced_method() const { return method == "dr" || method == "rsprk"; }
  bool has_full_ic() const { return q.has_value(); }
};

/// key = value lines; '#' starts a comment; blank lines ignored. Later keys win.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);
std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::string& path);

/// Applies one setting. Keys: system, J2, m1, m2, l1, l2, g, method, order, h, steps,
/// mu, q, qdot, x, xdot, ic (file of further keys), out, emit.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Checks field ranges and method / initial-condition compatibility.
void validate(const RunConfig& cfg);

/// Builds a config from an optional file and override pairs applied afterwards.
RunConfig load_config(const std::optional<std::string>& path,
                      const std::vector<std::pair<std::string, std::string>>& overrides);

/// Numbers separated by commas and/or whitespace.
Vector parse_vector(const std::string& text);

}  // namespace routh::cli
