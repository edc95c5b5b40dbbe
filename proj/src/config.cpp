#include "routh/cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace routh::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError("'" + key + "': expected a finite number, got '" + text + "'");
  }
  return v;
}

long parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError("'" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

}  // namespace

Vector parse_vector(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::vector<double> vals;
  std::string tok;
  while (is >> tok) vals.push_back(parse_real("vector", tok));
  if (vals.empty()) throw ConfigError("expected a list of numbers, got '" + text + "'");
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "system") {
    if (value != "satellite" && value != "dsp") throw ConfigError("system must be 'satellite' or 'dsp'");
    cfg.system = value;
  } else if (key == "J2" || key == "j2") {
    cfg.j2 = parse_real(key, value);
  } else if (key == "m1") {
    cfg.dsp.m1 = parse_real(key, value);
  } else if (key == "m2") {
    cfg.dsp.m2 = parse_real(key, value);
  } else if (key == "l1") {
    cfg.dsp.l1 = parse_real(key, value);
  } else if (key == "l2") {
    cfg.dsp.l2 = parse_real(key, value);
  } else if (key == "g") {
    cfg.dsp.g = parse_real(key, value);
  } else if (key == "method") {
    static const std::set<std::string> methods = {"del", "sprk", "dr", "rsprk", "rk4"};
    if (!methods.count(value)) throw ConfigError("method must be one of del, sprk, dr, rsprk, rk4");
    cfg.method = value;
  } else if (key == "order") {
    cfg.order = static_cast<int>(parse_integer(key, value));
  } else if (key == "h") {
    cfg.h = parse_real(key, value);
  } else if (key == "steps") {
    cfg.steps = parse_integer(key, value);
  } else if (key == "mu") {
    cfg.mu = parse_real(key, value);
  } else if (key == "q") {
    cfg.q = parse_vector(value);
  } else if (key == "qdot") {
    cfg.qdot = parse_vector(value);
  } else if (key == "x") {
    cfg.x = parse_vector(value);
  } else if (key == "xdot") {
    cfg.xdot = parse_vector(value);
  } else if (key == "ic") {
    for (const auto& [k, v] : read_key_value_file(value)) {
      if (k == "ic") throw ConfigError("nested 'ic' files are not supported");
      apply_setting(cfg, k, v);
    }
  } else if (key == "out") {
    if (value.empty()) throw ConfigError("out must not be empty");
    cfg.out = value;
  } else if (key == "emit") {
    static const std::set<std::string> kinds = {"trajectory", "energy", "momentum", "reconstruction"};
    std::string t = value;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream is(t);
    std::set<std::string> emit;
    std::string tok;
    while (is >> tok) {
      if (!kinds.count(tok)) throw ConfigError("unknown emit kind '" + tok + "'");
      emit.insert(tok);
    }
    if (emit.empty()) throw ConfigError("emit must name at least one output");
    cfg.emit = std::move(emit);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

double RunConfig::step() const {
  if (h) return *h;
  return system == "satellite" ? 0.3 : 0.01;
}

void validate(const RunConfig& cfg) {
  if (!(cfg.step() > 0.0)) throw ConfigError("h must be positive");
  if (cfg.steps < 1) throw ConfigError("steps must be at least 1");
  if (cfg.order != 2 && cfg.order != 4) throw ConfigError("order must be 2 or 4");
  if (cfg.method == "del" && cfg.order != 2) throw ConfigError("del uses the midpoint rule; order must be 2");
  if (cfg.method == "dr" && cfg.order != 2) throw ConfigError("dr uses the midpoint rule; order must be 2");
  if (cfg.system == "satellite" && !(cfg.j2 >= 0.0)) throw ConfigError("J2 must be non-negative");
  if (cfg.system == "dsp") {
    try {
      cfg.dsp.validate();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }

  const int n = cfg.system == "satellite" ? 3 : 4;
  const int d = n - 1;
  const bool full = cfg.q || cfg.qdot;
  const bool reduced = cfg.x || cfg.xdot;
  if (full && reduced) throw ConfigError("give either a full (q, qdot) or a reduced (x, xdot) initial condition");
  if (!full && !reduced) throw ConfigError("missing initial condition: set q and qdot, or x and xdot");
  if (full) {
    if (!cfg.q || !cfg.qdot) throw ConfigError("full initial condition needs both q and qdot");
    if (cfg.q->size() != n || cfg.qdot->size() != n) {
      throw ConfigError("q and qdot must have " + std::to_string(n) + " components for " + cfg.system);
    }
  } else {
    if (!cfg.x || !cfg.xdot) throw ConfigError("reduced initial condition needs both x and xdot");
    if (cfg.x->size() != d || cfg.xdot->size() != d) {
      throw ConfigError("x and xdot must have " + std::to_string(d) + " components for " + cfg.system);
    }
    if (!cfg.mu) throw ConfigError("a reduced initial condition requires mu");
  }
  if (cfg.emit.count("reconstruction") && !cfg.reduced_method()) {
    throw ConfigError("reconstruction output applies to dr and rsprk runs only");
  }
}

RunConfig load_config(const std::optional<std::string>& path,
                      const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig cfg;
  if (path) {
    for (const auto& [k, v] : read_key_value_file(*path)) apply_setting(cfg, k, v);
  }
  for (const auto& [k, v] : overrides) apply_setting(cfg, k, v);
  return cfg;
}

}  // namespace routh::cli
