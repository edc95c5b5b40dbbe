// routh: command line front end for simulate / compare / order / check.

#include "routh/cli/runner.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace {

using routh::cli::ConfigError;
using routh::cli::RunConfig;

// Flags that mirror RunConfig keys. Values are kept as text and applied after the
// config file so that flags win.
struct Overrides {
  std::map<std::string, std::string> values;
  std::vector<std::string> emit;

  void add(CLI::App* app) {
    static const char* keys[] = {"system", "J2", "m1", "m2", "l1", "l2", "g", "method", "order", "h",
                                 "steps",  "mu", "q",  "qdot", "x", "xdot", "ic", "out"};
    for (const char* k : keys) {
      app->add_option_function<std::string>(
          std::string("--") + k, [this, k](const std::string& v) { values[k] = v; },
          std::string("override '") + k + "'");
    }
    app->add_option("--emit", emit, "outputs: trajectory energy momentum reconstruction");
  }

  std::vector<std::pair<std::string, std::string>> pairs() const {
    std::vector<std::pair<std::string, std::string>> out;
    // ic first so that explicit flags override values read from the IC file.
    if (auto it = values.find("ic"); it != values.end()) out.emplace_back(*it);
    for (const auto& kv : values) {
      if (kv.first != "ic") out.emplace_back(kv);
    }
    if (!emit.empty()) {
      std::string joined;
      for (const auto& e : emit) joined += e + " ";
      out.emplace_back("emit", joined);
    }
    return out;
  }
};

std::optional<std::string> opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Routh reduction: simulations and diagnostics"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  std::string config_path;
  Overrides sim_over;
  auto* sim = app.add_subcommand("simulate", "run one configuration and write CSV output");
  sim->add_option("--config,-c", config_path, "key = value config file");
  sim_over.add(sim);

  std::string config_a, config_b, compare_out = ".";
  Overrides cmp_over;
  auto* cmp = app.add_subcommand("compare", "run two configurations and write paired drift series");
  cmp->add_option("--a", config_a, "first config file")->required();
  cmp->add_option("--b", config_b, "second config file")->required();
  cmp->add_option("--compare-out", compare_out, "directory for compare.csv");
  cmp_over.add(cmp);

  std::string order_config;
  Overrides ord_over;
  std::vector<double> h_list = {0.1, 0.05, 0.025, 0.0125};
  double final_time = 6.4;
  auto* ord = app.add_subcommand("order", "measure the global convergence order");
  ord->add_option("--config,-c", order_config, "key = value config file");
  ord->add_option("--h-list", h_list, "strictly decreasing step sizes")->expected(2, 64);
  ord->add_option("--T", final_time, "final time");
  ord_over.add(ord);

  auto* chk = app.add_subcommand("check", "run the quick invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : routh::cli::kConfigError;
  }

  try {
    if (*sim) return routh::cli::run(routh::cli::load_config(opt(config_path), sim_over.pairs()), std::cerr);
    if (*cmp) {
      const auto extra = cmp_over.pairs();
      const RunConfig a = routh::cli::load_config(config_a, extra);
      const RunConfig b = routh::cli::load_config(config_b, extra);
      return routh::cli::compare(a, b, compare_out, std::cerr);
    }
    if (*ord) {
      return routh::cli::order(routh::cli::load_config(opt(order_config), ord_over.pairs()), h_list, final_time,
                               std::cout);
    }
    if (*chk) return routh::cli::check(std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return routh::cli::kConfigError;
  }
  return routh::cli::kConfigError;
}
