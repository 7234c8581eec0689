#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace streetlab::translation {

struct SimConfig {
  std::string repo_dir = "scenarios";
  double dt = 0.05;
  std::uint64_t seed = 0;
  double boot_deadline = 30.0;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Process environment.
std::optional<std::string> process_env(const std::string& name);

/// Reads SCENARIO_REPO_DIR, SIM_DT, SIM_SEED and BOOT_DEADLINE_SECS over the
/// defaults. Throws ConfigError for values that do not parse or are out of
/// range (dt and deadline must be positive).
SimConfig load_config(const EnvLookup& env = process_env, SimConfig defaults = {});

}  // namespace streetlab::translation
