#include "streetlab/translation/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace streetlab::translation {

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

namespace {

double positive(const std::string& name, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v) || v <= 0.0)
    throw ConfigError(name + " must be a positive number, got '" + text + "'");
  return v;
}

}  // namespace

SimConfig load_config(const EnvLookup& env, SimConfig cfg) {
  if (auto v = env("SCENARIO_REPO_DIR")) {
    if (v->empty()) throw ConfigError("SCENARIO_REPO_DIR is empty");
    cfg.repo_dir = *v;
  }
  if (auto v = env("SIM_DT")) cfg.dt = positive("SIM_DT", *v);
  if (auto v = env("BOOT_DEADLINE_SECS")) cfg.boot_deadline = positive("BOOT_DEADLINE_SECS", *v);
  if (auto v = env("SIM_SEED")) {
    std::uint64_t seed = 0;
    const auto* end = v->data() + v->size();
    auto [ptr, ec] = std::from_chars(v->data(), end, seed);
    if (v->empty() || ec != std::errc{} || ptr != end)
      throw ConfigError("SIM_SEED must be a non-negative integer, got '" + *v + "'");
    cfg.seed = seed;
  }
  return cfg;
}

}  // namespace streetlab::translation
