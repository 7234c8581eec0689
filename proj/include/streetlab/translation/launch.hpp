#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "streetlab/behavior/engine.hpp"
#include "streetlab/rdf/dataset.hpp"
#include "streetlab/sim/world.hpp"
#include "streetlab/translation/plan.hpp"

namespace streetlab::translation {

constexpr double kDefaultBootDeadline = 30.0;

enum class Readiness { Booting, Ready, Failed };
std::string_view to_string(Readiness r);

/// Receives plan commands one at a time, then boots the world. Apply throws
/// std::runtime_error (or a subclass) when a command cannot be honored.
class WorldAdapter {
 public:
  virtual ~WorldAdapter() = default;
  virtual void apply(const Command& command, const scenario::Scenario& source) = 0;
  virtual std::unique_ptr<sim::World> boot(std::uint64_t seed, double dt) = 0;
};

/// Assembles the scenario from the commands and starts the 2D kernel.
class BuiltinWorldAdapter : public WorldAdapter {
 public:
  void apply(const Command& command, const scenario::Scenario& source) override;
  std::unique_ptr<sim::World> boot(std::uint64_t seed, double dt) override;

 private:
  std::optional<scenario::Scenario> built_;
};

std::string knowledge_graph(const std::string& agent);
std::string perception_graph(const std::string& agent);

struct LaunchSession {
  std::string id;
  std::string scenario_graph;
  Readiness readiness = Readiness::Booting;
  double boot_deadline = kDefaultBootDeadline;
  std::optional<std::size_t> failed_command;
  std::string error;
  std::unique_ptr<sim::World> world;
  /// Ascending agent id order.
  std::vector<std::unique_ptr<behavior::BehaviorInstance>> behaviors;
  /// Knowledge graphs of every agent; perception graphs are written here too.
  rdf::Dataset knowledge;
  /// The scenario's wire document, sent back once ready.
  nlohmann::json sync_payload;
};

struct LaunchOptions {
  std::string session_id = "session-1";
  double boot_deadline = kDefaultBootDeadline;
  std::function<std::unique_ptr<WorldAdapter>()> adapter;
  /// Wall clock, replaceable in tests.
  std::function<std::chrono::steady_clock::time_point()> now;
};

/// Runs the commands in order. Never throws: failures come back as a Failed
/// session carrying the offending command index (the command count when
/// booting itself failed or ran past the deadline).
LaunchSession launch(const SimulationPlan& plan, const LaunchOptions& options = {});

class DuplicateSession : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// At most one live session per scenario graph. Failed launches are never
/// registered.
class SessionRegistry {
 public:
  /// Throws DuplicateSession when the graph already has a session. A failed
  /// launch is returned but not kept.
  std::shared_ptr<LaunchSession> launch(const SimulationPlan& plan, LaunchOptions options = {});
  std::shared_ptr<LaunchSession> find(const std::string& session_id) const;
  std::optional<std::string> session_for(const std::string& scenario_graph) const;
  /// Returns false for an unknown id.
  bool remove(const std::string& session_id);
  std::vector<std::string> ids() const;

 private:
  mutable std::mutex mu_;
  std::uint64_t counter_ = 0;
  std::map<std::string, std::shared_ptr<LaunchSession>> sessions_;
};

}  // namespace streetlab::translation
