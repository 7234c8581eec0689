#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "streetlab/behavior/engine.hpp"
#include "streetlab/geometry/path.hpp"
#include "streetlab/scenario/model.hpp"

namespace streetlab::sim {

using geometry::Vec2;
using scenario::EntityKind;

constexpr double kDefaultDt = 0.05;
constexpr double kDefaultAnimationSeconds = 1.5;
constexpr double kDecelerationWindow = 0.5;

/// m/s^2
double accel_limit(EntityKind kind);
/// Collision circle radius in meters; static props use half a cell instead.
double body_radius(EntityKind kind);
/// Speed restored by motion actions when the entity spawned at rest.
double default_cruise(EntityKind kind);

struct Animation {
  std::string name;
  double ends_at = 0.0;
};

struct AgentState {
  std::string id;
  EntityKind kind = EntityKind::Pedestrian;
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  double target_speed = 0.0;
  double accel_limit = 0.0;
  /// Last positive target speed.
  double cruise_speed = 0.0;
  std::optional<geometry::PathCursor> cursor;
  std::optional<Animation> animation;
  Vec2 home;
  /// Length of the entity's own path, 0 without one.
  double path_length = 0.0;
  /// Speeds at the end of the most recent steps, oldest first.
  std::deque<double> speed_history;
};

struct Obstacle {
  std::string id;
  Vec2 position;
  double radius = 0.0;
};

enum class EventKind {
  BoxEntered,
  BoxExited,
  ActionCompleted,
  ActionFailed,
  Collision,
  AnimationStarted,
  AnimationEnded
};
std::string_view to_string(EventKind kind);

struct SignalEvent {
  double time = 0.0;
  EventKind kind = EventKind::BoxEntered;
  std::string subject;
  /// Signal id for box events, token for action and animation events,
  /// the other party for collisions.
  std::string detail;
  /// Box id for box events, action name for action events, animation name
  /// for animation events.
  std::string related;
  bool operator==(const SignalEvent&) const = default;
};

nlohmann::json to_json(const SignalEvent& e);

struct PendingAction {
  std::string token;
  std::string agent;
  behavior::ActionSpec spec;
  /// Motion actions finish when the cursor runs out, timed ones at ends_at.
  bool motion = false;
  double ends_at = 0.0;
  /// Zero-length motion: completes on the next step.
  bool immediate = false;
};

class InitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fixed-step 2D world. Agents are kept in ascending id order.
class World : public behavior::ActionDispatcher {
 public:
  /// Throws InitError when the scenario has violations or dt is not a
  /// positive finite number.
  World(scenario::Scenario scenario, std::uint64_t seed, double dt = kDefaultDt);

  /// Advances one step and returns the events it produced, preceded by
  /// events staged by execute() since the previous step.
  std::vector<SignalEvent> step();

  behavior::ActionReceipt execute(const std::string& agent, const behavior::ActionSpec& spec) override;

  /// Ends every pending action with action-failed.
  std::vector<SignalEvent> cancel_all();

  double clock() const { return static_cast<double>(steps_) * dt_; }
  double dt() const { return dt_; }
  std::uint64_t steps() const { return steps_; }
  std::uint64_t seed() const { return seed_; }
  const scenario::Scenario& scenario() const { return scenario_; }
  const std::vector<AgentState>& agents() const { return agents_; }
  const AgentState* find_agent(const std::string& id) const;
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  const std::map<std::string, PendingAction>& pending() const { return pending_; }
  std::optional<std::string> pending_token(const std::string& agent) const;
  const std::vector<SignalEvent>& event_log() const { return log_; }
  /// Box memory for (box id, agent id).
  bool inside(const std::string& box, const std::string& agent) const;
  /// Signal ids of boxes the agent is currently inside.
  std::set<std::string> active_signals(const std::string& agent) const;
  /// True when a box reacts to this kind; an empty watch set means every
  /// dynamic kind.
  static bool watches(const scenario::DecisionBox& box, EntityKind kind);

  /// Full state for comparison and display.
  nlohmann::json snapshot() const;

 private:
  AgentState* agent_mut(const std::string& id);
  std::string next_token();
  void emit(std::vector<SignalEvent>& out, EventKind kind, const std::string& subject, std::string detail,
            std::string related);
  void finish(std::vector<SignalEvent>& out, const std::string& token, bool ok);
  behavior::ActionReceipt start_motion(AgentState& a, const behavior::ActionSpec& spec, std::vector<Vec2> points);

  scenario::Scenario scenario_;
  std::uint64_t seed_ = 0;
  double dt_ = kDefaultDt;
  std::uint64_t steps_ = 0;
  std::uint64_t token_counter_ = 0;
  std::size_t history_len_ = 0;
  std::vector<AgentState> agents_;
  std::vector<Obstacle> obstacles_;
  std::map<std::pair<std::string, std::string>, bool> box_memory_;
  std::set<std::pair<std::string, std::string>> overlapping_;
  std::map<std::string, PendingAction> pending_;
  std::vector<SignalEvent> staged_;
  std::vector<SignalEvent> log_;
};

}  // namespace streetlab::sim
