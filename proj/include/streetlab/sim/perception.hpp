#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "streetlab/rdf/dataset.hpp"
#include "streetlab/sim/world.hpp"

namespace streetlab::sim {

namespace perc {
inline constexpr std::string_view kNs = "https://streetlab.dev/perception#";
std::string iri(std::string_view local);
}  // namespace perc

/// Safety factor applied to the time the agent needs for its own path.
constexpr double kSafetyMargin = 1.5;

struct NearestVehicle {
  std::string id;
  double distance = 0.0;
  /// Positive while the gap shrinks.
  double closing_speed = 0.0;
  bool decelerating = false;
  /// distance / closing speed, empty unless closing.
  std::optional<double> time_to_arrival;
  /// Distance the vehicle covers while the agent walks its own path, with margin.
  double safe_distance = 0.0;
};

struct PerceptionFrame {
  std::string agent;
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  std::optional<NearestVehicle> nearest_vehicle;
  std::set<std::string> active_signals;
};

/// Throws std::out_of_range for an unknown agent. The agent itself never
/// counts as its own nearest vehicle; distance ties go to the lower id.
PerceptionFrame perceive(const World& world, const std::string& agent);

/// Closing speed from current velocities: -d/dt |b - a|.
double closing_speed(Vec2 pa, Vec2 va, Vec2 pb, Vec2 vb);

Vec2 velocity(const AgentState& a);

/// The frame as triples about the agent in `graph`.
std::vector<rdf::Quad> perception_quads(const PerceptionFrame& frame, const std::string& graph);

/// Replaces the contents of `graph` in the dataset with the frame.
void publish(rdf::Dataset& dataset, const PerceptionFrame& frame, const std::string& graph);

}  // namespace streetlab::sim
