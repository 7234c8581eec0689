#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "streetlab/behavior/tree.hpp"
#include "streetlab/rdf/dataset.hpp"
#include "streetlab/scenario/model.hpp"

namespace streetlab::translation {

enum class CommandKind { LoadTemplate, SpawnEntity, BindPath, RegisterBox, AttachBehavior };
std::string_view to_string(CommandKind kind);

struct Command {
  CommandKind kind = CommandKind::LoadTemplate;
  /// Template id, entity id (spawn, bind, attach) or box id.
  std::string target;
  /// Path id for bind-path, behavior root for attach-behavior.
  std::string argument;
  /// attach-behavior only.
  std::optional<behavior::Node> tree;
  bool operator==(const Command&) const = default;
};

struct SimulationPlan {
  std::string scenario_graph;
  /// Source of the element payloads the commands refer to.
  scenario::Scenario scenario;
  std::vector<Command> commands;
  double dt = 0.05;
  std::uint64_t seed = 0;
  bool operator==(const SimulationPlan&) const = default;
};

class TranslateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Order: load-template, spawn-entity (id order), bind-path, register-box,
/// attach-behavior. Throws TranslateError for an invalid scenario or a
/// behavior reference that does not load from `behaviors`.
SimulationPlan translate(const scenario::Scenario& scenario, const rdf::Dataset& behaviors, std::uint64_t seed,
                         double dt);

nlohmann::json to_json(const SimulationPlan& plan);

}  // namespace streetlab::translation
