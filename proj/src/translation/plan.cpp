#include "streetlab/translation/plan.hpp"

#include <map>

#include "streetlab/behavior/loader.hpp"
#include "streetlab/scenario/validate.hpp"

namespace streetlab::translation {

std::string_view to_string(CommandKind kind) {
  switch (kind) {
    case CommandKind::LoadTemplate: return "load-template";
    case CommandKind::SpawnEntity: return "spawn-entity";
    case CommandKind::BindPath: return "bind-path";
    case CommandKind::RegisterBox: return "register-box";
    case CommandKind::AttachBehavior: return "attach-behavior";
  }
  return "load-template";
}

SimulationPlan translate(const scenario::Scenario& input, const rdf::Dataset& behaviors, std::uint64_t seed,
                         double dt) {
  const auto violations = scenario::validate(input);
  if (!violations.empty()) throw TranslateError("scenario is not simulatable:\n" + scenario::describe(violations));

  SimulationPlan plan;
  plan.scenario = input;
  plan.scenario.normalize();
  plan.scenario_graph = plan.scenario.graph;
  plan.seed = seed;
  plan.dt = dt;
  const auto& s = plan.scenario;

  plan.commands.push_back({CommandKind::LoadTemplate, s.map.id, std::string(scenario::to_string(s.map.name)), {}});
  for (const auto& e : s.entities) plan.commands.push_back({CommandKind::SpawnEntity, e.id, {}, {}});
  for (const auto& e : s.entities)
    if (e.path) plan.commands.push_back({CommandKind::BindPath, e.id, *e.path, {}});
  for (const auto& b : s.boxes) plan.commands.push_back({CommandKind::RegisterBox, b.id, {}, {}});

  std::map<std::string, behavior::Node> loaded;
  for (const auto& e : s.entities) {
    if (!e.behavior || !scenario::is_dynamic(e.kind)) continue;
    auto it = loaded.find(*e.behavior);
    if (it == loaded.end()) {
      try {
        it = loaded.emplace(*e.behavior, behavior::load_tree(behaviors, *e.behavior).to_node()).first;
      } catch (const std::exception& ex) {
        throw TranslateError("entity " + e.id + ": behavior " + *e.behavior + " does not resolve: " + ex.what());
      }
    }
    plan.commands.push_back({CommandKind::AttachBehavior, e.id, *e.behavior, it->second});
  }
  return plan;
}

nlohmann::json to_json(const SimulationPlan& plan) {
  nlohmann::json cmds = nlohmann::json::array();
  for (const auto& c : plan.commands) {
    nlohmann::json j = {{"command", to_string(c.kind)}, {"target", c.target}};
    if (!c.argument.empty()) j["argument"] = c.argument;
    cmds.push_back(std::move(j));
  }
  return {{"scenario", plan.scenario_graph}, {"seed", plan.seed}, {"dt", plan.dt}, {"commands", cmds}};
}

}  // namespace streetlab::translation
