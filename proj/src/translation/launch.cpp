#include "streetlab/translation/launch.hpp"

#include <algorithm>

#include "streetlab/scenario/quads.hpp"
#include "streetlab/scenario/wire.hpp"

namespace streetlab::translation {

std::string_view to_string(Readiness r) {
  switch (r) {
    case Readiness::Booting: return "booting";
    case Readiness::Ready: return "ready";
    case Readiness::Failed: return "failed";
  }
  return "failed";
}

std::string knowledge_graph(const std::string& agent) { return scenario::child_iri(agent, "knowledge"); }
std::string perception_graph(const std::string& agent) { return scenario::child_iri(agent, "perception"); }

void BuiltinWorldAdapter::apply(const Command& c, const scenario::Scenario& source) {
  if (c.kind == CommandKind::LoadTemplate) {
    if (built_) throw std::runtime_error("template already loaded");
    if (c.target != source.map.id) throw std::runtime_error("unknown template " + c.target);
    scenario::Scenario s;
    s.graph = source.graph;
    s.map = source.map;
    s.cell_size = source.cell_size;
    built_ = std::move(s);
    return;
  }
  if (!built_) throw std::runtime_error("no template loaded");
  auto& s = *built_;
  switch (c.kind) {
    case CommandKind::SpawnEntity: {
      const auto* e = source.find_entity(c.target);
      if (!e) throw std::runtime_error("unknown entity " + c.target);
      if (s.find_entity(c.target)) throw std::runtime_error("entity " + c.target + " spawned twice");
      s.entities.push_back(*e);
      break;
    }
    case CommandKind::BindPath: {
      const auto* e = s.find_entity(c.target);
      if (!e) throw std::runtime_error("entity " + c.target + " not spawned");
      const auto* p = source.find_path(c.argument);
      if (!p) throw std::runtime_error("unknown path " + c.argument);
      if (p->owner != c.target || e->path != c.argument)
        throw std::runtime_error("path " + c.argument + " does not belong to " + c.target);
      if (s.find_path(c.argument)) throw std::runtime_error("path " + c.argument + " bound twice");
      s.paths.push_back(*p);
      break;
    }
    case CommandKind::RegisterBox: {
      auto it = std::find_if(source.boxes.begin(), source.boxes.end(), [&](const auto& b) { return b.id == c.target; });
      if (it == source.boxes.end()) throw std::runtime_error("unknown box " + c.target);
      s.boxes.push_back(*it);
      break;
    }
    case CommandKind::AttachBehavior: {
      const auto* e = s.find_entity(c.target);
      if (!e) throw std::runtime_error("entity " + c.target + " not spawned");
      if (!scenario::is_dynamic(e->kind)) throw std::runtime_error("static entity " + c.target + " cannot behave");
      break;
    }
    case CommandKind::LoadTemplate: break;
  }
}

std::unique_ptr<sim::World> BuiltinWorldAdapter::boot(std::uint64_t seed, double dt) {
  if (!built_) throw std::runtime_error("no template loaded");
  return std::make_unique<sim::World>(*built_, seed, dt);
}

LaunchSession launch(const SimulationPlan& plan, const LaunchOptions& options) {
  LaunchSession session;
  session.id = options.session_id;
  session.scenario_graph = plan.scenario_graph;
  session.boot_deadline = options.boot_deadline;
  const auto now = options.now ? options.now : [] { return std::chrono::steady_clock::now(); };
  const auto started = now();
  auto elapsed = [&] { return std::chrono::duration<double>(now() - started).count(); };
  auto fail = [&](std::size_t index, std::string why) {
    session.readiness = Readiness::Failed;
    session.failed_command = index;
    session.error = std::move(why);
    session.world.reset();
    session.behaviors.clear();
    session.knowledge.clear();
    return std::move(session);
  };

  std::unique_ptr<WorldAdapter> adapter =
      options.adapter ? options.adapter() : std::make_unique<BuiltinWorldAdapter>();
  std::map<std::string, std::unique_ptr<behavior::BehaviorInstance>> instances;
  for (std::size_t i = 0; i < plan.commands.size(); ++i) {
    const Command& c = plan.commands[i];
    try {
      adapter->apply(c, plan.scenario);
      if (c.kind == CommandKind::AttachBehavior) {
        if (!c.tree) throw std::runtime_error("attach-behavior without a tree");
        if (instances.count(c.target)) throw std::runtime_error("behavior attached twice to " + c.target);
        auto tree = std::make_shared<const behavior::BehaviorTree>(*c.tree);
        instances[c.target] = std::make_unique<behavior::BehaviorInstance>(tree, c.target, knowledge_graph(c.target),
                                                                           perception_graph(c.target));
      }
    } catch (const std::exception& ex) {
      return fail(i, std::string(to_string(c.kind)) + " " + c.target + ": " + ex.what());
    }
    if (elapsed() > options.boot_deadline) return fail(i, "boot deadline exceeded");
  }
  try {
    session.world = adapter->boot(plan.seed, plan.dt);
  } catch (const std::exception& ex) {
    return fail(plan.commands.size(), std::string("boot failed: ") + ex.what());
  }
  if (elapsed() > options.boot_deadline) return fail(plan.commands.size(), "boot deadline exceeded");
  for (auto& [id, inst] : instances) {
    if (!session.world->find_agent(id)) return fail(plan.commands.size(), "behavior for unknown agent " + id);
    session.behaviors.push_back(std::move(inst));
  }
  session.sync_payload = scenario::export_wire(plan.scenario);
  session.readiness = Readiness::Ready;
  return session;
}

std::shared_ptr<LaunchSession> SessionRegistry::launch(const SimulationPlan& plan, LaunchOptions options) {
  std::lock_guard lock(mu_);
  for (const auto& [id, s] : sessions_)
    if (s->scenario_graph == plan.scenario_graph)
      throw DuplicateSession("scenario " + plan.scenario_graph + " already runs in " + id);
  options.session_id = "session-" + std::to_string(++counter_);
  auto session = std::make_shared<LaunchSession>(translation::launch(plan, options));
  if (session->readiness == Readiness::Ready) sessions_[session->id] = session;
  return session;
}

std::shared_ptr<LaunchSession> SessionRegistry::find(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::optional<std::string> SessionRegistry::session_for(const std::string& scenario_graph) const {
  std::lock_guard lock(mu_);
  for (const auto& [id, s] : sessions_)
    if (s->scenario_graph == scenario_graph) return id;
  return std::nullopt;
}

bool SessionRegistry::remove(const std::string& session_id) {
  std::lock_guard lock(mu_);
  return sessions_.erase(session_id) != 0;
}

std::vector<std::string> SessionRegistry::ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

}  // namespace streetlab::translation
