#include "streetlab/service/driver.hpp"

#include <set>

#include "streetlab/scenario/quads.hpp"
#include "streetlab/sim/perception.hpp"

namespace streetlab::service {

using behavior::ActionMode;
using behavior::ActionReceipt;
using behavior::LogLevel;
using rdf::Term;

behavior::ActionSpec action_from_json(const nlohmann::json& request) {
  if (!request.is_object()) throw std::invalid_argument("request body must be an object");
  for (const auto& [k, v] : request.items())
    if (k != "action" && k != "params" && k != "callbackUri") throw std::invalid_argument("unknown key '" + k + "'");
  if (!request.contains("action") || !request["action"].is_string())
    throw std::invalid_argument("'action' must be a string");
  std::map<std::string, Term> params;
  if (request.contains("params")) {
    const auto& p = request["params"];
    if (!p.is_object()) throw std::invalid_argument("'params' must be an object");
    for (const auto& [k, v] : p.items()) {
      if (v.is_number_integer()) params[k] = Term::integer(v.get<std::int64_t>());
      else if (v.is_number()) params[k] = Term::number(v.get<double>());
      else if (v.is_boolean()) params[k] = Term::boolean(v.get<bool>());
      else if (v.is_string()) params[k] = Term::literal(v.get<std::string>());
      else if (v.is_object() && v.size() == 1 && v.contains("iri") && v["iri"].is_string())
        params[k] = Term::iri(v["iri"].get<std::string>());
      else throw std::invalid_argument("param '" + k + "' has an unsupported value");
    }
  }
  return behavior::ActionSpec::make(request["action"].get<std::string>(), std::move(params));
}

/// Forwards behavior dispatches to the world and remembers which tokens the
/// behaviors own.
class SessionDriver::Tracker : public behavior::ActionDispatcher {
 public:
  Tracker(sim::World& world, std::map<std::string, std::string>& internal) : world_(world), internal_(internal) {}
  ActionReceipt execute(const std::string& agent, const behavior::ActionSpec& spec) override {
    auto r = world_.execute(agent, spec);
    if (r.kind == ActionReceipt::Kind::Pending) internal_[r.token] = agent;
    return r;
  }

 private:
  sim::World& world_;
  std::map<std::string, std::string>& internal_;
};

SessionDriver::SessionDriver(std::shared_ptr<translation::LaunchSession> session, Publish publish,
                             CompletionSink completions)
    : session_(std::move(session)), publish_(std::move(publish)), completions_(std::move(completions)) {
  if (!session_ || session_->readiness != translation::Readiness::Ready || !session_->world)
    throw std::invalid_argument("session is not ready");
  tracker_ = std::make_unique<Tracker>(*session_->world, internal_);
}

SessionDriver::~SessionDriver() = default;

void SessionDriver::log(LogLevel level, const std::string& message) {
  publish_(world().clock(), EventCategory::Log, {{"level", behavior::to_string(level)}, {"message", message}});
}

void SessionDriver::refresh_perception(const std::string& agent) {
  sim::publish(session_->knowledge, sim::perceive(*session_->world, agent), translation::perception_graph(agent));
}

void SessionDriver::tick(behavior::BehaviorInstance& inst) {
  refresh_perception(inst.agent());
  behavior::TickContext ctx;
  ctx.dataset = &session_->knowledge;
  ctx.dispatcher = tracker_.get();
  ctx.clock = world().clock();
  const std::string agent = inst.agent();
  ctx.log = [this, agent](LogLevel level, const std::string& msg) {
    publish_(world().clock(), EventCategory::Log,
             {{"level", behavior::to_string(level)}, {"message", msg}, {"agent", agent}});
  };
  inst.tick(ctx);
}

void SessionDriver::publish_status_changes() {
  for (const auto& inst : session_->behaviors) {
    auto snap = inst->status_snapshot();
    auto it = last_published_.find(inst->agent());
    if (it != last_published_.end() && it->second == snap) continue;
    nlohmann::json nodes = nlohmann::json::object();
    for (const auto& [id, st] : snap) nodes[id] = behavior::to_string(st);
    publish_(world().clock(), EventCategory::BtStatus,
             {{"agent", inst->agent()},
              {"tree", inst->tree().root_id()},
              {"root", behavior::to_string(inst->root_status())},
              {"nodes", std::move(nodes)}});
    last_published_[inst->agent()] = std::move(snap);
  }
}

void SessionDriver::route(const std::vector<sim::SignalEvent>& events) {
  for (const auto& e : events) {
    publish_(e.time, EventCategory::Signal, sim::to_json(e));
    if (e.kind != sim::EventKind::ActionCompleted && e.kind != sim::EventKind::ActionFailed) continue;
    const bool ok = e.kind == sim::EventKind::ActionCompleted;
    if (auto it = internal_.find(e.detail); it != internal_.end()) {
      for (auto& inst : session_->behaviors)
        if (inst->agent() == it->second) inst->resume(e.detail, ok);
      internal_.erase(it);
    } else if (auto ext = external_.find(e.detail); ext != external_.end()) {
      CallbackPayload p{e.detail, e.subject, e.related, ok ? CallbackResult::Ok : CallbackResult::Cancelled, e.time};
      if (completions_) completions_(ext->second, p);
      external_.erase(ext);
    }
  }
}

void SessionDriver::iterate() {
  if (stopped_) return;
  for (auto& inst : session_->behaviors) tick(*inst);
  publish_status_changes();

  const auto events = session_->world->step();
  route(events);

  std::set<std::string> signalled;
  for (const auto& e : events) {
    if (e.kind != sim::EventKind::BoxEntered) continue;
    session_->knowledge.insert({Term::iri(e.subject), scenario::vocab::term("receivedSignal"), Term::iri(e.detail),
                                Term::iri(translation::knowledge_graph(e.subject))});
    signalled.insert(e.subject);
  }
  if (signalled.empty()) return;
  for (auto& inst : session_->behaviors)
    if (signalled.count(inst->agent())) tick(*inst);
  publish_status_changes();
}

ActionOutcome SessionDriver::sync_action(const std::string& agent, const behavior::ActionSpec& spec) {
  if (stopped_) return {409, {{"error", "session stopped"}}};
  if (!world().find_agent(agent)) return {404, {{"error", "unknown agent " + agent}}};
  const auto mode = behavior::catalog_mode(spec.name);
  if (!mode) return {422, {{"error", "unknown action '" + spec.name + "'"}}};
  if (*mode != ActionMode::Sync) return {422, {{"error", "'" + spec.name + "' is asynchronous"}}};
  const auto r = session_->world->execute(agent, spec);
  if (r.kind == ActionReceipt::Kind::Ok) return {200, {{"result", "ok"}}};
  return {200, {{"result", "rejected"}, {"message", r.message}}};
}

ActionOutcome SessionDriver::async_action(const std::string& agent, const behavior::ActionSpec& spec,
                                          const std::string& callback_uri) {
  if (stopped_) return {409, {{"error", "session stopped"}}};
  if (!world().find_agent(agent)) return {404, {{"error", "unknown agent " + agent}}};
  const auto mode = behavior::catalog_mode(spec.name);
  if (!mode) return {422, {{"error", "unknown action '" + spec.name + "'"}}};
  if (*mode != ActionMode::Async) return {422, {{"error", "'" + spec.name + "' is synchronous"}}};
  if (!parse_callback_uri(callback_uri)) return {422, {{"error", "callbackUri must be an http:// URI"}}};
  if (world().pending_token(agent)) return {409, {{"error", "agent already has a pending action"}}};
  const auto r = session_->world->execute(agent, spec);
  if (r.kind != ActionReceipt::Kind::Pending) return {422, {{"error", r.message}}};
  external_[r.token] = callback_uri;
  return {202, {{"token", r.token}, {"time", world().clock()}}};
}

void SessionDriver::stop() {
  if (stopped_) return;
  route(session_->world->cancel_all());
  stopped_ = true;
  log(LogLevel::Info, "session stopped");
}

nlohmann::json SessionDriver::state() const {
  nlohmann::json behaviors = nlohmann::json::object();
  for (const auto& inst : session_->behaviors) {
    nlohmann::json nodes = nlohmann::json::object();
    for (const auto& [id, st] : inst->status_snapshot()) nodes[id] = behavior::to_string(st);
    behaviors[inst->agent()] = {{"tree", inst->tree().root_id()},
                                {"root", behavior::to_string(inst->root_status())},
                                {"finished", inst->finished()},
                                {"nodes", std::move(nodes)}};
  }
  return {{"sessionId", session_->id},
          {"scenario", session_->scenario_graph},
          {"clock", world().clock()},
          {"steps", world().steps()},
          {"world", world().snapshot()},
          {"behaviors", std::move(behaviors)}};
}

std::vector<EventRecord> run_headless(std::shared_ptr<translation::LaunchSession> session, std::uint64_t steps) {
  std::vector<EventRecord> out;
  SessionDriver driver(std::move(session), [&out](double time, EventCategory c, nlohmann::json body) {
    out.push_back({out.size() + 1, time, c, std::move(body)});
  });
  driver.log(LogLevel::Info, "session started");
  for (std::uint64_t i = 0; i < steps; ++i) driver.iterate();
  driver.stop();
  return out;
}

}  // namespace streetlab::service
