#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "streetlab/behavior/engine.hpp"
#include "streetlab/service/callbacks.hpp"
#include "streetlab/service/event_buffer.hpp"
#include "streetlab/translation/launch.hpp"

namespace streetlab::service {

/// HTTP-ish outcome of an action request.
struct ActionOutcome {
  int status = 200;
  /// "ok", "rejected" or a token for async requests.
  nlohmann::json body;
};

/// Parses {"action": name, "params": {...}} into a spec. Numbers become
/// xsd:integer or xsd:double, strings plain literals, {"iri": x} an IRI and
/// booleans xsd:boolean. Throws std::invalid_argument on anything else.
behavior::ActionSpec action_from_json(const nlohmann::json& request);

/// One session's simulation loop body. Not thread-safe: the owner calls it
/// from a single context. Everything it observes goes out through `publish`
/// in order.
class SessionDriver {
 public:
  using Publish = std::function<void(double time, EventCategory category, nlohmann::json body)>;
  /// Terminal results of externally requested async actions.
  using CompletionSink = std::function<void(const std::string& callback_uri, const CallbackPayload&)>;

  SessionDriver(std::shared_ptr<translation::LaunchSession> session, Publish publish, CompletionSink completions = {});
  ~SessionDriver();

  /// Perception refresh, ticks in agent order, one world step, completion
  /// routing, box signals into knowledge graphs with an extra tick for the
  /// receiving agents, then publication.
  void iterate();

  ActionOutcome sync_action(const std::string& agent, const behavior::ActionSpec& spec);
  ActionOutcome async_action(const std::string& agent, const behavior::ActionSpec& spec,
                             const std::string& callback_uri);

  /// Cancels pending actions and publishes the final "session stopped" log.
  void stop();
  bool stopped() const { return stopped_; }

  void log(behavior::LogLevel level, const std::string& message);

  /// Read-only view for the state endpoint.
  nlohmann::json state() const;

  const translation::LaunchSession& session() const { return *session_; }
  const sim::World& world() const { return *session_->world; }

 private:
  class Tracker;
  void refresh_perception(const std::string& agent);
  void tick(behavior::BehaviorInstance& inst);
  void publish_status_changes();
  void route(const std::vector<sim::SignalEvent>& events);

  std::shared_ptr<translation::LaunchSession> session_;
  Publish publish_;
  CompletionSink completions_;
  std::unique_ptr<Tracker> tracker_;
  /// token -> callback uri for externally requested actions
  std::map<std::string, std::string> external_;
  /// token -> agent whose behavior is waiting on it
  std::map<std::string, std::string> internal_;
  std::map<std::string, behavior::StatusSnapshot> last_published_;
  bool stopped_ = false;
};

/// Headless run: a "session started" log, `steps` iterations, then stop.
/// Returns every record with seq from 1.
std::vector<EventRecord> run_headless(std::shared_ptr<translation::LaunchSession> session, std::uint64_t steps);

}  // namespace streetlab::service
