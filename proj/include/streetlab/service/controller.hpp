#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "streetlab/service/callbacks.hpp"
#include "streetlab/service/driver.hpp"
#include "streetlab/service/event_buffer.hpp"

namespace streetlab::service {

/// Paused covers both "launched, not started yet" and an explicit pause;
/// Stopped is terminal.
enum class RunState { Paused, Running, Stopped };
std::string_view to_string(RunState s);

struct ControllerOptions {
  /// Wall-clock pacing: one iteration every dt / speed_factor seconds; 0
  /// runs as fast as possible.
  double speed_factor = 1.0;
  /// Pause automatically after this many iterations.
  std::optional<std::uint64_t> step_limit;
  std::size_t replay_capacity = kDefaultReplayCapacity;
  CallbackOptions callbacks;
};

/// Owns one session's driver on a private loop thread. Every other method
/// may be called from any thread; work on the world is queued to the loop
/// and observed through published snapshots.
class SessionController {
 public:
  SessionController(std::shared_ptr<translation::LaunchSession> session, ControllerOptions options = {});
  ~SessionController();
  SessionController(const SessionController&) = delete;
  SessionController& operator=(const SessionController&) = delete;

  const std::string& id() const { return id_; }
  const std::string& scenario_graph() const { return scenario_graph_; }
  RunState run_state() const;

  /// False when the transition is not allowed (start/pause after stop).
  bool start();
  bool pause();
  /// Idempotent; returns once the final log record is published.
  void stop();

  ActionOutcome sync_action(const std::string& agent, const behavior::ActionSpec& spec);
  ActionOutcome async_action(const std::string& agent, const behavior::ActionSpec& spec,
                             const std::string& callback_uri);

  /// Snapshot at the last step boundary plus run state and last seq.
  nlohmann::json state() const;
  /// Log records still in the replay window.
  nlohmann::json log() const;
  std::uint64_t steps() const;
  EventBuffer& events() { return events_; }
  CallbackDispatcher& callbacks() { return *callbacks_; }

  /// Blocks until `steps()` reaches n, the session stops or the timeout passes.
  bool wait_steps(std::uint64_t n, std::chrono::milliseconds timeout) const;

 private:
  void loop();
  ActionOutcome submit(std::function<ActionOutcome()> work);
  void publish_state();

  std::string id_;
  std::string scenario_graph_;
  ControllerOptions options_;
  double dt_;
  EventBuffer events_;
  std::unique_ptr<CallbackDispatcher> callbacks_;
  std::unique_ptr<SessionDriver> driver_;

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  RunState state_ = RunState::Paused;
  bool started_once_ = false;
  bool quit_ = false;
  std::uint64_t steps_ = 0;
  std::deque<std::function<void()>> commands_;
  nlohmann::json published_;
  std::mutex join_mu_;
  std::thread thread_;
};

}  // namespace streetlab::service
