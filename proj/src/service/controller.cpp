#include "streetlab/service/controller.hpp"

#include <future>

namespace streetlab::service {

std::string_view to_string(RunState s) {
  switch (s) {
    case RunState::Paused: return "paused";
    case RunState::Running: return "running";
    case RunState::Stopped: return "stopped";
  }
  return "stopped";
}

SessionController::SessionController(std::shared_ptr<translation::LaunchSession> session, ControllerOptions options)
    : id_(session ? session->id : std::string()),
      scenario_graph_(session ? session->scenario_graph : std::string()),
      options_(std::move(options)),
      dt_(session && session->world ? session->world->dt() : 0.05),
      events_(options_.replay_capacity) {
  CallbackOptions cb = options_.callbacks;
  auto user_log = cb.log;
  cb.log = [this, user_log](const std::string& msg) {
    double t = 0.0;
    {
      std::lock_guard lock(mu_);
      t = published_.value("clock", 0.0);
    }
    events_.append(t, EventCategory::Log, {{"level", "warn"}, {"message", msg}});
    if (user_log) user_log(msg);
  };
  callbacks_ = std::make_unique<CallbackDispatcher>(std::move(cb));
  driver_ = std::make_unique<SessionDriver>(
      std::move(session),
      [this](double time, EventCategory c, nlohmann::json body) { events_.append(time, c, std::move(body)); },
      [this](const std::string& uri, const CallbackPayload& p) { callbacks_->enqueue(uri, p); });
  publish_state();
  thread_ = std::thread([this] { loop(); });
}

SessionController::~SessionController() { stop(); }

RunState SessionController::run_state() const {
  std::lock_guard lock(mu_);
  return state_;
}

std::uint64_t SessionController::steps() const {
  std::lock_guard lock(mu_);
  return steps_;
}

bool SessionController::start() {
  {
    std::lock_guard lock(mu_);
    if (state_ == RunState::Stopped) return false;
    if (!started_once_) {
      started_once_ = true;
      commands_.push_back([this] { driver_->log(behavior::LogLevel::Info, "session started"); });
    }
    state_ = RunState::Running;
  }
  cv_.notify_all();
  return true;
}

bool SessionController::pause() {
  {
    std::lock_guard lock(mu_);
    if (state_ == RunState::Stopped) return false;
    state_ = RunState::Paused;
  }
  cv_.notify_all();
  return true;
}

void SessionController::stop() {
  {
    std::lock_guard lock(mu_);
    if (state_ != RunState::Stopped) {
      state_ = RunState::Stopped;
      commands_.push_back([this] {
        driver_->stop();
        publish_state();
        events_.close();
        std::lock_guard inner(mu_);
        quit_ = true;
      });
    }
  }
  cv_.notify_all();
  if (std::this_thread::get_id() == thread_.get_id()) return;
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return quit_; });
  lock.unlock();
  std::lock_guard join_lock(join_mu_);
  if (thread_.joinable()) thread_.join();
}

ActionOutcome SessionController::submit(std::function<ActionOutcome()> work) {
  auto promise = std::make_shared<std::promise<ActionOutcome>>();
  auto future = promise->get_future();
  {
    std::lock_guard lock(mu_);
    if (state_ != RunState::Running) return {409, {{"error", "session is not running"}}};
    commands_.push_back([this, promise, work = std::move(work)] {
      bool running = false;
      {
        std::lock_guard lock(mu_);
        running = state_ == RunState::Running;
      }
      if (!running) {
        promise->set_value({409, {{"error", "session is not running"}}});
        return;
      }
      promise->set_value(work());
      publish_state();
    });
  }
  cv_.notify_all();
  return future.get();
}

ActionOutcome SessionController::sync_action(const std::string& agent, const behavior::ActionSpec& spec) {
  return submit([this, agent, spec] { return driver_->sync_action(agent, spec); });
}

ActionOutcome SessionController::async_action(const std::string& agent, const behavior::ActionSpec& spec,
                                              const std::string& callback_uri) {
  return submit([this, agent, spec, callback_uri] { return driver_->async_action(agent, spec, callback_uri); });
}

void SessionController::publish_state() {
  nlohmann::json s = driver_->state();
  std::lock_guard lock(mu_);
  published_ = std::move(s);
}

nlohmann::json SessionController::state() const {
  nlohmann::json s;
  {
    std::lock_guard lock(mu_);
    s = published_;
    s["runState"] = to_string(state_);
  }
  s["lastSeq"] = events_.last_seq();
  return s;
}

nlohmann::json SessionController::log() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : events_.since(0).records)
    if (r.category == EventCategory::Log) out.push_back(to_json(r));
  return out;
}

bool SessionController::wait_steps(std::uint64_t n, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [&] { return steps_ >= n || state_ == RunState::Stopped; }) && steps_ >= n;
}

void SessionController::loop() {
  using Clock = std::chrono::steady_clock;
  const auto period = options_.speed_factor > 0.0
                          ? std::chrono::duration_cast<Clock::duration>(
                                std::chrono::duration<double>(dt_ / options_.speed_factor))
                          : Clock::duration::zero();
  auto next = Clock::now();
  std::unique_lock lock(mu_);
  for (;;) {
    while (!commands_.empty()) {
      auto c = std::move(commands_.front());
      commands_.pop_front();
      lock.unlock();
      c();
      lock.lock();
    }
    if (quit_) break;
    if (state_ != RunState::Running) {
      cv_.wait(lock, [&] { return quit_ || !commands_.empty() || state_ == RunState::Running; });
      next = Clock::now();
      continue;
    }
    if (period > Clock::duration::zero() && Clock::now() < next) {
      cv_.wait_until(lock, next, [&] { return quit_ || !commands_.empty() || state_ != RunState::Running; });
      continue;
    }
    lock.unlock();
    driver_->iterate();
    publish_state();
    lock.lock();
    ++steps_;
    if (options_.step_limit && steps_ >= *options_.step_limit && state_ == RunState::Running)
      state_ = RunState::Paused;
    next += period;
    cv_.notify_all();
  }
  lock.unlock();
  cv_.notify_all();
}

}  // namespace streetlab::service
