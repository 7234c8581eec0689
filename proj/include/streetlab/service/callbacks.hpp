#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace streetlab::service {

enum class CallbackResult { Ok, Failed, Cancelled };
std::string_view to_string(CallbackResult r);

struct CallbackPayload {
  std::string token;
  std::string agent;
  std::string action;
  CallbackResult result = CallbackResult::Ok;
  double time = 0.0;
  bool operator==(const CallbackPayload&) const = default;
};

nlohmann::json to_json(const CallbackPayload& p);
/// Throws std::invalid_argument for a malformed payload.
CallbackPayload callback_from_json(const nlohmann::json& j);

struct CallbackUri {
  std::string host;
  int port = 80;
  std::string path = "/";
};

/// Accepts http://host[:port][/path]. Empty on anything else.
std::optional<CallbackUri> parse_callback_uri(const std::string& uri);

/// Delivers one payload; true on a 2xx answer.
using CallbackTransport = std::function<bool(const std::string& uri, const std::string& body)>;
/// Plain HTTP POST with a short timeout.
bool http_post_json(const std::string& uri, const std::string& body);

struct CallbackOptions {
  int retries = 3;
  std::chrono::milliseconds backoff{1000};
  CallbackTransport transport = http_post_json;
  /// Waits between attempts; replaceable in tests.
  std::function<void(std::chrono::milliseconds)> sleep;
  /// Receives delivery failures.
  std::function<void(const std::string&)> log;
};

/// Background sender. Each token is sent at most once from this side (one
/// attempt plus `retries` retries); a token enqueued again is ignored.
class CallbackDispatcher {
 public:
  explicit CallbackDispatcher(CallbackOptions options = {});
  ~CallbackDispatcher();
  CallbackDispatcher(const CallbackDispatcher&) = delete;
  CallbackDispatcher& operator=(const CallbackDispatcher&) = delete;

  /// Returns false when the token was already queued or sent.
  bool enqueue(const std::string& uri, const CallbackPayload& payload);
  /// Blocks until the queue is empty and no delivery is in flight.
  void flush();

  struct Outcome {
    std::string token;
    int attempts = 0;
    bool delivered = false;
  };
  std::vector<Outcome> outcomes() const;

 private:
  void run();

  CallbackOptions options_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable idle_cv_;
  std::deque<std::pair<std::string, CallbackPayload>> queue_;
  std::set<std::string> seen_;
  std::vector<Outcome> outcomes_;
  bool busy_ = false;
  bool stopping_ = false;
  std::thread worker_;
};

/// Receiving side: keeps the first payload per token.
class CallbackInbox {
 public:
  /// False for a duplicate token.
  bool accept(const CallbackPayload& p);
  std::vector<CallbackPayload> payloads() const;
  std::size_t duplicates() const;
  /// Waits until a payload for `token` arrived.
  std::optional<CallbackPayload> wait_for(const std::string& token, std::chrono::milliseconds timeout) const;

 private:
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<CallbackPayload> payloads_;
  std::set<std::string> tokens_;
  std::size_t duplicates_ = 0;
};

}  // namespace streetlab::service
