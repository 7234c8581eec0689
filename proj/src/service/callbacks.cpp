#include "streetlab/service/callbacks.hpp"

#include <regex>

#include <httplib.h>

namespace streetlab::service {

std::string_view to_string(CallbackResult r) {
  switch (r) {
    case CallbackResult::Ok: return "ok";
    case CallbackResult::Failed: return "failed";
    case CallbackResult::Cancelled: return "cancelled";
  }
  return "failed";
}

nlohmann::json to_json(const CallbackPayload& p) {
  return {{"token", p.token}, {"agent", p.agent}, {"action", p.action}, {"result", to_string(p.result)},
          {"time", p.time}};
}

CallbackPayload callback_from_json(const nlohmann::json& j) {
  try {
    CallbackPayload p;
    p.token = j.at("token").get<std::string>();
    p.agent = j.at("agent").get<std::string>();
    p.action = j.at("action").get<std::string>();
    p.time = j.at("time").get<double>();
    const auto r = j.at("result").get<std::string>();
    if (r == "ok") p.result = CallbackResult::Ok;
    else if (r == "failed") p.result = CallbackResult::Failed;
    else if (r == "cancelled") p.result = CallbackResult::Cancelled;
    else throw std::invalid_argument("unknown result '" + r + "'");
    return p;
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("bad callback payload: ") + ex.what());
  }
}

std::optional<CallbackUri> parse_callback_uri(const std::string& uri) {
  static const std::regex re(R"(^http://([A-Za-z0-9.\-]+|\[[0-9A-Fa-f:.]+\])(?::([0-9]{1,5}))?(/[^\s#]*)?$)");
  std::smatch m;
  if (!std::regex_match(uri, m, re)) return std::nullopt;
  CallbackUri out;
  out.host = m[1].str();
  if (m[2].matched) {
    out.port = std::stoi(m[2].str());
    if (out.port < 1 || out.port > 65535) return std::nullopt;
  }
  if (m[3].matched) out.path = m[3].str();
  return out;
}

bool http_post_json(const std::string& uri, const std::string& body) {
  const auto u = parse_callback_uri(uri);
  if (!u) return false;
  httplib::Client client(u->host, u->port);
  client.set_connection_timeout(std::chrono::seconds(2));
  client.set_read_timeout(std::chrono::seconds(5));
  auto res = client.Post(u->path, body, "application/json");
  return res && res->status >= 200 && res->status < 300;
}

CallbackDispatcher::CallbackDispatcher(CallbackOptions options) : options_(std::move(options)) {
  if (!options_.transport) options_.transport = http_post_json;
  if (!options_.sleep) options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  worker_ = std::thread([this] { run(); });
}

CallbackDispatcher::~CallbackDispatcher() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  worker_.join();
}

bool CallbackDispatcher::enqueue(const std::string& uri, const CallbackPayload& payload) {
  {
    std::lock_guard lock(mu_);
    if (!seen_.insert(payload.token).second) return false;
    queue_.emplace_back(uri, payload);
  }
  cv_.notify_all();
  return true;
}

void CallbackDispatcher::flush() {
  std::unique_lock lock(mu_);
  idle_cv_.wait(lock, [&] { return queue_.empty() && !busy_; });
}

std::vector<CallbackDispatcher::Outcome> CallbackDispatcher::outcomes() const {
  std::lock_guard lock(mu_);
  return outcomes_;
}

void CallbackDispatcher::run() {
  for (;;) {
    std::pair<std::string, CallbackPayload> item;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      item = std::move(queue_.front());
      queue_.pop_front();
      busy_ = true;
    }
    const std::string body = to_json(item.second).dump();
    Outcome out{item.second.token, 0, false};
    for (int attempt = 0; attempt <= options_.retries; ++attempt) {
      if (attempt > 0) options_.sleep(options_.backoff);
      ++out.attempts;
      bool ok = false;
      try {
        ok = options_.transport(item.first, body);
      } catch (const std::exception&) {
        ok = false;
      }
      if (ok) {
        out.delivered = true;
        break;
      }
    }
    if (!out.delivered && options_.log)
      options_.log("callback for " + out.token + " to " + item.first + " failed after " +
                   std::to_string(out.attempts) + " attempts");
    {
      std::lock_guard lock(mu_);
      outcomes_.push_back(out);
      busy_ = false;
    }
    idle_cv_.notify_all();
  }
}

bool CallbackInbox::accept(const CallbackPayload& p) {
  {
    std::lock_guard lock(mu_);
    if (!tokens_.insert(p.token).second) {
      ++duplicates_;
      return false;
    }
    payloads_.push_back(p);
  }
  cv_.notify_all();
  return true;
}

std::vector<CallbackPayload> CallbackInbox::payloads() const {
  std::lock_guard lock(mu_);
  return payloads_;
}

std::size_t CallbackInbox::duplicates() const {
  std::lock_guard lock(mu_);
  return duplicates_;
}

std::optional<CallbackPayload> CallbackInbox::wait_for(const std::string& token,
                                                       std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  std::optional<CallbackPayload> out;
  cv_.wait_for(lock, timeout, [&] {
    for (const auto& p : payloads_)
      if (p.token == token) {
        out = p;
        return true;
      }
    return false;
  });
  return out;
}

}  // namespace streetlab::service
