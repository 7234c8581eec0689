#include "streetlab/service/server.hpp"

#include <httplib.h>

#include "streetlab/behavior/library.hpp"
#include "streetlab/rdf/errors.hpp"
#include "streetlab/scenario/validate.hpp"
#include "streetlab/scenario/wire.hpp"
#include "streetlab/translation/plan.hpp"

namespace streetlab::service {

namespace {

constexpr auto kHeartbeat = std::chrono::milliseconds(1000);
constexpr std::size_t kChunkRecords = 256;

void reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void error(httplib::Response& res, int status, const std::string& message) {
  reply(res, status, {{"error", message}});
}

std::optional<nlohmann::json> parse_body(const httplib::Request& req, httplib::Response& res) {
  if (req.body.empty()) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& ex) {
    error(res, 400, std::string("malformed JSON: ") + ex.what());
    return std::nullopt;
  }
}

nlohmann::json violations_json(const std::vector<scenario::Violation>& vs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : vs) out.push_back({{"element", v.element}, {"code", v.code}, {"message", v.message}});
  return out;
}

}  // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)), repo_(options_.repo_dir) {}

Service::~Service() { shutdown(); }

std::shared_ptr<SessionController> Service::controller(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  auto it = controllers_.find(session_id);
  return it == controllers_.end() ? nullptr : it->second;
}

void Service::shutdown() {
  std::map<std::string, std::shared_ptr<SessionController>> all;
  {
    std::lock_guard lock(mu_);
    all = controllers_;
  }
  for (auto& [id, c] : all) {
    c->stop();
    registry_.remove(id);
  }
}

void Service::install(httplib::Server& srv) {
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& ex) {
      what = ex.what();
    } catch (...) {
    }
    error(res, 500, what);
  });

  srv.Get("/scenarios", [this](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, {{"scenarios", repo_.list()}});
  });

  srv.Post(R"(/scenarios/(.+)/launch)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string graph = req.matches[1];
    auto body = parse_body(req, res);
    if (!body) return;
    if (!body->is_object()) return error(res, 400, "launch body must be an object");
    std::uint64_t seed = options_.seed;
    double dt = options_.dt;
    ControllerOptions copts = options_.controller;
    for (const auto& [k, v] : body->items()) {
      if (k == "seed" && v.is_number_unsigned()) seed = v.get<std::uint64_t>();
      else if (k == "seed" && v.is_number_integer() && v.get<std::int64_t>() >= 0) seed = v.get<std::uint64_t>();
      else if (k == "dt" && v.is_number() && v.get<double>() > 0.0) dt = v.get<double>();
      else if (k == "speedFactor" && v.is_number() && v.get<double>() >= 0.0) copts.speed_factor = v.get<double>();
      else if (k == "stepLimit" && v.is_number_unsigned()) copts.step_limit = v.get<std::uint64_t>();
      else return error(res, 400, "bad launch field '" + k + "'");
    }
    std::optional<scenario::Scenario> s;
    rdf::Dataset behaviors;
    try {
      s = repo_.load(graph);
      if (!s) return error(res, 404, "unknown scenario " + graph);
      behaviors = behavior::builtin_behaviors();
      behaviors.merge(repo_.load_behaviors());
    } catch (const std::exception& ex) {
      return error(res, 422, std::string("cannot read scenario: ") + ex.what());
    }
    translation::SimulationPlan plan;
    try {
      plan = translation::translate(*s, behaviors, seed, dt);
    } catch (const translation::TranslateError& ex) {
      return reply(res, 422, {{"error", ex.what()}, {"violations", violations_json(scenario::validate(*s))}});
    }
    std::shared_ptr<translation::LaunchSession> session;
    try {
      translation::LaunchOptions lopts;
      lopts.boot_deadline = options_.boot_deadline;
      session = registry_.launch(plan, lopts);
    } catch (const translation::DuplicateSession& ex) {
      return error(res, 409, ex.what());
    }
    if (session->readiness != translation::Readiness::Ready)
      return reply(res, 422, {{"error", session->error}, {"failedCommand", session->failed_command.value_or(0)}});
    auto controller = std::make_shared<SessionController>(session, copts);
    {
      std::lock_guard lock(mu_);
      controllers_[session->id] = controller;
    }
    reply(res, 200, {{"sessionId", session->id}, {"scenario", session->sync_payload}});
  });

  srv.Get(R"(/scenarios/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      auto s = repo_.load(req.matches[1].str());
      if (!s) return error(res, 404, "unknown scenario " + req.matches[1].str());
      reply(res, 200, scenario::export_wire(*s));
    } catch (const std::exception& ex) {
      error(res, 422, std::string("stored scenario is unreadable: ") + ex.what());
    }
  });

  srv.Put(R"(/scenarios/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string graph = req.matches[1];
    auto body = parse_body(req, res);
    if (!body) return;
    scenario::Scenario s;
    try {
      s = scenario::import_wire(*body);
    } catch (const scenario::DecodeError& ex) {
      return error(res, 422, ex.what());
    }
    if (s.graph != graph) return error(res, 422, "document graph " + s.graph + " does not match " + graph);
    const auto violations = scenario::validate(s);
    if (!violations.empty())
      return reply(res, 422, {{"error", "scenario has violations"}, {"violations", violations_json(violations)}});
    const bool existed = repo_.exists(graph);
    try {
      repo_.save(s);
    } catch (const scenario::IoError& ex) {
      return error(res, 500, ex.what());
    }
    reply(res, existed ? 200 : 201, {{"saved", graph}});
  });

  srv.Delete(R"(/scenarios/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
    if (!repo_.remove(req.matches[1].str())) return error(res, 404, "unknown scenario " + req.matches[1].str());
    res.status = 204;
  });

  srv.Post(R"(/sessions/([^/]+)/(start|pause|stop))", [this](const httplib::Request& req, httplib::Response& res) {
    auto c = controller(req.matches[1]);
    if (!c) return error(res, 404, "unknown session " + req.matches[1].str());
    const std::string op = req.matches[2];
    bool ok = true;
    if (op == "start") ok = c->start();
    else if (op == "pause") ok = c->pause();
    else {
      c->stop();
      registry_.remove(c->id());
    }
    if (!ok) return error(res, 409, "session is stopped");
    reply(res, 200, {{"sessionId", c->id()}, {"runState", to_string(c->run_state())}});
  });

  srv.Get(R"(/sessions/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
    auto c = controller(req.matches[1]);
    if (!c) return error(res, 404, "unknown session " + req.matches[1].str());
    std::uint64_t since = 0;
    bool follow = true;
    try {
      if (req.has_param("since")) since = std::stoull(req.get_param_value("since"));
      if (req.has_param("follow")) follow = req.get_param_value("follow") != "0";
    } catch (const std::exception&) {
      return error(res, 400, "since must be a non-negative integer");
    }
    if (c->events().since(since, 1).truncated)
      return reply(res, 410, {{"error", "records after " + std::to_string(since) + " were evicted"},
                              {"firstRetained", c->events().first_retained()}});
    auto last = std::make_shared<std::uint64_t>(since);
    res.set_chunked_content_provider("application/x-ndjson", [c, last, follow](std::size_t, httplib::DataSink& sink) {
      auto& buf = c->events();
      const auto slice = buf.since(*last, kChunkRecords);
      if (!slice.records.empty()) {
        std::string chunk;
        for (const auto& r : slice.records) chunk += to_line(r);
        if (!sink.write(chunk.data(), chunk.size())) return false;
        *last = slice.records.back().seq;
        return true;
      }
      if (!follow || (buf.closed() && *last >= buf.last_seq())) {
        sink.done();
        return true;
      }
      if (buf.wait_after(*last, kHeartbeat) <= *last && !buf.closed()) {
        // keep-alive so dead clients are noticed
        if (!sink.write("\n", 1)) return false;
      }
      return true;
    });
  });

  srv.Get(R"(/sessions/([^/]+)/state)", [this](const httplib::Request& req, httplib::Response& res) {
    auto c = controller(req.matches[1]);
    if (!c) return error(res, 404, "unknown session " + req.matches[1].str());
    reply(res, 200, c->state());
  });

  srv.Get(R"(/sessions/([^/]+)/log)", [this](const httplib::Request& req, httplib::Response& res) {
    auto c = controller(req.matches[1]);
    if (!c) return error(res, 404, "unknown session " + req.matches[1].str());
    reply(res, 200, {{"records", c->log()}});
  });

  auto action_route = [this](bool async) {
    return [this, async](const httplib::Request& req, httplib::Response& res) {
      auto c = controller(req.matches[1]);
      if (!c) return error(res, 404, "unknown session " + req.matches[1].str());
      auto body = parse_body(req, res);
      if (!body) return;
      behavior::ActionSpec spec;
      try {
        spec = action_from_json(*body);
      } catch (const std::invalid_argument& ex) {
        return error(res, 400, ex.what());
      }
      ActionOutcome out;
      if (async) {
        if (!body->contains("callbackUri") || !(*body)["callbackUri"].is_string())
          return error(res, 422, "async actions need a callbackUri");
        out = c->async_action(req.matches[2], spec, (*body)["callbackUri"].get<std::string>());
      } else {
        if (body->contains("callbackUri")) return error(res, 422, "sync actions take no callbackUri");
        out = c->sync_action(req.matches[2], spec);
      }
      reply(res, out.status, out.body);
    };
  };
  srv.Post(R"(/sessions/([^/]+)/agents/(.+)/actions/async)", action_route(true));
  srv.Post(R"(/sessions/([^/]+)/agents/(.+)/actions)", action_route(false));
}

ApiServer::ApiServer(ServiceOptions options)
    : service_(std::make_unique<Service>(std::move(options))), server_(std::make_unique<httplib::Server>()) {
  service_->install(*server_);
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) return -1;
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void ApiServer::wait() {
  if (thread_.joinable()) thread_.join();
}

void ApiServer::stop() {
  std::lock_guard lock(mu_);
  if (stopped_) return;
  stopped_ = true;
  service_->shutdown();
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace streetlab::service
