#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "streetlab/scenario/repository.hpp"
#include "streetlab/service/controller.hpp"
#include "streetlab/translation/launch.hpp"

namespace httplib {
class Server;
}

namespace streetlab::service {

struct ServiceOptions {
  std::filesystem::path repo_dir = "scenarios";
  std::uint64_t seed = 0;
  double dt = 0.05;
  double boot_deadline = translation::kDefaultBootDeadline;
  ControllerOptions controller;
};

/// Route handlers and the sessions they manage.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();

  void install(httplib::Server& server);
  std::shared_ptr<SessionController> controller(const std::string& session_id) const;
  /// Stops every session; open event streams then finish.
  void shutdown();

  const scenario::ScenarioRepository& repository() const { return repo_; }

 private:
  ServiceOptions options_;
  scenario::ScenarioRepository repo_;
  translation::SessionRegistry registry_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<SessionController>> controllers_;
};

/// HTTP server on a background thread.
class ApiServer {
 public:
  explicit ApiServer(ServiceOptions options);
  ~ApiServer();

  /// Binds and starts serving; port 0 picks a free port. Returns the bound
  /// port, or -1 when binding failed.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Blocks until stop() is called from elsewhere.
  void wait();
  void stop();

  Service& service() { return *service_; }

 private:
  std::unique_ptr<Service> service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::mutex mu_;
  bool stopped_ = false;
};

}  // namespace streetlab::service
