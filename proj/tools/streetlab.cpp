// streetlab command line: serve the HTTP API, run scenarios headless,
// validate scenario files.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <thread>

#include "streetlab/behavior/library.hpp"
#include "streetlab/rdf/errors.hpp"
#include "streetlab/rdf/trig.hpp"
#include "streetlab/scenario/demo.hpp"
#include "streetlab/scenario/quads.hpp"
#include "streetlab/scenario/repository.hpp"
#include "streetlab/scenario/validate.hpp"
#include "streetlab/service/server.hpp"
#include "streetlab/translation/config.hpp"
#include "streetlab/translation/plan.hpp"

namespace fs = std::filesystem;
using namespace streetlab;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kIoError = 2;

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

struct Invalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --scenario is a .trig file, or a graph name stored in the repository.
// A file holding several scenario graphs needs the graph given as
// file.trig#<graph>.
scenario::Scenario load_scenario(const std::string& ref, const scenario::ScenarioRepository& repo) {
  std::string file = ref;
  std::string graph;
  if (auto hash = ref.find(".trig#"); hash != std::string::npos) {
    file = ref.substr(0, hash + 5);
    graph = ref.substr(hash + 6);
  }
  if (fs::is_regular_file(file)) {
    rdf::Dataset data;
    try {
      data = rdf::parse_trig(scenario::read_file(file));
    } catch (const rdf::SyntaxError& ex) {
      throw Invalid(file + ":" + ex.what());
    }
    if (graph.empty()) {
      const auto graphs = scenario::scenario_graphs(data);
      if (graphs.size() != 1)
        throw Invalid(file + ": holds " + std::to_string(graphs.size()) + " scenario graphs, name one with #<graph>");
      graph = graphs.front();
    }
    try {
      return scenario::from_quads(data, graph);
    } catch (const scenario::DecodeError& ex) {
      throw Invalid(file + ": " + ex.what());
    }
  }
  if (!ref.empty() && ref.find("://") == std::string::npos) throw scenario::IoError("no such file: " + ref);
  try {
    auto s = repo.load(ref);
    if (!s) throw scenario::IoError("scenario " + ref + " not found in " + repo.dir().string());
    return *s;
  } catch (const scenario::DecodeError& ex) {
    throw Invalid(ex.what());
  } catch (const rdf::SyntaxError& ex) {
    throw Invalid(ex.what());
  }
}

int validate_cmd(const std::string& ref, const scenario::ScenarioRepository& repo) {
  const auto s = load_scenario(ref, repo);
  const auto violations = scenario::validate(s);
  for (const auto& v : violations) std::cout << v.code << "\t" << v.element << "\t" << v.message << "\n";
  if (!violations.empty()) return kInvalid;
  std::cout << s.graph << ": ok\n";
  return kOk;
}

int run_cmd(const std::string& ref, const scenario::ScenarioRepository& repo, std::uint64_t steps,
            const std::string& out, std::uint64_t seed, double dt) {
  const auto s = load_scenario(ref, repo);
  auto behaviors = behavior::builtin_behaviors();
  if (fs::is_directory(repo.dir() / "behaviors")) behaviors.merge(repo.load_behaviors());
  translation::SimulationPlan plan;
  try {
    plan = translation::translate(s, behaviors, seed, dt);
  } catch (const translation::TranslateError& ex) {
    std::cerr << ex.what() << "\n";
    return kInvalid;
  }
  auto session = std::make_shared<translation::LaunchSession>(translation::launch(plan));
  if (session->readiness != translation::Readiness::Ready) {
    std::cerr << "launch failed at command " << session->failed_command.value_or(0) << ": " << session->error << "\n";
    return kInvalid;
  }
  std::string text;
  for (const auto& r : service::run_headless(session, steps)) text += service::to_line(r);
  if (out == "-") {
    std::cout << text;
  } else {
    scenario::write_file_atomic(out, text);
  }
  return kOk;
}

int serve_cmd(const translation::SimConfig& cfg, const std::string& host, int port, double speed_factor) {
  service::ServiceOptions o;
  o.repo_dir = cfg.repo_dir;
  o.seed = cfg.seed;
  o.dt = cfg.dt;
  o.boot_deadline = cfg.boot_deadline;
  o.controller.speed_factor = speed_factor;
  fs::create_directories(o.repo_dir);
  service::ApiServer api(o);
  const int bound = api.start(host, port);
  if (bound < 0) throw scenario::IoError("cannot listen on " + host + ":" + std::to_string(port));
  std::cerr << "listening on http://" << host << ":" << bound << " (repo " << cfg.repo_dir << ")\n";
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  api.stop();
  return kOk;
}

int export_demo_cmd(const scenario::ScenarioRepository& repo) {
  fs::create_directories(repo.dir());
  for (const auto& s : scenario::demo_scenarios()) {
    repo.save(s);
    std::cout << repo.file_for(s.graph).string() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  translation::SimConfig cfg;
  try {
    cfg = translation::load_config();
  } catch (const translation::ConfigError& ex) {
    std::cerr << "environment: " << ex.what() << "\n";
    return kInvalid;
  }

  CLI::App app{"streetlab: scenario modeling and agent simulation"};
  app.require_subcommand(1);

  std::string host = "127.0.0.1";
  int port = 8080;
  double speed_factor = 1.0;
  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  serve->add_option("--port", port, "listen port (0 picks one)")->capture_default_str();
  serve->add_option("--host", host, "listen address")->capture_default_str();
  serve->add_option("--repo-dir", cfg.repo_dir, "scenario repository directory")->capture_default_str();
  serve->add_option("--seed", cfg.seed, "default launch seed")->capture_default_str();
  serve->add_option("--dt", cfg.dt, "default step length in seconds")->check(CLI::PositiveNumber)->capture_default_str();
  serve->add_option("--speed-factor", speed_factor, "wall-clock pacing, 0 = as fast as possible")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  std::string scenario_ref;
  std::uint64_t steps = 200;
  std::string out = "events.ndjson";
  auto* run = app.add_subcommand("run", "headless run, writes the event log");
  run->add_option("--scenario", scenario_ref, "scenario .trig file or repository graph name")->required();
  run->add_option("--steps", steps, "number of steps")->capture_default_str();
  run->add_option("--out", out, "output file, - for stdout")->capture_default_str();
  run->add_option("--repo-dir", cfg.repo_dir, "scenario repository directory")->capture_default_str();
  run->add_option("--seed", cfg.seed, "seed")->capture_default_str();
  run->add_option("--dt", cfg.dt, "step length in seconds")->check(CLI::PositiveNumber)->capture_default_str();

  auto* validate = app.add_subcommand("validate", "check a scenario, listing violations");
  validate->add_option("--scenario", scenario_ref, "scenario .trig file or repository graph name")->required();
  validate->add_option("--repo-dir", cfg.repo_dir, "scenario repository directory")->capture_default_str();

  auto* export_demo = app.add_subcommand("export-demo", "write the shipped scenarios into the repository");
  export_demo->add_option("--repo-dir", cfg.repo_dir, "scenario repository directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    const scenario::ScenarioRepository repo(cfg.repo_dir);
    if (*serve) return serve_cmd(cfg, host, port, speed_factor);
    if (*run) return run_cmd(scenario_ref, repo, steps, out, cfg.seed, cfg.dt);
    if (*validate) return validate_cmd(scenario_ref, repo);
    if (*export_demo) return export_demo_cmd(repo);
  } catch (const Invalid& ex) {
    std::cerr << ex.what() << "\n";
    return kInvalid;
  } catch (const scenario::IoError& ex) {
    std::cerr << ex.what() << "\n";
    return kIoError;
  } catch (const fs::filesystem_error& ex) {
    std::cerr << ex.what() << "\n";
    return kIoError;
  }
  return kOk;
}
