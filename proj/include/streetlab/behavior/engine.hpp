#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "streetlab/behavior/tree.hpp"
#include "streetlab/rdf/dataset.hpp"

namespace streetlab::behavior {

enum class LogLevel { Info, Warn, Error };
std::string_view to_string(LogLevel level);
using LogSink = std::function<void(LogLevel, const std::string&)>;

struct ActionReceipt {
  enum class Kind { Ok, Rejected, Pending };
  Kind kind = Kind::Rejected;
  std::string token;    // Pending only
  std::string message;  // Rejected only

  static ActionReceipt ok() { return {Kind::Ok, {}, {}}; }
  static ActionReceipt rejected(std::string why) { return {Kind::Rejected, {}, std::move(why)}; }
  static ActionReceipt pending(std::string token) { return {Kind::Pending, std::move(token), {}}; }
};

/// The world side of action execution.
class ActionDispatcher {
 public:
  virtual ~ActionDispatcher() = default;
  virtual ActionReceipt execute(const std::string& agent, const ActionSpec& spec) = 0;
};

struct TickContext {
  /// Holds the agent's knowledge graph and the perception graph.
  rdf::Dataset* dataset = nullptr;
  ActionDispatcher* dispatcher = nullptr;
  double clock = 0.0;
  LogSink log;
};

using StatusSnapshot = std::map<std::string, NodeStatus>;

/// One agent running one tree. Ticked from a single context; resume() may be
/// called from any thread and takes effect at the next tick.
class BehaviorInstance {
 public:
  struct Pending {
    std::size_t node;
    std::string token;
  };

  BehaviorInstance(std::shared_ptr<const BehaviorTree> tree, std::string agent, std::string knowledge_graph,
                   std::string perception_graph);

  /// Evaluates the tree once. Never throws: dispatcher failures mark the
  /// action Failed and are logged. After the root has reached Succeeded or
  /// Failed the instance is finished and further ticks change nothing.
  NodeStatus tick(TickContext& ctx);

  /// Queues the terminal result of an async action.
  void resume(const std::string& token, bool ok);

  /// Node statuses as of the last completed tick.
  StatusSnapshot status_snapshot() const;
  NodeStatus status(std::size_t node) const { return statuses_.at(node); }
  NodeStatus root_status() const { return statuses_.front(); }
  bool finished() const { return finished_; }
  const std::optional<Pending>& pending() const { return pending_; }
  std::uint64_t tick_count() const { return ticks_; }

  const BehaviorTree& tree() const { return *tree_; }
  const std::string& agent() const { return agent_; }
  const std::string& knowledge_graph() const { return knowledge_graph_; }
  const std::string& perception_graph() const { return perception_graph_; }

 private:
  NodeStatus run(std::size_t i, TickContext& ctx);
  NodeStatus run_action(std::size_t i, TickContext& ctx);
  NodeStatus run_condition(std::size_t i, TickContext& ctx);
  NodeStatus run_update(std::size_t i, TickContext& ctx);
  void drain_inbox(TickContext& ctx);
  void log(TickContext& ctx, LogLevel level, const std::string& msg) const;

  std::shared_ptr<const BehaviorTree> tree_;
  std::string agent_;
  std::string knowledge_graph_;
  std::string perception_graph_;
  std::vector<NodeStatus> statuses_;
  std::vector<std::size_t> resume_child_;
  std::vector<int> repeat_done_;
  std::optional<Pending> pending_;
  std::optional<bool> pending_result_;
  bool finished_ = false;
  std::uint64_t ticks_ = 0;

  struct Inbox {
    std::mutex mu;
    std::deque<std::pair<std::string, bool>> items;
  };
  std::unique_ptr<Inbox> inbox_ = std::make_unique<Inbox>();
};

}  // namespace streetlab::behavior
