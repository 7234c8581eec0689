#include "streetlab/behavior/tree.hpp"

#include <set>

namespace streetlab::behavior {

std::string_view to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Inactive: return "inactive";
    case NodeStatus::Running: return "running";
    case NodeStatus::Succeeded: return "succeeded";
    case NodeStatus::Failed: return "failed";
  }
  return "inactive";
}

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Sequence: return "sequence";
    case NodeKind::Fallback: return "fallback";
    case NodeKind::Repeat: return "repeat";
    case NodeKind::Condition: return "condition";
    case NodeKind::Action: return "action";
    case NodeKind::Update: return "knowledge-update";
  }
  return "sequence";
}

std::string_view to_string(ActionMode m) { return m == ActionMode::Sync ? "sync" : "async"; }

const std::vector<std::string>& catalog_actions() {
  static const std::vector<std::string> names{"set-speed",        "set-orientation", "walk-to-waypoint",
                                              "follow-path",      "abort-and-return", "play-animation",
                                              "wait"};
  return names;
}

std::optional<ActionMode> catalog_mode(std::string_view action) {
  if (action == "set-speed" || action == "set-orientation") return ActionMode::Sync;
  if (action == "walk-to-waypoint" || action == "follow-path" || action == "abort-and-return" ||
      action == "play-animation" || action == "wait")
    return ActionMode::Async;
  return std::nullopt;
}

ActionSpec ActionSpec::make(std::string name, std::map<std::string, rdf::Term> params) {
  ActionSpec s;
  s.mode = catalog_mode(name).value_or(ActionMode::Sync);
  s.name = std::move(name);
  s.params = std::move(params);
  return s;
}

std::optional<double> ActionSpec::number(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  return rdf::numeric_value(it->second);
}

std::optional<std::string> ActionSpec::text(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  return it->second.value;
}

Node sequence(std::string id, std::vector<Node> children) {
  Node n;
  n.id = std::move(id);
  n.kind = NodeKind::Sequence;
  n.children = std::move(children);
  return n;
}

Node fallback(std::string id, std::vector<Node> children) {
  Node n = sequence(std::move(id), std::move(children));
  n.kind = NodeKind::Fallback;
  return n;
}

Node repeat(std::string id, std::optional<int> count, Node child) {
  Node n;
  n.id = std::move(id);
  n.kind = NodeKind::Repeat;
  n.repeat_count = count;
  n.children.push_back(std::move(child));
  return n;
}

Node condition(std::string id, rdf::Query query) {
  Node n;
  n.id = std::move(id);
  n.kind = NodeKind::Condition;
  n.query = std::move(query);
  return n;
}

Node action(std::string id, std::string name, std::map<std::string, rdf::Term> params) {
  Node n;
  n.id = std::move(id);
  n.kind = NodeKind::Action;
  n.action = ActionSpec::make(std::move(name), std::move(params));
  return n;
}

Node update(std::string id, UpdateSpec spec) {
  Node n;
  n.id = std::move(id);
  n.kind = NodeKind::Update;
  n.update = std::move(spec);
  return n;
}

BehaviorTree::BehaviorTree(const Node& root) {
  add(root, std::nullopt);
  std::set<std::string> ids;
  for (const auto& e : entries_)
    if (!ids.insert(e.node.id).second) throw TreeError("node id used twice: " + e.node.id);
}

std::size_t BehaviorTree::add(const Node& n, std::optional<std::size_t> parent) {
  auto fail = [&](const std::string& what) { throw TreeError(std::string(to_string(n.kind)) + " " + n.id + ": " + what); };
  if (n.id.empty()) fail("node without id");
  switch (n.kind) {
    case NodeKind::Sequence:
    case NodeKind::Fallback:
      if (n.children.empty()) fail("needs at least one child");
      break;
    case NodeKind::Repeat:
      if (n.children.size() != 1) fail("needs exactly one child");
      if (n.repeat_count && *n.repeat_count < 1) fail("count must be positive");
      break;
    case NodeKind::Condition:
      if (!n.children.empty()) fail("leaf with children");
      if (!n.query) fail("missing query");
      break;
    case NodeKind::Action:
      if (!n.children.empty()) fail("leaf with children");
      if (n.action.name.empty()) fail("missing action name");
      break;
    case NodeKind::Update:
      if (!n.children.empty()) fail("leaf with children");
      break;
  }
  const std::size_t index = entries_.size();
  Entry e;
  e.node = n;
  e.node.children.clear();
  e.parent = parent;
  entries_.push_back(std::move(e));
  for (const auto& c : n.children) {
    const std::size_t ci = add(c, index);
    entries_[index].children.push_back(ci);
  }
  return index;
}

std::optional<std::size_t> BehaviorTree::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].node.id == id) return i;
  return std::nullopt;
}

Node BehaviorTree::to_node(std::size_t i) const {
  Node n = entries_.at(i).node;
  for (auto c : entries_[i].children) n.children.push_back(to_node(c));
  return n;
}

}  // namespace streetlab::behavior
