#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "streetlab/rdf/query.hpp"

namespace streetlab::behavior {

enum class NodeStatus { Inactive, Running, Succeeded, Failed };
std::string_view to_string(NodeStatus s);

enum class NodeKind { Sequence, Fallback, Repeat, Condition, Action, Update };
std::string_view to_string(NodeKind k);

enum class ActionMode { Sync, Async };
std::string_view to_string(ActionMode m);

/// Mode of a catalog action, empty for names outside the catalog.
std::optional<ActionMode> catalog_mode(std::string_view action);
const std::vector<std::string>& catalog_actions();

struct ActionSpec {
  std::string name;
  std::map<std::string, rdf::Term> params;
  ActionMode mode = ActionMode::Sync;

  /// Spec with the catalog mode for `name` (Sync when unknown).
  static ActionSpec make(std::string name, std::map<std::string, rdf::Term> params = {});
  std::optional<double> number(const std::string& key) const;
  std::optional<std::string> text(const std::string& key) const;
  bool operator==(const ActionSpec&) const = default;
};

struct UpdateSpec {
  std::vector<rdf::TriplePattern> insert;
  std::vector<rdf::TriplePattern> remove;
  std::optional<rdf::Query> binding;
  bool operator==(const UpdateSpec&) const = default;
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Sequence;
  std::string label;
  std::vector<Node> children;
  /// Repeat only; empty means forever.
  std::optional<int> repeat_count;
  std::optional<rdf::Query> query;
  ActionSpec action;
  UpdateSpec update;
  bool operator==(const Node&) const = default;
};

Node sequence(std::string id, std::vector<Node> children);
Node fallback(std::string id, std::vector<Node> children);
Node repeat(std::string id, std::optional<int> count, Node child);
Node condition(std::string id, rdf::Query query);
Node action(std::string id, std::string name, std::map<std::string, rdf::Term> params = {});
Node update(std::string id, UpdateSpec spec);

class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validated tree flattened in pre-order (index 0 is the root).
class BehaviorTree {
 public:
  struct Entry {
    Node node;  // children cleared; see `children`
    std::vector<std::size_t> children;
    std::optional<std::size_t> parent;
  };

  /// Throws TreeError when composites lack children, leaves have children,
  /// repeat does not have exactly one child or a positive count, node ids
  /// repeat, or a leaf is missing its payload.
  explicit BehaviorTree(const Node& root);

  std::size_t size() const { return entries_.size(); }
  const Entry& entry(std::size_t i) const { return entries_.at(i); }
  const std::vector<Entry>& entries() const { return entries_; }
  std::optional<std::size_t> index_of(std::string_view id) const;
  const std::string& root_id() const { return entries_.front().node.id; }
  /// Rebuilds the nested form.
  Node to_node(std::size_t i = 0) const;

 private:
  std::size_t add(const Node& n, std::optional<std::size_t> parent);
  std::vector<Entry> entries_;
};

}  // namespace streetlab::behavior
