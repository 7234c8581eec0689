#pragma once

#include <string>
#include <string_view>

#include "streetlab/behavior/tree.hpp"
#include "streetlab/rdf/dataset.hpp"
#include "streetlab/rdf/trig.hpp"

namespace streetlab::behavior {

/// Tree vocabulary:
///   bt:Sequence, bt:Fallback, bt:Repeat (bt:count, absent = forever),
///   bt:Condition (bt:query), bt:Action (bt:action, bt:param [bt:name; bt:value]),
///   bt:Update (bt:insert, bt:delete, bt:bindingQuery),
///   bt:child [bt:index n; bt:node <child>], bt:label.
namespace vocab {
inline constexpr std::string_view kNs = "https://streetlab.dev/bt#";
}  // namespace vocab

/// Namespaces available to embedded query and template text without
/// declaring them: bt, sl, perc, rdf, xsd.
const rdf::PrefixMap& embedded_prefixes();

/// Materializes the tree rooted at `root`, reading the union of all graphs.
/// Throws TreeError for an unknown node kind, a cycle, a node reached twice,
/// bad child indexes, or malformed embedded query text.
BehaviorTree load_tree(const rdf::Dataset& dataset, const std::string& root);

/// Encodes a tree into `graph` (inverse of load_tree).
rdf::Dataset tree_to_dataset(const BehaviorTree& tree, const std::string& graph);

}  // namespace streetlab::behavior
