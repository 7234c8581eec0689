#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "streetlab/rdf/dataset.hpp"
#include "streetlab/scenario/model.hpp"

namespace streetlab::scenario {

/// Scenario vocabulary. One class per element kind, one property per field;
/// waypoints and grid rows carry explicit integer indexes.
namespace vocab {
inline constexpr std::string_view kNs = "https://streetlab.dev/vocab#";
std::string iri(std::string_view local);
rdf::Term term(std::string_view local);
}  // namespace vocab

/// `base#suffix`, or `base/suffix` when base already has a fragment.
std::string child_iri(std::string_view base, std::string_view suffix);

/// Encodes every field into the scenario's named graph. Throws
/// std::invalid_argument when validate() reports violations.
std::vector<rdf::Quad> to_quads(const Scenario& scenario);
rdf::Dataset to_dataset(const Scenario& scenario);

/// Inverse of to_quads. Extra triples are ignored. Throws DecodeError naming
/// the subject and property for a missing or malformed mandatory value, and
/// for references to paths or owners that the graph does not describe.
Scenario from_quads(const rdf::Dataset& dataset, const std::string& graph);

/// Graph names in the dataset that carry a scenario node.
std::vector<std::string> scenario_graphs(const rdf::Dataset& dataset);

}  // namespace streetlab::scenario
