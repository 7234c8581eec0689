#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "streetlab/scenario/model.hpp"

namespace streetlab::scenario {

/// Wire document:
///   {graph, cellSize, template{id,name,rows,cols,cells[]}, entities[], paths[], boxes[]}
/// Keys are camelCase and emitted in sorted order, arrays sorted by id, so
/// equal scenarios always produce identical text.
nlohmann::json export_wire(const Scenario& scenario);
std::string export_wire_text(const Scenario& scenario);

/// Exact inverse of export_wire. Unknown or missing keys and ill-typed
/// values raise DecodeError with a JSON-pointer-like location.
Scenario import_wire(const nlohmann::json& document);
Scenario import_wire_text(std::string_view text);

}  // namespace streetlab::scenario
