#pragma once

#include <string>
#include <vector>

#include "streetlab/scenario/model.hpp"

namespace streetlab::scenario {

struct Violation {
  std::string element;  // id of the offending element (graph name for scenario-level rules)
  std::string code;
  std::string message;
  bool operator==(const Violation&) const = default;
};

/// Empty iff the scenario can be simulated. Rule codes:
/// GRID_INCOMPLETE, GRID_INVALID_DIMENSIONS, LANE_DIRECTION_INVALID, CELL_SIZE_INVALID,
/// DUPLICATE_ID, EMPTY_ID, SPAWN_OUT_OF_BOUNDS, SPAWN_KIND_MISMATCH, LANE_DIRECTION_MISMATCH,
/// NEGATIVE_SPEED, SPEED_EXCEEDS_LIMIT, NON_FINITE_VALUE, MISSING_BEHAVIOR, STATIC_PROP_DYNAMIC,
/// DANGLING_PATH_REF, PATH_OWNER_MISMATCH, DANGLING_PATH_OWNER, PATH_TOO_SHORT,
/// DUPLICATE_WAYPOINT, WAYPOINT_OUT_OF_BOUNDS, BOX_NOT_NORMALIZED, BOX_OUT_OF_BOUNDS,
/// BOX_MISSING_SIGNAL, INVALID_IRI.
std::vector<Violation> validate(const Scenario& scenario);

/// Joins violations as "code element: message" lines.
std::string describe(const std::vector<Violation>& violations);

}  // namespace streetlab::scenario
