#pragma once

#include <string_view>
#include <vector>

#include "streetlab/scenario/model.hpp"

namespace streetlab::scenario {

namespace demo {
inline constexpr std::string_view kCrossingClear = "https://streetlab.dev/scenarios/crossing-clear";
inline constexpr std::string_view kCrossingDanger = "https://streetlab.dev/scenarios/crossing-danger";
inline constexpr std::string_view kTJunction = "https://streetlab.dev/scenarios/t-junction";
inline constexpr std::string_view kIntersection = "https://streetlab.dev/scenarios/intersection";
}  // namespace demo

/// Pedestrian at the curb of the straight road with the crossing tree and a
/// westbound vehicle. danger=false: vehicle ~40 m away at 2 m/s; danger=true:
/// ~15 m away at 12 m/s. Cell size 3 m.
Scenario crossing_scenario(bool danger);
Scenario t_junction_demo();
Scenario intersection_demo();

/// The four shipped scenarios.
std::vector<Scenario> demo_scenarios();

}  // namespace streetlab::scenario
