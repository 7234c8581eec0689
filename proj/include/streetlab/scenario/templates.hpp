#pragma once

#include <vector>

#include "streetlab/scenario/model.hpp"

namespace streetlab::scenario {

/// straight-road 8x16, t-junction 16x16, intersection 16x16. Right-hand
/// traffic, two lanes per road, sidewalks on both sides.
MapTemplate make_template(TemplateName name);
std::vector<MapTemplate> all_templates();

/// Scenario holding only the template, with the given graph name.
Scenario empty_scenario(std::string graph, TemplateName name, double cell_size = 1.0);

}  // namespace streetlab::scenario
