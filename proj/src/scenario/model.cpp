#include "streetlab/scenario/model.hpp"

#include <algorithm>
#include <charconv>

namespace streetlab::scenario {

std::string cell_code(const Cell& cell) {
  switch (cell.type) {
    case CellType::Sidewalk: return "S";
    case CellType::Crossing: return "C";
    case CellType::NoGo: return "X";
    case CellType::Road: return "R" + std::to_string(cell.lane_degrees.value_or(0));
  }
  return "X";
}

Cell parse_cell_code(std::string_view code) {
  if (code == "S") return {CellType::Sidewalk, std::nullopt};
  if (code == "C") return {CellType::Crossing, std::nullopt};
  if (code == "X") return {CellType::NoGo, std::nullopt};
  if (code.size() >= 2 && code[0] == 'R') {
    int deg = 0;
    const auto* first = code.data() + 1;
    const auto* last = code.data() + code.size();
    auto [ptr, ec] = std::from_chars(first, last, deg);
    if (ec == std::errc{} && ptr == last && deg >= 0 && deg < 360 && (code.size() == 2 || code[1] != '0'))
      return {CellType::Road, deg};
  }
  throw std::invalid_argument("unknown cell code '" + std::string(code) + "'");
}

std::string_view to_string(TemplateName name) {
  switch (name) {
    case TemplateName::StraightRoad: return "straight-road";
    case TemplateName::TJunction: return "t-junction";
    case TemplateName::Intersection: return "intersection";
  }
  return "straight-road";
}

std::optional<TemplateName> parse_template_name(std::string_view text) {
  for (auto n : {TemplateName::StraightRoad, TemplateName::TJunction, TemplateName::Intersection})
    if (to_string(n) == text) return n;
  return std::nullopt;
}

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::Pedestrian: return "pedestrian";
    case EntityKind::Vehicle: return "vehicle";
    case EntityKind::Cyclist: return "cyclist";
    case EntityKind::StaticProp: return "static-prop";
  }
  return "pedestrian";
}

std::optional<EntityKind> parse_entity_kind(std::string_view text) {
  for (auto k : {EntityKind::Pedestrian, EntityKind::Vehicle, EntityKind::Cyclist, EntityKind::StaticProp})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

double max_speed(EntityKind kind) {
  switch (kind) {
    case EntityKind::Pedestrian: return 2.5;
    case EntityKind::Cyclist: return 8.0;
    case EntityKind::Vehicle: return 20.0;
    case EntityKind::StaticProp: return 0.0;
  }
  return 0.0;
}

bool is_dynamic(EntityKind kind) { return kind != EntityKind::StaticProp; }

const Entity* Scenario::find_entity(std::string_view id) const {
  for (const auto& e : entities)
    if (e.id == id) return &e;
  return nullptr;
}

const PathSpec* Scenario::find_path(std::string_view id) const {
  for (const auto& p : paths)
    if (p.id == id) return &p;
  return nullptr;
}

void Scenario::normalize() {
  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::stable_sort(entities.begin(), entities.end(), by_id);
  std::stable_sort(paths.begin(), paths.end(), by_id);
  std::stable_sort(boxes.begin(), boxes.end(), by_id);
}

}  // namespace streetlab::scenario
