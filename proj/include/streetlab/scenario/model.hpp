#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace streetlab::scenario {

enum class CellType { Sidewalk, Road, Crossing, NoGo };

struct Cell {
  CellType type = CellType::NoGo;
  /// Travel direction in degrees for road cells (0 = +x, 90 = +y), empty otherwise.
  std::optional<int> lane_degrees;
  bool operator==(const Cell&) const = default;
};

/// Wire code: "S", "C", "X" or "R<degrees>".
std::string cell_code(const Cell& cell);
/// Throws std::invalid_argument for an unknown code.
Cell parse_cell_code(std::string_view code);

enum class TemplateName { StraightRoad, TJunction, Intersection };

std::string_view to_string(TemplateName name);
std::optional<TemplateName> parse_template_name(std::string_view text);

struct MapTemplate {
  std::string id;
  TemplateName name = TemplateName::StraightRoad;
  int rows = 0;
  int cols = 0;
  /// Row-major, rows * cols entries.
  std::vector<Cell> cells;

  bool in_bounds(int row, int col) const { return row >= 0 && col >= 0 && row < rows && col < cols; }
  const Cell& at(int row, int col) const { return cells.at(static_cast<std::size_t>(row * cols + col)); }
  bool operator==(const MapTemplate&) const = default;
};

enum class EntityKind { Pedestrian, Vehicle, Cyclist, StaticProp };

std::string_view to_string(EntityKind kind);
std::optional<EntityKind> parse_entity_kind(std::string_view text);
/// m/s ceiling per kind; 0 for static props.
double max_speed(EntityKind kind);
bool is_dynamic(EntityKind kind);

struct GridCell {
  int row = 0;
  int col = 0;
  auto operator<=>(const GridCell&) const = default;
};

struct Entity {
  std::string id;
  EntityKind kind = EntityKind::Pedestrian;
  GridCell spawn;
  double heading = 0.0;
  double initial_speed = 0.0;
  std::optional<std::string> behavior;
  std::optional<std::string> path;
  std::string label;
  bool operator==(const Entity&) const = default;
};

struct PathSpec {
  std::string id;
  std::vector<GridCell> waypoints;
  std::string owner;
  bool operator==(const PathSpec&) const = default;
};

struct DecisionBox {
  std::string id;
  int row0 = 0;
  int col0 = 0;
  int row1 = 0;
  int col1 = 0;
  std::string signal;
  std::set<EntityKind> watches;

  bool contains(GridCell c) const { return c.row >= row0 && c.row <= row1 && c.col >= col0 && c.col <= col1; }
  bool operator==(const DecisionBox&) const = default;
};

struct Scenario {
  std::string graph;
  MapTemplate map;
  std::vector<Entity> entities;
  std::vector<PathSpec> paths;
  std::vector<DecisionBox> boxes;
  double cell_size = 1.0;

  const Entity* find_entity(std::string_view id) const;
  const PathSpec* find_path(std::string_view id) const;
  /// Sorts entities, paths and boxes by id.
  void normalize();
  bool operator==(const Scenario&) const = default;
};

/// Raised when quads or a wire document cannot be turned into a Scenario.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace streetlab::scenario
