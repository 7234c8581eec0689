#include "streetlab/scenario/validate.hpp"

#include <cctype>
#include <cmath>
#include <string_view>
#include <numbers>
#include <set>

namespace streetlab::scenario {

namespace {

double angle_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
  return d > std::numbers::pi ? 2.0 * std::numbers::pi - d : d;
}

std::string cell_text(GridCell c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

bool plausible_iri(const std::string& v) {
  const auto colon = v.find(':');
  if (colon == std::string::npos || colon == 0 || !std::isalpha(static_cast<unsigned char>(v[0]))) return false;
  for (std::size_t i = 0; i < colon; ++i) {
    const char c = v[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
  }
  for (unsigned char c : v)
    if (c <= 0x20 || std::string_view("<>\"{}|^`\\").find(static_cast<char>(c)) != std::string_view::npos) return false;
  return true;
}

}  // namespace

std::vector<Violation> validate(const Scenario& s) {
  std::vector<Violation> out;
  auto add = [&](const std::string& element, const char* code, std::string message) {
    out.push_back({element, code, std::move(message)});
  };

  const MapTemplate& m = s.map;
  bool grid_ok = true;
  if (m.rows <= 0 || m.cols <= 0) {
    add(s.graph, "GRID_INVALID_DIMENSIONS", "rows and cols must be positive");
    grid_ok = false;
  } else if (m.cells.size() != static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.cols)) {
    add(s.graph, "GRID_INCOMPLETE",
        "expected " + std::to_string(m.rows * m.cols) + " cells, found " + std::to_string(m.cells.size()));
    grid_ok = false;
  } else {
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
      const Cell& c = m.cells[i];
      const bool road = c.type == CellType::Road;
      const bool deg_ok = c.lane_degrees && *c.lane_degrees >= 0 && *c.lane_degrees < 360;
      if (road != c.lane_degrees.has_value() || (road && !deg_ok)) {
        add(s.graph, "LANE_DIRECTION_INVALID", "cell " + std::to_string(i) + " has an invalid lane direction");
      }
    }
  }
  if (!plausible_iri(s.graph)) add(s.graph, "INVALID_IRI", "graph name is not an absolute IRI");
  if (!(std::isfinite(s.cell_size) && s.cell_size > 0.0))
    add(s.graph, "CELL_SIZE_INVALID", "cell size must be a positive number of meters");

  std::set<std::string> ids;
  auto check_id = [&](const std::string& id) {
    if (id.empty()) add(id, "EMPTY_ID", "element without id");
    else if (!plausible_iri(id)) add(id, "INVALID_IRI", "id is not an absolute IRI");
    else if (!ids.insert(id).second) add(id, "DUPLICATE_ID", "id used by more than one element");
  };
  for (const auto& e : s.entities) check_id(e.id);
  for (const auto& p : s.paths) check_id(p.id);
  for (const auto& b : s.boxes) check_id(b.id);

  for (const auto& e : s.entities) {
    if (!m.in_bounds(e.spawn.row, e.spawn.col)) {
      add(e.id, "SPAWN_OUT_OF_BOUNDS", "spawn cell " + cell_text(e.spawn) + " outside the grid");
    } else if (grid_ok) {
      const Cell& c = m.at(e.spawn.row, e.spawn.col);
      switch (e.kind) {
        case EntityKind::Pedestrian:
        case EntityKind::Cyclist:
          if (c.type != CellType::Sidewalk && c.type != CellType::Crossing)
            add(e.id, "SPAWN_KIND_MISMATCH", std::string(to_string(e.kind)) + " must spawn on a sidewalk or crossing");
          break;
        case EntityKind::Vehicle:
          if (c.type != CellType::Road) {
            add(e.id, "SPAWN_KIND_MISMATCH", "vehicle must spawn on a road lane");
          } else if (c.lane_degrees &&
                     angle_gap(e.heading, *c.lane_degrees * std::numbers::pi / 180.0) > std::numbers::pi / 2 + 1e-9) {
            add(e.id, "LANE_DIRECTION_MISMATCH", "vehicle heading opposes the lane direction");
          }
          break;
        case EntityKind::StaticProp:
          if (c.type == CellType::NoGo) add(e.id, "SPAWN_KIND_MISMATCH", "static prop placed on a no-go cell");
          break;
      }
    }
    if (!std::isfinite(e.heading) || !std::isfinite(e.initial_speed)) {
      add(e.id, "NON_FINITE_VALUE", "heading and speed must be finite");
    } else if (e.initial_speed < 0.0) {
      add(e.id, "NEGATIVE_SPEED", "initial speed must not be negative");
    } else if (is_dynamic(e.kind) && e.initial_speed > max_speed(e.kind)) {
      add(e.id, "SPEED_EXCEEDS_LIMIT", "initial speed above the " + std::string(to_string(e.kind)) + " limit");
    }
    if (is_dynamic(e.kind)) {
      if (!e.behavior || e.behavior->empty()) add(e.id, "MISSING_BEHAVIOR", "dynamic entity needs a behavior");
    } else if (e.behavior || e.path || e.initial_speed != 0.0) {
      add(e.id, "STATIC_PROP_DYNAMIC", "static props take no behavior, path or speed");
    }
    if (e.behavior && !e.behavior->empty() && !plausible_iri(*e.behavior))
      add(e.id, "INVALID_IRI", "behavior reference is not an absolute IRI");
    if (e.path) {
      const PathSpec* p = s.find_path(*e.path);
      if (!p) add(e.id, "DANGLING_PATH_REF", "path " + *e.path + " does not exist");
      else if (p->owner != e.id) add(e.id, "PATH_OWNER_MISMATCH", "path " + *e.path + " is owned by " + p->owner);
    }
  }

  for (const auto& p : s.paths) {
    if (!s.find_entity(p.owner)) add(p.id, "DANGLING_PATH_OWNER", "owner " + p.owner + " does not exist");
    if (p.waypoints.size() < 2) add(p.id, "PATH_TOO_SHORT", "a path needs at least two waypoints");
    for (std::size_t i = 0; i < p.waypoints.size(); ++i) {
      const GridCell w = p.waypoints[i];
      if (!m.in_bounds(w.row, w.col))
        add(p.id, "WAYPOINT_OUT_OF_BOUNDS", "waypoint " + std::to_string(i) + " " + cell_text(w) + " outside the grid");
      if (i > 0 && w == p.waypoints[i - 1])
        add(p.id, "DUPLICATE_WAYPOINT", "waypoint " + std::to_string(i) + " repeats its predecessor");
    }
  }

  for (const auto& b : s.boxes) {
    if (b.row0 > b.row1 || b.col0 > b.col1) {
      add(b.id, "BOX_NOT_NORMALIZED", "box corners must satisfy row0<=row1 and col0<=col1");
    } else if (!m.in_bounds(b.row0, b.col0) || !m.in_bounds(b.row1, b.col1)) {
      add(b.id, "BOX_OUT_OF_BOUNDS", "box extends outside the grid");
    }
    if (b.signal.empty()) add(b.id, "BOX_MISSING_SIGNAL", "box needs a signal id");
    else if (!plausible_iri(b.signal)) add(b.id, "INVALID_IRI", "signal id is not an absolute IRI");
  }
  return out;
}

std::string describe(const std::vector<Violation>& violations) {
  std::string out;
  for (const auto& v : violations) out += v.code + " " + v.element + ": " + v.message + "\n";
  return out;
}

}  // namespace streetlab::scenario
