#include "streetlab/scenario/templates.hpp"

namespace streetlab::scenario {

namespace {

constexpr Cell kS{CellType::Sidewalk, std::nullopt};
constexpr Cell kC{CellType::Crossing, std::nullopt};

Cell lane(int deg) { return {CellType::Road, deg}; }

MapTemplate blank(TemplateName name, int rows, int cols) {
  MapTemplate t;
  t.id = std::string(to_string(name));
  t.name = name;
  t.rows = rows;
  t.cols = cols;
  t.cells.assign(static_cast<std::size_t>(rows * cols), Cell{});
  return t;
}

void put(MapTemplate& t, int row, int col, Cell c) { t.cells[static_cast<std::size_t>(row * t.cols + col)] = c; }

MapTemplate straight_road() {
  MapTemplate t = blank(TemplateName::StraightRoad, 8, 16);
  for (int c = 0; c < t.cols; ++c) {
    for (int r : {1, 2, 5, 6}) put(t, r, c, kS);
    put(t, 3, c, lane(180));
    put(t, 4, c, lane(0));
  }
  return t;
}

// Horizontal road in rows 7-8 across the full width, sidewalks in rows 5-6
// and 9-10.
void horizontal_corridor(MapTemplate& t) {
  for (int c = 0; c < t.cols; ++c) {
    put(t, 5, c, kS);
    put(t, 6, c, kS);
    put(t, 7, c, lane(180));
    put(t, 8, c, lane(0));
    put(t, 9, c, kS);
    put(t, 10, c, kS);
  }
}

// Vertical road in cols 7-8 over the given rows, sidewalks in cols 5-6 and 9-10.
void vertical_corridor(MapTemplate& t, int from_row, int to_row) {
  for (int r = from_row; r <= to_row; ++r) {
    put(t, r, 5, kS);
    put(t, r, 6, kS);
    put(t, r, 7, lane(90));
    put(t, r, 8, lane(270));
    put(t, r, 9, kS);
    put(t, r, 10, kS);
  }
}

MapTemplate t_junction() {
  MapTemplate t = blank(TemplateName::TJunction, 16, 16);
  horizontal_corridor(t);
  vertical_corridor(t, 11, 15);
  for (int r : {9, 10})
    for (int c : {7, 8}) put(t, r, c, kC);
  return t;
}

MapTemplate intersection() {
  MapTemplate t = blank(TemplateName::Intersection, 16, 16);
  vertical_corridor(t, 0, 4);
  vertical_corridor(t, 11, 15);
  horizontal_corridor(t);
  for (int r : {5, 6, 9, 10})
    for (int c : {7, 8}) put(t, r, c, kC);
  for (int r : {7, 8})
    for (int c : {5, 6, 9, 10}) put(t, r, c, kC);
  return t;
}

}  // namespace

MapTemplate make_template(TemplateName name) {
  switch (name) {
    case TemplateName::StraightRoad: return straight_road();
    case TemplateName::TJunction: return t_junction();
    case TemplateName::Intersection: return intersection();
  }
  return straight_road();
}

std::vector<MapTemplate> all_templates() {
  return {straight_road(), t_junction(), intersection()};
}

Scenario empty_scenario(std::string graph, TemplateName name, double cell_size) {
  Scenario s;
  s.graph = std::move(graph);
  s.map = make_template(name);
  s.cell_size = cell_size;
  return s;
}

}  // namespace streetlab::scenario
