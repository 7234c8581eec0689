#include "streetlab/scenario/demo.hpp"

#include <numbers>

#include "streetlab/behavior/library.hpp"
#include "streetlab/scenario/quads.hpp"
#include "streetlab/scenario/templates.hpp"

namespace streetlab::scenario {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCell = 3.0;

std::string member(const Scenario& s, std::string_view local) { return child_iri(s.graph, local); }

Entity agent(const Scenario& s, std::string_view local, EntityKind kind, GridCell spawn, double heading,
             double speed, std::string_view tree, std::string label) {
  Entity e;
  e.id = member(s, local);
  e.kind = kind;
  e.spawn = spawn;
  e.heading = heading;
  e.initial_speed = speed;
  e.behavior = std::string(tree);
  e.path = member(s, std::string(local) + "-path");
  e.label = std::move(label);
  return e;
}

PathSpec path_for(const Entity& e, std::vector<GridCell> waypoints) {
  return {*e.path, std::move(waypoints), e.id};
}

}  // namespace

Scenario crossing_scenario(bool danger) {
  Scenario s = empty_scenario(std::string(danger ? demo::kCrossingDanger : demo::kCrossingClear),
                              TemplateName::StraightRoad, kCell);
  const Entity ped = agent(s, "pedestrian", EntityKind::Pedestrian, {2, 1}, kPi / 2, 1.4,
                           behavior::library::kCrossing, "pedestrian");
  const int vcol = danger ? 6 : 14;
  const Entity car = agent(s, "vehicle", EntityKind::Vehicle, {3, vcol}, kPi, danger ? 12.0 : 2.0,
                           behavior::library::kDrive, "vehicle");
  s.entities = {ped, car};
  s.paths = {path_for(ped, {{2, 1}, {3, 1}, {4, 1}, {5, 1}}), path_for(car, {{3, vcol}, {3, 0}})};
  s.boxes = {DecisionBox{member(s, "road-zone"), 3, 0, 4, 2, member(s, "entered-road"), {EntityKind::Pedestrian}}};
  s.normalize();
  return s;
}

Scenario t_junction_demo() {
  Scenario s = empty_scenario(std::string(demo::kTJunction), TemplateName::TJunction, kCell);
  const Entity car = agent(s, "vehicle", EntityKind::Vehicle, {8, 0}, 0.0, 8.0, behavior::library::kDrive,
                           "turning vehicle");
  const Entity ped = agent(s, "pedestrian", EntityKind::Pedestrian, {10, 15}, kPi, 1.3,
                           behavior::library::kStroll, "pedestrian");
  Entity cone;
  cone.id = member(s, "cone");
  cone.kind = EntityKind::StaticProp;
  cone.spawn = {5, 2};
  cone.label = "traffic cone";
  s.entities = {car, ped, cone};
  s.paths = {path_for(car, {{8, 0}, {8, 5}, {8, 7}, {10, 7}, {15, 7}}),
             path_for(ped, {{10, 15}, {10, 9}, {10, 8}, {10, 7}, {10, 6}, {10, 0}})};
  s.boxes = {DecisionBox{member(s, "mouth"), 9, 7, 10, 8, member(s, "mouth-occupied"),
                         {EntityKind::Pedestrian, EntityKind::Vehicle}}};
  s.normalize();
  return s;
}

Scenario intersection_demo() {
  Scenario s = empty_scenario(std::string(demo::kIntersection), TemplateName::Intersection, kCell);
  const Entity west = agent(s, "westbound", EntityKind::Vehicle, {7, 15}, kPi, 10.0, behavior::library::kDrive,
                            "westbound vehicle");
  const Entity south = agent(s, "southbound", EntityKind::Vehicle, {0, 7}, kPi / 2, 4.0,
                             behavior::library::kDrive, "southbound vehicle");
  const Entity bike = agent(s, "cyclist", EntityKind::Cyclist, {9, 0}, 0.0, 4.0, behavior::library::kStroll,
                            "cyclist");
  Entity bench;
  bench.id = member(s, "bench");
  bench.kind = EntityKind::StaticProp;
  bench.spawn = {2, 5};
  bench.label = "bench";
  s.entities = {west, south, bike, bench};
  s.paths = {path_for(west, {{7, 15}, {7, 0}}), path_for(south, {{0, 7}, {15, 7}}),
             path_for(bike, {{9, 0}, {9, 6}, {9, 9}, {9, 15}})};
  s.boxes = {DecisionBox{member(s, "junction"), 7, 7, 8, 8, member(s, "junction-occupied"),
                         {EntityKind::Vehicle, EntityKind::Cyclist}}};
  s.normalize();
  return s;
}

std::vector<Scenario> demo_scenarios() {
  return {crossing_scenario(false), crossing_scenario(true), t_junction_demo(), intersection_demo()};
}

}  // namespace streetlab::scenario
