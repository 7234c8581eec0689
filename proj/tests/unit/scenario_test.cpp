#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <numbers>

#include "streetlab/rdf/trig.hpp"
#include "streetlab/scenario/demo.hpp"
#include "streetlab/scenario/quads.hpp"
#include "streetlab/scenario/repository.hpp"
#include "streetlab/scenario/templates.hpp"
#include "streetlab/scenario/validate.hpp"
#include "streetlab/scenario/wire.hpp"
#include "support/scenario_generators.hpp"

using namespace streetlab;
using namespace streetlab::scenario;

namespace {

std::vector<std::string> codes(const Scenario& s) {
  std::vector<std::string> out;
  for (const auto& v : validate(s)) out.push_back(v.code);
  return out;
}

Scenario one_pedestrian() {
  Scenario s = empty_scenario("http://ex.org/s1", TemplateName::StraightRoad);
  Entity p;
  p.id = "http://ex.org/s1#ped";
  p.kind = EntityKind::Pedestrian;
  p.spawn = {2, 3};
  p.heading = std::numbers::pi / 2;
  p.initial_speed = 1.4;
  p.behavior = "http://ex.org/bt/walk";
  p.path = "http://ex.org/s1#ped-path";
  p.label = "Alice";
  s.entities.push_back(p);
  s.paths.push_back({*p.path, {{2, 3}, {3, 3}, {5, 4}}, p.id});
  return s;
}

rdf::Term sl(std::string_view local) { return vocab::term(local); }

}  // namespace

TEST_CASE("templates have the documented sizes and lane layout") {
  const auto straight = make_template(TemplateName::StraightRoad);
  CHECK(straight.rows == 8);
  CHECK(straight.cols == 16);
  CHECK(straight.at(3, 0).lane_degrees == 180);
  CHECK(straight.at(4, 15).lane_degrees == 0);
  CHECK(straight.at(0, 0).type == CellType::NoGo);
  CHECK(straight.at(2, 5).type == CellType::Sidewalk);
  for (const auto& t : all_templates()) {
    CHECK(t.cells.size() == static_cast<std::size_t>(t.rows * t.cols));
    CHECK(validate(empty_scenario("http://ex.org/t", t.name)).empty());
    for (const auto& c : t.cells) CHECK((c.type == CellType::Road) == c.lane_degrees.has_value());
  }
  const auto tj = make_template(TemplateName::TJunction);
  CHECK(tj.rows == 16);
  CHECK(tj.at(12, 7).lane_degrees == 90);
  CHECK(tj.at(12, 8).lane_degrees == 270);
  CHECK(tj.at(9, 7).type == CellType::Crossing);
  CHECK(tj.at(2, 7).type == CellType::NoGo);
  const auto x = make_template(TemplateName::Intersection);
  CHECK(x.at(2, 7).lane_degrees == 90);
  CHECK(x.at(7, 5).type == CellType::Crossing);
}

TEST_CASE("cell codes") {
  CHECK(cell_code(parse_cell_code("R270")) == "R270");
  CHECK(parse_cell_code("S").type == CellType::Sidewalk);
  CHECK_THROWS_AS(parse_cell_code("R360"), std::invalid_argument);
  CHECK_THROWS_AS(parse_cell_code("R09"), std::invalid_argument);
  CHECK_THROWS_AS(parse_cell_code("Q"), std::invalid_argument);
}

TEST_CASE("validate examples") {
  SUBCASE("vehicle on sidewalk") {
    Scenario s = empty_scenario("http://ex.org/v", TemplateName::StraightRoad);
    s.entities.push_back({"http://ex.org/v#car", EntityKind::Vehicle, {1, 4}, 0.0, 5.0, "http://ex.org/bt", {}, "car"});
    CHECK(codes(s) == std::vector<std::string>{"SPAWN_KIND_MISMATCH"});
  }
  SUBCASE("waypoint outside the grid") {
    Scenario s = one_pedestrian();
    s.paths[0].waypoints.push_back({8, 0});
    CHECK(codes(s) == std::vector<std::string>{"WAYPOINT_OUT_OF_BOUNDS"});
  }
  SUBCASE("demo scenarios are valid") {
    for (const auto& s : demo_scenarios()) {
      INFO(s.graph);
      CHECK(describe(validate(s)).empty());
    }
  }
  SUBCASE("each rule fires on its own") {
    Scenario s = one_pedestrian();
    s.entities[0].initial_speed = -1;
    CHECK(codes(s) == std::vector<std::string>{"NEGATIVE_SPEED"});
    s.entities[0].initial_speed = 3.0;
    CHECK(codes(s) == std::vector<std::string>{"SPEED_EXCEEDS_LIMIT"});
    s = one_pedestrian();
    s.entities[0].behavior.reset();
    CHECK(codes(s) == std::vector<std::string>{"MISSING_BEHAVIOR"});
    s = one_pedestrian();
    s.paths[0].waypoints = {{2, 3}};
    CHECK(codes(s) == std::vector<std::string>{"PATH_TOO_SHORT"});
    s.paths[0].waypoints = {{2, 3}, {2, 3}};
    CHECK(codes(s) == std::vector<std::string>{"DUPLICATE_WAYPOINT"});
    s = one_pedestrian();
    s.paths[0].owner = "http://ex.org/nobody";
    CHECK(codes(s) == std::vector<std::string>{"PATH_OWNER_MISMATCH", "DANGLING_PATH_OWNER"});
    s = one_pedestrian();
    s.entities[0].path = "http://ex.org/none";
    CHECK(codes(s) == std::vector<std::string>{"DANGLING_PATH_REF"});
    s = one_pedestrian();
    s.entities[0].spawn = {-1, 0};
    CHECK(codes(s) == std::vector<std::string>{"SPAWN_OUT_OF_BOUNDS"});
    s = one_pedestrian();
    s.boxes.push_back({"http://ex.org/b", 3, 2, 1, 4, "http://ex.org/sig", {}});
    CHECK(codes(s) == std::vector<std::string>{"BOX_NOT_NORMALIZED"});
    s.boxes[0] = {"http://ex.org/b", 1, 2, 9, 4, "http://ex.org/sig", {}};
    CHECK(codes(s) == std::vector<std::string>{"BOX_OUT_OF_BOUNDS"});
    s.boxes[0] = {"http://ex.org/s1#ped", 1, 2, 2, 4, "http://ex.org/sig", {}};
    CHECK(codes(s) == std::vector<std::string>{"DUPLICATE_ID"});
    s = one_pedestrian();
    s.cell_size = 0;
    CHECK(codes(s) == std::vector<std::string>{"CELL_SIZE_INVALID"});
    s = one_pedestrian();
    s.map.cells.pop_back();
    CHECK(codes(s) == std::vector<std::string>{"GRID_INCOMPLETE"});
    s = one_pedestrian();
    s.map.cells[0] = {CellType::Sidewalk, 90};
    CHECK(codes(s) == std::vector<std::string>{"LANE_DIRECTION_INVALID"});
    s = one_pedestrian();
    s.entities[0].id = "not an iri";
    s.paths[0].owner = "not an iri";
    CHECK(codes(s) == std::vector<std::string>{"INVALID_IRI"});
  }
  SUBCASE("wrong-way vehicle") {
    Scenario s = empty_scenario("http://ex.org/v", TemplateName::StraightRoad);
    s.entities.push_back({"http://ex.org/v#car", EntityKind::Vehicle, {4, 4}, std::numbers::pi, 5.0,
                          "http://ex.org/bt", {}, "car"});
    CHECK(codes(s) == std::vector<std::string>{"LANE_DIRECTION_MISMATCH"});
  }
}

TEST_CASE("template-only scenario encodes grid dims and cells") {
  const Scenario s = empty_scenario("http://ex.org/empty", TemplateName::StraightRoad);
  const rdf::Dataset d = to_dataset(s);
  const rdf::Term g = rdf::Term::iri(s.graph);
  const rdf::Term tpl = rdf::Term::iri("http://ex.org/empty#template");
  CHECK(d.contains({tpl, sl("rows"), rdf::Term::integer(8), g}));
  CHECK(d.contains({tpl, sl("cols"), rdf::Term::integer(16), g}));
  const rdf::Term row3 = rdf::Term::iri("http://ex.org/empty#row3");
  CHECK(d.contains({row3, sl("cells"),
                    rdf::Term::literal("R180 R180 R180 R180 R180 R180 R180 R180 R180 R180 R180 R180 R180 R180 R180 R180"),
                    g}));
  CHECK(from_quads(d, s.graph) == s);
  CHECK(d.graph_names().size() == 1);
}

TEST_CASE("pedestrian with a three-waypoint path round-trips field by field") {
  const Scenario s = one_pedestrian();
  const rdf::Dataset d = to_dataset(s);
  const rdf::Term g = rdf::Term::iri(s.graph);
  const rdf::Term ped = rdf::Term::iri("http://ex.org/s1#ped");
  CHECK(d.contains({ped, rdf::Term::iri(std::string(rdf::rdfns::kType)), sl("Pedestrian"), g}));
  CHECK(d.contains({ped, sl("spawnRow"), rdf::Term::integer(2), g}));
  CHECK(d.contains({ped, sl("initialSpeed"), rdf::Term::number(1.4), g}));
  CHECK(d.contains({ped, sl("behavior"), rdf::Term::iri("http://ex.org/bt/walk"), g}));
  const rdf::Term wp2 = rdf::Term::iri("http://ex.org/s1#ped-path/wp2");
  CHECK(d.contains({wp2, sl("index"), rdf::Term::integer(2), g}));
  CHECK(d.contains({wp2, sl("row"), rdf::Term::integer(5), g}));
  const Scenario back = from_quads(d, s.graph);
  REQUIRE(back.entities.size() == 1);
  CHECK(back.entities[0] == s.entities[0]);
  CHECK(back.paths == s.paths);
  CHECK(back.map == s.map);
  CHECK(back == s);
}

TEST_CASE("two scenarios land in two named graphs") {
  rdf::Dataset d = to_dataset(one_pedestrian());
  d.merge(to_dataset(empty_scenario("http://ex.org/other", TemplateName::Intersection)));
  CHECK(d.graph_names().size() == 2);
  CHECK(scenario_graphs(d) == std::vector<std::string>{"http://ex.org/other", "http://ex.org/s1"});
  CHECK(from_quads(d, "http://ex.org/s1") == one_pedestrian());
}

TEST_CASE("decode errors") {
  const Scenario s = one_pedestrian();
  const rdf::Term g = rdf::Term::iri(s.graph);
  const rdf::Term ped = rdf::Term::iri("http://ex.org/s1#ped");
  SUBCASE("missing spawn cell names the entity") {
    rdf::Dataset d = to_dataset(s);
    d.erase({ped, sl("spawnRow"), rdf::Term::integer(2), g});
    try {
      from_quads(d, s.graph);
      FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
      const std::string what = e.what();
      CHECK(what.find("<http://ex.org/s1#ped>") != std::string::npos);
      CHECK(what.find("spawnRow") != std::string::npos);
    }
  }
  SUBCASE("dangling path reference") {
    rdf::Dataset d = to_dataset(s);
    d.erase({g, sl("hasPath"), rdf::Term::iri("http://ex.org/s1#ped-path"), g});
    CHECK_THROWS_AS(from_quads(d, s.graph), DecodeError);
  }
  SUBCASE("unknown graph") { CHECK_THROWS_AS(from_quads(to_dataset(s), "http://ex.org/none"), DecodeError); }
  SUBCASE("extraneous triples are ignored") {
    rdf::Dataset d = to_dataset(s);
    d.insert({ped, rdf::Term::iri("http://ex.org/note"), rdf::Term::literal("hello"), g});
    d.insert({rdf::Term::iri("http://ex.org/x"), rdf::Term::iri("http://ex.org/y"), rdf::Term::integer(1), g});
    CHECK(from_quads(d, s.graph) == s);
  }
}

TEST_CASE("to_quads refuses invalid scenarios") {
  Scenario s = one_pedestrian();
  s.entities[0].initial_speed = -2;
  CHECK_THROWS_AS(to_quads(s), std::invalid_argument);
}

TEST_CASE("wire export examples") {
  const Scenario empty = empty_scenario("http://ex.org/e", TemplateName::TJunction);
  const auto doc = export_wire(empty);
  CHECK(doc["entities"] == nlohmann::json::array());
  CHECK(doc["paths"] == nlohmann::json::array());
  CHECK(doc["boxes"] == nlohmann::json::array());
  CHECK(doc["template"]["cells"].size() == 256);
  CHECK(doc["template"]["name"] == "t-junction");
  for (const auto& s : demo_scenarios()) {
    const std::string text = export_wire_text(s);
    const Scenario back = import_wire_text(text);
    CHECK(back == s);
    CHECK(export_wire_text(back) == text);
  }
  const std::string text = export_wire_text(one_pedestrian());
  CHECK(text.find("\"cellSize\"") < text.find("\"entities\""));
  CHECK(text.find("\"initialSpeed\": 1.4") != std::string::npos);
}

TEST_CASE("wire import is strict") {
  auto doc = export_wire(one_pedestrian());
  SUBCASE("unknown top-level key") {
    doc["extra"] = 1;
    CHECK_THROWS_AS(import_wire(doc), DecodeError);
  }
  SUBCASE("unknown entity key") {
    doc["entities"][0]["colour"] = "red";
    CHECK_THROWS_WITH_AS(import_wire(doc), "/entities/0: unknown key 'colour'", DecodeError);
  }
  SUBCASE("missing key") {
    doc["paths"][0].erase("owner");
    CHECK_THROWS_AS(import_wire(doc), DecodeError);
  }
  SUBCASE("bad types") {
    doc["template"]["rows"] = "8";
    CHECK_THROWS_AS(import_wire(doc), DecodeError);
  }
  SUBCASE("bad cell code") {
    doc["template"]["cells"][3] = "Z";
    CHECK_THROWS_AS(import_wire(doc), DecodeError);
  }
  SUBCASE("malformed text") { CHECK_THROWS_AS(import_wire_text("{"), DecodeError); }
}

TEST_CASE("generated scenarios round-trip through quads, TriG and wire") {
  testing::ScenarioGenerator gen(5);
  for (int i = 0; i < 100; ++i) {
    const Scenario s = gen.scenario();
    INFO(export_wire_text(s));
    REQUIRE(validate(s).empty());
    CHECK(from_quads(to_dataset(s), s.graph) == s);
    CHECK(from_quads(rdf::parse_trig(rdf::serialize_trig(to_dataset(s))), s.graph) == s);
    CHECK(import_wire(export_wire(s)) == s);
    CHECK(export_wire_text(import_wire_text(export_wire_text(s))) == export_wire_text(s));
  }
}

TEST_CASE("url encoding") {
  CHECK(url_encode("https://ex.org/a b#c") == "https%3A%2F%2Fex.org%2Fa%20b%23c");
  CHECK(url_decode(url_encode("https://ex.org/\xC3\xA9?x=1")) == "https://ex.org/\xC3\xA9?x=1");
  CHECK_THROWS_AS(url_decode("%4"), std::invalid_argument);
  CHECK_THROWS_AS(url_decode("%zz"), std::invalid_argument);
}

TEST_CASE("repository stores one file per graph") {
  const auto dir = std::filesystem::temp_directory_path() / "streetlab_repo_test";
  std::filesystem::remove_all(dir);
  ScenarioRepository repo(dir);
  CHECK(repo.list().empty());
  for (const auto& s : demo_scenarios()) repo.save(s);
  CHECK(repo.list().size() == 4);
  CHECK(std::filesystem::exists(dir / "https%3A%2F%2Fstreetlab.dev%2Fscenarios%2Fcrossing-clear.trig"));
  const auto loaded = repo.load(demo::kCrossingDanger);
  REQUIRE(loaded);
  CHECK(*loaded == crossing_scenario(true));
  CHECK_FALSE(repo.load("http://ex.org/missing"));
  CHECK(repo.remove(demo::kTJunction));
  CHECK_FALSE(repo.remove(demo::kTJunction));
  CHECK(repo.list().size() == 3);
  const auto all = rdf::parse_trig(repo.export_all());
  CHECK(scenario_graphs(all).size() == 3);

  repo.save_behavior("mine", "@prefix ex: <http://ex.org/> . ex:g { ex:a ex:b [ ex:c 1 ] . }");
  repo.save_behavior("other", "@prefix ex: <http://ex.org/> . ex:g { ex:d ex:b [ ex:c 1 ] . }");
  CHECK(repo.load_behaviors().size() == 4);
  std::filesystem::remove_all(dir);
}
