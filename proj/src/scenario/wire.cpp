#include "streetlab/scenario/wire.hpp"

#include <set>

namespace streetlab::scenario {

using nlohmann::json;

namespace {

json cell_json(GridCell c) { return json{{"row", c.row}, {"col", c.col}}; }

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw DecodeError(where + ": " + what);
}

void expect_keys(const json& j, const std::string& where, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) fail(where, "expected an object");
  std::set<std::string> known;
  for (const char* k : required) {
    known.insert(k);
    if (!j.contains(k)) fail(where, std::string("missing key '") + k + "'");
  }
  for (const char* k : optional) known.insert(k);
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) fail(where, "unknown key '" + k + "'");
}

int get_int(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(where + "/" + key, "expected an integer");
  const auto n = v.get<std::int64_t>();
  if (n < -1000000 || n > 1000000) fail(where + "/" + key, "integer out of range");
  return static_cast<int>(n);
}

double get_number(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number()) fail(where + "/" + key, "expected a number");
  return v.get<double>();
}

std::string get_string(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_string()) fail(where + "/" + key, "expected a string");
  return v.get<std::string>();
}

const json& get_array(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_array()) fail(where + "/" + key, "expected an array");
  return v;
}

GridCell get_cell(const json& j, const std::string& where) {
  expect_keys(j, where, {"row", "col"});
  return {get_int(j, "row", where), get_int(j, "col", where)};
}

}  // namespace

json export_wire(const Scenario& in) {
  Scenario s = in;
  s.normalize();
  json cells = json::array();
  for (const auto& c : s.map.cells) cells.push_back(cell_code(c));
  json doc{{"graph", s.graph},
           {"cellSize", s.cell_size},
           {"template",
            {{"id", s.map.id},
             {"name", std::string(to_string(s.map.name))},
             {"rows", s.map.rows},
             {"cols", s.map.cols},
             {"cells", std::move(cells)}}},
           {"entities", json::array()},
           {"paths", json::array()},
           {"boxes", json::array()}};
  for (const auto& e : s.entities) {
    json j{{"id", e.id},
           {"kind", std::string(to_string(e.kind))},
           {"spawn", cell_json(e.spawn)},
           {"heading", e.heading},
           {"initialSpeed", e.initial_speed},
           {"label", e.label}};
    if (e.behavior) j["behavior"] = *e.behavior;
    if (e.path) j["path"] = *e.path;
    doc["entities"].push_back(std::move(j));
  }
  for (const auto& p : s.paths) {
    json wps = json::array();
    for (auto w : p.waypoints) wps.push_back(cell_json(w));
    doc["paths"].push_back({{"id", p.id}, {"owner", p.owner}, {"waypoints", std::move(wps)}});
  }
  for (const auto& b : s.boxes) {
    json watches = json::array();
    for (auto k : b.watches) watches.push_back(std::string(to_string(k)));
    doc["boxes"].push_back({{"id", b.id},
                            {"row0", b.row0},
                            {"col0", b.col0},
                            {"row1", b.row1},
                            {"col1", b.col1},
                            {"signal", b.signal},
                            {"watches", std::move(watches)}});
  }
  return doc;
}

std::string export_wire_text(const Scenario& scenario) { return export_wire(scenario).dump(2) + "\n"; }

Scenario import_wire(const json& doc) {
  const std::string root = "";
  expect_keys(doc, "/", {"graph", "cellSize", "template", "entities", "paths", "boxes"});
  Scenario s;
  s.graph = get_string(doc, "graph", root);
  s.cell_size = get_number(doc, "cellSize", root);

  const json& t = doc.at("template");
  const std::string tw = "/template";
  expect_keys(t, tw, {"id", "name", "rows", "cols", "cells"});
  s.map.id = get_string(t, "id", tw);
  const auto name = parse_template_name(get_string(t, "name", tw));
  if (!name) fail(tw + "/name", "unknown template name");
  s.map.name = *name;
  s.map.rows = get_int(t, "rows", tw);
  s.map.cols = get_int(t, "cols", tw);
  const json& cells = get_array(t, "cells", tw);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string where = tw + "/cells/" + std::to_string(i);
    if (!cells[i].is_string()) fail(where, "expected a cell code string");
    try {
      s.map.cells.push_back(parse_cell_code(cells[i].get<std::string>()));
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  }

  const json& ents = get_array(doc, "entities", root);
  for (std::size_t i = 0; i < ents.size(); ++i) {
    const json& j = ents[i];
    const std::string w = "/entities/" + std::to_string(i);
    expect_keys(j, w, {"id", "kind", "spawn", "heading", "initialSpeed", "label"}, {"behavior", "path"});
    Entity e;
    e.id = get_string(j, "id", w);
    const auto kind = parse_entity_kind(get_string(j, "kind", w));
    if (!kind) fail(w + "/kind", "unknown entity kind");
    e.kind = *kind;
    e.spawn = get_cell(j.at("spawn"), w + "/spawn");
    e.heading = get_number(j, "heading", w);
    e.initial_speed = get_number(j, "initialSpeed", w);
    e.label = get_string(j, "label", w);
    if (j.contains("behavior")) e.behavior = get_string(j, "behavior", w);
    if (j.contains("path")) e.path = get_string(j, "path", w);
    s.entities.push_back(std::move(e));
  }

  const json& paths = get_array(doc, "paths", root);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const json& j = paths[i];
    const std::string w = "/paths/" + std::to_string(i);
    expect_keys(j, w, {"id", "owner", "waypoints"});
    PathSpec p;
    p.id = get_string(j, "id", w);
    p.owner = get_string(j, "owner", w);
    const json& wps = get_array(j, "waypoints", w);
    for (std::size_t k = 0; k < wps.size(); ++k)
      p.waypoints.push_back(get_cell(wps[k], w + "/waypoints/" + std::to_string(k)));
    s.paths.push_back(std::move(p));
  }

  const json& boxes = get_array(doc, "boxes", root);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const json& j = boxes[i];
    const std::string w = "/boxes/" + std::to_string(i);
    expect_keys(j, w, {"id", "row0", "col0", "row1", "col1", "signal", "watches"});
    DecisionBox b;
    b.id = get_string(j, "id", w);
    b.row0 = get_int(j, "row0", w);
    b.col0 = get_int(j, "col0", w);
    b.row1 = get_int(j, "row1", w);
    b.col1 = get_int(j, "col1", w);
    b.signal = get_string(j, "signal", w);
    const json& watches = get_array(j, "watches", w);
    for (std::size_t k = 0; k < watches.size(); ++k) {
      const auto kind = watches[k].is_string() ? parse_entity_kind(watches[k].get<std::string>()) : std::nullopt;
      if (!kind) fail(w + "/watches/" + std::to_string(k), "unknown entity kind");
      b.watches.insert(*kind);
    }
    s.boxes.push_back(std::move(b));
  }
  s.normalize();
  return s;
}

Scenario import_wire_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DecodeError(std::string("malformed JSON: ") + e.what());
  }
  return import_wire(doc);
}

}  // namespace streetlab::scenario
