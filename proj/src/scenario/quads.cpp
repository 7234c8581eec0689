#include "streetlab/scenario/quads.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include "streetlab/scenario/validate.hpp"

namespace streetlab::scenario {

using rdf::Quad;
using rdf::Term;

namespace vocab {
std::string iri(std::string_view local) { return std::string(kNs) + std::string(local); }
Term term(std::string_view local) { return Term::iri(iri(local)); }
}  // namespace vocab

std::string child_iri(std::string_view base, std::string_view suffix) {
  std::string out(base);
  out += base.find('#') == std::string_view::npos ? '#' : '/';
  out += suffix;
  return out;
}

namespace {

const Term& rdf_type() {
  static const Term t = Term::iri(std::string(rdf::rdfns::kType));
  return t;
}

std::string_view kind_class(EntityKind k) {
  switch (k) {
    case EntityKind::Pedestrian: return "Pedestrian";
    case EntityKind::Vehicle: return "Vehicle";
    case EntityKind::Cyclist: return "Cyclist";
    case EntityKind::StaticProp: return "StaticProp";
  }
  return "Pedestrian";
}

std::string row_codes(const MapTemplate& m, int row) {
  std::string out;
  for (int c = 0; c < m.cols; ++c) {
    if (c) out += ' ';
    out += cell_code(m.at(row, c));
  }
  return out;
}

class Emitter {
 public:
  explicit Emitter(const std::string& graph) : g_(Term::iri(graph)) {}
  void add(const Term& s, std::string_view p, Term o) { out_.push_back({s, vocab::term(p), std::move(o), g_}); }
  void type(const Term& s, std::string_view cls) { out_.push_back({s, rdf_type(), vocab::term(cls), g_}); }
  std::vector<Quad> take() { return std::move(out_); }

 private:
  Term g_;
  std::vector<Quad> out_;
};

// Read access to one graph, subject by subject.
class GraphView {
 public:
  GraphView(const rdf::Dataset& d, const Term& g) {
    for (const auto& q : d.graph(g)) props_[q.subject].emplace(q.predicate, q.object);
  }

  std::vector<Term> values(const Term& s, std::string_view p) const {
    std::vector<Term> out;
    auto it = props_.find(s);
    if (it == props_.end()) return out;
    const Term pred = vocab::term(p);
    auto [lo, hi] = it->second.equal_range(pred);
    for (auto i = lo; i != hi; ++i) out.push_back(i->second);
    return out;
  }

  bool has_type(const Term& s, std::string_view cls) const {
    auto it = props_.find(s);
    if (it == props_.end()) return false;
    auto [lo, hi] = it->second.equal_range(rdf_type());
    for (auto i = lo; i != hi; ++i)
      if (i->second == vocab::term(cls)) return true;
    return false;
  }

  std::optional<Term> optional(const Term& s, std::string_view p) const {
    auto v = values(s, p);
    if (v.empty()) return std::nullopt;
    if (v.size() > 1) fail(s, p, "has more than one value");
    return v.front();
  }

  Term required(const Term& s, std::string_view p) const {
    auto v = optional(s, p);
    if (!v) fail(s, p, "is missing");
    return *v;
  }

  std::int64_t integer(const Term& s, std::string_view p) const { return as_integer(s, p, required(s, p)); }

  double number(const Term& s, std::string_view p) const {
    auto v = rdf::numeric_value(required(s, p));
    if (!v) fail(s, p, "is not numeric");
    return *v;
  }

  std::string iri(const Term& s, std::string_view p) const { return as_iri(s, p, required(s, p)); }

  std::string text(const Term& s, std::string_view p) const {
    const Term t = required(s, p);
    if (!t.is_literal()) fail(s, p, "is not a literal");
    return t.value;
  }

  static std::int64_t as_integer(const Term& s, std::string_view p, const Term& t) {
    std::int64_t out = 0;
    const auto& v = t.value;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (!t.is_literal() || t.datatype != rdf::xsd::kInteger || ec != std::errc{} || ptr != v.data() + v.size())
      fail(s, p, "is not an integer");
    return out;
  }

  static std::string as_iri(const Term& s, std::string_view p, const Term& t) {
    if (!t.is_iri()) fail(s, p, "is not an IRI");
    return t.value;
  }

  [[noreturn]] static void fail(const Term& s, std::string_view p, const std::string& what) {
    throw DecodeError(rdf::to_string(s) + ": property sl:" + std::string(p) + " " + what);
  }

 private:
  std::map<Term, std::multimap<Term, Term>> props_;
};

int as_int(std::int64_t v, const Term& s, std::string_view p) {
  if (v < -1000000 || v > 1000000) GraphView::fail(s, p, "is out of range");
  return static_cast<int>(v);
}

}  // namespace

std::vector<Quad> to_quads(const Scenario& in) {
  const auto violations = validate(in);
  if (!violations.empty()) throw std::invalid_argument("invalid scenario:\n" + describe(violations));

  Scenario s = in;
  s.normalize();
  Emitter e(s.graph);
  const Term root = Term::iri(s.graph);
  e.type(root, "Scenario");
  e.add(root, "cellSize", Term::number(s.cell_size));

  const Term tpl = Term::iri(child_iri(s.graph, "template"));
  e.add(root, "template", tpl);
  e.type(tpl, "MapTemplate");
  e.add(tpl, "templateId", Term::literal(s.map.id));
  e.add(tpl, "templateName", Term::literal(std::string(to_string(s.map.name))));
  e.add(tpl, "rows", Term::integer(s.map.rows));
  e.add(tpl, "cols", Term::integer(s.map.cols));
  for (int r = 0; r < s.map.rows; ++r) {
    const Term row = Term::iri(child_iri(s.graph, "row" + std::to_string(r)));
    e.add(tpl, "hasRow", row);
    e.type(row, "GridRow");
    e.add(row, "rowIndex", Term::integer(r));
    e.add(row, "cells", Term::literal(row_codes(s.map, r)));
  }

  for (const auto& ent : s.entities) {
    const Term n = Term::iri(ent.id);
    e.add(root, "hasEntity", n);
    e.type(n, kind_class(ent.kind));
    e.add(n, "spawnRow", Term::integer(ent.spawn.row));
    e.add(n, "spawnCol", Term::integer(ent.spawn.col));
    e.add(n, "heading", Term::number(ent.heading));
    e.add(n, "initialSpeed", Term::number(ent.initial_speed));
    if (ent.behavior) e.add(n, "behavior", Term::iri(*ent.behavior));
    if (ent.path) e.add(n, "path", Term::iri(*ent.path));
    e.add(n, "label", Term::literal(ent.label));
  }

  for (const auto& p : s.paths) {
    const Term n = Term::iri(p.id);
    e.add(root, "hasPath", n);
    e.type(n, "Path");
    e.add(n, "owner", Term::iri(p.owner));
    for (std::size_t i = 0; i < p.waypoints.size(); ++i) {
      const Term w = Term::iri(child_iri(p.id, "wp" + std::to_string(i)));
      e.add(n, "waypoint", w);
      e.type(w, "Waypoint");
      e.add(w, "index", Term::integer(static_cast<std::int64_t>(i)));
      e.add(w, "row", Term::integer(p.waypoints[i].row));
      e.add(w, "col", Term::integer(p.waypoints[i].col));
    }
  }

  for (const auto& b : s.boxes) {
    const Term n = Term::iri(b.id);
    e.add(root, "hasBox", n);
    e.type(n, "DecisionBox");
    e.add(n, "row0", Term::integer(b.row0));
    e.add(n, "col0", Term::integer(b.col0));
    e.add(n, "row1", Term::integer(b.row1));
    e.add(n, "col1", Term::integer(b.col1));
    e.add(n, "signal", Term::iri(b.signal));
    for (auto k : b.watches) e.add(n, "watches", Term::literal(std::string(to_string(k))));
  }
  return e.take();
}

rdf::Dataset to_dataset(const Scenario& scenario) {
  rdf::Dataset d;
  for (auto& q : to_quads(scenario)) d.insert(std::move(q));
  return d;
}

Scenario from_quads(const rdf::Dataset& dataset, const std::string& graph) {
  const Term g = Term::iri(graph);
  if (!dataset.has_graph(g)) throw DecodeError("graph <" + graph + "> not found");
  const GraphView v(dataset, g);
  const Term root = g;
  if (!v.has_type(root, "Scenario")) throw DecodeError(rdf::to_string(root) + ": not typed sl:Scenario");

  Scenario s;
  s.graph = graph;
  s.cell_size = v.number(root, "cellSize");

  const Term tpl = v.required(root, "template");
  s.map.id = v.text(tpl, "templateId");
  const auto name = parse_template_name(v.text(tpl, "templateName"));
  if (!name) GraphView::fail(tpl, "templateName", "is not a known template");
  s.map.name = *name;
  s.map.rows = as_int(v.integer(tpl, "rows"), tpl, "rows");
  s.map.cols = as_int(v.integer(tpl, "cols"), tpl, "cols");
  if (s.map.rows <= 0 || s.map.cols <= 0 || s.map.rows > 1024 || s.map.cols > 1024)
    GraphView::fail(tpl, "rows", "gives invalid grid dimensions");
  std::map<int, std::vector<Cell>> rows;
  for (const auto& row : v.values(tpl, "hasRow")) {
    const int idx = as_int(v.integer(row, "rowIndex"), row, "rowIndex");
    if (idx < 0 || idx >= s.map.rows) GraphView::fail(row, "rowIndex", "is outside the grid");
    if (rows.count(idx)) GraphView::fail(row, "rowIndex", "repeats row " + std::to_string(idx));
    std::vector<Cell> cells;
    std::istringstream codes(v.text(row, "cells"));
    std::string code;
    while (codes >> code) {
      try {
        cells.push_back(parse_cell_code(code));
      } catch (const std::invalid_argument& ex) {
        GraphView::fail(row, "cells", ex.what());
      }
    }
    if (static_cast<int>(cells.size()) != s.map.cols) GraphView::fail(row, "cells", "has the wrong number of cells");
    rows[idx] = std::move(cells);
  }
  if (static_cast<int>(rows.size()) != s.map.rows) GraphView::fail(tpl, "hasRow", "does not cover every row");
  for (auto& [idx, cells] : rows) s.map.cells.insert(s.map.cells.end(), cells.begin(), cells.end());

  std::set<std::string> path_ids;
  for (const auto& p : v.values(root, "hasPath")) path_ids.insert(GraphView::as_iri(root, "hasPath", p));
  std::set<std::string> entity_ids;
  for (const auto& n : v.values(root, "hasEntity")) entity_ids.insert(GraphView::as_iri(root, "hasEntity", n));

  for (const auto& id : entity_ids) {
    const Term n = Term::iri(id);
    Entity ent;
    ent.id = id;
    std::optional<EntityKind> kind;
    for (auto k : {EntityKind::Pedestrian, EntityKind::Vehicle, EntityKind::Cyclist, EntityKind::StaticProp}) {
      if (v.has_type(n, kind_class(k))) {
        if (kind) throw DecodeError(rdf::to_string(n) + ": more than one entity class");
        kind = k;
      }
    }
    if (!kind) throw DecodeError(rdf::to_string(n) + ": property rdf:type is missing an entity class");
    ent.kind = *kind;
    ent.spawn.row = as_int(v.integer(n, "spawnRow"), n, "spawnRow");
    ent.spawn.col = as_int(v.integer(n, "spawnCol"), n, "spawnCol");
    ent.heading = v.number(n, "heading");
    ent.initial_speed = v.number(n, "initialSpeed");
    if (auto b = v.optional(n, "behavior")) ent.behavior = GraphView::as_iri(n, "behavior", *b);
    if (auto p = v.optional(n, "path")) {
      ent.path = GraphView::as_iri(n, "path", *p);
      if (!path_ids.count(*ent.path)) GraphView::fail(n, "path", "refers to unknown path <" + *ent.path + ">");
    }
    if (auto l = v.optional(n, "label")) {
      if (!l->is_literal()) GraphView::fail(n, "label", "is not a literal");
      ent.label = l->value;
    }
    s.entities.push_back(std::move(ent));
  }

  for (const auto& id : path_ids) {
    const Term n = Term::iri(id);
    PathSpec p;
    p.id = id;
    p.owner = v.iri(n, "owner");
    if (!entity_ids.count(p.owner)) GraphView::fail(n, "owner", "refers to unknown entity <" + p.owner + ">");
    std::map<std::int64_t, GridCell> wps;
    for (const auto& w : v.values(n, "waypoint")) {
      const auto idx = v.integer(w, "index");
      if (wps.count(idx)) GraphView::fail(w, "index", "repeats waypoint index " + std::to_string(idx));
      wps[idx] = {as_int(v.integer(w, "row"), w, "row"), as_int(v.integer(w, "col"), w, "col")};
    }
    std::int64_t expect = 0;
    for (auto& [idx, cell] : wps) {
      if (idx != expect++) GraphView::fail(n, "waypoint", "indexes are not contiguous from 0");
      p.waypoints.push_back(cell);
    }
    s.paths.push_back(std::move(p));
  }

  for (const auto& bt : v.values(root, "hasBox")) {
    const Term n = Term::iri(GraphView::as_iri(root, "hasBox", bt));
    DecisionBox b;
    b.id = n.value;
    b.row0 = as_int(v.integer(n, "row0"), n, "row0");
    b.col0 = as_int(v.integer(n, "col0"), n, "col0");
    b.row1 = as_int(v.integer(n, "row1"), n, "row1");
    b.col1 = as_int(v.integer(n, "col1"), n, "col1");
    b.signal = v.iri(n, "signal");
    for (const auto& w : v.values(n, "watches")) {
      auto k = w.is_literal() ? parse_entity_kind(w.value) : std::nullopt;
      if (!k) GraphView::fail(n, "watches", "names an unknown entity kind");
      b.watches.insert(*k);
    }
    s.boxes.push_back(std::move(b));
  }
  s.normalize();
  return s;
}

std::vector<std::string> scenario_graphs(const rdf::Dataset& dataset) {
  std::vector<std::string> out;
  for (const auto& g : dataset.graph_names()) {
    if (!g.is_iri()) continue;
    if (dataset.contains({g, rdf_type(), vocab::term("Scenario"), g})) out.push_back(g.value);
  }
  return out;
}

}  // namespace streetlab::scenario
