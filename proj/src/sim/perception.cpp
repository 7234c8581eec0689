#include "streetlab/sim/perception.hpp"

#include <cmath>
#include <stdexcept>

namespace streetlab::sim {

std::string perc::iri(std::string_view local) { return std::string(kNs) + std::string(local); }

Vec2 velocity(const AgentState& a) { return geometry::unit_from_heading(a.heading) * a.speed; }

double closing_speed(Vec2 pa, Vec2 va, Vec2 pb, Vec2 vb) {
  const Vec2 rel = pb - pa;
  const double d = geometry::length(rel);
  if (d == 0.0) return 0.0;
  const Vec2 rv = vb - va;
  return -(rel.x * rv.x + rel.y * rv.y) / d;
}

PerceptionFrame perceive(const World& world, const std::string& agent) {
  const AgentState* self = world.find_agent(agent);
  if (!self) throw std::out_of_range("unknown agent " + agent);
  PerceptionFrame f;
  f.agent = agent;
  f.position = self->position;
  f.heading = self->heading;
  f.speed = self->speed;
  f.active_signals = world.active_signals(agent);

  const AgentState* best = nullptr;
  double best_d = 0.0;
  for (const auto& a : world.agents()) {
    if (a.id == agent || a.kind != EntityKind::Vehicle) continue;
    const double d = geometry::distance(self->position, a.position);
    if (!best || d < best_d) {
      best = &a;
      best_d = d;
    }
  }
  if (best) {
    NearestVehicle n;
    n.id = best->id;
    n.distance = best_d;
    n.closing_speed = closing_speed(self->position, velocity(*self), best->position, velocity(*best));
    n.decelerating = !best->speed_history.empty() && best->speed < best->speed_history.front();
    if (n.closing_speed > 0.0) n.time_to_arrival = n.distance / n.closing_speed;
    const double time_to_cross = self->cruise_speed > 0.0 ? self->path_length / self->cruise_speed : 0.0;
    n.safe_distance = kSafetyMargin * time_to_cross * std::max(n.closing_speed, 0.0);
    f.nearest_vehicle = n;
  }
  return f;
}

std::vector<rdf::Quad> perception_quads(const PerceptionFrame& f, const std::string& graph) {
  using rdf::Term;
  const Term s = Term::iri(f.agent);
  const Term g = Term::iri(graph);
  std::vector<rdf::Quad> out;
  auto add = [&](std::string_view p, Term o) { out.push_back({s, Term::iri(perc::iri(p)), std::move(o), g}); };
  add("x", Term::number(f.position.x));
  add("y", Term::number(f.position.y));
  add("heading", Term::number(f.heading));
  add("speed", Term::number(f.speed));
  if (const auto& n = f.nearest_vehicle) {
    add("nearestVehicle", Term::iri(n->id));
    add("distance", Term::number(n->distance));
    add("closingSpeed", Term::number(n->closing_speed));
    add("decelerating", Term::boolean(n->decelerating));
    add("safeDistance", Term::number(n->safe_distance));
    if (n->time_to_arrival) add("timeToArrival", Term::number(*n->time_to_arrival));
  }
  for (const auto& sig : f.active_signals) add("activeSignal", Term::iri(sig));
  return out;
}

void publish(rdf::Dataset& dataset, const PerceptionFrame& frame, const std::string& graph) {
  dataset.erase_graph(rdf::Term::iri(graph));
  for (auto& q : perception_quads(frame, graph)) dataset.insert(std::move(q));
}

}  // namespace streetlab::sim
