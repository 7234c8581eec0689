#include "streetlab/sim/world.hpp"

#include <algorithm>
#include <cmath>

#include "streetlab/scenario/validate.hpp"

namespace streetlab::sim {

using behavior::ActionReceipt;
using behavior::ActionSpec;

namespace {

constexpr double kTimeEps = 1e-9;
constexpr double kSameSpot = 1e-9;

}  // namespace

double accel_limit(EntityKind kind) {
  switch (kind) {
    case EntityKind::Pedestrian: return 1.5;
    case EntityKind::Cyclist: return 2.0;
    case EntityKind::Vehicle: return 3.0;
    case EntityKind::StaticProp: return 0.0;
  }
  return 0.0;
}

double body_radius(EntityKind kind) {
  switch (kind) {
    case EntityKind::Pedestrian: return 0.3;
    case EntityKind::Cyclist: return 0.4;
    case EntityKind::Vehicle: return 0.9;
    case EntityKind::StaticProp: return 0.0;
  }
  return 0.0;
}

double default_cruise(EntityKind kind) {
  switch (kind) {
    case EntityKind::Pedestrian: return 1.4;
    case EntityKind::Cyclist: return 4.0;
    case EntityKind::Vehicle: return 10.0;
    case EntityKind::StaticProp: return 0.0;
  }
  return 0.0;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::BoxEntered: return "box-entered";
    case EventKind::BoxExited: return "box-exited";
    case EventKind::ActionCompleted: return "action-completed";
    case EventKind::ActionFailed: return "action-failed";
    case EventKind::Collision: return "collision";
    case EventKind::AnimationStarted: return "animation-started";
    case EventKind::AnimationEnded: return "animation-ended";
  }
  return "collision";
}

nlohmann::json to_json(const SignalEvent& e) {
  nlohmann::json j = {{"time", e.time}, {"kind", to_string(e.kind)}, {"subject", e.subject}, {"detail", e.detail}};
  if (!e.related.empty()) j["related"] = e.related;
  return j;
}

World::World(scenario::Scenario scenario, std::uint64_t seed, double dt)
    : scenario_(std::move(scenario)), seed_(seed), dt_(dt) {
  if (!(std::isfinite(dt) && dt > 0.0)) throw InitError("dt must be a positive finite number");
  const auto violations = scenario::validate(scenario_);
  if (!violations.empty()) throw InitError("scenario is not simulatable:\n" + scenario::describe(violations));
  scenario_.normalize();
  history_len_ = static_cast<std::size_t>(std::llround(kDecelerationWindow / dt_)) + 1;

  const double cs = scenario_.cell_size;
  for (const auto& e : scenario_.entities) {
    const Vec2 at = geometry::cell_center(e.spawn.row, e.spawn.col, cs);
    if (!scenario::is_dynamic(e.kind)) {
      obstacles_.push_back({e.id, at, 0.5 * cs});
      continue;
    }
    AgentState a;
    a.id = e.id;
    a.kind = e.kind;
    a.position = at;
    a.home = at;
    a.heading = e.heading;
    a.speed = e.initial_speed;
    a.target_speed = e.initial_speed;
    a.accel_limit = accel_limit(e.kind);
    a.cruise_speed = e.initial_speed > 0.0 ? e.initial_speed : default_cruise(e.kind);
    if (e.path) {
      if (const auto* p = scenario_.find_path(*e.path)) {
        std::vector<Vec2> pts;
        for (const auto& w : p->waypoints) pts.push_back(geometry::cell_center(w.row, w.col, cs));
        a.path_length = geometry::PathGeometry::build(pts).total_length();
      }
    }
    a.speed_history.push_back(a.speed);
    agents_.push_back(std::move(a));
  }
  for (const auto& b : scenario_.boxes)
    for (const auto& a : agents_)
      if (watches(b, a.kind)) box_memory_[{b.id, a.id}] = false;
}

bool World::watches(const scenario::DecisionBox& box, EntityKind kind) {
  if (!scenario::is_dynamic(kind)) return false;
  return box.watches.empty() || box.watches.count(kind) != 0;
}

const AgentState* World::find_agent(const std::string& id) const {
  auto it = std::lower_bound(agents_.begin(), agents_.end(), id,
                             [](const AgentState& a, const std::string& k) { return a.id < k; });
  return it != agents_.end() && it->id == id ? &*it : nullptr;
}

AgentState* World::agent_mut(const std::string& id) { return const_cast<AgentState*>(find_agent(id)); }

std::optional<std::string> World::pending_token(const std::string& agent) const {
  for (const auto& [token, p] : pending_)
    if (p.agent == agent) return token;
  return std::nullopt;
}

bool World::inside(const std::string& box, const std::string& agent) const {
  auto it = box_memory_.find({box, agent});
  return it != box_memory_.end() && it->second;
}

std::set<std::string> World::active_signals(const std::string& agent) const {
  std::set<std::string> out;
  for (const auto& b : scenario_.boxes)
    if (inside(b.id, agent)) out.insert(b.signal);
  return out;
}

std::string World::next_token() { return "tok-" + std::to_string(++token_counter_); }

void World::emit(std::vector<SignalEvent>& out, EventKind kind, const std::string& subject, std::string detail,
                 std::string related) {
  SignalEvent e{clock(), kind, subject, std::move(detail), std::move(related)};
  log_.push_back(e);
  out.push_back(std::move(e));
}

void World::finish(std::vector<SignalEvent>& out, const std::string& token, bool ok) {
  auto it = pending_.find(token);
  if (it == pending_.end()) return;
  const PendingAction p = it->second;
  pending_.erase(it);
  if (AgentState* a = agent_mut(p.agent)) {
    if (a->animation) {
      const std::string name = a->animation->name;
      a->animation.reset();
      emit(out, EventKind::AnimationEnded, p.agent, token, name);
    }
    if (!ok) a->cursor.reset();
  }
  emit(out, ok ? EventKind::ActionCompleted : EventKind::ActionFailed, p.agent, token, p.spec.name);
}

std::vector<SignalEvent> World::step() {
  std::vector<SignalEvent> out = std::move(staged_);
  staged_.clear();
  ++steps_;

  for (auto& a : agents_) {
    const double limit = scenario::max_speed(a.kind);
    const double dv = a.accel_limit * dt_;
    double v = a.speed < a.target_speed ? std::min(a.target_speed, a.speed + dv)
                                        : std::max(a.target_speed, a.speed - dv);
    a.speed = std::clamp(v, 0.0, limit);

    const auto token = pending_token(a.id);
    const std::optional<PendingAction> p = token ? std::optional<PendingAction>(pending_.at(*token)) : std::nullopt;
    if (a.cursor) {
      const auto adv = geometry::advance(*a.cursor, a.speed * dt_);
      a.cursor = adv.cursor;
      a.position = adv.position;
      a.heading = adv.heading;
      if (adv.at_end) {
        a.cursor.reset();
        a.speed = 0.0;
        a.target_speed = 0.0;
        if (p && p->motion) finish(out, *token, true);
      }
    } else if (p && p->motion && p->immediate) {
      a.speed = 0.0;
      a.target_speed = 0.0;
      finish(out, *token, true);
    } else {
      a.position = a.position + geometry::unit_from_heading(a.heading) * (a.speed * dt_);
    }
    if (p && !p->motion && clock() + kTimeEps >= p->ends_at) finish(out, *token, true);

    a.speed_history.push_back(a.speed);
    while (a.speed_history.size() > history_len_) a.speed_history.pop_front();
  }

  const double cs = scenario_.cell_size;
  for (const auto& b : scenario_.boxes) {
    const double x0 = b.col0 * cs, x1 = (b.col1 + 1) * cs;
    const double y0 = b.row0 * cs, y1 = (b.row1 + 1) * cs;
    for (const auto& a : agents_) {
      auto it = box_memory_.find({b.id, a.id});
      if (it == box_memory_.end()) continue;
      const bool now = a.position.x >= x0 && a.position.x <= x1 && a.position.y >= y0 && a.position.y <= y1;
      if (now == it->second) continue;
      it->second = now;
      emit(out, now ? EventKind::BoxEntered : EventKind::BoxExited, a.id, b.signal, b.id);
    }
  }

  auto check = [&](const std::string& id0, Vec2 p0, double r0, const std::string& id1, Vec2 p1, double r1) {
    const auto key = std::make_pair(id0, id1);
    const bool hit = geometry::distance(p0, p1) < r0 + r1;
    if (hit && !overlapping_.count(key)) {
      overlapping_.insert(key);
      emit(out, EventKind::Collision, id0, id1, {});
    } else if (!hit) {
      overlapping_.erase(key);
    }
  };
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const auto& a = agents_[i];
    for (std::size_t j = i + 1; j < agents_.size(); ++j) {
      const auto& b = agents_[j];
      check(a.id, a.position, body_radius(a.kind), b.id, b.position, body_radius(b.kind));
    }
    for (const auto& o : obstacles_) check(a.id, a.position, body_radius(a.kind), o.id, o.position, o.radius);
  }
  return out;
}

std::vector<SignalEvent> World::cancel_all() {
  std::vector<SignalEvent> out = std::move(staged_);
  staged_.clear();
  std::vector<std::string> tokens;
  for (const auto& [token, p] : pending_) tokens.push_back(token);
  for (const auto& t : tokens) finish(out, t, false);
  return out;
}

ActionReceipt World::start_motion(AgentState& a, const ActionSpec& spec, std::vector<Vec2> points) {
  std::optional<double> speed = spec.number("speed");
  if (spec.params.count("speed")) {
    if (!speed || !std::isfinite(*speed) || *speed <= 0.0 || *speed > scenario::max_speed(a.kind))
      return ActionReceipt::rejected("speed out of range for " + std::string(scenario::to_string(a.kind)));
  }
  std::vector<Vec2> pts{a.position};
  for (const auto& p : points)
    if (geometry::distance(p, pts.back()) > kSameSpot) pts.push_back(p);

  PendingAction pa;
  pa.token = next_token();
  pa.agent = a.id;
  pa.spec = spec;
  pa.motion = true;
  if (pts.size() < 2) {
    pa.immediate = true;
    a.cursor.reset();
  } else {
    a.cursor = geometry::PathCursor{std::make_shared<const geometry::PathGeometry>(geometry::PathGeometry::build(pts)),
                                    0.0};
    if (speed) a.cruise_speed = *speed;
    a.target_speed = a.cruise_speed;
  }
  pending_[pa.token] = pa;
  return ActionReceipt::pending(pa.token);
}

ActionReceipt World::execute(const std::string& agent, const ActionSpec& spec) {
  AgentState* a = agent_mut(agent);
  if (!a) return ActionReceipt::rejected("unknown agent " + agent);
  const auto mode = behavior::catalog_mode(spec.name);
  if (!mode) return ActionReceipt::rejected("unknown action '" + spec.name + "'");

  if (spec.name == "set-speed") {
    const auto v = spec.number("speed");
    if (!v || !std::isfinite(*v) || *v < 0.0 || *v > scenario::max_speed(a->kind))
      return ActionReceipt::rejected("speed out of range for " + std::string(scenario::to_string(a->kind)));
    a->target_speed = *v;
    if (*v > 0.0) a->cruise_speed = *v;
    return ActionReceipt::ok();
  }
  if (spec.name == "set-orientation") {
    const auto h = spec.number("heading");
    if (!h || !std::isfinite(*h)) return ActionReceipt::rejected("heading must be a finite number");
    a->heading = *h;
    return ActionReceipt::ok();
  }

  if (pending_token(agent)) return ActionReceipt::rejected("agent already has a pending action");

  const double cs = scenario_.cell_size;
  const scenario::Entity* entity = scenario_.find_entity(agent);
  const scenario::PathSpec* path = entity && entity->path ? scenario_.find_path(*entity->path) : nullptr;

  if (spec.name == "walk-to-waypoint") {
    std::optional<scenario::GridCell> target;
    if (spec.params.count("waypoint")) {
      const auto idx = spec.number("waypoint");
      if (!path) return ActionReceipt::rejected("agent has no path");
      if (!idx || *idx < 0 || *idx != std::floor(*idx) || *idx >= static_cast<double>(path->waypoints.size()))
        return ActionReceipt::rejected("waypoint index out of range");
      target = path->waypoints[static_cast<std::size_t>(*idx)];
    } else {
      const auto r = spec.number("row");
      const auto c = spec.number("col");
      if (!r || !c || *r != std::floor(*r) || *c != std::floor(*c) ||
          !scenario_.map.in_bounds(static_cast<int>(*r), static_cast<int>(*c)))
        return ActionReceipt::rejected("target cell out of bounds");
      target = scenario::GridCell{static_cast<int>(*r), static_cast<int>(*c)};
    }
    return start_motion(*a, spec, {geometry::cell_center(target->row, target->col, cs)});
  }
  if (spec.name == "follow-path") {
    if (!path) return ActionReceipt::rejected("agent has no path");
    std::vector<Vec2> pts;
    for (const auto& w : path->waypoints) pts.push_back(geometry::cell_center(w.row, w.col, cs));
    return start_motion(*a, spec, std::move(pts));
  }
  if (spec.name == "abort-and-return") return start_motion(*a, spec, {a->home});

  if (spec.name == "play-animation" || spec.name == "wait") {
    const bool anim = spec.name == "play-animation";
    double duration = kDefaultAnimationSeconds;
    if (spec.params.count("duration")) {
      const auto d = spec.number("duration");
      if (!d || !std::isfinite(*d) || *d <= 0.0) return ActionReceipt::rejected("duration must be positive");
      duration = *d;
    } else if (!anim) {
      return ActionReceipt::rejected("wait needs a duration");
    }
    std::string name;
    if (anim) {
      name = spec.text("animation").value_or("");
      if (name.empty()) return ActionReceipt::rejected("play-animation needs an animation name");
    }
    PendingAction pa;
    pa.token = next_token();
    pa.agent = agent;
    pa.spec = spec;
    pa.ends_at = clock() + duration;
    pending_[pa.token] = pa;
    if (anim) {
      a->animation = Animation{name, pa.ends_at};
      emit(staged_, EventKind::AnimationStarted, agent, pa.token, name);
    }
    return ActionReceipt::pending(pa.token);
  }
  return ActionReceipt::rejected("action '" + spec.name + "' is not supported by this world");
}

nlohmann::json World::snapshot() const {
  nlohmann::json agents = nlohmann::json::array();
  for (const auto& a : agents_) {
    nlohmann::json j = {{"id", a.id},
                        {"kind", scenario::to_string(a.kind)},
                        {"x", a.position.x},
                        {"y", a.position.y},
                        {"heading", a.heading},
                        {"speed", a.speed},
                        {"targetSpeed", a.target_speed},
                        {"home", {a.home.x, a.home.y}}};
    if (a.cursor) j["pathArc"] = a.cursor->arc;
    if (a.animation) j["animation"] = {{"name", a.animation->name}, {"endsAt", a.animation->ends_at}};
    if (auto t = pending_token(a.id)) j["pendingToken"] = *t;
    agents.push_back(std::move(j));
  }
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& [key, in] : box_memory_)
    if (in) boxes.push_back({{"box", key.first}, {"agent", key.second}});
  return {{"clock", clock()}, {"steps", steps_}, {"dt", dt_}, {"seed", seed_}, {"agents", agents}, {"insideBoxes", boxes}};
}

}  // namespace streetlab::sim
