// One line per acceptance criterion: PASS/FAIL, name, measurements, runtime.
// Exit status is the number of failed criteria.

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <thread>

#include "streetlab/behavior/engine.hpp"
#include "streetlab/behavior/library.hpp"
#include "streetlab/geometry/path.hpp"
#include "streetlab/rdf/query.hpp"
#include "streetlab/rdf/trig.hpp"
#include "streetlab/scenario/demo.hpp"
#include "streetlab/scenario/quads.hpp"
#include "streetlab/scenario/repository.hpp"
#include "streetlab/scenario/validate.hpp"
#include "streetlab/scenario/wire.hpp"
#include "streetlab/service/server.hpp"
#include "streetlab/sim/perception.hpp"
#include "support/bt_oracle.hpp"
#include "support/geometry_oracle.hpp"
#include "support/query_oracle.hpp"
#include "support/scenario_generators.hpp"
#include "support/service_fixtures.hpp"

using namespace streetlab;
using namespace streetlab::testing;
using behavior::NodeStatus;
using nlohmann::json;
using rdf::Term;
using service::EventCategory;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  Outcome& out;
  void operator()(bool ok, const std::string& what) {
    if (ok || out.detail.find(what) != std::string::npos) return;
    if (out.pass) out.detail.clear();
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += what;
    out.pass = false;
  }
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int failures = 0;

void criterion(const std::string& name, double budget_ms, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& ex) {
    o = {false, std::string("exception: ") + ex.what()};
  }
  const double ms = ms_since(t0);
  if (budget_ms > 0 && ms > budget_ms) {
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("over time budget");
    o.pass = false;
  }
  failures += !o.pass;
  std::printf("%s  %-18s %s [%.0f ms]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), ms);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Kinematics by hand for the crossing scenarios: the vehicle drives west at
// constant speed along row 3, the pedestrian waits at home on row 2.
struct CrossingOracle {
  double distance, closing, safe, tta;
  bool approaching;
};

CrossingOracle crossing_oracle(bool danger, double t) {
  const double cell = 3.0;
  const double ped_x = 1.5 * cell, ped_y = 2.5 * cell;
  const double speed = danger ? 12.0 : 2.0;
  const double car_x = ((danger ? 6 : 14) + 0.5) * cell - speed * t, car_y = 3.5 * cell;
  const double dx = car_x - ped_x, dy = car_y - ped_y;
  const double dist = std::hypot(dx, dy);
  const double closing = speed * dx / dist;
  const double time_to_cross = 3 * cell / 1.4;  // path rows 2..5 at cruise 1.4 m/s
  const double safe = 1.5 * time_to_cross * std::max(closing, 0.0);
  return {dist, closing, safe, dist / closing, closing > 0.5 && dist < safe};
}

std::optional<double> perc_value(const rdf::Dataset& d, const std::string& agent, const char* local) {
  for (const auto& q : d.graph(Term::iri(translation::perception_graph(agent))))
    if (q.subject == Term::iri(agent) && q.predicate == Term::iri(sim::perc::iri(local)))
      return rdf::numeric_value(q.object);
  return std::nullopt;
}

Outcome flagship() {
  Outcome out;
  Check check{out};
  const std::string cond = std::string(behavior::library::kCrossing) + "#car-approaching";
  std::string summary;
  for (bool danger : {false, true}) {
    const auto t0 = Clock::now();
    const auto s = scenario::crossing_scenario(danger);
    const std::string ped = scenario::child_iri(s.graph, "pedestrian");
    const std::string tag = danger ? "danger" : "clear";
    auto session = boot(s);
    std::vector<service::EventRecord> recs;
    std::optional<double> decided_at;
    std::optional<std::string> verdict;
    std::map<std::string, std::optional<double>> seen;
    service::SessionDriver driver(session, [&](double t, EventCategory c, json body) {
      if (c == EventCategory::BtStatus && body["agent"] == ped && !decided_at) {
        const std::string st = body["nodes"].value(cond, "inactive");
        if (st != "inactive") {
          decided_at = t;
          verdict = st;
          for (const char* k : {"distance", "closingSpeed", "safeDistance", "timeToArrival"})
            seen[k] = perc_value(session->knowledge, ped, k);
        }
      }
      recs.push_back({recs.size() + 1, t, c, std::move(body)});
    });
    for (int i = 0; i < 400; ++i) driver.iterate();
    driver.stop();
    const double run_ms = ms_since(t0);
    check(run_ms < 5000, tag + " run took " + fmt("%.0f ms", run_ms));

    int collisions = 0;
    for (const auto& r : recs) collisions += r.category == EventCategory::Signal && r.body["kind"] == "collision";
    check(collisions == 0, tag + ": collision events");
    check(decided_at.has_value(), tag + ": condition never evaluated");
    if (!decided_at) continue;

    const auto o = crossing_oracle(danger, *decided_at);
    check(verdict == (o.approaching ? "succeeded" : "failed"), tag + ": condition " + verdict.value_or("?"));
    const auto near = [](std::optional<double> v, double want) { return v && std::abs(*v - want) <= 1e-3; };
    check(near(seen["distance"], o.distance), tag + ": distance differs from oracle");
    check(near(seen["closingSpeed"], o.closing), tag + ": closing speed differs from oracle");
    check(near(seen["safeDistance"], o.safe), tag + ": safe distance differs from oracle");
    check(near(seen["timeToArrival"], o.tta), tag + ": time to arrival differs from oracle");

    const auto* agent = session->world->find_agent(ped);
    const int row = static_cast<int>(std::floor(agent->position.y / s.cell_size));
    const int col = static_cast<int>(std::floor(agent->position.x / s.cell_size));
    if (danger) {
      const double off = geometry::distance(agent->position, agent->home);
      check(off <= 0.5, tag + fmt(": %.2f m from home", off));
    } else {
      const bool far_side = row == 5 && s.map.in_bounds(row, col) && s.map.at(row, col).type == scenario::CellType::Sidewalk;
      check(far_side, tag + ": pedestrian not on the far sidewalk");
    }
    summary += (summary.empty() ? "" : " | ") + tag +
               fmt(": t=%.2f s d=%.2f m (oracle %.2f) closing=%.2f", *decided_at, seen["distance"].value_or(-1), o.distance,
                   o.closing) +
               fmt(" tta=%.2f s safe=%.1f m", o.tta, o.safe) + " -> " + (o.approaching ? "abort home" : "cross") +
               fmt(", %.0f ms", run_ms);
  }
  if (out.pass) out.detail = summary;
  return out;
}

Outcome determinism() {
  Outcome out;
  Check check{out};
  std::size_t bytes = 0;
  for (const auto& s : scenario::demo_scenarios()) {
    const auto a = lines(service::run_headless(boot(s, 11), 400));
    const auto b = lines(service::run_headless(boot(s, 11), 400));
    check(a == b, s.graph + " differs between runs");
    bytes += a.size();
  }
  if (out.pass) out.detail = "4 shipped scenarios x 400 steps, identical event logs (" + std::to_string(bytes) + " bytes)";
  return out;
}

Outcome round_trips() {
  Outcome out;
  Check check{out};
  ScenarioGenerator sg(2025);
  int scen = 0;
  for (int i = 0; i < 500; ++i) {
    const auto s = sg.scenario();
    check(scenario::validate(s).empty(), s.graph + " generated invalid");
    check(scenario::from_quads(scenario::to_dataset(s), s.graph) == s, s.graph + " quads round trip");
    check(scenario::import_wire(scenario::export_wire(s)) == s, s.graph + " wire round trip");
    scen += out.pass;
  }
  DatasetGenerator dg(777);
  int data = 0;
  for (int i = 0; i < 500; ++i) {
    const auto d = dg.dataset(50);
    const std::string text = rdf::serialize_trig(d, {{"ex", "http://ex.org/"}});
    check(isomorphic(rdf::parse_trig(text), d), "TriG round trip " + std::to_string(i));
    data += out.pass;
  }
  if (out.pass)
    out.detail = std::to_string(scen) + " scenarios (quads + wire), " + std::to_string(data) + " datasets (TriG)";
  return out;
}

Outcome query_oracle() {
  Outcome out;
  Check check{out};
  DatasetGenerator gen(4711);
  int asks = 0, selects = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto d = gen.dataset(50);
    const auto q = random_query(gen);
    const auto expected = brute_force_eval(d, q);
    if (q.form == rdf::QueryForm::Ask) {
      ++asks;
      check(rdf::eval_ask(d, q) == expected.any, "ASK case " + std::to_string(i));
      continue;
    }
    ++selects;
    const auto rows = rdf::eval_select(d, q);
    const auto names = q.selected_variables();
    bool same = rows.size() == expected.rows.size();
    std::size_t r = 0;
    for (const auto& row : expected.rows) {
      if (!same) break;
      for (std::size_t k = 0; k < names.size(); ++k) same = same && rows[r].at(names[k]) == row[k];
      ++r;
    }
    check(same, "SELECT case " + std::to_string(i));
  }
  if (out.pass) out.detail = "1000 cases (" + std::to_string(asks) + " ASK, " + std::to_string(selects) + " SELECT)";
  return out;
}

// Trees for generated scenarios: mixes of motion, timed and sync actions.
const char* kContractTrees = R"(@prefix bt: <https://streetlab.dev/bt#> .
<http://ex.org/bt> {
  <http://ex.org/bt/0> a bt:Sequence ;
    bt:child [ bt:index 0 ; bt:node <http://ex.org/bt/0#go> ] , [ bt:index 1 ; bt:node <http://ex.org/bt/0#rest> ] .
  <http://ex.org/bt/0#go> a bt:Action ; bt:action "follow-path" .
  <http://ex.org/bt/0#rest> a bt:Action ; bt:action "wait" ; bt:param [ bt:name "duration" ; bt:value 0.3 ] .
  <http://ex.org/bt/1> a bt:Repeat ; bt:count 3 ; bt:child [ bt:index 0 ; bt:node <http://ex.org/bt/1#look> ] .
  <http://ex.org/bt/1#look> a bt:Action ; bt:action "play-animation" ;
    bt:param [ bt:name "animation" ; bt:value "look" ] , [ bt:name "duration" ; bt:value 0.25 ] .
  <http://ex.org/bt/2> a bt:Fallback ;
    bt:child [ bt:index 0 ; bt:node <http://ex.org/bt/2#home> ] , [ bt:index 1 ; bt:node <http://ex.org/bt/2#slow> ] .
  <http://ex.org/bt/2#home> a bt:Action ; bt:action "abort-and-return" .
  <http://ex.org/bt/2#slow> a bt:Action ; bt:action "set-speed" ; bt:param [ bt:name "speed" ; bt:value 0.5 ] .
}
)";

Outcome bt_oracle() {
  Outcome out;
  Check check{out};
  TreeGenerator gen(31337);
  const std::string agent = "http://ex.org/agent";
  const std::string kg = agent + "#knowledge";
  for (int i = 0; i < 1000; ++i) {
    const auto t = gen.tree();
    rdf::Dataset data;
    for (const auto& [id, v] : t.truth)
      if (v) data.insert({Term::iri(agent), Term::iri(kFlag), Term::integer(t.flag.at(id)), Term::iri(kg)});
    behavior::BehaviorInstance inst(std::make_shared<behavior::BehaviorTree>(t.root), agent, kg, agent + "#perception");
    behavior::TickContext ctx;
    ctx.dataset = &data;
    std::map<std::string, NodeStatus> expected;
    const auto want = reference_eval(t.root, t.truth, expected);
    bool same = inst.tick(ctx) == want;
    for (const auto& [id, s] : inst.status_snapshot()) {
      auto it = expected.find(id);
      same = same && s == (it == expected.end() ? NodeStatus::Inactive : it->second);
    }
    check(same, "tree " + std::to_string(i));
  }

  // async contract on generated scenarios driven through the session loop
  auto trees = behavior::builtin_behaviors();
  trees.merge(rdf::parse_trig(kContractTrees));
  ScenarioGenerator sg(99);
  std::mt19937_64 rng(8);
  std::size_t tokens = 0, external = 0, sessions = 0;
  for (int round = 0; round < 60; ++round) {
    const auto s = sg.scenario();
    auto plan = translation::translate(s, trees, 5, 0.05);
    auto session = std::make_shared<translation::LaunchSession>(translation::launch(plan));
    check(session->readiness == translation::Readiness::Ready, s.graph + " did not launch: " + session->error);
    if (session->readiness != translation::Readiness::Ready) continue;
    ++sessions;
    std::map<std::string, int> terminal;
    std::map<std::string, int> callbacks;
    std::set<std::string> issued;
    service::SessionDriver driver(
        session,
        [&](double, EventCategory c, json b) {
          if (c != EventCategory::Signal) return;
          if (b["kind"] == "action-completed" || b["kind"] == "action-failed") ++terminal[b["detail"].get<std::string>()];
        },
        [&](const std::string&, const service::CallbackPayload& p) { ++callbacks[p.token]; });
    for (int k = 0; k < 160; ++k) {
      for (const auto& a : session->world->agents()) {
        if (rng() % 25 != 0) continue;
        const auto r = driver.async_action(
            a.id, behavior::ActionSpec::make("wait", {{"duration", Term::number(0.1 * (1 + rng() % 5))}}),
            "http://127.0.0.1:1/cb");
        if (r.status == 202) issued.insert(r.body["token"].get<std::string>());
      }
      driver.iterate();
      for (const auto& inst : session->behaviors) {
        int running = 0;
        for (std::size_t n = 0; n < inst->tree().size(); ++n)
          running += inst->tree().entry(n).children.empty() && inst->status(n) == NodeStatus::Running;
        check(running <= 1, s.graph + ": more than one running leaf");
      }
    }
    driver.stop();
    for (const auto& [tok, n] : terminal) check(n == 1, s.graph + ": token " + tok + " ended " + std::to_string(n) + "x");
    for (const auto& tok : issued) check(callbacks[tok] == 1, s.graph + ": callback count for " + tok);
    check(callbacks.size() == issued.size(), s.graph + ": callbacks for unknown tokens");
    check(session->world->pending().empty(), s.graph + ": pending after stop");
    tokens += terminal.size();
    external += issued.size();
  }
  if (out.pass)
    out.detail = "1000 condition trees match; " + std::to_string(sessions) + " sessions, " + std::to_string(tokens) +
                 " tokens each ended once, " + std::to_string(external) + " external callbacks each sent once, <=1 running leaf";
  return out;
}

Outcome geometry_check() {
  Outcome out;
  Check check{out};
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> cell(0, 20);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_point = 0.0, worst_len = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<geometry::Vec2> pts;
    const int n = 2 + trial % 7;
    const double size = 0.5 + 3.5 * unit(rng);
    while (static_cast<int>(pts.size()) < n) {
      const auto p = geometry::cell_center(cell(rng), cell(rng), size);
      if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    }
    const double tension = trial % 3 == 0 ? 1.0 : unit(rng);
    const auto g = geometry::PathGeometry::build(pts, tension);
    for (std::size_t i = 0; i < g.segments().size(); ++i) {
      const auto& seg = g.segments()[i];
      check(geometry::point_at(seg, 0.0).point == pts[i] && geometry::point_at(seg, 1.0).point == pts[i + 1],
            "segment endpoints not exact");
      for (int k = 0; k <= 16; ++k) {
        const double t = k / 16.0;
        worst_point = std::max(worst_point, geometry::distance(geometry::point_at(seg, t).point, de_casteljau(seg, t)));
      }
      const double ref = reference_length(seg);
      if (ref > 0) worst_len = std::max(worst_len, std::abs(g.segment_length(i) - ref) / ref);
    }
    geometry::PathCursor c{std::make_shared<const geometry::PathGeometry>(g), 0.0};
    const auto end = geometry::advance(c, g.total_length() + 1.0);
    check(end.at_end && end.position == pts.back(), "advance past the end does not land on the last waypoint");
  }
  check(worst_point <= 1e-9, fmt("sample deviation %.3g m", worst_point));
  check(worst_len <= 1e-3, fmt("arc length deviation %.3g", worst_len));
  if (out.pass)
    out.detail = fmt("500 paths: max sample error %.2g m (<=1e-9), max length error %.2g rel (<=1e-3), endpoints exact",
                     worst_point, worst_len);
  return out;
}

struct Api {
  TempDir dir;
  service::ApiServer server;
  int port;
  httplib::Client cli;

  static service::ServiceOptions options(const std::filesystem::path& d) {
    service::ServiceOptions o;
    o.repo_dir = d;
    o.controller.callbacks.sleep = [](std::chrono::milliseconds) {};
    return o;
  }
  Api() : server(options(dir.path)), port(server.start()), cli("127.0.0.1", port) {
    cli.set_read_timeout(30, 0);
    scenario::ScenarioRepository repo(dir.path);
    repo.save_behavior("hold", kHoldTrig);
    repo.save(walker());
    for (const auto& s : scenario::demo_scenarios()) repo.save(s);
  }
  int post(const std::string& path, const json& body) {
    auto r = cli.Post(path, body.dump(), "application/json");
    return r ? r->status : -1;
  }
  json post_json(const std::string& path, const json& body) {
    auto r = cli.Post(path, body.dump(), "application/json");
    return r ? json::parse(r->body) : json();
  }
  std::string launch(const std::string& graph, const json& body) {
    return post_json("/scenarios/" + scenario::url_encode(graph) + "/launch", body).value("sessionId", "");
  }
};

Outcome service_contract() {
  Outcome out;
  Check check{out};
  Api api;
  check(api.port > 0, "server did not start");

  // sync matrix
  const std::string sid = api.launch(kWalkGraph, {{"speedFactor", 1.0}});
  check(!sid.empty(), "launch failed");
  const std::string base = "/sessions/" + sid;
  const std::string ped = base + "/agents/" + scenario::url_encode(kPed) + "/actions";
  const json set_ok = {{"action", "set-speed"}, {"params", {{"speed", 1.5}}}};
  int matrix = 0;
  auto expect = [&](int got, int want, const std::string& what) {
    check(got == want, what + ": " + std::to_string(got) + " != " + std::to_string(want));
    ++matrix;
  };
  expect(api.post(ped, set_ok), 409, "sync before start");
  api.post(base + "/start", json::object());
  expect(api.post(ped, set_ok), 200, "sync ok");
  expect(api.post("/sessions/none/agents/x/actions", set_ok), 404, "unknown session");
  expect(api.post(base + "/agents/" + scenario::url_encode(kWalkGraph + "#ghost") + "/actions", set_ok), 404,
         "unknown agent");
  expect(api.post(ped, {{"action", "teleport"}}), 422, "unknown action");
  expect(api.post(ped, {{"action", "follow-path"}}), 422, "async action on the sync route");
  expect(api.post(ped + "/async", {{"action", "wait"}, {"params", {{"duration", 1.0}}}, {"callbackUri", "ftp://x"}}),
         422, "bad callback uri");

  // walk with a callback, retried once by a lossy receiver
  service::CallbackInbox inbox;
  std::map<std::string, int> posts;
  std::mutex posts_mu;
  httplib::Server receiver;
  receiver.Post("/cb", [&](const httplib::Request& req, httplib::Response& res) {
    const auto p = service::callback_from_json(json::parse(req.body));
    inbox.accept(p);
    std::lock_guard lock(posts_mu);
    res.status = ++posts[p.token] == 1 ? 503 : 204;
  });
  const int cb_port = receiver.bind_to_any_port("127.0.0.1");
  std::thread cb_thread([&] { receiver.listen_after_bind(); });
  receiver.wait_until_ready();
  const std::string cb = "http://127.0.0.1:" + std::to_string(cb_port) + "/cb";
  const json walk = {{"action", "walk-to-waypoint"}, {"params", {{"row", 1}, {"col", 2}, {"speed", 1.5}}}, {"callbackUri", cb}};
  const auto accepted = api.post_json(ped + "/async", walk);
  check(accepted.contains("token"), "walk not accepted");
  expect(api.post(ped + "/async", walk), 409, "second async for the same agent");
  const std::string token = accepted.value("token", "");
  const auto got = inbox.wait_for(token, std::chrono::seconds(20));
  check(got && got->result == service::CallbackResult::Ok && std::abs(got->time - 2.0) <= 0.05 + 1e-9,
        "walk callback not ok at 2.0 +- dt");
  const auto waited = api.post_json(base + "/agents/" + scenario::url_encode(kOther) + "/actions/async",
                                    {{"action", "wait"}, {"params", {{"duration", 900.0}}}, {"callbackUri", cb}});
  api.post(base + "/stop", json::object());
  expect(api.post(ped, set_ok), 409, "sync after stop");
  auto ctl = api.server.service().controller(sid);
  ctl->callbacks().flush();
  const auto cancelled = inbox.wait_for(waited.value("token", ""), std::chrono::seconds(5));
  check(cancelled && cancelled->result == service::CallbackResult::Cancelled, "stop did not cancel the pending wait");
  for (const auto& o : ctl->callbacks().outcomes())
    check(o.delivered && o.attempts == 2, "callback " + o.token + " took " + std::to_string(o.attempts) + " attempts");
  check(inbox.payloads().size() == 2 && inbox.duplicates() == 2, "sink did not see exactly one retry per token");

  // forced reconnects at random positions of a live stream
  std::mt19937_64 rng(2718);
  std::size_t reconnects = 0, streamed = 0;
  for (const auto& graph : {scenario::demo::kIntersection, scenario::demo::kTJunction, scenario::demo::kCrossingClear}) {
    const std::string id = api.launch(std::string(graph), {{"speedFactor", 8.0}, {"stepLimit", 240}});
    check(!id.empty(), "launch of " + std::string(graph) + " failed");
    if (id.empty()) continue;
    api.post("/sessions/" + id + "/start", json::object());
    std::vector<std::uint64_t> seqs;
    std::vector<json> records;
    bool finished = false;
    std::thread stopper([&] {
      api.server.service().controller(id)->wait_steps(240, std::chrono::seconds(60));
      httplib::Client c("127.0.0.1", api.port);
      c.Post("/sessions/" + id + "/stop", "{}", "application/json");
    });
    for (int attempt = 0; attempt < 500 && !finished; ++attempt) {
      const std::uint64_t since = seqs.empty() ? 0 : seqs.back();
      const std::size_t quota = 1 + rng() % 4;
      std::size_t taken = 0;
      std::string pending;
      httplib::Client c("127.0.0.1", api.port);
      c.set_read_timeout(30, 0);
      c.Get("/sessions/" + id + "/events?since=" + std::to_string(since), [&](const char* data, std::size_t n) {
        pending.append(data, n);
        std::size_t nl;
        while ((nl = pending.find('\n')) != std::string::npos) {
          const std::string line = pending.substr(0, nl);
          pending.erase(0, nl + 1);
          if (line.empty()) continue;
          auto r = json::parse(line);
          seqs.push_back(r["seq"].get<std::uint64_t>());
          if (r["body"].value("message", "") == "session stopped") finished = true;
          records.push_back(std::move(r));
          if (++taken >= quota || finished) return false;
        }
        return true;
      });
      ++reconnects;
    }
    stopper.join();
    check(finished, std::string(graph) + ": stream never reached the stop record");
    for (std::size_t i = 0; i < seqs.size(); ++i)
      check(seqs[i] == i + 1, std::string(graph) + ": gap or duplicate at position " + std::to_string(i));
    auto full = api.cli.Get("/sessions/" + id + "/events?since=0&follow=0");
    check(full && parse_lines(full->body) == records, std::string(graph) + ": reassembled stream differs from replay");
    streamed += records.size();
  }

  receiver.stop();
  cb_thread.join();
  api.server.stop();
  if (out.pass)
    out.detail = std::to_string(matrix) + " status checks; walk callback at " + fmt("%.2f s", got ? got->time : -1) +
                 ", 1 retry per token deduped at the sink; " + std::to_string(streamed) + " records over " +
                 std::to_string(reconnects) + " forced reconnects, gapless";
  return out;
}

}  // namespace

int main() {
  criterion("flagship-crossing", 10000, flagship);
  criterion("determinism", 10000, determinism);
  criterion("round-trips", 30000, round_trips);
  criterion("query-oracle", 0, query_oracle);
  criterion("bt-oracle", 0, bt_oracle);
  criterion("geometry", 0, geometry_check);
  criterion("service-contract", 0, service_contract);
  std::printf("%d failed\n", failures);
  return failures;
}
