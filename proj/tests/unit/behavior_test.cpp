#include <doctest.h>

#include <thread>

#include "streetlab/behavior/engine.hpp"
#include "streetlab/behavior/library.hpp"
#include "streetlab/behavior/loader.hpp"
#include "streetlab/rdf/trig.hpp"
#include "support/bt_oracle.hpp"

using namespace streetlab;
using namespace streetlab::behavior;
using rdf::Term;
using testing::flag_condition;

namespace {

const std::string kAgent = "http://ex.org/agent";
const std::string kKnowledge = "http://ex.org/agent#knowledge";
const std::string kPerception = "http://ex.org/agent#perception";

class FakeDispatcher : public ActionDispatcher {
 public:
  ActionReceipt execute(const std::string& agent, const ActionSpec& spec) override {
    calls.push_back(agent + " " + spec.name);
    if (throw_next) throw std::runtime_error("connection refused");
    if (reject.count(spec.name)) return ActionReceipt::rejected("nope");
    if (spec.mode == ActionMode::Async) return ActionReceipt::pending("tok-" + std::to_string(++tokens));
    return ActionReceipt::ok();
  }
  std::vector<std::string> calls;
  std::set<std::string> reject;
  bool throw_next = false;
  int tokens = 0;
};

struct Harness {
  rdf::Dataset data;
  FakeDispatcher dispatcher;
  std::vector<std::string> logs;
  TickContext ctx;

  Harness() {
    ctx.dataset = &data;
    ctx.dispatcher = &dispatcher;
    ctx.log = [this](LogLevel l, const std::string& m) { logs.push_back(std::string(to_string(l)) + " " + m); };
  }

  void set_flag(int k, bool on) {
    const rdf::Quad q{Term::iri(kAgent), Term::iri(testing::kFlag), Term::integer(k), Term::iri(kKnowledge)};
    if (on) data.insert(q);
    else data.erase(q);
  }
};

BehaviorInstance make(const Node& root) {
  return BehaviorInstance(std::make_shared<BehaviorTree>(root), kAgent, kKnowledge, kPerception);
}

int running_leaves(const BehaviorInstance& inst) {
  int n = 0;
  for (std::size_t i = 0; i < inst.tree().size(); ++i)
    if (inst.tree().entry(i).children.empty() && inst.status(i) == NodeStatus::Running) ++n;
  return n;
}

}  // namespace

TEST_CASE("sequence of two true conditions succeeds") {
  Harness h;
  h.set_flag(1, true);
  h.set_flag(2, true);
  auto inst = make(sequence("http://ex.org/seq", {flag_condition("http://ex.org/a", 1), flag_condition("http://ex.org/b", 2)}));
  for (const auto& [id, s] : inst.status_snapshot()) CHECK(s == NodeStatus::Inactive);
  CHECK(inst.tick(h.ctx) == NodeStatus::Succeeded);
  for (const auto& [id, s] : inst.status_snapshot()) CHECK(s == NodeStatus::Succeeded);
}

TEST_CASE("fallback of false then true") {
  Harness h;
  h.set_flag(2, true);
  auto inst = make(fallback("http://ex.org/fb", {flag_condition("http://ex.org/a", 1), flag_condition("http://ex.org/b", 2)}));
  CHECK(inst.tick(h.ctx) == NodeStatus::Succeeded);
  const auto snap = inst.status_snapshot();
  CHECK(snap.at("http://ex.org/a") == NodeStatus::Failed);
  CHECK(snap.at("http://ex.org/b") == NodeStatus::Succeeded);
}

TEST_CASE("conditions read knowledge and perception but not other graphs") {
  Harness h;
  const auto q = rdf::parse_query("ASK { ?self <http://ex.org/sees> ?x }");
  auto inst = make(condition("http://ex.org/c", q));
  h.data.insert({Term::iri(kAgent), Term::iri("http://ex.org/sees"), Term::integer(1), Term::iri("http://ex.org/elsewhere")});
  CHECK(inst.tick(h.ctx) == NodeStatus::Failed);
  auto inst2 = make(condition("http://ex.org/c", q));
  h.data.insert({Term::iri(kAgent), Term::iri("http://ex.org/sees"), Term::integer(1), Term::iri(kPerception)});
  CHECK(inst2.tick(h.ctx) == NodeStatus::Succeeded);
}

TEST_CASE("random condition trees agree with the reference evaluator") {
  testing::TreeGenerator gen(77);
  for (int i = 0; i < 300; ++i) {
    const auto t = gen.tree();
    Harness h;
    for (const auto& [id, value] : t.truth) h.set_flag(t.flag.at(id), value);
    auto inst = make(t.root);
    std::map<std::string, NodeStatus> expected;
    const NodeStatus want = testing::reference_eval(t.root, t.truth, expected);
    REQUIRE(inst.tick(h.ctx) == want);
    for (const auto& [id, s] : inst.status_snapshot()) {
      auto it = expected.find(id);
      REQUIRE(s == (it == expected.end() ? NodeStatus::Inactive : it->second));
    }
  }
}

TEST_CASE("repeat counts completions within one tick") {
  Harness h;
  auto inst = make(repeat("http://ex.org/r", 3, action("http://ex.org/go", "set-speed", {{"speed", Term::integer(1)}})));
  CHECK(inst.tick(h.ctx) == NodeStatus::Succeeded);
  CHECK(h.dispatcher.calls.size() == 3);
}

TEST_CASE("sync actions map receipts to statuses") {
  Harness h;
  h.dispatcher.reject.insert("set-orientation");
  auto inst = make(fallback("http://ex.org/f", {action("http://ex.org/a", "set-orientation"), action("http://ex.org/b", "set-speed")}));
  CHECK(inst.tick(h.ctx) == NodeStatus::Succeeded);
  CHECK(inst.status_snapshot().at("http://ex.org/a") == NodeStatus::Failed);
  CHECK(h.logs.size() == 1);
}

TEST_CASE("dispatcher failure marks the action failed without throwing") {
  Harness h;
  h.dispatcher.throw_next = true;
  auto inst = make(action("http://ex.org/a", "set-speed"));
  CHECK(inst.tick(h.ctx) == NodeStatus::Failed);
  REQUIRE(h.logs.size() == 1);
  CHECK(h.logs[0].find("unreachable") != std::string::npos);
  h.ctx.dispatcher = nullptr;
  auto inst2 = make(action("http://ex.org/a", "set-speed"));
  CHECK(inst2.tick(h.ctx) == NodeStatus::Failed);
}

TEST_CASE("async action stays running until resumed") {
  Harness h;
  auto inst = make(sequence("http://ex.org/s", {action("http://ex.org/walk", "follow-path"), action("http://ex.org/stop", "set-speed")}));
  CHECK(inst.tick(h.ctx) == NodeStatus::Running);
  REQUIRE(inst.pending());
  CHECK(inst.pending()->token == "tok-1");
  CHECK(running_leaves(inst) == 1);
  CHECK(inst.status_snapshot().at("http://ex.org/s") == NodeStatus::Running);
  CHECK(inst.status_snapshot().at("http://ex.org/stop") == NodeStatus::Inactive);

  CHECK(inst.tick(h.ctx) == NodeStatus::Running);
  CHECK(h.dispatcher.calls.size() == 1);

  SUBCASE("stale token is ignored") {
    inst.resume("tok-99", true);
    CHECK(inst.tick(h.ctx) == NodeStatus::Running);
    CHECK(inst.status_snapshot().at("http://ex.org/walk") == NodeStatus::Running);
    CHECK(h.logs.size() == 1);
  }
  SUBCASE("ok result completes the node on the next tick") {
    inst.resume("tok-1", true);
    CHECK(inst.status_snapshot().at("http://ex.org/walk") == NodeStatus::Running);
    CHECK(inst.tick(h.ctx) == NodeStatus::Succeeded);
    CHECK(inst.status_snapshot().at("http://ex.org/walk") == NodeStatus::Succeeded);
    CHECK_FALSE(inst.pending());
    CHECK(inst.finished());
    CHECK(inst.tick(h.ctx) == NodeStatus::Succeeded);
    CHECK(h.dispatcher.calls.size() == 2);
  }
  SUBCASE("resume from another thread") {
    std::thread t([&] { inst.resume("tok-1", false); });
    t.join();
    CHECK(inst.tick(h.ctx) == NodeStatus::Failed);
    CHECK(inst.status_snapshot().at("http://ex.org/stop") == NodeStatus::Inactive);
  }
}

TEST_CASE("running child pins traversal") {
  Harness h;
  h.set_flag(1, true);
  auto inst = make(sequence("http://ex.org/s", {flag_condition("http://ex.org/c", 1), action("http://ex.org/w", "wait")}));
  CHECK(inst.tick(h.ctx) == NodeStatus::Running);
  h.set_flag(1, false);
  CHECK(inst.tick(h.ctx) == NodeStatus::Running);
  CHECK(inst.status_snapshot().at("http://ex.org/c") == NodeStatus::Inactive);
  inst.resume("tok-1", true);
  CHECK(inst.tick(h.ctx) == NodeStatus::Succeeded);
}

TEST_CASE("knowledge updates touch only the agent's knowledge graph") {
  Harness h;
  h.data.insert({Term::iri(kAgent), Term::iri("http://ex.org/near"), Term::iri("http://ex.org/car1"), Term::iri(kPerception)});
  h.data.insert({Term::iri(kAgent), Term::iri("http://ex.org/near"), Term::iri("http://ex.org/car2"), Term::iri(kPerception)});
  h.data.insert({Term::iri(kAgent), Term::iri("http://ex.org/mood"), Term::literal("calm"), Term::iri(kKnowledge)});
  const rdf::Dataset before = h.data;
  UpdateSpec u;
  u.binding = rdf::parse_query("SELECT ?v { ?self <http://ex.org/near> ?v }");
  u.insert = rdf::parse_patterns("?self <http://ex.org/saw> ?v . ?self <http://ex.org/mood> \"alert\" . ?nobody <http://ex.org/x> 1");
  u.remove = rdf::parse_patterns("?self <http://ex.org/mood> \"calm\"");
  auto inst = make(update("http://ex.org/u", u));
  CHECK(inst.tick(h.ctx) == NodeStatus::Succeeded);
  const Term kg = Term::iri(kKnowledge);
  CHECK(h.data.contains({Term::iri(kAgent), Term::iri("http://ex.org/saw"), Term::iri("http://ex.org/car1"), kg}));
  CHECK(h.data.contains({Term::iri(kAgent), Term::iri("http://ex.org/saw"), Term::iri("http://ex.org/car2"), kg}));
  CHECK(h.data.contains({Term::iri(kAgent), Term::iri("http://ex.org/mood"), Term::literal("alert"), kg}));
  CHECK_FALSE(h.data.contains({Term::iri(kAgent), Term::iri("http://ex.org/mood"), Term::literal("calm"), kg}));
  for (const auto& g : h.data.graph_names())
    if (g != kg) CHECK(h.data.graph(g) == before.graph(g));
}

TEST_CASE("load_tree reads a single condition node") {
  const auto d = rdf::parse_trig(R"(@prefix bt: <https://streetlab.dev/bt#> .
<http://ex.org/c> a bt:Condition ; bt:query "ASK { ?self perc:distance ?d FILTER(?d < 5) }" .)");
  const auto t = load_tree(d, "http://ex.org/c");
  CHECK(t.size() == 1);
  CHECK(t.entry(0).node.kind == NodeKind::Condition);
  CHECK(t.entry(0).node.query->filters.size() == 1);
}

TEST_CASE("built-in crossing tree has the documented shape") {
  const auto t = load_tree(builtin_behaviors(), std::string(library::kCrossing));
  const Node root = t.to_node();
  REQUIRE(root.kind == NodeKind::Sequence);
  REQUIRE(root.children.size() == 3);
  CHECK(root.children[0].action.name == "walk-to-waypoint");
  CHECK(root.children[1].action.name == "play-animation");
  CHECK(root.children[1].action.text("animation") == "shoulder-check");
  const Node& decide = root.children[2];
  REQUIRE(decide.kind == NodeKind::Fallback);
  REQUIRE(decide.children.size() == 2);
  CHECK(decide.children[0].kind == NodeKind::Sequence);
  CHECK(decide.children[0].children.front().kind == NodeKind::Condition);
  CHECK(decide.children[0].children.front().label == "car approaching");
  CHECK(decide.children[0].children.back().action.name == "abort-and-return");
  CHECK(decide.children[1].action.name == "follow-path");
  CHECK(decide.children[1].action.mode == ActionMode::Async);

  for (auto root_id : {library::kDrive, library::kStroll}) CHECK_NOTHROW(load_tree(builtin_behaviors(), std::string(root_id)));
}

TEST_CASE("loader errors") {
  const std::string prefix = "@prefix bt: <https://streetlab.dev/bt#> . @prefix ex: <http://ex.org/> .\n";
  SUBCASE("self-reference is a cycle") {
    const auto d = rdf::parse_trig(prefix + "ex:s a bt:Sequence ; bt:child [ bt:index 0 ; bt:node ex:s ] .");
    CHECK_THROWS_WITH_AS(load_tree(d, "http://ex.org/s"), doctest::Contains("cycle"), TreeError);
  }
  SUBCASE("unknown node kind") {
    const auto d = rdf::parse_trig(prefix + "ex:s a ex:Thing .");
    CHECK_THROWS_WITH_AS(load_tree(d, "http://ex.org/s"), doctest::Contains("unknown node kind"), TreeError);
  }
  SUBCASE("malformed query") {
    const auto d = rdf::parse_trig(prefix + "ex:s a bt:Condition ; bt:query \"ASK { ?s \" .");
    CHECK_THROWS_WITH_AS(load_tree(d, "http://ex.org/s"), doctest::Contains("malformed"), TreeError);
  }
  SUBCASE("gap in child indexes") {
    const auto d = rdf::parse_trig(prefix + "ex:s a bt:Sequence ; bt:child [ bt:index 1 ; bt:node ex:a ] . ex:a a bt:Action ; bt:action \"wait\" .");
    CHECK_THROWS_AS(load_tree(d, "http://ex.org/s"), TreeError);
  }
  SUBCASE("empty sequence") {
    const auto d = rdf::parse_trig(prefix + "ex:s a bt:Sequence .");
    CHECK_THROWS_AS(load_tree(d, "http://ex.org/s"), TreeError);
  }
  SUBCASE("shared node") {
    const auto d = rdf::parse_trig(prefix +
        "ex:s a bt:Sequence ; bt:child [ bt:index 0 ; bt:node ex:a ] , [ bt:index 1 ; bt:node ex:a ] . ex:a a bt:Action ; bt:action \"wait\" .");
    CHECK_THROWS_AS(load_tree(d, "http://ex.org/s"), TreeError);
  }
}

TEST_CASE("trees survive an RDF round trip") {
  testing::TreeGenerator gen(3);
  for (int i = 0; i < 50; ++i) {
    const BehaviorTree t(gen.tree().root);
    const auto d = tree_to_dataset(t, "http://ex.org/trees");
    const auto back = load_tree(rdf::parse_trig(rdf::serialize_trig(d)), t.root_id());
    CHECK(back.to_node() == t.to_node());
  }
  const auto lib = load_tree(builtin_behaviors(), std::string(library::kCrossing));
  CHECK(load_tree(tree_to_dataset(lib, "http://ex.org/g"), lib.root_id()).to_node() == lib.to_node());
}

TEST_CASE("resume(failed) on the crossing tree's follow-path fails the root") {
  // hand trace: walk (tick 1 dispatch, tick 2 done) -> shoulder check (tick 2
  // dispatch, tick 3 done) -> condition false -> follow-path (tick 3 dispatch)
  // -> failed result -> fallback has no more children -> root fails.
  Harness h;
  auto inst = BehaviorInstance(std::make_shared<BehaviorTree>(load_tree(builtin_behaviors(), std::string(library::kCrossing))),
                               kAgent, kKnowledge, kPerception);
  CHECK(inst.tick(h.ctx) == NodeStatus::Running);
  inst.resume("tok-1", true);
  CHECK(inst.tick(h.ctx) == NodeStatus::Running);
  CHECK(inst.pending()->token == "tok-2");
  inst.resume("tok-2", true);
  CHECK(inst.tick(h.ctx) == NodeStatus::Running);
  const auto cross = "https://streetlab.dev/behaviors/crossing#cross";
  CHECK(inst.status_snapshot().at(cross) == NodeStatus::Running);
  CHECK(inst.status_snapshot().at("https://streetlab.dev/behaviors/crossing#car-approaching") == NodeStatus::Failed);
  CHECK(h.dispatcher.calls.back() == kAgent + " follow-path");
  inst.resume("tok-3", false);
  CHECK(inst.tick(h.ctx) == NodeStatus::Failed);
  const auto snap = inst.status_snapshot();
  CHECK(snap.at(cross) == NodeStatus::Failed);
  CHECK(snap.at("https://streetlab.dev/behaviors/crossing#decide") == NodeStatus::Failed);
  CHECK(snap.at("https://streetlab.dev/behaviors/crossing#retreat") == NodeStatus::Inactive);
  CHECK(snap.at("https://streetlab.dev/behaviors/crossing#walk-to-curb") == NodeStatus::Inactive);
}

TEST_CASE("crossing tree retreats and records the vehicle when one approaches") {
  Harness h;
  const Term self = Term::iri(kAgent);
  const Term pg = Term::iri(kPerception);
  const std::string perc = "https://streetlab.dev/perception#";
  h.data.insert({self, Term::iri(perc + "closingSpeed"), Term::number(10.0), pg});
  h.data.insert({self, Term::iri(perc + "distance"), Term::number(6.0), pg});
  h.data.insert({self, Term::iri(perc + "safeDistance"), Term::number(90.0), pg});
  h.data.insert({self, Term::iri(perc + "nearestVehicle"), Term::iri("http://ex.org/car"), pg});
  auto inst = BehaviorInstance(std::make_shared<BehaviorTree>(load_tree(builtin_behaviors(), std::string(library::kCrossing))),
                               kAgent, kKnowledge, kPerception);
  inst.tick(h.ctx);
  inst.resume("tok-1", true);
  inst.tick(h.ctx);
  inst.resume("tok-2", true);
  CHECK(inst.tick(h.ctx) == NodeStatus::Running);
  CHECK(h.dispatcher.calls.back() == kAgent + " abort-and-return");
  CHECK(h.data.contains({self, Term::iri("https://streetlab.dev/vocab#yieldedTo"), Term::iri("http://ex.org/car"), Term::iri(kKnowledge)}));
  inst.resume("tok-3", true);
  CHECK(inst.tick(h.ctx) == NodeStatus::Succeeded);
}
