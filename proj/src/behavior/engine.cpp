#include "streetlab/behavior/engine.hpp"

#include "streetlab/rdf/query.hpp"

namespace streetlab::behavior {

using rdf::Term;

std::string_view to_string(LogLevel level) {
  switch (level) {
    case LogLevel::Info: return "info";
    case LogLevel::Warn: return "warn";
    case LogLevel::Error: return "error";
  }
  return "info";
}

BehaviorInstance::BehaviorInstance(std::shared_ptr<const BehaviorTree> tree, std::string agent,
                                   std::string knowledge_graph, std::string perception_graph)
    : tree_(std::move(tree)),
      agent_(std::move(agent)),
      knowledge_graph_(std::move(knowledge_graph)),
      perception_graph_(std::move(perception_graph)),
      statuses_(tree_->size(), NodeStatus::Inactive),
      resume_child_(tree_->size(), 0),
      repeat_done_(tree_->size(), 0) {}

void BehaviorInstance::resume(const std::string& token, bool ok) {
  std::lock_guard lock(inbox_->mu);
  inbox_->items.emplace_back(token, ok);
}

void BehaviorInstance::log(TickContext& ctx, LogLevel level, const std::string& msg) const {
  if (ctx.log) ctx.log(level, agent_ + ": " + msg);
}

void BehaviorInstance::drain_inbox(TickContext& ctx) {
  std::deque<std::pair<std::string, bool>> items;
  {
    std::lock_guard lock(inbox_->mu);
    items.swap(inbox_->items);
  }
  for (auto& [token, ok] : items) {
    if (pending_ && pending_->token == token && !pending_result_) {
      pending_result_ = ok;
    } else {
      log(ctx, LogLevel::Warn, "ignoring stale action token " + token);
    }
  }
}

NodeStatus BehaviorInstance::tick(TickContext& ctx) {
  drain_inbox(ctx);
  if (finished_) return statuses_.front();
  ++ticks_;
  std::fill(statuses_.begin(), statuses_.end(), NodeStatus::Inactive);
  const NodeStatus s = run(0, ctx);
  if (s == NodeStatus::Succeeded || s == NodeStatus::Failed) finished_ = true;
  return s;
}

NodeStatus BehaviorInstance::run(std::size_t i, TickContext& ctx) {
  const auto& e = tree_->entry(i);
  NodeStatus result = NodeStatus::Failed;
  switch (e.node.kind) {
    case NodeKind::Sequence:
    case NodeKind::Fallback: {
      // sequence continues on success, fallback on failure
      const NodeStatus proceed = e.node.kind == NodeKind::Sequence ? NodeStatus::Succeeded : NodeStatus::Failed;
      result = proceed;
      for (std::size_t c = resume_child_[i]; c < e.children.size(); ++c) {
        const NodeStatus s = run(e.children[c], ctx);
        if (s == NodeStatus::Running) {
          resume_child_[i] = c;
          result = s;
          break;
        }
        if (s != proceed) {
          result = s;
          break;
        }
      }
      if (result != NodeStatus::Running) resume_child_[i] = 0;
      break;
    }
    case NodeKind::Repeat: {
      const std::size_t child = e.children.front();
      while (true) {
        const NodeStatus s = run(child, ctx);
        if (s == NodeStatus::Running) {
          result = s;
          break;
        }
        if (s == NodeStatus::Failed) {
          repeat_done_[i] = 0;
          result = s;
          break;
        }
        ++repeat_done_[i];
        if (!e.node.repeat_count) {
          result = NodeStatus::Running;
          break;
        }
        if (repeat_done_[i] >= *e.node.repeat_count) {
          repeat_done_[i] = 0;
          result = NodeStatus::Succeeded;
          break;
        }
      }
      break;
    }
    case NodeKind::Condition: result = run_condition(i, ctx); break;
    case NodeKind::Action: result = run_action(i, ctx); break;
    case NodeKind::Update: result = run_update(i, ctx); break;
  }
  statuses_[i] = result;
  return result;
}

NodeStatus BehaviorInstance::run_condition(std::size_t i, TickContext& ctx) {
  const rdf::Query q = tree_->entry(i).node.query->bind("self", Term::iri(agent_));
  const rdf::GraphScope scope{{Term::iri(knowledge_graph_), Term::iri(perception_graph_)}};
  try {
    return rdf::eval_ask(*ctx.dataset, q, scope) ? NodeStatus::Succeeded : NodeStatus::Failed;
  } catch (const std::exception& ex) {
    log(ctx, LogLevel::Error, "condition " + tree_->entry(i).node.id + " failed: " + ex.what());
    return NodeStatus::Failed;
  }
}

namespace {

std::optional<Term> resolve(const rdf::PatternTerm& t, const rdf::Binding& b, const Term& self) {
  if (const auto* term = std::get_if<Term>(&t)) return *term;
  const auto& name = std::get<rdf::Variable>(t).name;
  if (name == "self") return self;
  auto it = b.find(name);
  if (it == b.end()) return std::nullopt;
  return it->second;
}

void instantiate(const std::vector<rdf::TriplePattern>& templates, const rdf::Binding& b, const Term& self,
                 const Term& graph, std::vector<rdf::Quad>& out) {
  for (const auto& p : templates) {
    auto s = resolve(p.subject, b, self);
    auto pr = resolve(p.predicate, b, self);
    auto o = resolve(p.object, b, self);
    if (!s || !pr || !o) continue;
    rdf::Quad q{*s, *pr, *o, graph};
    try {
      rdf::check_quad(q);
    } catch (const std::invalid_argument&) {
      continue;
    }
    out.push_back(std::move(q));
  }
}

}  // namespace

NodeStatus BehaviorInstance::run_update(std::size_t i, TickContext& ctx) {
  const UpdateSpec& u = tree_->entry(i).node.update;
  const Term self = Term::iri(agent_);
  const Term graph = Term::iri(knowledge_graph_);
  std::vector<rdf::Binding> rows{rdf::Binding{}};
  if (u.binding) {
    const rdf::GraphScope scope{{graph, Term::iri(perception_graph_)}};
    try {
      rows = rdf::eval_select(*ctx.dataset, u.binding->bind("self", self), scope);
    } catch (const std::exception& ex) {
      log(ctx, LogLevel::Error, "binding query of " + tree_->entry(i).node.id + " failed: " + ex.what());
      rows.clear();
    }
  }
  std::vector<rdf::Quad> ins;
  std::vector<rdf::Quad> del;
  for (const auto& row : rows) {
    instantiate(u.insert, row, self, graph, ins);
    instantiate(u.remove, row, self, graph, del);
  }
  *ctx.dataset = rdf::apply_update(*ctx.dataset, ins, del);
  return NodeStatus::Succeeded;
}

NodeStatus BehaviorInstance::run_action(std::size_t i, TickContext& ctx) {
  const Node& n = tree_->entry(i).node;
  if (pending_ && pending_->node == i) {
    if (!pending_result_) return NodeStatus::Running;
    const bool ok = *pending_result_;
    pending_.reset();
    pending_result_.reset();
    return ok ? NodeStatus::Succeeded : NodeStatus::Failed;
  }
  if (pending_) {
    log(ctx, LogLevel::Error, "action " + n.id + " skipped: " + tree_->entry(pending_->node).node.id + " is still pending");
    return NodeStatus::Failed;
  }
  if (!ctx.dispatcher) {
    log(ctx, LogLevel::Error, "action " + n.id + " failed: no dispatcher");
    return NodeStatus::Failed;
  }
  ActionReceipt r;
  try {
    r = ctx.dispatcher->execute(agent_, n.action);
  } catch (const std::exception& ex) {
    log(ctx, LogLevel::Error, "action " + n.id + " failed: dispatcher unreachable: " + ex.what());
    return NodeStatus::Failed;
  }
  switch (r.kind) {
    case ActionReceipt::Kind::Ok: return NodeStatus::Succeeded;
    case ActionReceipt::Kind::Rejected:
      log(ctx, LogLevel::Warn, "action " + n.action.name + " rejected: " + r.message);
      return NodeStatus::Failed;
    case ActionReceipt::Kind::Pending:
      pending_ = Pending{i, r.token};
      pending_result_.reset();
      return NodeStatus::Running;
  }
  return NodeStatus::Failed;
}

StatusSnapshot BehaviorInstance::status_snapshot() const {
  StatusSnapshot out;
  for (std::size_t i = 0; i < statuses_.size(); ++i) out[tree_->entry(i).node.id] = statuses_[i];
  return out;
}

}  // namespace streetlab::behavior
