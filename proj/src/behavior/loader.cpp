#include "streetlab/behavior/loader.hpp"

#include <charconv>
#include <map>
#include <set>

#include "streetlab/scenario/quads.hpp"

namespace streetlab::behavior {

using rdf::Term;

namespace {

std::string bt(std::string_view local) { return std::string(vocab::kNs) + std::string(local); }
Term bt_term(std::string_view local) { return Term::iri(bt(local)); }

const Term& rdf_type() {
  static const Term t = Term::iri(std::string(rdf::rdfns::kType));
  return t;
}

std::string node_name(const Term& t) { return t.is_iri() ? t.value : rdf::to_string(t); }

class Loader {
 public:
  explicit Loader(const rdf::Dataset& d) {
    for (const auto& q : d.quads()) props_[q.subject].emplace(q.predicate, q.object);
  }

  Node load(const Term& subject) {
    const std::string id = node_name(subject);
    if (on_stack_.count(subject)) throw TreeError("cycle through node " + id);
    if (done_.count(subject)) throw TreeError("node " + id + " is reachable more than once");
    on_stack_.insert(subject);

    Node n;
    n.id = id;
    n.kind = kind_of(subject);
    if (auto l = one(subject, "label")) n.label = l->value;

    switch (n.kind) {
      case NodeKind::Sequence:
      case NodeKind::Fallback:
      case NodeKind::Repeat:
        for (const auto& c : children(subject)) n.children.push_back(load(c));
        if (n.kind == NodeKind::Repeat) {
          if (auto c = one(subject, "count")) n.repeat_count = static_cast<int>(integer(subject, "count", *c));
        }
        break;
      case NodeKind::Condition:
        n.query = query(subject, "query", required(subject, "query"));
        break;
      case NodeKind::Action: {
        std::map<std::string, Term> params;
        for (const auto& p : all(subject, "param")) {
          const Term name = required(p, "name");
          params[name.value] = required(p, "value");
        }
        n.action = ActionSpec::make(required(subject, "action").value, std::move(params));
        break;
      }
      case NodeKind::Update:
        for (const auto& t : all(subject, "insert")) append(n.update.insert, patterns(subject, "insert", t));
        for (const auto& t : all(subject, "delete")) append(n.update.remove, patterns(subject, "delete", t));
        if (auto q = one(subject, "bindingQuery")) n.update.binding = query(subject, "bindingQuery", *q);
        break;
    }
    if (n.kind != NodeKind::Sequence && n.kind != NodeKind::Fallback && n.kind != NodeKind::Repeat &&
        !all(subject, "child").empty())
      throw TreeError(id + ": leaf node lists children");

    on_stack_.erase(subject);
    done_.insert(subject);
    return n;
  }

 private:
  std::vector<Term> all(const Term& s, std::string_view p) const {
    std::vector<Term> out;
    auto it = props_.find(s);
    if (it == props_.end()) return out;
    auto [lo, hi] = it->second.equal_range(p == "type" ? rdf_type() : bt_term(p));
    for (auto i = lo; i != hi; ++i) out.push_back(i->second);
    return out;
  }

  std::optional<Term> one(const Term& s, std::string_view p) const {
    auto v = all(s, p);
    if (v.empty()) return std::nullopt;
    if (v.size() > 1) throw TreeError(node_name(s) + ": more than one bt:" + std::string(p));
    return v.front();
  }

  Term required(const Term& s, std::string_view p) const {
    auto v = one(s, p);
    if (!v) throw TreeError(node_name(s) + ": missing bt:" + std::string(p));
    return *v;
  }

  static std::int64_t integer(const Term& s, std::string_view p, const Term& t) {
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(t.value.data(), t.value.data() + t.value.size(), out);
    if (!t.is_literal() || ec != std::errc{} || ptr != t.value.data() + t.value.size() || out < 0 ||
        out > 1000000)
      throw TreeError(node_name(s) + ": bt:" + std::string(p) + " is not a non-negative integer");
    return out;
  }

  NodeKind kind_of(const Term& s) const {
    static const std::pair<std::string_view, NodeKind> kinds[] = {
        {"Sequence", NodeKind::Sequence}, {"Fallback", NodeKind::Fallback}, {"Repeat", NodeKind::Repeat},
        {"Condition", NodeKind::Condition}, {"Action", NodeKind::Action}, {"Update", NodeKind::Update}};
    std::optional<NodeKind> found;
    for (const auto& t : all(s, "type")) {
      for (const auto& [name, kind] : kinds) {
        if (t.value != bt(name)) continue;
        if (found && *found != kind) throw TreeError(node_name(s) + ": more than one node kind");
        found = kind;
      }
    }
    if (!found) throw TreeError(node_name(s) + ": unknown node kind");
    return *found;
  }

  std::vector<Term> children(const Term& s) const {
    std::map<std::int64_t, Term> ordered;
    for (const auto& link : all(s, "child")) {
      const auto idx = integer(s, "index", required(link, "index"));
      if (!ordered.emplace(idx, required(link, "node")).second)
        throw TreeError(node_name(s) + ": duplicate child index " + std::to_string(idx));
    }
    std::vector<Term> out;
    std::int64_t expect = 0;
    for (auto& [idx, t] : ordered) {
      if (idx != expect++) throw TreeError(node_name(s) + ": child indexes must run 0..n-1");
      out.push_back(t);
    }
    return out;
  }

  static rdf::Query query(const Term& s, std::string_view p, const Term& t) {
    try {
      return rdf::parse_query(t.value, embedded_prefixes());
    } catch (const rdf::SyntaxError& e) {
      throw TreeError(node_name(s) + ": malformed bt:" + std::string(p) + ": " + e.what());
    }
  }

  static std::vector<rdf::TriplePattern> patterns(const Term& s, std::string_view p, const Term& t) {
    try {
      return rdf::parse_patterns(t.value, embedded_prefixes());
    } catch (const rdf::SyntaxError& e) {
      throw TreeError(node_name(s) + ": malformed bt:" + std::string(p) + ": " + e.what());
    }
  }

  static void append(std::vector<rdf::TriplePattern>& to, std::vector<rdf::TriplePattern> from) {
    to.insert(to.end(), from.begin(), from.end());
  }

  std::map<Term, std::multimap<Term, Term>> props_;
  std::set<Term> on_stack_;
  std::set<Term> done_;
};

std::string query_text(const rdf::Query& q) {
  std::string out = q.form == rdf::QueryForm::Ask ? "ASK" : "SELECT";
  if (q.form == rdf::QueryForm::Select) {
    if (q.projection.empty()) out += " *";
    for (const auto& v : q.projection) out += " ?" + v;
  }
  if (q.target_graph) out += " FROM " + rdf::to_string(*q.target_graph);
  out += " {";
  for (const auto& p : q.patterns)
    out += " " + rdf::to_string(p.subject) + " " + rdf::to_string(p.predicate) + " " + rdf::to_string(p.object) + " .";
  for (const auto& f : q.filters)
    out += " FILTER(" + rdf::to_string(f.lhs) + " " + std::string(rdf::to_string(f.op)) + " " + rdf::to_string(f.rhs) + ")";
  return out + " }";
}

std::string patterns_text(const std::vector<rdf::TriplePattern>& ps) {
  std::string out;
  for (const auto& p : ps)
    out += rdf::to_string(p.subject) + " " + rdf::to_string(p.predicate) + " " + rdf::to_string(p.object) + " . ";
  return out;
}

}  // namespace

const rdf::PrefixMap& embedded_prefixes() {
  static const rdf::PrefixMap p{{"bt", std::string(vocab::kNs)},
                                {"sl", std::string(scenario::vocab::kNs)},
                                {"perc", "https://streetlab.dev/perception#"},
                                {"rdf", std::string(rdf::rdfns::kNamespace)},
                                {"xsd", std::string(rdf::xsd::kNamespace)}};
  return p;
}

BehaviorTree load_tree(const rdf::Dataset& dataset, const std::string& root) {
  Loader loader(dataset);
  const Term r = root.starts_with("_:") ? Term::blank(root.substr(2)) : Term::iri(root);
  return BehaviorTree(loader.load(r));
}

rdf::Dataset tree_to_dataset(const BehaviorTree& tree, const std::string& graph) {
  rdf::Dataset d;
  const Term g = Term::iri(graph);
  int blank = 0;
  auto node_term = [](const std::string& id) { return id.starts_with("_:") ? Term::blank(id.substr(2)) : Term::iri(id); };
  auto fresh = [&] { return Term::blank("tree" + std::to_string(blank++)); };
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& e = tree.entry(i);
    const Node& n = e.node;
    const Term s = node_term(n.id);
    static const char* kClass[] = {"Sequence", "Fallback", "Repeat", "Condition", "Action", "Update"};
    d.insert({s, rdf_type(), bt_term(kClass[static_cast<int>(n.kind)]), g});
    if (!n.label.empty()) d.insert({s, bt_term("label"), Term::literal(n.label), g});
    for (std::size_t k = 0; k < e.children.size(); ++k) {
      const Term link = fresh();
      d.insert({s, bt_term("child"), link, g});
      d.insert({link, bt_term("index"), Term::integer(static_cast<std::int64_t>(k)), g});
      d.insert({link, bt_term("node"), node_term(tree.entry(e.children[k]).node.id), g});
    }
    if (n.kind == NodeKind::Repeat && n.repeat_count) d.insert({s, bt_term("count"), Term::integer(*n.repeat_count), g});
    if (n.kind == NodeKind::Condition) d.insert({s, bt_term("query"), Term::literal(query_text(*n.query)), g});
    if (n.kind == NodeKind::Action) {
      d.insert({s, bt_term("action"), Term::literal(n.action.name), g});
      for (const auto& [name, value] : n.action.params) {
        const Term p = fresh();
        d.insert({s, bt_term("param"), p, g});
        d.insert({p, bt_term("name"), Term::literal(name), g});
        d.insert({p, bt_term("value"), value, g});
      }
    }
    if (n.kind == NodeKind::Update) {
      if (!n.update.insert.empty()) d.insert({s, bt_term("insert"), Term::literal(patterns_text(n.update.insert)), g});
      if (!n.update.remove.empty()) d.insert({s, bt_term("delete"), Term::literal(patterns_text(n.update.remove)), g});
      if (n.update.binding) d.insert({s, bt_term("bindingQuery"), Term::literal(query_text(*n.update.binding)), g});
    }
  }
  return d;
}

}  // namespace streetlab::behavior
