#include "streetlab/rdf/query.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "lexer.hpp"

namespace streetlab::rdf {

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Less: return "<";
    case CompareOp::LessEqual: return "<=";
    case CompareOp::Greater: return ">";
    case CompareOp::GreaterEqual: return ">=";
    case CompareOp::Equal: return "=";
    case CompareOp::NotEqual: return "!=";
  }
  return "?";
}

std::string to_string(const PatternTerm& t) {
  if (const auto* v = std::get_if<Variable>(&t)) return "?" + v->name;
  return to_string(std::get<Term>(t));
}

Query Query::make(QueryForm form, std::vector<TriplePattern> patterns,
                  std::vector<FilterExpr> filters, std::vector<std::string> projection,
                  std::optional<Term> target_graph) {
  Query q;
  q.form = form;
  q.patterns = std::move(patterns);
  q.filters = std::move(filters);
  q.projection = std::move(projection);
  q.target_graph = std::move(target_graph);
  q.validate();
  return q;
}

std::vector<std::string> Query::pattern_variables() const {
  std::vector<std::string> vars;
  auto note = [&](const PatternTerm& t) {
    if (const auto* v = std::get_if<Variable>(&t)) {
      if (std::find(vars.begin(), vars.end(), v->name) == vars.end()) vars.push_back(v->name);
    }
  };
  for (const auto& p : patterns) {
    note(p.subject);
    note(p.predicate);
    note(p.object);
  }
  return vars;
}

std::vector<std::string> Query::selected_variables() const {
  if (form == QueryForm::Ask) return {};
  return projection.empty() ? pattern_variables() : projection;
}

void Query::validate() const {
  if (patterns.empty()) throw QueryError("query has no triple patterns");
  const auto vars = pattern_variables();
  auto bound = [&](const std::string& name) {
    return std::find(vars.begin(), vars.end(), name) != vars.end();
  };
  for (const auto& p : patterns) {
    if (const auto* s = std::get_if<Term>(&p.subject); s && !s->is_iri() && !s->is_blank()) {
      throw QueryError("pattern subject must be a variable or IRI: " + to_string(p.subject));
    }
    if (const auto* pr = std::get_if<Term>(&p.predicate); pr && !pr->is_iri()) {
      throw QueryError("pattern predicate must be a variable or IRI: " + to_string(p.predicate));
    }
    if (const auto* o = std::get_if<Term>(&p.object); o && o->is_default_graph()) {
      throw QueryError("pattern object is empty");
    }
  }
  for (const auto& f : filters) {
    for (const PatternTerm* operand : {&f.lhs, &f.rhs}) {
      if (const auto* v = std::get_if<Variable>(operand)) {
        if (!bound(v->name)) throw QueryError("filter variable ?" + v->name + " is not bound by any pattern");
      } else if (std::get<Term>(*operand).is_default_graph()) {
        throw QueryError("filter operand is empty");
      }
    }
  }
  for (const auto& name : projection) {
    if (!bound(name)) throw QueryError("projected variable ?" + name + " is not bound by any pattern");
  }
  if (target_graph && !target_graph->is_iri()) throw QueryError("target graph must be an IRI");
}

Query Query::bind(const std::string& variable, const Term& value) const {
  Query out = *this;
  auto subst = [&](PatternTerm& t) {
    if (const auto* v = std::get_if<Variable>(&t); v && v->name == variable) t = value;
  };
  for (auto& p : out.patterns) {
    subst(p.subject);
    subst(p.predicate);
    subst(p.object);
  }
  for (auto& f : out.filters) {
    subst(f.lhs);
    subst(f.rhs);
  }
  std::erase(out.projection, variable);
  return out;
}

bool compare_terms(const Term& lhs, CompareOp op, const Term& rhs) {
  const auto ln = numeric_value(lhs);
  const auto rn = numeric_value(rhs);
  int cmp;
  if (ln && rn) {
    if (*ln < *rn) {
      cmp = -1;
    } else if (*ln > *rn) {
      cmp = 1;
    } else if (*ln == *rn) {
      cmp = 0;
    } else {
      return false;  // NaN
    }
  } else if (ln || rn) {
    return false;
  } else {
    const int c = lhs.value.compare(rhs.value);
    cmp = c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  switch (op) {
    case CompareOp::Less: return cmp < 0;
    case CompareOp::LessEqual: return cmp <= 0;
    case CompareOp::Greater: return cmp > 0;
    case CompareOp::GreaterEqual: return cmp >= 0;
    case CompareOp::Equal: return cmp == 0;
    case CompareOp::NotEqual: return cmp != 0;
  }
  return false;
}

namespace {

class Evaluator {
 public:
  Evaluator(const Dataset& dataset, const Query& query, const GraphScope& scope)
      : query_(query), selected_(query.selected_variables()) {
    auto take = [&](const Dataset::QuadSet& quads) {
      for (const auto& q : quads) triples_.push_back(&q);
    };
    if (query.target_graph) {
      take(dataset.graph(*query.target_graph));
    } else if (!scope.graphs.empty()) {
      std::set<Term> seen;
      for (const auto& g : scope.graphs) {
        if (seen.insert(g).second) take(dataset.graph(g));
      }
    } else {
      take(dataset.quads());
    }
  }

  void run(bool stop_at_first) {
    stop_at_first_ = stop_at_first;
    Binding b;
    solve(0, b);
  }

  bool found() const { return found_; }

  std::vector<Binding> rows() const {
    std::vector<Binding> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) {
      Binding b;
      for (std::size_t i = 0; i < selected_.size(); ++i) b.emplace(selected_[i], row[i]);
      out.push_back(std::move(b));
    }
    return out;
  }

 private:
  static bool unify(const PatternTerm& pt, const Term& term, Binding& b,
                    std::vector<std::string>& newly_bound) {
    if (const auto* c = std::get_if<Term>(&pt)) return *c == term;
    const auto& name = std::get<Variable>(pt).name;
    auto it = b.find(name);
    if (it != b.end()) return it->second == term;
    b.emplace(name, term);
    newly_bound.push_back(name);
    return true;
  }

  const Term& resolve(const PatternTerm& t, const Binding& b) const {
    if (const auto* c = std::get_if<Term>(&t)) return *c;
    return b.at(std::get<Variable>(t).name);
  }

  void solve(std::size_t i, Binding& b) {
    if (stop_at_first_ && found_) return;
    if (i == query_.patterns.size()) {
      for (const auto& f : query_.filters) {
        if (!compare_terms(resolve(f.lhs, b), f.op, resolve(f.rhs, b))) return;
      }
      found_ = true;
      std::vector<Term> row;
      row.reserve(selected_.size());
      for (const auto& name : selected_) row.push_back(b.at(name));
      rows_.insert(std::move(row));
      return;
    }
    const auto& p = query_.patterns[i];
    std::vector<std::string> newly_bound;
    for (const Quad* q : triples_) {
      newly_bound.clear();
      if (unify(p.subject, q->subject, b, newly_bound) &&
          unify(p.predicate, q->predicate, b, newly_bound) &&
          unify(p.object, q->object, b, newly_bound)) {
        solve(i + 1, b);
      }
      for (const auto& name : newly_bound) b.erase(name);
      if (stop_at_first_ && found_) return;
    }
  }

  const Query& query_;
  std::vector<std::string> selected_;
  std::vector<const Quad*> triples_;
  std::set<std::vector<Term>> rows_;
  bool found_ = false;
  bool stop_at_first_ = false;
};

using detail::Lexer;
using detail::Tok;
using detail::Token;

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

class QueryParser {
 public:
  QueryParser(std::string_view text, const PrefixMap& prefixes) : lex_(text), prefixes_(prefixes) {}

  Query query() {
    prologue();
    Query q;
    Token form = lex_.next();
    if (form.type == Tok::Keyword && iequals(form.text, "ASK")) {
      q.form = QueryForm::Ask;
    } else if (form.type == Tok::Keyword && iequals(form.text, "SELECT")) {
      q.form = QueryForm::Select;
      if (lex_.peek().type == Tok::Keyword && iequals(lex_.peek().text, "DISTINCT")) lex_.next();
      if (lex_.peek().type == Tok::Star) {
        lex_.next();
      } else {
        while (lex_.peek().type == Tok::Var) q.projection.push_back(lex_.next().text);
        if (q.projection.empty()) lex_.fail(lex_.peek(), "expected '*' or variables after SELECT");
      }
    } else {
      lex_.fail(form, "expected ASK or SELECT");
    }
    if (lex_.peek().type == Tok::Keyword && iequals(lex_.peek().text, "FROM")) {
      lex_.next();
      q.target_graph = iri();
    }
    if (lex_.peek().type == Tok::Keyword && iequals(lex_.peek().text, "WHERE")) lex_.next();
    expect(Tok::LBrace, "'{'");
    while (lex_.peek().type != Tok::RBrace) {
      const Token& t = lex_.peek();
      if (t.type == Tok::End) lex_.fail(t, "unterminated group, expected '}'");
      if (t.type == Tok::Keyword && iequals(t.text, "FILTER")) {
        lex_.next();
        filter(q.filters);
        continue;
      }
      triples(q.patterns);
      if (lex_.peek().type == Tok::Dot) lex_.next();
    }
    lex_.next();
    if (lex_.peek().type != Tok::End) lex_.fail(lex_.peek(), "unexpected text after query");
    try {
      q.validate();
    } catch (const QueryError& e) {
      lex_.fail(form, e.what());
    }
    return q;
  }

  std::vector<TriplePattern> patterns_only() {
    prologue();
    std::vector<TriplePattern> out;
    while (lex_.peek().type != Tok::End) {
      triples(out);
      const Token& t = lex_.peek();
      if (t.type == Tok::Dot) {
        lex_.next();
      } else if (t.type != Tok::End) {
        lex_.fail(t, "expected '.' between patterns");
      }
    }
    return out;
  }

 private:
  Token expect(Tok type, const char* what) {
    Token t = lex_.next();
    if (t.type != type) lex_.fail(t, std::string("expected ") + what);
    return t;
  }

  void prologue() {
    while (true) {
      const Token& t = lex_.peek();
      if (t.type == Tok::AtPrefix || (t.type == Tok::Keyword && iequals(t.text, "PREFIX"))) {
        const bool at_form = t.type == Tok::AtPrefix;
        lex_.next();
        Token name = lex_.next();
        if (name.type != Tok::PName || name.prefix_len + 1 != name.text.size()) {
          lex_.fail(name, "expected prefix name ending in ':'");
        }
        prefixes_[name.text.substr(0, name.prefix_len)] = expect(Tok::IriRef, "namespace IRI").text;
        if (at_form) expect(Tok::Dot, "'.'");
      } else {
        break;
      }
    }
  }

  Term iri() {
    Token t = lex_.next();
    if (t.type == Tok::IriRef) return Term::iri(t.text);
    if (t.type == Tok::PName) return expand(t);
    lex_.fail(t, "expected IRI");
  }

  Term expand(const Token& t) {
    std::string prefix = t.text.substr(0, t.prefix_len);
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) lex_.fail(t, "unknown prefix '" + prefix + "'");
    return Term::iri(it->second + t.text.substr(t.prefix_len + 1));
  }

  PatternTerm node(bool predicate_position) {
    Token t = lex_.peek();
    switch (t.type) {
      case Tok::Var: lex_.next(); return Variable{t.text};
      case Tok::IriRef:
      case Tok::PName: return iri();
      case Tok::BlankLabel:
      case Tok::LBracket: lex_.fail(t, "blank nodes are not supported in queries");
      default: break;
    }
    if (predicate_position) {
      if (t.type == Tok::Keyword && t.text == "a") {
        lex_.next();
        return Term::iri(std::string(rdfns::kType));
      }
      lex_.fail(t, "expected predicate");
    }
    if (auto lit = literal()) return *lit;
    lex_.fail(t, "expected term or variable");
  }

  std::optional<Term> literal() {
    Token t = lex_.peek();
    switch (t.type) {
      case Tok::String: {
        lex_.next();
        if (lex_.peek().type == Tok::LangTag) return Term::lang_literal(t.text, lex_.next().text);
        if (lex_.peek().type == Tok::DoubleCaret) {
          lex_.next();
          const bool ops = lex_.operator_mode();
          lex_.set_operator_mode(false);
          Token dt = lex_.next();
          lex_.set_operator_mode(ops);
          if (dt.type == Tok::IriRef) return Term::literal(t.text, dt.text);
          if (dt.type == Tok::PName) return Term::literal(t.text, expand(dt).value);
          lex_.fail(dt, "expected datatype IRI");
        }
        return Term::literal(t.text);
      }
      case Tok::Integer: lex_.next(); return Term::literal(t.text, std::string(xsd::kInteger));
      case Tok::Decimal: lex_.next(); return Term::literal(t.text, std::string(xsd::kDecimal));
      case Tok::Double: lex_.next(); return Term::literal(t.text, std::string(xsd::kDouble));
      case Tok::Keyword:
        if (t.text == "true" || t.text == "false") {
          lex_.next();
          return Term::boolean(t.text == "true");
        }
        return std::nullopt;
      default: return std::nullopt;
    }
  }

  void triples(std::vector<TriplePattern>& out) {
    PatternTerm subject = node(false);
    while (true) {
      PatternTerm predicate = node(true);
      while (true) {
        out.push_back(TriplePattern{subject, predicate, node(false)});
        if (lex_.peek().type != Tok::Comma) break;
        lex_.next();
      }
      if (lex_.peek().type != Tok::Semicolon) break;
      while (lex_.peek().type == Tok::Semicolon) lex_.next();
      const Token& t = lex_.peek();
      if (t.type != Tok::Var && t.type != Tok::IriRef && t.type != Tok::PName &&
          !(t.type == Tok::Keyword && t.text == "a")) {
        break;
      }
    }
  }

  void filter(std::vector<FilterExpr>& out) {
    expect(Tok::LParen, "'(' after FILTER");
    lex_.set_operator_mode(true);
    while (true) {
      FilterExpr f;
      f.lhs = operand();
      Token op = lex_.next();
      if (op.type != Tok::Op || op.text == "&&") lex_.fail(op, "expected comparison operator");
      if (op.text == "<") {
        f.op = CompareOp::Less;
      } else if (op.text == "<=") {
        f.op = CompareOp::LessEqual;
      } else if (op.text == ">") {
        f.op = CompareOp::Greater;
      } else if (op.text == ">=") {
        f.op = CompareOp::GreaterEqual;
      } else if (op.text == "=") {
        f.op = CompareOp::Equal;
      } else {
        f.op = CompareOp::NotEqual;
      }
      f.rhs = operand();
      out.push_back(std::move(f));
      const Token& t = lex_.peek();
      if (t.type == Tok::Op && t.text == "&&") {
        lex_.next();
        continue;
      }
      break;
    }
    lex_.set_operator_mode(false);
    expect(Tok::RParen, "')' closing FILTER");
  }

  PatternTerm operand() {
    const Token& t = lex_.peek();
    if (t.type == Tok::Var) return Variable{lex_.next().text};
    if (t.type == Tok::PName) return expand(lex_.next());
    if (auto lit = literal()) return *lit;
    lex_.fail(lex_.peek(), "expected variable or constant in FILTER");
  }

  Lexer lex_;
  PrefixMap prefixes_;
};

}  // namespace

std::vector<Binding> eval_select(const Dataset& dataset, const Query& query, const GraphScope& scope) {
  Evaluator ev(dataset, query, scope);
  ev.run(false);
  return ev.rows();
}

bool eval_ask(const Dataset& dataset, const Query& query, const GraphScope& scope) {
  Evaluator ev(dataset, query, scope);
  ev.run(true);
  return ev.found();
}

QueryResult eval_query(const Dataset& dataset, const Query& query, const GraphScope& scope) {
  if (query.form == QueryForm::Ask) return eval_ask(dataset, query, scope);
  return eval_select(dataset, query, scope);
}

Query parse_query(std::string_view text, const PrefixMap& prefixes) {
  return QueryParser(text, prefixes).query();
}

std::vector<TriplePattern> parse_patterns(std::string_view text, const PrefixMap& prefixes) {
  return QueryParser(text, prefixes).patterns_only();
}

}  // namespace streetlab::rdf
