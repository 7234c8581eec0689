#include "streetlab/rdf/trig.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "lexer.hpp"

namespace streetlab::rdf {

namespace {

using detail::Lexer;
using detail::Tok;
using detail::Token;

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool has_scheme(std::string_view iri) {
  if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (char c : iri) {
    if (c == ':') return true;
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
      return false;
    }
  }
  return false;
}

std::string resolve(const std::string& base, const std::string& iri) {
  if (base.empty() || has_scheme(iri)) return iri;
  if (iri.empty()) return base;
  if (iri[0] == '#') return base.substr(0, base.find('#')) + iri;
  if (iri[0] == '/') {
    auto scheme_end = base.find("://");
    if (scheme_end == std::string::npos) return base + iri;
    auto path_start = base.find('/', scheme_end + 3);
    return base.substr(0, path_start) + iri;
  }
  auto slash = base.rfind('/');
  return slash == std::string::npos ? base + iri : base.substr(0, slash + 1) + iri;
}

class TrigReader {
 public:
  TrigReader(std::string_view text, const ParseOptions& options)
      : lex_(text), blank_prefix_(options.blank_prefix) {}

  Dataset run() {
    while (lex_.peek().type != Tok::End) statement();
    return std::move(out_);
  }

 private:
  Token expect(Tok type, const char* what) {
    Token t = lex_.next();
    if (t.type != type) lex_.fail(t, std::string("expected ") + what + describe(t));
    return t;
  }

  static std::string describe(const Token& t) {
    if (t.type == Tok::End) return ", found end of input";
    return ", found '" + t.text + "'";
  }

  void statement() {
    const Token& t = lex_.peek();
    if (t.type == Tok::AtPrefix) {
      lex_.next();
      prefix_decl();
      expect(Tok::Dot, "'.' after @prefix");
    } else if (t.type == Tok::Keyword && iequals(t.text, "PREFIX")) {
      lex_.next();
      prefix_decl();
    } else if (t.type == Tok::AtBase) {
      lex_.next();
      base_ = resolve(base_, expect(Tok::IriRef, "base IRI").text);
      expect(Tok::Dot, "'.' after @base");
    } else if (t.type == Tok::Keyword && iequals(t.text, "BASE")) {
      lex_.next();
      base_ = resolve(base_, expect(Tok::IriRef, "base IRI").text);
    } else if (t.type == Tok::Keyword && iequals(t.text, "GRAPH")) {
      lex_.next();
      Term label = iri_or_fail();
      expect(Tok::LBrace, "'{'");
      block(label);
    } else if (t.type == Tok::LBrace) {
      lex_.next();
      block(Term::default_graph());
    } else {
      graph_ = Term::default_graph();
      Token start = lex_.peek();
      if (start.type == Tok::IriRef || start.type == Tok::PName) {
        Term subject = iri_or_fail();
        if (lex_.peek().type == Tok::LBrace) {
          lex_.next();
          block(subject);
          return;
        }
        predicate_object_list(subject);
      } else {
        triples_start();
      }
      expect(Tok::Dot, "'.' after triples");
    }
  }

  void prefix_decl() {
    Token name = lex_.next();
    if (name.type != Tok::PName || name.prefix_len + 1 != name.text.size()) {
      lex_.fail(name, "expected prefix name ending in ':'" + describe(name));
    }
    Token iri = expect(Tok::IriRef, "namespace IRI");
    prefixes_[name.text.substr(0, name.prefix_len)] = resolve(base_, iri.text);
  }

  void block(const Term& graph) {
    graph_ = graph;
    while (true) {
      if (lex_.peek().type == Tok::RBrace) {
        lex_.next();
        break;
      }
      triples_start();
      const Token& t = lex_.peek();
      if (t.type == Tok::Dot) {
        lex_.next();
      } else if (t.type != Tok::RBrace) {
        lex_.fail(t, "expected '.' or '}'" + describe(t));
      }
    }
    graph_ = Term::default_graph();
  }

  // subject predicateObjectList | blankNodePropertyList predicateObjectList?
  void triples_start() {
    const Token& t = lex_.peek();
    if (t.type == Tok::LBracket) {
      Term node = blank_node_property_list();
      if (starts_verb(lex_.peek())) predicate_object_list(node);
      return;
    }
    Term subject = subject_term();
    predicate_object_list(subject);
  }

  bool starts_verb(const Token& t) const {
    return t.type == Tok::IriRef || t.type == Tok::PName || (t.type == Tok::Keyword && t.text == "a");
  }

  Term subject_term() {
    Token t = lex_.peek();
    switch (t.type) {
      case Tok::IriRef:
      case Tok::PName: return iri_or_fail();
      case Tok::BlankLabel: lex_.next(); return labeled_blank(t.text);
      default: lex_.fail(t, "expected subject" + describe(t));
    }
  }

  Term blank_node_property_list() {
    expect(Tok::LBracket, "'['");
    Term node = fresh_blank();
    if (lex_.peek().type == Tok::RBracket) {
      lex_.next();
      return node;
    }
    predicate_object_list(node);
    expect(Tok::RBracket, "']'");
    return node;
  }

  void predicate_object_list(const Term& subject) {
    while (true) {
      Term predicate = verb();
      object_list(subject, predicate);
      if (lex_.peek().type != Tok::Semicolon) break;
      while (lex_.peek().type == Tok::Semicolon) lex_.next();
      if (!starts_verb(lex_.peek())) break;
    }
  }

  Term verb() {
    Token t = lex_.peek();
    if (t.type == Tok::Keyword && t.text == "a") {
      lex_.next();
      return Term::iri(std::string(rdfns::kType));
    }
    if (t.type == Tok::IriRef || t.type == Tok::PName) return iri_or_fail();
    lex_.fail(t, "expected predicate" + describe(t));
  }

  void object_list(const Term& subject, const Term& predicate) {
    while (true) {
      Term object = object_term();
      out_.insert(Quad{subject, predicate, std::move(object), graph_});
      if (lex_.peek().type != Tok::Comma) break;
      lex_.next();
    }
  }

  Term object_term() {
    Token t = lex_.peek();
    switch (t.type) {
      case Tok::IriRef:
      case Tok::PName: return iri_or_fail();
      case Tok::BlankLabel: lex_.next(); return labeled_blank(t.text);
      case Tok::LBracket: return blank_node_property_list();
      case Tok::LParen: lex_.fail(t, "RDF collections are not supported");
      case Tok::String: {
        lex_.next();
        const Token& after = lex_.peek();
        if (after.type == Tok::LangTag) {
          std::string tag = lex_.next().text;
          return Term::lang_literal(t.text, tag);
        }
        if (after.type == Tok::DoubleCaret) {
          lex_.next();
          Term dt = iri_or_fail();
          return Term::literal(t.text, dt.value);
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
        [[fallthrough]];
      default: lex_.fail(t, "expected object" + describe(t));
    }
  }

  Term iri_or_fail() {
    Token t = lex_.next();
    if (t.type == Tok::IriRef) return Term::iri(resolve(base_, t.text));
    if (t.type == Tok::PName) {
      std::string prefix = t.text.substr(0, t.prefix_len);
      auto it = prefixes_.find(prefix);
      if (it == prefixes_.end()) lex_.fail(t, "unknown prefix '" + prefix + "'");
      return Term::iri(it->second + t.text.substr(t.prefix_len + 1));
    }
    lex_.fail(t, "expected IRI" + describe(t));
  }

  Term labeled_blank(const std::string& label) {
    auto it = blank_labels_.find(label);
    if (it != blank_labels_.end()) return it->second;
    Term node = fresh_blank();
    blank_labels_.emplace(label, node);
    return node;
  }

  Term fresh_blank() { return Term::blank(blank_prefix_ + std::to_string(blank_counter_++)); }

  Lexer lex_;
  Dataset out_;
  PrefixMap prefixes_;
  std::string base_;
  Term graph_;
  std::string blank_prefix_;
  std::size_t blank_counter_ = 0;
  std::unordered_map<std::string, Term> blank_labels_;
};

bool is_safe_local(std::string_view local) {
  if (local.empty()) return false;
  auto first = static_cast<unsigned char>(local.front());
  if (!std::isalnum(first) && first != '_') return false;
  return std::all_of(local.begin(), local.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-';
  });
}

bool matches_number(std::string_view s, bool need_dot, bool need_exp) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  bool dot = false;
  if (i < s.size() && s[i] == '.') {
    dot = true;
    ++i;
    std::size_t frac = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++frac;
    if (frac == 0) return false;
    digits += frac;
  }
  if (digits == 0) return false;
  bool exp = false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    exp = true;
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t ed = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++ed;
    if (ed == 0) return false;
  }
  if (i != s.size()) return false;
  if (need_exp) return exp;
  return !exp && dot == need_dot;
}

class TrigWriter {
 public:
  explicit TrigWriter(const PrefixMap& prefixes) : prefixes_(prefixes) {}

  std::string run(const Dataset& dataset) {
    std::string out;
    for (const auto& [name, ns] : prefixes_) {
      out += "@prefix " + name + ": <" + ns + "> .\n";
    }
    bool first_block = prefixes_.empty();
    for (const Term& graph : dataset.graph_names()) {
      if (!first_block) out += '\n';
      first_block = false;
      const bool named = !graph.is_default_graph();
      if (named) out += iri(graph.value) + " {\n";
      for (const Quad& q : dataset.graph(graph)) {
        if (named) out += "  ";
        out += term(q.subject);
        out += ' ';
        out += q.predicate.value == rdfns::kType ? std::string("a") : iri(q.predicate.value);
        out += ' ';
        out += term(q.object);
        out += " .\n";
      }
      if (named) out += "}\n";
    }
    return out;
  }

 private:
  std::string iri(const std::string& value) const {
    const std::string* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& [name, ns] : prefixes_) {
      if (ns.size() > best_len && value.size() > ns.size() && value.compare(0, ns.size(), ns) == 0 &&
          is_safe_local(std::string_view(value).substr(ns.size()))) {
        best = &name;
        best_len = ns.size();
      }
    }
    if (best) return *best + ":" + value.substr(best_len);
    std::string out = "<";
    for (char c : value) {
      auto u = static_cast<unsigned char>(c);
      if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
          c == '^' || c == '`' || c == '\\') {
        static constexpr char kHex[] = "0123456789ABCDEF";
        out += "\\u00";
        out += kHex[(u >> 4) & 0xF];
        out += kHex[u & 0xF];
      } else {
        out += c;
      }
    }
    out += '>';
    return out;
  }

  std::string term(const Term& t) {
    switch (t.kind) {
      case TermKind::Iri: return iri(t.value);
      case TermKind::Blank: {
        auto [it, inserted] = blanks_.try_emplace(t.value, "");
        if (inserted) it->second = "_:b" + std::to_string(blanks_.size() - 1);
        return it->second;
      }
      case TermKind::Literal: {
        if (t.language.empty()) {
          if (t.datatype == xsd::kInteger && matches_number(t.value, false, false)) return t.value;
          if (t.datatype == xsd::kDecimal && matches_number(t.value, true, false)) return t.value;
          if (t.datatype == xsd::kDouble && matches_number(t.value, false, true)) return t.value;
          if (t.datatype == xsd::kBoolean && (t.value == "true" || t.value == "false")) {
            return t.value;
          }
        }
        Term plain = t;
        plain.datatype.clear();
        std::string out = to_string(plain);
        if (!t.datatype.empty()) out += "^^" + iri(t.datatype);
        return out;
      }
      case TermKind::DefaultGraph: break;
    }
    return {};
  }

  const PrefixMap& prefixes_;
  std::unordered_map<std::string, std::string> blanks_;
};

}  // namespace

Dataset parse_trig(std::string_view text, const ParseOptions& options) {
  return TrigReader(text, options).run();
}

std::string serialize_trig(const Dataset& dataset, const PrefixMap& prefixes) {
  return TrigWriter(prefixes).run(dataset);
}

}  // namespace streetlab::rdf
