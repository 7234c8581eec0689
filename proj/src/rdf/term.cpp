#include "streetlab/rdf/term.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace streetlab::rdf {

Term Term::iri(std::string value) {
  Term t;
  t.kind = TermKind::Iri;
  t.value = std::move(value);
  return t;
}

Term Term::blank(std::string label) {
  Term t;
  t.kind = TermKind::Blank;
  t.value = std::move(label);
  return t;
}

Term Term::literal(std::string lexical, std::string datatype) {
  Term t;
  t.kind = TermKind::Literal;
  t.value = std::move(lexical);
  if (datatype != xsd::kString) t.datatype = std::move(datatype);
  return t;
}

Term Term::lang_literal(std::string lexical, std::string language) {
  Term t;
  t.kind = TermKind::Literal;
  t.value = std::move(lexical);
  t.language = std::move(language);
  return t;
}

Term Term::integer(std::int64_t v) { return literal(std::to_string(v), std::string(xsd::kInteger)); }

Term Term::number(double v) { return literal(format_double(v), std::string(xsd::kDouble)); }

Term Term::boolean(bool v) { return literal(v ? "true" : "false", std::string(xsd::kBoolean)); }

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "INF" : "-INF";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

namespace {

void append_escaped(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static constexpr char kHex[] = "0123456789ABCDEF";
          out += "\\u00";
          out += kHex[(c >> 4) & 0xF];
          out += kHex[c & 0xF];
        } else {
          out += c;
        }
    }
  }
}

}  // namespace

std::string to_string(const Term& t) {
  switch (t.kind) {
    case TermKind::DefaultGraph: return "";
    case TermKind::Iri: return "<" + t.value + ">";
    case TermKind::Blank: return "_:" + t.value;
    case TermKind::Literal: {
      std::string out = "\"";
      append_escaped(out, t.value);
      out += '"';
      if (!t.language.empty()) {
        out += '@';
        out += t.language;
      } else if (!t.datatype.empty()) {
        out += "^^<";
        out += t.datatype;
        out += '>';
      }
      return out;
    }
  }
  return {};
}

std::optional<double> numeric_value(const Term& t) {
  if (!t.is_literal()) return std::nullopt;
  if (t.datatype != xsd::kInteger && t.datatype != xsd::kDecimal && t.datatype != xsd::kDouble) {
    return std::nullopt;
  }
  std::string_view s = t.value;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  if (t.datatype == xsd::kDouble) {
    if (s == "INF") return HUGE_VAL;
    if (s == "-INF") return -HUGE_VAL;
  }
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  if (t.datatype != xsd::kDouble) {
    // integer / decimal lexical forms never carry an exponent
    if (s.find_first_of("eE") != std::string_view::npos) return std::nullopt;
    if (t.datatype == xsd::kInteger && s.find('.') != std::string_view::npos) return std::nullopt;
  }
  return v;
}

void check_quad(const Quad& q) {
  if (!q.subject.is_iri() && !q.subject.is_blank()) {
    throw std::invalid_argument("quad subject must be an IRI or blank node: " + to_string(q));
  }
  if (!q.predicate.is_iri()) {
    throw std::invalid_argument("quad predicate must be an IRI: " + to_string(q));
  }
  if (q.object.is_default_graph()) {
    throw std::invalid_argument("quad object must be a term: " + to_string(q));
  }
  if (!q.graph.is_iri() && !q.graph.is_default_graph()) {
    throw std::invalid_argument("quad graph must be an IRI or the default graph: " + to_string(q));
  }
  if (q.object.is_literal() && !q.object.datatype.empty() && !q.object.language.empty()) {
    throw std::invalid_argument("literal carries both datatype and language: " + to_string(q));
  }
}

std::string to_string(const Quad& q) {
  std::string out = to_string(q.subject) + " " + to_string(q.predicate) + " " + to_string(q.object);
  if (!q.graph.is_default_graph()) out += " " + to_string(q.graph);
  out += " .";
  return out;
}

}  // namespace streetlab::rdf
