#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace streetlab::rdf {

namespace xsd {
inline constexpr std::string_view kNamespace = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kDouble = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view kBoolean = "http://www.w3.org/2001/XMLSchema#boolean";
}  // namespace xsd

namespace rdfns {
inline constexpr std::string_view kNamespace = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kLangString =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}  // namespace rdfns

enum class TermKind : std::uint8_t { DefaultGraph, Iri, Blank, Literal };

/// An RDF term. The DefaultGraph kind only ever appears in the graph slot of
/// a Quad and marks a triple that belongs to the unnamed graph.
///
/// A literal carries at most one of datatype / language. An empty datatype
/// on a literal means a simple (xsd:string) literal.
struct Term {
  TermKind kind = TermKind::DefaultGraph;
  std::string value;
  std::string datatype;
  std::string language;

  static Term default_graph() { return {}; }
  static Term iri(std::string value);
  static Term blank(std::string label);
  static Term literal(std::string lexical, std::string datatype = {});
  static Term lang_literal(std::string lexical, std::string language);
  static Term integer(std::int64_t v);
  static Term number(double v);
  static Term boolean(bool v);

  bool is_default_graph() const { return kind == TermKind::DefaultGraph; }
  bool is_iri() const { return kind == TermKind::Iri; }
  bool is_blank() const { return kind == TermKind::Blank; }
  bool is_literal() const { return kind == TermKind::Literal; }

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;
};

/// N-Triples style rendering, used for diagnostics and golden output.
std::string to_string(const Term& t);

/// Numeric value of an xsd:integer / xsd:decimal / xsd:double literal.
/// Returns nullopt for every other term, including typed literals whose
/// lexical form does not parse.
std::optional<double> numeric_value(const Term& t);

/// Shortest decimal form that reads back to exactly `v`.
std::string format_double(double v);

struct Quad {
  Term subject;
  Term predicate;
  Term object;
  Term graph;

  auto operator<=>(const Quad&) const = default;
  bool operator==(const Quad&) const = default;
};

/// Throws std::invalid_argument unless the quad satisfies the positional
/// rules (IRI predicate, non-literal subject, graph IRI or default).
void check_quad(const Quad& q);

std::string to_string(const Quad& q);

}  // namespace streetlab::rdf
