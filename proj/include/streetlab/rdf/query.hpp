#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "streetlab/rdf/dataset.hpp"
#include "streetlab/rdf/errors.hpp"
#include "streetlab/rdf/trig.hpp"

namespace streetlab::rdf {

struct Variable {
  std::string name;
  auto operator<=>(const Variable&) const = default;
  bool operator==(const Variable&) const = default;
};

using PatternTerm = std::variant<Term, Variable>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
  bool operator==(const TriplePattern&) const = default;
};

enum class CompareOp { Less, LessEqual, Greater, GreaterEqual, Equal, NotEqual };

std::string_view to_string(CompareOp op);

/// One comparison. Operands are variables or literal constants.
struct FilterExpr {
  CompareOp op = CompareOp::Equal;
  PatternTerm lhs;
  PatternTerm rhs;
  bool operator==(const FilterExpr&) const = default;
};

enum class QueryForm { Ask, Select };

/// Basic graph pattern plus comparison filters, restricted to one graph when
/// target_graph is set. Construct through make() or parse_query(), both of
/// which enforce the structural rules.
struct Query {
  QueryForm form = QueryForm::Ask;
  /// SELECT projection; empty means every pattern variable (first-use order).
  std::vector<std::string> projection;
  std::vector<TriplePattern> patterns;
  std::vector<FilterExpr> filters;
  std::optional<Term> target_graph;

  static Query make(QueryForm form, std::vector<TriplePattern> patterns,
                    std::vector<FilterExpr> filters = {}, std::vector<std::string> projection = {},
                    std::optional<Term> target_graph = std::nullopt);

  /// Throws QueryError when a filter or projection variable is not bound by
  /// any pattern, when there are no patterns, or a position holds a term of
  /// the wrong kind.
  void validate() const;

  /// Variables of the patterns in order of first appearance.
  std::vector<std::string> pattern_variables() const;

  /// Projected variable names (resolves the empty-projection case).
  std::vector<std::string> selected_variables() const;

  /// Substitutes a constant for a variable everywhere (drops it from an
  /// explicit projection). Used to pre-bind ?self in behavior queries.
  Query bind(const std::string& variable, const Term& value) const;

  bool operator==(const Query&) const = default;
};

using Binding = std::map<std::string, Term>;

/// Graphs a query reads when it has no target graph. Empty = all graphs.
struct GraphScope {
  std::vector<Term> graphs;
};

/// SELECT rows, deduplicated, ordered lexicographically by the projected
/// terms. For an ASK query the rows are the (empty) witness bindings.
std::vector<Binding> eval_select(const Dataset& dataset, const Query& query,
                                 const GraphScope& scope = {});
bool eval_ask(const Dataset& dataset, const Query& query, const GraphScope& scope = {});

using QueryResult = std::variant<std::vector<Binding>, bool>;
QueryResult eval_query(const Dataset& dataset, const Query& query, const GraphScope& scope = {});

/// True when the filter holds for fully-resolved operands. Numeric literals
/// (xsd:integer/decimal/double) compare numerically; a numeric against a
/// non-numeric is false for every operator; anything else compares the
/// lexical values as code point strings.
bool compare_terms(const Term& lhs, CompareOp op, const Term& rhs);

/// Parses the query subset:
///   PREFIX p: <ns>
///   ASK [FROM <g>] [WHERE] { patterns... FILTER(?x op v && ...) }
///   SELECT (* | ?a ?b ...) [FROM <g>] [WHERE] { ... }
/// `prefixes` are predeclared; the text may add its own.
Query parse_query(std::string_view text, const PrefixMap& prefixes = {});

/// Parses a bare list of triple patterns ("?s ex:p ?o . ex:a ex:b 1 .").
/// Used for update templates.
std::vector<TriplePattern> parse_patterns(std::string_view text, const PrefixMap& prefixes = {});

std::string to_string(const PatternTerm& t);

}  // namespace streetlab::rdf
