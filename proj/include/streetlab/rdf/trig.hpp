#pragma once

#include <map>
#include <string>
#include <string_view>

#include "streetlab/rdf/dataset.hpp"
#include "streetlab/rdf/errors.hpp"

namespace streetlab::rdf {

/// prefix name (without ':') -> namespace IRI
using PrefixMap = std::map<std::string, std::string>;

struct ParseOptions {
  /// Blank nodes are relabeled <prefix>0, <prefix>1, ... in order of first
  /// appearance, which keeps labels from different documents apart when
  /// their datasets are merged.
  std::string blank_prefix = "b";
};

/// Reads the TriG subset: @prefix/PREFIX, @base/BASE, default-graph triples,
/// `<g> { ... }` and `GRAPH <g> { ... }` blocks, `{ ... }` default blocks,
/// predicate/object lists, `[ ... ]` blank nodes, `a`, and plain, typed,
/// language-tagged and numeric/boolean literals. Collections are rejected.
///
/// Throws SyntaxError with the position of the offending token.
Dataset parse_trig(std::string_view text, const ParseOptions& options = {});

/// Byte-stable TriG: prefixes sorted by name, the default graph first, then
/// named graphs in ascending IRI order, one triple per line in (s, p, o)
/// order. Blank nodes are written as _:b0, _:b1, ... in order of first use.
std::string serialize_trig(const Dataset& dataset, const PrefixMap& prefixes = {});

}  // namespace streetlab::rdf
