#pragma once

#include <map>
#include <set>
#include <span>
#include <vector>

#include "streetlab/rdf/term.hpp"

namespace streetlab::rdf {

/// A set of quads with a per-graph index. Value type: copies are independent
/// snapshots, and one writer at a time may mutate a given instance.
class Dataset {
 public:
  using QuadSet = std::set<Quad>;

  Dataset() = default;
  Dataset(std::initializer_list<Quad> quads);

  /// Returns false when the quad was already present.
  bool insert(Quad q);
  /// Returns false when the quad was absent.
  bool erase(const Quad& q);
  bool contains(const Quad& q) const { return quads_.count(q) != 0; }

  std::size_t size() const { return quads_.size(); }
  bool empty() const { return quads_.empty(); }
  const QuadSet& quads() const { return quads_; }

  /// Graph names in ascending order; the default graph (if non-empty) first.
  std::vector<Term> graph_names() const;
  bool has_graph(const Term& graph) const { return by_graph_.count(graph) != 0; }
  /// Quads of one graph; empty set for an unknown graph.
  const QuadSet& graph(const Term& graph) const;

  void erase_graph(const Term& graph);
  void merge(const Dataset& other);
  void clear();

  /// True when the graph index mirrors the quad set exactly.
  bool index_consistent() const;

  bool operator==(const Dataset& other) const { return quads_ == other.quads_; }

 private:
  QuadSet quads_;
  std::map<Term, QuadSet> by_graph_;
};

/// Deletions first, then insertions. Deleting an absent quad is a no-op.
Dataset apply_update(Dataset dataset, std::span<const Quad> insertions,
                     std::span<const Quad> deletions);

}  // namespace streetlab::rdf
