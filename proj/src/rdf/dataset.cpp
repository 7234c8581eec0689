#include "streetlab/rdf/dataset.hpp"

namespace streetlab::rdf {

Dataset::Dataset(std::initializer_list<Quad> quads) {
  for (const auto& q : quads) insert(q);
}

bool Dataset::insert(Quad q) {
  check_quad(q);
  auto [it, inserted] = quads_.insert(std::move(q));
  if (inserted) by_graph_[it->graph].insert(*it);
  return inserted;
}

bool Dataset::erase(const Quad& q) {
  if (quads_.erase(q) == 0) return false;
  auto g = by_graph_.find(q.graph);
  g->second.erase(q);
  if (g->second.empty()) by_graph_.erase(g);
  return true;
}

std::vector<Term> Dataset::graph_names() const {
  std::vector<Term> names;
  names.reserve(by_graph_.size());
  for (const auto& [name, _] : by_graph_) names.push_back(name);
  return names;
}

const Dataset::QuadSet& Dataset::graph(const Term& graph) const {
  static const QuadSet kEmpty;
  auto it = by_graph_.find(graph);
  return it == by_graph_.end() ? kEmpty : it->second;
}

void Dataset::erase_graph(const Term& graph) {
  auto it = by_graph_.find(graph);
  if (it == by_graph_.end()) return;
  for (const auto& q : it->second) quads_.erase(q);
  by_graph_.erase(it);
}

void Dataset::merge(const Dataset& other) {
  for (const auto& q : other.quads_) insert(q);
}

void Dataset::clear() {
  quads_.clear();
  by_graph_.clear();
}

bool Dataset::index_consistent() const {
  std::size_t indexed = 0;
  for (const auto& [name, quads] : by_graph_) {
    if (quads.empty()) return false;
    for (const auto& q : quads) {
      if (q.graph != name || !contains(q)) return false;
    }
    indexed += quads.size();
  }
  return indexed == quads_.size();
}

Dataset apply_update(Dataset dataset, std::span<const Quad> insertions,
                     std::span<const Quad> deletions) {
  for (const auto& q : deletions) dataset.erase(q);
  for (const auto& q : insertions) dataset.insert(q);
  return dataset;
}

}  // namespace streetlab::rdf
