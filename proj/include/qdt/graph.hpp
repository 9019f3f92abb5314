#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qdt/tree.hpp"

namespace qdt {

// Directed labeled graph used as the edit-distance representation of a
// tree. Nodes are indexed 0..n-1; node 0 is the root question node.
struct LabeledGraph {
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> edges;

  std::size_t node_count() const { return labels.size(); }
  std::size_t edge_count() const { return edges.size(); }
};

// One node per question node ("Q" for the root, "INQ" for inner ones) and
// one per description node (label = its lowercased word sequence, inner
// questions rendered as "[INQ]"). Edges run question -> description in
// description order and description -> inner question.
LabeledGraph to_graph(const QdtTree& tree);

}  // namespace qdt
