#include "qdt/graph.hpp"

#include "qdt/token.hpp"

namespace qdt {

namespace {

std::string description_label(const DescriptionNode& desc) {
  std::string label;
  auto append = [&](std::string_view piece) {
    if (!label.empty()) label.push_back(' ');
    label += piece;
  };
  for (const Segment& segment : desc.segments) {
    if (segment.is_inner()) {
      append(kInqPlaceholder);
    } else {
      for (const std::string& word : segment.words) {
        append(lower_ascii(word));
      }
    }
  }
  return label;
}

int add_question(const QuestionNode& node, bool root, LabeledGraph& graph) {
  int question_id = static_cast<int>(graph.labels.size());
  graph.labels.emplace_back(root ? "Q" : "INQ");
  for (const DescriptionNode& desc : node.descriptions) {
    int desc_id = static_cast<int>(graph.labels.size());
    graph.labels.push_back(description_label(desc));
    graph.edges.emplace_back(question_id, desc_id);
    for (const Segment& segment : desc.segments) {
      if (segment.is_inner()) {
        int inner_id = add_question(segment.question(), false, graph);
        graph.edges.emplace_back(desc_id, inner_id);
      }
    }
  }
  return question_id;
}

}  // namespace

LabeledGraph to_graph(const QdtTree& tree) {
  LabeledGraph graph;
  add_question(tree.root, true, graph);
  return graph;
}

}  // namespace qdt
