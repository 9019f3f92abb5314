#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qdt/error.hpp"
#include "qdt/token.hpp"

namespace qdt {

struct QuestionNode;

// A description is an ordered run of segments. A segment is either a run
// of words or a single inner question; adjacent segments are never both
// text runs. The inner question is boxed in a vector (empty or size 1)
// because the type is recursive.
struct Segment {
  std::vector<std::string> words;
  std::vector<QuestionNode> inner;

  static Segment text(std::vector<std::string> words);
  static Segment inner_question(QuestionNode node);

  bool is_inner() const { return !inner.empty(); }
  const QuestionNode& question() const { return inner.front(); }
};

struct DescriptionNode {
  std::vector<Segment> segments;
};

struct QuestionNode {
  std::vector<DescriptionNode> descriptions;
};

struct QdtTree {
  QuestionNode root;
};

// Grammar:
//   QDT      := DescList
//   DescList := Desc ([DES] Desc)*
//   Desc     := (Word | [INQL] DescList [INQR])+
// Throws Error with code unbalanced_brackets, empty_description or
// stray_placeholder ([INQ] is only legal in rendered sub-question views).
QdtTree parse_linear(const TokenSeq& seq);

// Canonical linearization; exact inverse of parse_linear.
TokenSeq serialize(const QdtTree& tree);

// 1 + deepest inner question; a tree without inner questions has depth 1.
int depth(const QdtTree& tree);

std::size_t count_question_nodes(const QdtTree& tree);
std::size_t count_description_nodes(const QdtTree& tree);

enum class Severity { error, warning };

struct Issue {
  Severity severity = Severity::error;
  Errc code = Errc::validation_failure;
  std::string message;
  std::size_t token_index = 0;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Issue> issues;

  void add(Severity severity, Errc code, std::string message,
           std::size_t token_index);
};

// Structural checks (bracket balance, empty descriptions, stray [INQ]),
// plus the question-preservation check when the original is supplied.
// Never throws; everything is reported.
ValidationReport validate(const TokenSeq& seq,
                          const TokenSeq* original = nullptr,
                          CaseMode mode = CaseMode::insensitive);

}  // namespace qdt
