#include "qdt/tree.hpp"

#include <algorithm>
#include <utility>

namespace qdt {

Segment Segment::text(std::vector<std::string> words) {
  Segment segment;
  segment.words = std::move(words);
  return segment;
}

Segment Segment::inner_question(QuestionNode node) {
  Segment segment;
  segment.inner.push_back(std::move(node));
  return segment;
}

namespace {

std::string at_index(std::size_t index) {
  return " at token " + std::to_string(index);
}

class Parser {
 public:
  explicit Parser(const TokenSeq& seq) : seq_(seq) {}

  QuestionNode parse_top() {
    QuestionNode root = parse_desc_list();
    if (pos_ < seq_.size()) {
      // The only way desc-list parsing stops early is an unmatched [INQR].
      throw Error(Errc::unbalanced_brackets,
                  "unmatched " + std::string(kSepInqR) + at_index(pos_));
    }
    return root;
  }

 private:
  const Token* peek() const { return pos_ < seq_.size() ? &seq_[pos_] : nullptr; }

  QuestionNode parse_desc_list() {
    QuestionNode node;
    node.descriptions.push_back(parse_desc());
    while (const Token* token = peek()) {
      if (token->kind != TokenKind::sep_des) break;
      ++pos_;
      node.descriptions.push_back(parse_desc());
    }
    return node;
  }

  DescriptionNode parse_desc() {
    DescriptionNode desc;
    std::vector<std::string> run;
    auto flush = [&] {
      if (!run.empty()) desc.segments.push_back(Segment::text(std::move(run)));
      run.clear();
    };
    while (const Token* token = peek()) {
      if (token->kind == TokenKind::word) {
        run.push_back(token->text);
        ++pos_;
      } else if (token->kind == TokenKind::sep_inql) {
        std::size_t open_index = pos_;
        ++pos_;
        QuestionNode inner = parse_desc_list();
        const Token* close = peek();
        if (close == nullptr || close->kind != TokenKind::sep_inqr) {
          throw Error(Errc::unbalanced_brackets,
                      "unclosed " + std::string(kSepInqL) + at_index(open_index));
        }
        ++pos_;
        flush();
        desc.segments.push_back(Segment::inner_question(std::move(inner)));
      } else if (token->kind == TokenKind::inq_placeholder) {
        throw Error(Errc::stray_placeholder,
                    std::string(kInqPlaceholder) +
                        " is not valid in a linearization" + at_index(pos_));
      } else {
        break;  // [DES] or [INQR] terminates the description
      }
    }
    flush();
    if (desc.segments.empty()) {
      throw Error(Errc::empty_description, "empty description" + at_index(pos_));
    }
    return desc;
  }

  const TokenSeq& seq_;
  std::size_t pos_ = 0;
};

void serialize_question(const QuestionNode& node, TokenSeq& out);

void serialize_desc(const DescriptionNode& desc, TokenSeq& out) {
  for (const Segment& segment : desc.segments) {
    if (segment.is_inner()) {
      out.push_back(make_token(TokenKind::sep_inql));
      serialize_question(segment.question(), out);
      out.push_back(make_token(TokenKind::sep_inqr));
    } else {
      for (const std::string& word : segment.words) {
        out.push_back(make_word(word));
      }
    }
  }
}

void serialize_question(const QuestionNode& node, TokenSeq& out) {
  for (std::size_t i = 0; i < node.descriptions.size(); ++i) {
    if (i > 0) out.push_back(make_token(TokenKind::sep_des));
    serialize_desc(node.descriptions[i], out);
  }
}

int question_depth(const QuestionNode& node) {
  int deepest = 0;
  for (const DescriptionNode& desc : node.descriptions) {
    for (const Segment& segment : desc.segments) {
      if (segment.is_inner()) {
        deepest = std::max(deepest, question_depth(segment.question()));
      }
    }
  }
  return 1 + deepest;
}

void count_nodes(const QuestionNode& node, std::size_t& questions,
                 std::size_t& descriptions) {
  ++questions;
  for (const DescriptionNode& desc : node.descriptions) {
    ++descriptions;
    for (const Segment& segment : desc.segments) {
      if (segment.is_inner()) {
        count_nodes(segment.question(), questions, descriptions);
      }
    }
  }
}

}  // namespace

QdtTree parse_linear(const TokenSeq& seq) {
  Parser parser(seq);
  return QdtTree{parser.parse_top()};
}

TokenSeq serialize(const QdtTree& tree) {
  TokenSeq out;
  serialize_question(tree.root, out);
  return out;
}

int depth(const QdtTree& tree) { return question_depth(tree.root); }

std::size_t count_question_nodes(const QdtTree& tree) {
  std::size_t questions = 0, descriptions = 0;
  count_nodes(tree.root, questions, descriptions);
  return questions;
}

std::size_t count_description_nodes(const QdtTree& tree) {
  std::size_t questions = 0, descriptions = 0;
  count_nodes(tree.root, questions, descriptions);
  return descriptions;
}

void ValidationReport::add(Severity severity, Errc code, std::string message,
                           std::size_t token_index) {
  if (severity == Severity::error) valid = false;
  issues.push_back(Issue{severity, code, std::move(message), token_index});
}

ValidationReport validate(const TokenSeq& seq, const TokenSeq* original,
                          CaseMode mode) {
  ValidationReport report;

  // One frame per open nesting level: whether the current description has
  // content yet, how many inner questions it holds, and where the level's
  // opening bracket sits.
  struct Frame {
    bool has_content = false;
    std::size_t inner_count = 0;
    std::size_t open_index = 0;
  };
  std::vector<Frame> levels(1);

  for (std::size_t i = 0; i < seq.size(); ++i) {
    Frame& frame = levels.back();
    switch (seq[i].kind) {
      case TokenKind::word:
        frame.has_content = true;
        break;
      case TokenKind::inq_placeholder:
        report.add(Severity::error, Errc::stray_placeholder,
                   std::string(kInqPlaceholder) + " is not valid in a linearization",
                   i);
        frame.has_content = true;  // avoid a cascading empty-description report
        break;
      case TokenKind::sep_des:
        if (!frame.has_content) {
          report.add(Severity::error, Errc::empty_description,
                     "empty description", i);
        }
        frame.has_content = false;
        frame.inner_count = 0;
        break;
      case TokenKind::sep_inql:
        levels.push_back(Frame{false, 0, i});
        break;
      case TokenKind::sep_inqr:
        if (levels.size() == 1) {
          report.add(Severity::error, Errc::unbalanced_brackets,
                     "unmatched " + std::string(kSepInqR), i);
          break;
        }
        if (!levels.back().has_content) {
          report.add(Severity::error, Errc::empty_description,
                     "empty description", i);
        }
        levels.pop_back();
        levels.back().has_content = true;
        if (++levels.back().inner_count == 2) {
          report.add(Severity::warning, Errc::validation_failure,
                     "description contains more than one inner question", i);
        }
        break;
    }
  }

  while (levels.size() > 1) {
    report.add(Severity::error, Errc::unbalanced_brackets,
               "unclosed " + std::string(kSepInqL), levels.back().open_index);
    levels.pop_back();
  }
  if (!levels.back().has_content) {
    report.add(Severity::error, Errc::empty_description,
               seq.empty() ? "empty linearization" : "empty description",
               seq.size());
  }

  if (original != nullptr) {
    TokenSeq stripped = strip_separators(seq);
    if (!seq_equal(stripped, *original, mode)) {
      report.add(Severity::error, Errc::question_mismatch,
                 "separator-stripped sequence does not equal the original "
                 "question (\"" +
                     join(stripped) + "\" vs \"" + join(*original) + "\")",
                 0);
    }
  }

  return report;
}

}  // namespace qdt
