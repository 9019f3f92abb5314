#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qdt/token.hpp"

namespace qdt {

// A clue is a preliminary decomposition: possibly a corrupted copy of the
// question with separators inserted. Nothing ties its words to the
// question's words.
struct Clue {
  TokenSeq tokens;
  TokenSeq source_question;
};

// A clue reduced to exactly one separator.
struct Query {
  TokenSeq tokens;
  std::size_t separator_index = 0;  // position of the separator in tokens
  TokenKind separator_kind = TokenKind::sep_des;
  std::size_t ordinal = 0;  // occurrence index of the separator in the clue
};

// The original question with one candidate separator insertion.
struct CandidateOption {
  std::size_t insert_position = 0;  // word index in [0, |Q|]
  TokenSeq rendered;
};

// The selected option for a query.
struct Branch {
  std::size_t insert_position = 0;
  TokenKind separator_kind = TokenKind::sep_des;
  std::size_t ordinal = 0;
  TokenSeq rendered;
};

// Position-selection interface. Implementations must return one finite
// score per option, higher is better, and be deterministic.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::vector<double> score(const Query& query,
                                    const std::vector<CandidateOption>& options) = 0;
};

// Counters for the events the pipeline is allowed to smooth over.
struct PipelineNotes {
  std::size_t clamped_positions = 0;
  std::size_t repair_dropped_tokens = 0;
};

// One query per separator, in clue order; each keeps only its own
// separator. Throws Error(no_separators) when the clue has none.
std::vector<Query> derive_queries(const Clue& clue);

// Number of non-separator tokens preceding the separator.
std::size_t approximate_position(const Query& query);

// Five candidate insertion positions centered on the approximate position,
// shifted (not truncated) at the question boundaries; fewer only when the
// question has fewer than five slots.
std::vector<CandidateOption> build_options(const Query& query,
                                           const TokenSeq& question,
                                           PipelineNotes* notes = nullptr);

// Default scorer: negated token edit distance between the query and each
// rendered option, words compared case-insensitively by default.
std::vector<double> align_score(const Query& query,
                                const std::vector<CandidateOption>& options,
                                CaseMode mode = CaseMode::insensitive);

class AlignScorer : public Scorer {
 public:
  explicit AlignScorer(CaseMode mode = CaseMode::insensitive) : mode_(mode) {}
  std::vector<double> score(const Query& query,
                            const std::vector<CandidateOption>& options) override {
    return align_score(query, options, mode_);
  }

 private:
  CaseMode mode_;
};

// Argmax over scores; ties go to the option closest to the approximate
// position, then to the smaller insert position. Throws
// Error(scorer_failure) on a malformed score vector.
Branch select_branch(const Query& query,
                     const std::vector<CandidateOption>& options,
                     Scorer& scorer);

struct MergeOptions {
  bool repair = false;  // drop unmatched brackets / collapse empty descriptions
};

// Inserts every branch separator into the question (stable order: position
// ascending, then clue ordinal) and validates the result. Throws
// Error(invalid_merge) when validation fails and repair is off.
TokenSeq merge_branches(const TokenSeq& question,
                        const std::vector<Branch>& branches,
                        const MergeOptions& options = {},
                        PipelineNotes* notes = nullptr);

// Full pipeline: derive queries, build options, select a branch per query,
// merge. A clue without separators leaves the question unchanged. The
// output always strips back to the input question.
TokenSeq decipher(const TokenSeq& question, const Clue& clue, Scorer& scorer,
                  const MergeOptions& options = {},
                  PipelineNotes* notes = nullptr);

// Two-sub-question view: the top level with the first inner question
// collapsed to [INQ], paired with that inner question's text; for pure
// conjunctions, the split at the first top-level [DES]. Throws
// Error(atomic) when the input has no separator.
std::pair<TokenSeq, TokenSeq> degrade_to_pair(const TokenSeq& qdt);

}  // namespace qdt
