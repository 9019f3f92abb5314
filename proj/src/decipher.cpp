#include "qdt/decipher.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "qdt/error.hpp"
#include "qdt/tree.hpp"

namespace qdt {

std::vector<Query> derive_queries(const Clue& clue) {
  std::vector<std::size_t> separator_indices;
  for (std::size_t i = 0; i < clue.tokens.size(); ++i) {
    if (is_separator(clue.tokens[i].kind)) separator_indices.push_back(i);
  }
  if (separator_indices.empty()) {
    throw Error(Errc::no_separators, "clue contains no separator");
  }

  std::vector<Query> queries;
  queries.reserve(separator_indices.size());
  for (std::size_t ordinal = 0; ordinal < separator_indices.size(); ++ordinal) {
    Query query;
    query.ordinal = ordinal;
    query.separator_kind = clue.tokens[separator_indices[ordinal]].kind;
    for (std::size_t i = 0; i < clue.tokens.size(); ++i) {
      if (is_separator(clue.tokens[i].kind) && i != separator_indices[ordinal]) {
        continue;  // keep only this query's separator
      }
      if (i == separator_indices[ordinal]) {
        query.separator_index = query.tokens.size();
      }
      query.tokens.push_back(clue.tokens[i]);
    }
    queries.push_back(std::move(query));
  }
  return queries;
}

std::size_t approximate_position(const Query& query) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < query.separator_index && i < query.tokens.size(); ++i) {
    if (!is_separator(query.tokens[i].kind)) ++count;
  }
  return count;
}

namespace {

TokenSeq insert_separator(const TokenSeq& question, std::size_t position,
                          TokenKind kind) {
  TokenSeq rendered;
  rendered.reserve(question.size() + 1);
  rendered.insert(rendered.end(), question.begin(),
                  question.begin() + static_cast<std::ptrdiff_t>(position));
  rendered.push_back(make_token(kind));
  rendered.insert(rendered.end(),
                  question.begin() + static_cast<std::ptrdiff_t>(position),
                  question.end());
  return rendered;
}

}  // namespace

std::vector<CandidateOption> build_options(const Query& query,
                                           const TokenSeq& question,
                                           PipelineNotes* notes) {
  if (question.empty() || !words_only(question)) {
    throw Error(Errc::invalid_input, "question must be a nonempty word sequence");
  }
  const std::size_t slots = question.size() + 1;  // positions 0..|Q|
  std::size_t p = approximate_position(query);
  if (p > question.size()) {
    p = question.size();
    if (notes != nullptr) ++notes->clamped_positions;
  }

  std::size_t first = 0;
  std::size_t count = slots;
  if (slots > 5) {
    // Window of five positions around p, shifted to stay in range.
    first = p <= 2 ? 0 : std::min(p - 2, question.size() - 4);
    count = 5;
  }

  std::vector<CandidateOption> options;
  options.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t position = first + i;
    options.push_back(CandidateOption{
        position, insert_separator(question, position, query.separator_kind)});
  }
  return options;
}

std::vector<double> align_score(const Query& query,
                                const std::vector<CandidateOption>& options,
                                CaseMode mode) {
  std::vector<double> scores;
  scores.reserve(options.size());
  for (const CandidateOption& option : options) {
    scores.push_back(
        -static_cast<double>(edit_distance(query.tokens, option.rendered, mode)));
  }
  return scores;
}

Branch select_branch(const Query& query,
                     const std::vector<CandidateOption>& options,
                     Scorer& scorer) {
  if (options.empty()) {
    throw Error(Errc::invalid_input, "no options to select from");
  }
  std::vector<double> scores = scorer.score(query, options);
  if (scores.size() != options.size()) {
    throw Error(Errc::scorer_failure,
                "scorer returned " + std::to_string(scores.size()) +
                    " scores for " + std::to_string(options.size()) + " options");
  }
  for (double score : scores) {
    if (!std::isfinite(score)) {
      throw Error(Errc::scorer_failure, "scorer returned a non-finite score");
    }
  }

  const std::size_t p = approximate_position(query);
  auto distance_to_p = [&](std::size_t position) {
    return position > p ? position - p : p - position;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < options.size(); ++i) {
    if (scores[i] > scores[best]) {
      best = i;
    } else if (scores[i] == scores[best]) {
      std::size_t di = distance_to_p(options[i].insert_position);
      std::size_t db = distance_to_p(options[best].insert_position);
      if (di < db || (di == db && options[i].insert_position <
                                      options[best].insert_position)) {
        best = i;
      }
    }
  }
  return Branch{options[best].insert_position, query.separator_kind,
                query.ordinal, options[best].rendered};
}

namespace {

std::string issues_summary(const ValidationReport& report) {
  std::string out;
  for (const Issue& issue : report.issues) {
    if (issue.severity != Severity::error) continue;
    if (!out.empty()) out += "; ";
    out += issue.message + " at token " + std::to_string(issue.token_index);
  }
  return out;
}

// Greedy left-to-right repair: drop unmatched brackets, then redundant
// [DES] tokens that would leave an empty description. Repeats until the
// sequence validates or nothing changes.
bool repair_pass(TokenSeq& seq, PipelineNotes* notes) {
  std::vector<bool> drop(seq.size(), false);

  std::vector<std::size_t> open_stack;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i].kind == TokenKind::sep_inql) {
      open_stack.push_back(i);
    } else if (seq[i].kind == TokenKind::sep_inqr) {
      if (open_stack.empty()) {
        drop[i] = true;
      } else {
        open_stack.pop_back();
      }
    }
  }
  for (std::size_t index : open_stack) drop[index] = true;

  // Level-aware scan for [DES] with no content before it, or none after.
  struct Frame {
    bool has_content = false;
  };
  std::vector<Frame> levels(1);
  std::vector<std::size_t> pending_des;  // trailing [DES] per level end
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (drop[i]) continue;
    switch (seq[i].kind) {
      case TokenKind::word:
      case TokenKind::inq_placeholder:
        levels.back().has_content = true;
        break;
      case TokenKind::sep_des:
        if (!levels.back().has_content) {
          drop[i] = true;
        } else {
          // Tentatively fine; drops below if the description after it is empty.
          std::size_t j = i + 1;
          while (j < seq.size() && drop[j]) ++j;
          if (j == seq.size() || seq[j].kind == TokenKind::sep_des ||
              seq[j].kind == TokenKind::sep_inqr) {
            drop[i] = true;
          } else {
            levels.back().has_content = false;
          }
        }
        break;
      case TokenKind::sep_inql: {
        std::size_t j = i + 1;
        while (j < seq.size() && drop[j]) ++j;
        if (j < seq.size() && seq[j].kind == TokenKind::sep_inqr) {
          drop[i] = true;  // empty inner question
          drop[j] = true;
        } else {
          levels.push_back(Frame{});
        }
        break;
      }
      case TokenKind::sep_inqr:
        if (levels.size() > 1) {
          levels.pop_back();
          levels.back().has_content = true;
        }
        break;
    }
  }

  bool changed = false;
  TokenSeq repaired;
  repaired.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (drop[i]) {
      changed = true;
      if (notes != nullptr) ++notes->repair_dropped_tokens;
    } else {
      repaired.push_back(seq[i]);
    }
  }
  seq = std::move(repaired);
  return changed;
}

}  // namespace

TokenSeq merge_branches(const TokenSeq& question,
                        const std::vector<Branch>& branches,
                        const MergeOptions& options, PipelineNotes* notes) {
  for (const Branch& branch : branches) {
    if (branch.insert_position > question.size()) {
      throw Error(Errc::invalid_merge,
                  "branch position " + std::to_string(branch.insert_position) +
                      " exceeds question length");
    }
  }

  std::vector<const Branch*> order;
  order.reserve(branches.size());
  for (const Branch& branch : branches) order.push_back(&branch);
  std::stable_sort(order.begin(), order.end(),
                   [](const Branch* a, const Branch* b) {
                     if (a->insert_position != b->insert_position) {
                       return a->insert_position < b->insert_position;
                     }
                     return a->ordinal < b->ordinal;
                   });

  // Insert right-to-left so earlier word positions stay valid; equal
  // positions end up in ordinal order.
  TokenSeq merged = question;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    merged.insert(
        merged.begin() + static_cast<std::ptrdiff_t>((*it)->insert_position),
        make_token((*it)->separator_kind));
  }

  ValidationReport report = validate(merged, &question);
  if (!report.valid && options.repair) {
    while (!report.valid && repair_pass(merged, notes)) {
      report = validate(merged, &question);
    }
  }
  if (!report.valid) {
    throw Error(Errc::invalid_merge, issues_summary(report));
  }
  return merged;
}

TokenSeq decipher(const TokenSeq& question, const Clue& clue, Scorer& scorer,
                  const MergeOptions& options, PipelineNotes* notes) {
  if (!words_only(question)) {
    throw Error(Errc::invalid_input, "question must contain only word tokens");
  }
  if (count_separators(clue.tokens) == 0) {
    return question;  // atomic: depth-1 tree
  }

  std::vector<Branch> branches;
  for (const Query& query : derive_queries(clue)) {
    std::vector<CandidateOption> candidates = build_options(query, question, notes);
    branches.push_back(select_branch(query, candidates, scorer));
  }
  return merge_branches(question, branches, options, notes);
}

std::pair<TokenSeq, TokenSeq> degrade_to_pair(const TokenSeq& qdt) {
  if (count_separators(qdt) == 0) {
    throw Error(Errc::atomic, "nothing to degrade: no separators");
  }
  QdtTree tree = parse_linear(qdt);

  TokenSeq first;
  TokenSeq second;
  bool found_inner = false;
  for (const DescriptionNode& desc : tree.root.descriptions) {
    for (const Segment& segment : desc.segments) {
      if (!segment.is_inner()) {
        for (const std::string& word : segment.words) {
          first.push_back(make_word(word));
        }
        continue;
      }
      TokenSeq inner = strip_separators(serialize(QdtTree{segment.question()}));
      if (!found_inner) {
        found_inner = true;
        first.push_back(make_token(TokenKind::inq_placeholder));
        second = std::move(inner);
      } else {
        // Any further inner question stays inline as plain text.
        first.insert(first.end(), inner.begin(), inner.end());
      }
    }
  }
  if (found_inner) {
    return {std::move(first), std::move(second)};
  }

  // Conjunction only: split at the first top-level [DES].
  TokenSeq left;
  TokenSeq right;
  for (std::size_t i = 0; i < tree.root.descriptions.size(); ++i) {
    TokenSeq words =
        strip_separators(serialize(QdtTree{QuestionNode{{tree.root.descriptions[i]}}}));
    TokenSeq& target = i == 0 ? left : right;
    target.insert(target.end(), words.begin(), words.end());
  }
  return {std::move(left), std::move(right)};
}

}  // namespace qdt
