#include <doctest.h>

#include "qdt/corruption.hpp"
#include "qdt/decipher.hpp"
#include "qdt/error.hpp"
#include "qdt/metrics.hpp"
#include "qdt/rng.hpp"
#include "qdt/sampler.hpp"
#include "qdt/tree.hpp"
#include "support/fixtures.hpp"

using namespace qdt;

namespace {

Clue make_clue(const char* clue_text, const char* question_text) {
  return Clue{tokenize(clue_text), tokenize(question_text)};
}

// Scores 1.0 for the option matching a fixed target, 0.0 elsewhere.
class TargetScorer : public Scorer {
 public:
  explicit TargetScorer(std::vector<TokenSeq> targets)
      : targets_(std::move(targets)) {}

  std::vector<double> score(const Query& query,
                            const std::vector<CandidateOption>& options) override {
    std::vector<double> scores;
    for (const CandidateOption& option : options) {
      scores.push_back(option.rendered == targets_.at(query.ordinal) ? 1.0 : 0.0);
    }
    return scores;
  }

 private:
  std::vector<TokenSeq> targets_;
};

class BrokenScorer : public Scorer {
 public:
  std::vector<double> score(const Query&,
                            const std::vector<CandidateOption>&) override {
    return {1.0};  // wrong length for any multi-option call
  }
};

}  // namespace

TEST_CASE("derive_queries keeps one separator at a time") {
  Clue clue = make_clue("a [DES] b [INQL] c [INQR]", "a b c");
  std::vector<Query> queries = derive_queries(clue);
  REQUIRE(queries.size() == 3);
  CHECK(join(queries[0].tokens) == "a [DES] b c");
  CHECK(join(queries[1].tokens) == "a b [INQL] c");
  CHECK(join(queries[2].tokens) == "a b c [INQR]");
  CHECK(queries[1].separator_kind == TokenKind::sep_inql);
  CHECK(queries[2].ordinal == 2);

  Clue films = make_clue(fixtures::kFilmsClue, fixtures::kFilmsQuestion);
  std::vector<Query> film_queries = derive_queries(films);
  REQUIRE(film_queries.size() == 2);
  CHECK(join(film_queries[0].tokens) ==
        "what films [DES] featuring swift have netflix_id numbers above");
  CHECK(join(film_queries[1].tokens) ==
        "what films featuring swift [DES] have netflix_id numbers above");

  Clue single = make_clue("a [DES] b", "a b");
  std::vector<Query> one = derive_queries(single);
  REQUIRE(one.size() == 1);
  CHECK(one[0].tokens == single.tokens);

  CHECK_THROWS_WITH_AS(derive_queries(make_clue("a b", "a b")),
                       doctest::Contains("no separator"), Error);
}

TEST_CASE("approximate_position counts tokens before the separator") {
  Clue clue = make_clue("What movie [DES] is great", "What movie is great");
  CHECK(approximate_position(derive_queries(clue)[0]) == 2);

  Clue front = make_clue("[DES] a b", "a b");
  CHECK(approximate_position(derive_queries(front)[0]) == 0);

  Clue back = make_clue("a b c [DES]", "a b c");
  CHECK(approximate_position(derive_queries(back)[0]) == 3);
}

TEST_CASE("build_options windows five positions around the estimate") {
  TokenSeq question = tokenize("q0 q1 q2 q3 q4 q5 q6 q7 q8 q9");

  auto positions = [&](const char* clue_text) {
    Query query = derive_queries(make_clue(clue_text, "ignored"))[0];
    std::vector<std::size_t> out;
    for (const CandidateOption& option : build_options(query, question)) {
      out.push_back(option.insert_position);
    }
    return out;
  };

  CHECK(positions("a b [DES] rest of it") ==
        std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(positions("[DES] a b") == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(positions("a b c d e f g h i j k l [DES]") ==
        std::vector<std::size_t>{6, 7, 8, 9, 10});

  TokenSeq tiny = tokenize("x y");
  Query query = derive_queries(make_clue("x [DES] y", "x y"))[0];
  std::vector<CandidateOption> options = build_options(query, tiny);
  REQUIRE(options.size() == 3);
  CHECK(options[0].insert_position == 0);
  CHECK(options[2].insert_position == 2);

  for (const CandidateOption& option : build_options(query, question)) {
    CHECK(strip_separators(option.rendered) == question);
  }
}

TEST_CASE("build_options clamps oversized estimates and reports them") {
  PipelineNotes notes;
  Query query = derive_queries(
      make_clue("a b c d e f g h i j k l m n o p q r s t [DES]", "ignored"))[0];
  TokenSeq question = tokenize("q0 q1 q2 q3 q4 q5");
  std::vector<CandidateOption> options = build_options(query, question, &notes);
  CHECK(notes.clamped_positions == 1);
  CHECK(options.back().insert_position == 6);
}

TEST_CASE("align_score prefers the faithful option") {
  TokenSeq question = tokenize(fixtures::kFilmsQuestion);
  Clue clue = make_clue(fixtures::kFilmsClue, fixtures::kFilmsQuestion);
  std::vector<Query> queries = derive_queries(clue);

  std::vector<CandidateOption> options = build_options(queries[0], question);
  std::vector<double> scores = align_score(queries[0], options);
  REQUIRE(scores.size() == options.size());
  // The uncorrupted head makes position 2 strictly best for the first
  // separator.
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  CHECK(options[best].insert_position == 2);

  // An option identical to the query scores 0 (maximal).
  Clue exact = make_clue("a [DES] b c", "a b c");
  Query query = derive_queries(exact)[0];
  std::vector<CandidateOption> exact_options =
      build_options(query, tokenize("a b c"));
  std::vector<double> exact_scores = align_score(query, exact_options);
  CHECK(exact_scores[1] == 0.0);
  CHECK(exact_options[1].insert_position == 1);
  for (std::size_t i = 0; i < exact_scores.size(); ++i) {
    if (i != 1) CHECK(exact_scores[i] < 0.0);
  }
}

TEST_CASE("align_score case mode changes word comparisons") {
  Query query = derive_queries(
      Clue{tokenize("A [DES] B"), tokenize("a b")})[0];
  std::vector<CandidateOption> options = build_options(query, tokenize("a b"));
  std::vector<double> insensitive = align_score(query, options);
  std::vector<double> sensitive =
      align_score(query, options, CaseMode::sensitive);
  CHECK(insensitive[1] == 0.0);   // A/a and B/b fold together
  CHECK(sensitive[1] == -2.0);    // both words mismatch exactly
}

TEST_CASE("uncorrupted queries score their own position strictly best") {
  SplitMix64 rng(21);
  AlignScorer scorer;
  for (int i = 0; i < 1000; ++i) {
    QdtTree tree = sample_tree(rng);
    TokenSeq gold = serialize(tree);
    if (count_separators(gold) == 0) continue;
    TokenSeq question = strip_separators(gold);
    Clue clue{gold, question};
    for (const Query& query : derive_queries(clue)) {
      std::vector<CandidateOption> options = build_options(query, question);
      std::vector<double> scores = align_score(query, options);
      for (std::size_t k = 0; k < options.size(); ++k) {
        if (options[k].rendered == query.tokens) {
          for (std::size_t j = 0; j < options.size(); ++j) {
            if (j != k) CHECK(scores[k] > scores[j]);
          }
        }
      }
    }
  }
}

TEST_CASE("select_branch takes the argmax with deterministic ties") {
  TokenSeq question = tokenize("a b c d e f");
  Query query = derive_queries(make_clue("a b [DES] c d e f", "a b c d e f"))[0];
  std::vector<CandidateOption> options = build_options(query, question);

  TargetScorer oracle({options[3].rendered});
  Branch branch = select_branch(query, options, oracle);
  CHECK(branch.insert_position == options[3].insert_position);
  CHECK(branch.rendered == options[3].rendered);

  // All-equal scores fall back to the position closest to the estimate.
  class FlatScorer : public Scorer {
   public:
    std::vector<double> score(const Query&,
                              const std::vector<CandidateOption>& options) override {
      return std::vector<double>(options.size(), 0.5);
    }
  } flat;
  CHECK(select_branch(query, options, flat).insert_position == 2);

  std::vector<CandidateOption> single = {options[0]};
  TargetScorer never({tokenize("unused")});
  CHECK(select_branch(query, single, never).insert_position ==
        options[0].insert_position);

  BrokenScorer broken;
  CHECK_THROWS_AS(select_branch(query, options, broken), Error);
}

TEST_CASE("merge_branches inserts right to left and validates") {
  TokenSeq question = tokenize(fixtures::kFilmsQuestion);
  std::vector<Branch> branches;
  branches.push_back(Branch{2, TokenKind::sep_des, 0, {}});
  branches.push_back(Branch{5, TokenKind::sep_des, 1, {}});
  CHECK(join(merge_branches(question, branches)) == fixtures::kFilmsQdt);

  CHECK(merge_branches(question, {}) == question);

  std::vector<Branch> unbalanced{Branch{3, TokenKind::sep_inqr, 0, {}}};
  CHECK_THROWS_AS(merge_branches(question, unbalanced), Error);

  // Equal positions keep clue order.
  TokenSeq small = tokenize("a b");
  std::vector<Branch> nested;
  nested.push_back(Branch{1, TokenKind::sep_inql, 0, {}});
  nested.push_back(Branch{2, TokenKind::sep_inqr, 1, {}});
  nested.push_back(Branch{1, TokenKind::sep_des, 2, {}});
  // [INQL]@1 then [INQR]@2 then [DES]@1: sorted by (position, ordinal)
  // gives a [INQL] [DES] ... which is invalid; with repair the stray
  // bracket pair collapses.
  CHECK_THROWS_AS(merge_branches(small, nested), Error);
}

TEST_CASE("merge repair drops unmatched brackets and empty descriptions") {
  TokenSeq question = tokenize("a b c");
  std::vector<Branch> branches{Branch{1, TokenKind::sep_inqr, 0, {}}};
  PipelineNotes notes;
  TokenSeq repaired =
      merge_branches(question, branches, MergeOptions{true}, &notes);
  CHECK(join(repaired) == "a b c");
  CHECK(notes.repair_dropped_tokens == 1);

  std::vector<Branch> trailing{Branch{3, TokenKind::sep_des, 0, {}}};
  CHECK(join(merge_branches(question, trailing, MergeOptions{true})) == "a b c");
}

TEST_CASE("decipher reproduces the degraded-clue examples") {
  AlignScorer scorer;
  TokenSeq films = decipher(tokenize(fixtures::kFilmsQuestion),
                            make_clue(fixtures::kFilmsClue, fixtures::kFilmsQuestion),
                            scorer);
  CHECK(join(films) == fixtures::kFilmsQdt);

  TokenSeq schools =
      decipher(tokenize(fixtures::kSchoolsQuestion),
               make_clue(fixtures::kSchoolsClue, fixtures::kSchoolsQuestion),
               scorer);
  CHECK(join(schools) == fixtures::kSchoolsQdt);
}

TEST_CASE("decipher with a separator-free clue returns the question") {
  AlignScorer scorer;
  TokenSeq question = tokenize("plain words only");
  CHECK(decipher(question, make_clue("any words", "plain words only"), scorer) ==
        question);
}

TEST_CASE("decipher output always preserves the question") {
  SplitMix64 rng(31);
  AlignScorer scorer;
  CorruptionRates rates;
  for (int i = 0; i < 300; ++i) {
    QdtTree tree = sample_tree(rng);
    TokenSeq gold = serialize(tree);
    TokenSeq question = strip_separators(gold);
    if (question.empty()) continue;
    Branch whole{0, TokenKind::sep_des, 0, gold};
    TokenSeq clue_tokens = corrupt(whole, rates, rng.next()).tokens;
    try {
      TokenSeq output = decipher(question, Clue{clue_tokens, question}, scorer);
      CHECK(strip_separators(output) == question);
      CHECK(count_separators(output) == count_separators(clue_tokens));
    } catch (const Error& e) {
      CHECK(e.code() == Errc::invalid_merge);
    }
  }
}

TEST_CASE("clue fixed point: an exact clue comes back verbatim") {
  SplitMix64 rng(41);
  AlignScorer scorer;
  for (int i = 0; i < 1000; ++i) {
    QdtTree tree = sample_tree(rng);
    TokenSeq gold = serialize(tree);
    TokenSeq question = strip_separators(gold);
    if (question.empty()) continue;
    TokenSeq output = decipher(question, Clue{gold, question}, scorer);
    CHECK(output == gold);
  }
}

TEST_CASE("degrade_to_pair produces the two-sub-question view") {
  auto [first, second] = degrade_to_pair(tokenize(fixtures::kSchoolsQdt));
  CHECK(join(first) == "What schools were attended by [INQ]");
  CHECK(join(second) ==
        "the characted of focus in the film `` William & Kate ''");

  auto [a, b] = degrade_to_pair(tokenize("a [DES] b"));
  CHECK(join(a) == "a");
  CHECK(join(b) == "b");

  auto [left, right] = degrade_to_pair(tokenize("a [DES] b [DES] c"));
  CHECK(join(left) == "a");
  CHECK(join(right) == "b c");

  CHECK_THROWS_AS(degrade_to_pair(tokenize("plain question")), Error);
}
