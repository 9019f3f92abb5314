// Acceptance suite. Each criterion prints exactly one PASS/FAIL line;
// the binary exits nonzero if any criterion fails. The published-corpus
// check is conditional on QDTREES_FILE pointing at the released data.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "qdt/batch.hpp"
#include "qdt/corruption.hpp"
#include "qdt/dataset.hpp"
#include "qdt/decipher.hpp"
#include "qdt/error.hpp"
#include "qdt/metrics.hpp"
#include "qdt/rng.hpp"
#include "qdt/sampler.hpp"
#include "qdt/sexpr.hpp"
#include "qdt/tree.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace qdt;

namespace {

int g_failures = 0;

void criterion(const char* name, bool pass, const std::string& detail) {
  std::printf("%s %-26s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  if (!pass) ++g_failures;
}

void skip(const char* name, const std::string& reason) {
  std::printf("SKIP %-26s %s\n", name, reason.c_str());
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<TokenSeq> sample_corpus(std::size_t count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<TokenSeq> golds;
  golds.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    golds.push_back(serialize(sample_tree(rng)));
  }
  return golds;
}

// 1. serialize/parse and strip-separators identities over 1,000 random
//    trees, under one second.
void check_grammar_round_trip(const std::vector<TokenSeq>& golds) {
  auto start = std::chrono::steady_clock::now();
  std::size_t round_trip_ok = 0;
  std::size_t strip_ok = 0;
  for (const TokenSeq& gold : golds) {
    if (serialize(parse_linear(gold)) == gold) ++round_trip_ok;
    TokenSeq question = strip_separators(gold);
    if (words_only(question) && validate(gold, &question).valid) ++strip_ok;
  }
  double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << round_trip_ok << "/" << golds.size() << " round trips, " << strip_ok
         << "/" << golds.size() << " strip identities, " << elapsed << " s";
  criterion("grammar-round-trip",
            round_trip_ok == golds.size() && strip_ok == golds.size() &&
                elapsed < 1.0,
            detail.str());
}

// Scores 1.0 for the option equal to the gold branch of the query's
// ordinal, 0.0 elsewhere.
class GoldBranchScorer : public Scorer {
 public:
  explicit GoldBranchScorer(const std::vector<Branch>& golds) : golds_(golds) {}
  std::vector<double> score(const Query& query,
                            const std::vector<CandidateOption>& options) override {
    std::vector<double> scores;
    for (const CandidateOption& option : options) {
      scores.push_back(option.rendered == golds_[query.ordinal].rendered ? 1.0
                                                                         : 0.0);
    }
    return scores;
  }

 private:
  const std::vector<Branch>& golds_;
};

// 2. branch corruption at default rates, decoding with the gold-branch
//    scorer: exact reconstruction whenever every gold position stays
//    inside its option window; window hits at or above 99%.
void check_oracle_reconstruction(const std::vector<TokenSeq>& golds) {
  CorruptionRates rates;
  std::size_t hits = 0;
  std::size_t exact = 0;
  std::size_t hit_failures = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const TokenSeq& gold = golds[i];
    TokenSeq question = strip_separators(gold);
    if (count_separators(gold) == 0) {
      ++hits;
      if (gold == question) ++exact;
      continue;
    }
    Branch whole{0, TokenKind::sep_des, 0, gold};
    TokenSeq clue_tokens =
        corrupt(whole, rates, SplitMix64::derive(20240814, i)).tokens;
    std::vector<Branch> gold_branches = extract_branches(gold);
    Clue clue{clue_tokens, question};

    bool window_hit = true;
    for (const Query& query : derive_queries(clue)) {
      bool found = false;
      for (const CandidateOption& option : build_options(query, question)) {
        if (option.insert_position ==
            gold_branches[query.ordinal].insert_position) {
          found = true;
          break;
        }
      }
      if (!found) {
        window_hit = false;
        break;
      }
    }
    if (!window_hit) continue;
    ++hits;

    GoldBranchScorer scorer(gold_branches);
    try {
      if (decipher(question, clue, scorer) == gold) {
        ++exact;
      } else {
        ++hit_failures;
      }
    } catch (const Error&) {
      ++hit_failures;
    }
  }
  double hit_rate = static_cast<double>(hits) / static_cast<double>(golds.size());
  std::ostringstream detail;
  detail << "window hits " << hits << "/" << golds.size() << " (" << hit_rate * 100
         << "%), exact on hits " << exact << "/" << hits;
  criterion("oracle-reconstruction", hit_failures == 0 && hit_rate >= 0.99,
            detail.str());
}

// 3. deciphering an uncorrupted clue returns it verbatim on every example.
void check_clue_fixed_point(const std::vector<TokenSeq>& golds) {
  AlignScorer scorer;
  std::size_t exact = 0;
  for (const TokenSeq& gold : golds) {
    TokenSeq question = strip_separators(gold);
    try {
      if (decipher(question, Clue{gold, question}, scorer) == gold) ++exact;
    } catch (const Error&) {
    }
  }
  std::ostringstream detail;
  detail << exact << "/" << golds.size() << " exact";
  criterion("clue-fixed-point", exact == golds.size(), detail.str());
}

// 4. the two bundled degraded-clue examples decode to their reference
//    linearizations, and the nested example parses to the documented shape.
void check_reference_examples() {
  AlignScorer scorer;
  bool films_ok = false;
  bool schools_ok = false;
  try {
    films_ok =
        join(decipher(tokenize(fixtures::kFilmsQuestion),
                      Clue{tokenize(fixtures::kFilmsClue),
                           tokenize(fixtures::kFilmsQuestion)},
                      scorer)) == fixtures::kFilmsQdt;
    schools_ok =
        join(decipher(tokenize(fixtures::kSchoolsQuestion),
                      Clue{tokenize(fixtures::kSchoolsClue),
                           tokenize(fixtures::kSchoolsQuestion)},
                      scorer)) == fixtures::kSchoolsQdt;
  } catch (const Error&) {
  }

  QdtTree nested = parse_linear(tokenize(fixtures::kMarlinsQdt));
  bool shape_ok = depth(nested) == 2 && count_description_nodes(nested) == 4 &&
                  count_question_nodes(nested) == 2;

  std::ostringstream detail;
  detail << "conjunction example " << (films_ok ? "ok" : "WRONG")
         << ", composition example " << (schools_ok ? "ok" : "WRONG")
         << ", nested shape " << (shape_ok ? "ok" : "WRONG");
  criterion("reference-examples", films_ok && schools_ok && shape_ok,
            detail.str());
}

// 5. search-based edit distance equals the exhaustive enumerator on every
//    pair of small trees (under ten seconds), and the text metrics match
//    hand-computed values to 1e-9.
void check_metric_oracles() {
  auto start = std::chrono::steady_clock::now();
  std::vector<QdtTree> trees = oracles::enumerate_small_trees(6);
  std::vector<LabeledGraph> graphs;
  graphs.reserve(trees.size());
  for (const QdtTree& tree : trees) graphs.push_back(to_graph(tree));

  GedCosts costs;
  std::size_t mismatches = 0;
  for (const LabeledGraph& a : graphs) {
    for (const LabeledGraph& b : graphs) {
      double search = graph_edit_distance(a, b, costs).raw;
      double enumerated = oracles::brute_force_ged(a, b, costs);
      if (std::abs(search - enumerated) > 1e-9) ++mismatches;
    }
  }
  double elapsed = seconds_since(start);

  // Corpus BLEU fixture; clipped matches and totals counted by hand:
  // n=1: 36/40, n=2: 24/30, n=3: 16/20, n=4: 10/12, lengths 40 vs 48.
  std::vector<std::pair<const char*, const char*>> pair_list = {
      {"the cat sat on the mat", "the cat sat on the mat"},
      {"the cat sat", "the cat sat on the mat"},
      {"a b c d", "a c d e"},
      {"x y", "p q"},
      {"one two three four five", "one two three four five"},
      {"to be or not to be", "to be or not to be that is"},
      {"red green blue", "blue green red"},
      {"jumps over the lazy dog", "the quick brown fox jumps over the lazy dog"},
      {"hello world", "hello world"},
      {"sun moon stars sky", "sun moon stars"},
  };
  std::vector<TokenSeq> candidates;
  std::vector<TokenSeq> references;
  for (const auto& [cand, ref] : pair_list) {
    candidates.push_back(tokenize(cand));
    references.push_back(tokenize(ref));
  }
  double bleu_expected =
      std::exp(1.0 - 48.0 / 40.0) *
      std::exp(0.25 * (std::log(36.0 / 40.0) + std::log(24.0 / 30.0) +
                       std::log(16.0 / 20.0) + std::log(10.0 / 12.0)));
  bool bleu_ok = std::abs(bleu4(candidates, references) - bleu_expected) <= 1e-9;

  // LCS("a b c d", "a c d") = 3 -> R = 1, P = 3/4, beta = 1.2.
  double rouge_expected = (1.0 + 1.44) * 1.0 * 0.75 / (1.0 + 1.44 * 0.75);
  bool rouge_ok =
      std::abs(rouge_l(tokenize("a b c d"), tokenize("a c d")) - rouge_expected) <=
          1e-9 &&
      rouge_l(tokenize("a b"), tokenize("a b")) == 1.0 &&
      rouge_l(tokenize("a b"), tokenize("x y")) == 0.0;

  std::ostringstream detail;
  detail << trees.size() << " trees, " << trees.size() * trees.size()
         << " pairs, " << mismatches << " mismatches, " << elapsed
         << " s; bleu " << (bleu_ok ? "ok" : "WRONG") << ", rouge "
         << (rouge_ok ? "ok" : "WRONG");
  criterion("metric-oracles",
            mismatches == 0 && elapsed < 10.0 && bleu_ok && rouge_ok,
            detail.str());
}

// 6. empirical corruption-action frequencies within +-0.2 percentage
//    points of (1%, 1%, 1%, 97%); separators always untouched.
void check_corruption_statistics(const std::vector<TokenSeq>& golds) {
  CorruptionRates rates;
  SplitMix64 rng(777001);
  const std::size_t draws = 150000;
  std::size_t counts[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < draws; ++i) {
    ++counts[static_cast<std::size_t>(draw_corrupt_action(rng, rates))];
  }
  auto frac = [&](CorruptAction action) {
    return static_cast<double>(counts[static_cast<std::size_t>(action)]) /
           static_cast<double>(draws);
  };
  bool rates_ok = std::abs(frac(CorruptAction::replace) - 0.01) <= 0.002 &&
                  std::abs(frac(CorruptAction::erase) - 0.01) <= 0.002 &&
                  std::abs(frac(CorruptAction::insert_after) - 0.01) <= 0.002 &&
                  std::abs(frac(CorruptAction::keep) - 0.97) <= 0.002;

  std::size_t separator_safe = 0;
  std::size_t with_separators = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (count_separators(golds[i]) == 0) continue;
    ++with_separators;
    Branch whole{0, TokenKind::sep_des, 0, golds[i]};
    Query corrupted = corrupt(whole, rates, SplitMix64::derive(31337, i));
    std::vector<TokenKind> before;
    std::vector<TokenKind> after;
    for (const Token& token : golds[i]) {
      if (token.kind != TokenKind::word) before.push_back(token.kind);
    }
    for (const Token& token : corrupted.tokens) {
      if (token.kind != TokenKind::word) after.push_back(token.kind);
    }
    if (before == after) ++separator_safe;
  }

  std::ostringstream detail;
  detail << "replace " << frac(CorruptAction::replace) * 100 << "%, delete "
         << frac(CorruptAction::erase) * 100 << "%, insert "
         << frac(CorruptAction::insert_after) * 100 << "%, keep "
         << frac(CorruptAction::keep) * 100 << "%; separators intact "
         << separator_safe << "/" << with_separators;
  criterion("corruption-statistics",
            rates_ok && separator_safe == with_separators, detail.str());
}

// 7. the two worked normalization renderings byte-exactly, plus the
//    denormalize-after-normalize identity over random expressions with an
//    injective synthetic map.
void check_normalization() {
  EntityLabelMap map;
  map.add("m.02__x", "Miami Marlins");
  bool entity_ok = normalize(parse_sexpr("m.02__x"), map) == "[Miami Marlins]";
  bool relation_ok =
      normalize(parse_sexpr("location.location.people_born_here"), map) ==
      "[location, location, people born here]";

  auto world = generators::SexprWorld::make(10, 8);
  SplitMix64 rng(424242);
  std::size_t round_trips = 0;
  const std::size_t total = 100;
  for (std::size_t i = 0; i < total; ++i) {
    SExpr expr = generators::random_sexpr(rng, world, 4);
    try {
      SExpr back =
          denormalize(normalize(expr, world.labels), world.labels, world.relations);
      if (back == expr) ++round_trips;
    } catch (const Error&) {
    }
  }

  std::ostringstream detail;
  detail << "entity " << (entity_ok ? "ok" : "WRONG") << ", relation "
         << (relation_ok ? "ok" : "WRONG") << ", round trips " << round_trips
         << "/" << total;
  criterion("normalization", entity_ok && relation_ok && round_trips == total,
            detail.str());
}

// 8a. statistics over a fixed synthetic twenty-record corpus, checked
//     against hand-counted columns.
void check_dataset_stats() {
  struct Spec {
    const char* source;
    const char* split;
    int conj_only;
    int comp_only;
    int both;
    int atomic;
  };
  // 20 records; hand counts: composition 11, conjunction 14, both 6.
  const Spec layout[] = {
      {"CWQ", "train", 4, 2, 3, 0}, {"CWQ", "dev", 1, 0, 0, 1},
      {"CWQ", "test", 0, 0, 2, 0},  {"LC", "train", 3, 0, 0, 0},
      {"LC", "dev", 0, 1, 0, 0},    {"LC", "test", 0, 2, 1, 0},
  };
  std::ostringstream corpus;
  int id = 0;
  auto add = [&](const Spec& spec, const char* question, const char* qdt) {
    corpus << "{\"id\":\"r" << id++ << "\",\"source\":\"" << spec.source
           << "\",\"split\":\"" << spec.split << "\",\"question\":\"" << question
           << "\",\"qdt\":\"" << qdt << "\"}\n";
  };
  for (const Spec& spec : layout) {
    for (int i = 0; i < spec.conj_only; ++i) add(spec, "a b", "a [DES] b");
    for (int i = 0; i < spec.comp_only; ++i) add(spec, "a b", "a [INQL] b [INQR]");
    for (int i = 0; i < spec.both; ++i) {
      add(spec, "a b c", "a [DES] b [INQL] c [INQR]");
    }
    for (int i = 0; i < spec.atomic; ++i) add(spec, "a", "a");
  }

  std::istringstream in(corpus.str());
  LoadResult loaded = load_dataset(in);
  StatsTable table = stats(loaded.records);

  bool ok = loaded.records.size() == 20 && loaded.diagnostics.empty();
  for (const Spec& spec : layout) {
    const StatsRow& row =
        table.cells[static_cast<std::size_t>(parse_source(spec.source))]
                   [static_cast<std::size_t>(parse_split(spec.split))];
    std::size_t expected_total = static_cast<std::size_t>(
        spec.conj_only + spec.comp_only + spec.both + spec.atomic);
    ok = ok && row.total == expected_total &&
         row.composition == static_cast<std::size_t>(spec.comp_only + spec.both) &&
         row.conjunction == static_cast<std::size_t>(spec.conj_only + spec.both) &&
         row.both == static_cast<std::size_t>(spec.both);
  }
  ok = ok && table.total.total == 20 && table.total.composition == 11 &&
       table.total.conjunction == 14 && table.total.both == 6;

  std::ostringstream detail;
  detail << "total " << table.total.total << ", comp " << table.total.composition
         << ", conj " << table.total.conjunction << ", both " << table.total.both;
  criterion("dataset-stats-synthetic", ok, detail.str());
}

// 8b. when the released corpus is available, its totals must match the
//     published accounting (6,607 / 3,308 / 6,067 / 2,768).
void check_published_dataset() {
  const char* path = std::getenv("QDTREES_FILE");
  if (path == nullptr || *path == '\0') {
    skip("dataset-stats-published",
         "set QDTREES_FILE to the released corpus to enable");
    return;
  }
  try {
    LoadResult loaded = load_dataset(std::filesystem::path(path));
    StatsTable table = stats(loaded.records);
    std::ostringstream detail;
    detail << "total " << table.total.total << ", comp "
           << table.total.composition << ", conj " << table.total.conjunction
           << ", both " << table.total.both;
    criterion("dataset-stats-published",
              table.total.total == 6607 && table.total.composition == 3308 &&
                  table.total.conjunction == 6067 && table.total.both == 2768,
              detail.str());
  } catch (const Error& e) {
    criterion("dataset-stats-published", false, e.what());
  }
}

}  // namespace

int main() {
  std::vector<TokenSeq> golds = sample_corpus(1000, 20240814);

  check_grammar_round_trip(golds);
  check_oracle_reconstruction(golds);
  check_clue_fixed_point(golds);
  check_reference_examples();
  check_metric_oracles();
  check_corruption_statistics(golds);
  check_normalization();
  check_dataset_stats();
  check_published_dataset();

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
