#include "qdt/batch.hpp"

#include <algorithm>

#include "qdt/error.hpp"
#include "qdt/graph.hpp"
#include "qdt/tree.hpp"

namespace qdt::batch {

namespace {

struct TreeExample {
  bool em = false;
  bool depth_match = false;
  double ged_raw = 0.0;
  double ged_normalized = 0.0;
  bool pred_parsed = false;
  bool ged_computed = false;
};

TreeExample evaluate_tree_example(const TokenSeq& pred, const TokenSeq& gold,
                                  const TreeEvalOptions& options) {
  TreeExample out;
  LabeledGraph pred_graph;  // empty when unparseable: GED pays full insertion
  LabeledGraph gold_graph;
  int pred_depth = -1;
  int gold_depth = -2;
  TokenSeq pred_canonical;
  TokenSeq gold_canonical;
  try {
    QdtTree tree = parse_linear(pred);
    pred_canonical = serialize(tree);
    pred_depth = depth(tree);
    pred_graph = to_graph(tree);
    out.pred_parsed = true;
  } catch (const Error&) {
  }
  try {
    QdtTree tree = parse_linear(gold);
    gold_canonical = serialize(tree);
    gold_depth = depth(tree);
    gold_graph = to_graph(tree);
  } catch (const Error&) {
  }
  out.em = out.pred_parsed && !gold_canonical.empty() &&
           seq_equal(pred_canonical, gold_canonical, options.case_mode);
  out.depth_match = pred_depth == gold_depth;
  try {
    GedResult ged = graph_edit_distance(pred_graph, gold_graph, options.costs);
    out.ged_raw = ged.raw;
    out.ged_normalized = ged.normalized;
    out.ged_computed = true;
  } catch (const Error&) {
    out.ged_raw = -1.0;  // over the node bound; excluded from the means
  }
  return out;
}

TreeEvalReport reduce_tree_examples(const std::vector<TreeExample>& examples) {
  TreeEvalReport report;
  report.count = examples.size();
  std::size_t ged_count = 0;
  for (const TreeExample& example : examples) {
    report.per_example_em.push_back(example.em);
    report.per_example_depth_match.push_back(example.depth_match);
    report.per_example_ged.push_back(example.ged_raw);
    if (example.em) report.em += 1.0;
    if (example.depth_match) report.tda += 1.0;
    if (example.ged_computed) {
      report.ged_mean += example.ged_raw;
      report.ged_normalized_mean += example.ged_normalized;
      ++ged_count;
    } else {
      ++report.ged_skipped;
    }
    if (!example.pred_parsed) ++report.unparseable_preds;
  }
  const double n = static_cast<double>(examples.size());
  report.em /= n;
  report.tda /= n;
  if (ged_count > 0) {
    report.ged_mean /= static_cast<double>(ged_count);
    report.ged_normalized_mean /= static_cast<double>(ged_count);
  }
  return report;
}

void check_lengths(std::size_t preds, std::size_t golds) {
  if (preds != golds || preds == 0) {
    throw Error(Errc::length_mismatch,
                "need equal, nonempty prediction and gold lists (" +
                    std::to_string(preds) + " vs " + std::to_string(golds) + ")");
  }
}

}  // namespace

TreeEvalReport evaluate_trees_serial(std::span<const TokenSeq> preds,
                                     std::span<const TokenSeq> golds,
                                     const TreeEvalOptions& options) {
  check_lengths(preds.size(), golds.size());
  std::vector<TreeExample> examples(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    examples[i] = evaluate_tree_example(preds[i], golds[i], options);
  }
  return reduce_tree_examples(examples);
}

TreeEvalReport evaluate_trees_parallel(std::span<const TokenSeq> preds,
                                       std::span<const TokenSeq> golds,
                                       const TreeEvalOptions& options) {
  check_lengths(preds.size(), golds.size());
  std::vector<TreeExample> examples(preds.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(preds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    examples[static_cast<std::size_t>(i)] = evaluate_tree_example(
        preds[static_cast<std::size_t>(i)], golds[static_cast<std::size_t>(i)],
        options);
  }
  return reduce_tree_examples(examples);
}

namespace {

struct SeqExample {
  bool usable = false;  // gold decomposes into two sub-questions
  bool em = false;
  TokenSeq pred_first, pred_second;
  TokenSeq gold_first, gold_second;
};

TokenSeq fold_case(const TokenSeq& seq, CaseMode mode) {
  if (mode == CaseMode::sensitive) return seq;
  TokenSeq out = seq;
  for (Token& token : out) {
    if (token.kind == TokenKind::word) token.text = lower_ascii(token.text);
  }
  return out;
}

SeqExample evaluate_seq_example(const TokenSeq& pred, const TokenSeq& gold,
                                CaseMode mode) {
  SeqExample out;
  std::pair<TokenSeq, TokenSeq> gold_pair;
  try {
    gold_pair = degrade_to_pair(gold);
  } catch (const Error&) {
    return out;  // atomic or invalid gold: excluded from sequence scoring
  }
  out.usable = true;
  std::pair<TokenSeq, TokenSeq> pred_pair;
  try {
    pred_pair = degrade_to_pair(pred);
  } catch (const Error&) {
    pred_pair = {strip_separators(pred), TokenSeq{}};
  }
  out.pred_first = fold_case(pred_pair.first, mode);
  out.pred_second = fold_case(pred_pair.second, mode);
  out.gold_first = fold_case(gold_pair.first, mode);
  out.gold_second = fold_case(gold_pair.second, mode);
  out.em = seq_equal(out.pred_first, out.gold_first, CaseMode::sensitive) &&
           seq_equal(out.pred_second, out.gold_second, CaseMode::sensitive);
  return out;
}

SeqEvalReport reduce_seq_examples(const std::vector<SeqExample>& examples) {
  SeqEvalReport report;
  std::vector<TokenSeq> candidates;
  std::vector<TokenSeq> references;
  double rouge_sum = 0.0;
  for (const SeqExample& example : examples) {
    if (!example.usable) {
      ++report.skipped;
      continue;
    }
    ++report.count;
    report.per_example_em.push_back(example.em);
    if (example.em) report.em += 1.0;
    candidates.push_back(example.pred_first);
    references.push_back(example.gold_first);
    candidates.push_back(example.pred_second);
    references.push_back(example.gold_second);
    rouge_sum += rouge_l(example.pred_first, example.gold_first);
    rouge_sum += rouge_l(example.pred_second, example.gold_second);
  }
  if (report.count == 0) return report;
  report.em /= static_cast<double>(report.count);
  report.bleu = bleu4(candidates, references);
  report.rouge = rouge_sum / static_cast<double>(2 * report.count);
  return report;
}

}  // namespace

SeqEvalReport evaluate_seqs_serial(std::span<const TokenSeq> preds,
                                   std::span<const TokenSeq> golds,
                                   CaseMode mode) {
  check_lengths(preds.size(), golds.size());
  std::vector<SeqExample> examples(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    examples[i] = evaluate_seq_example(preds[i], golds[i], mode);
  }
  return reduce_seq_examples(examples);
}

SeqEvalReport evaluate_seqs_parallel(std::span<const TokenSeq> preds,
                                     std::span<const TokenSeq> golds,
                                     CaseMode mode) {
  check_lengths(preds.size(), golds.size());
  std::vector<SeqExample> examples(preds.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(preds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    examples[static_cast<std::size_t>(i)] = evaluate_seq_example(
        preds[static_cast<std::size_t>(i)], golds[static_cast<std::size_t>(i)],
        mode);
  }
  return reduce_seq_examples(examples);
}

TrainingSet generate_training_set_serial(
    std::span<const DatasetExample> examples, const CorruptionRates& rates,
    std::uint64_t seed) {
  return generate_training_set(examples, rates, seed);
}

TrainingSet generate_training_set_parallel(
    std::span<const DatasetExample> examples, const CorruptionRates& rates,
    std::uint64_t seed) {
  rates.check();
  std::vector<std::vector<TrainingRecord>> per_example(examples.size());
  std::vector<std::string> per_example_diag(examples.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(examples.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto index = static_cast<std::size_t>(i);
    per_example[index] = training_records_for(examples[index], rates, seed,
                                              &per_example_diag[index]);
  }
  TrainingSet out;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (!per_example_diag[i].empty()) {
      out.diagnostics.push_back(std::move(per_example_diag[i]));
    }
    for (TrainingRecord& record : per_example[i]) {
      out.records.push_back(std::move(record));
    }
  }
  return out;
}

namespace {

TokenSeq decipher_one(const TokenSeq& question, const TokenSeq& clue_tokens,
                      CaseMode mode, const MergeOptions& merge,
                      std::string* diagnostic) {
  AlignScorer scorer(mode);
  try {
    return decipher(question, Clue{clue_tokens, question}, scorer, merge);
  } catch (const Error& e) {
    *diagnostic = e.what();
    return question;
  }
}

DecipherBatchResult collect_decipher(std::vector<TokenSeq>&& outputs,
                                     std::vector<std::string>&& diags) {
  DecipherBatchResult result;
  result.outputs = std::move(outputs);
  for (std::size_t i = 0; i < diags.size(); ++i) {
    if (!diags[i].empty()) {
      result.diagnostics.push_back(std::to_string(i) + ": " + diags[i]);
    }
  }
  return result;
}

}  // namespace

DecipherBatchResult decipher_corpus_serial(std::span<const TokenSeq> questions,
                                           std::span<const TokenSeq> clues,
                                           CaseMode mode,
                                           const MergeOptions& merge) {
  check_lengths(questions.size(), clues.size());
  std::vector<TokenSeq> outputs(questions.size());
  std::vector<std::string> diags(questions.size());
  for (std::size_t i = 0; i < questions.size(); ++i) {
    outputs[i] = decipher_one(questions[i], clues[i], mode, merge, &diags[i]);
  }
  return collect_decipher(std::move(outputs), std::move(diags));
}

DecipherBatchResult decipher_corpus_parallel(std::span<const TokenSeq> questions,
                                             std::span<const TokenSeq> clues,
                                             CaseMode mode,
                                             const MergeOptions& merge) {
  check_lengths(questions.size(), clues.size());
  std::vector<TokenSeq> outputs(questions.size());
  std::vector<std::string> diags(questions.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(questions.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto index = static_cast<std::size_t>(i);
    outputs[index] =
        decipher_one(questions[index], clues[index], mode, merge, &diags[index]);
  }
  return collect_decipher(std::move(outputs), std::move(diags));
}

}  // namespace qdt::batch
