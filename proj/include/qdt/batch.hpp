#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qdt/corruption.hpp"
#include "qdt/decipher.hpp"
#include "qdt/metrics.hpp"
#include "qdt/token.hpp"

namespace qdt::batch {

// Corpus kernels come in two flavors: a serial reference and an
// OpenMP-parallel version. Per-example work is pure, results are reduced
// in input order, so both produce identical output; the tests hold them
// to that.

struct TreeEvalOptions {
  CaseMode case_mode = CaseMode::insensitive;
  GedCosts costs{};
};

struct TreeEvalReport {
  std::size_t count = 0;
  double em = 0.0;
  double tda = 0.0;
  double ged_mean = 0.0;             // raw, over examples within the node bound
  double ged_normalized_mean = 0.0;  // normalized by larger-graph size
  std::size_t unparseable_preds = 0;
  std::size_t ged_skipped = 0;  // pairs over the edit-distance node bound
  std::vector<bool> per_example_em;
  std::vector<bool> per_example_depth_match;
  std::vector<double> per_example_ged;  // -1 for skipped pairs
};

TreeEvalReport evaluate_trees_serial(std::span<const TokenSeq> preds,
                                     std::span<const TokenSeq> golds,
                                     const TreeEvalOptions& options = {});
TreeEvalReport evaluate_trees_parallel(std::span<const TokenSeq> preds,
                                       std::span<const TokenSeq> golds,
                                       const TreeEvalOptions& options = {});

struct SeqEvalReport {
  std::size_t count = 0;      // examples with a decomposable gold
  std::size_t skipped = 0;    // atomic golds
  double em = 0.0;
  double bleu = 0.0;          // corpus BLEU-4 over sub-questions
  double rouge = 0.0;         // mean ROUGE-L over sub-questions
  std::vector<bool> per_example_em;
};

SeqEvalReport evaluate_seqs_serial(std::span<const TokenSeq> preds,
                                   std::span<const TokenSeq> golds,
                                   CaseMode mode = CaseMode::insensitive);
SeqEvalReport evaluate_seqs_parallel(std::span<const TokenSeq> preds,
                                     std::span<const TokenSeq> golds,
                                     CaseMode mode = CaseMode::insensitive);

TrainingSet generate_training_set_serial(
    std::span<const DatasetExample> examples, const CorruptionRates& rates,
    std::uint64_t seed);
TrainingSet generate_training_set_parallel(
    std::span<const DatasetExample> examples, const CorruptionRates& rates,
    std::uint64_t seed);

struct DecipherBatchResult {
  std::vector<TokenSeq> outputs;          // question unchanged on failure
  std::vector<std::string> diagnostics;   // "<index>: <error>"
};

// Batch decomposition with the built-in alignment scorer (pure, so safe
// to parallelize). External process scorers are driven serially through
// qdt::decipher by the caller.
DecipherBatchResult decipher_corpus_serial(std::span<const TokenSeq> questions,
                                           std::span<const TokenSeq> clues,
                                           CaseMode mode = CaseMode::insensitive,
                                           const MergeOptions& merge = {});
DecipherBatchResult decipher_corpus_parallel(
    std::span<const TokenSeq> questions, std::span<const TokenSeq> clues,
    CaseMode mode = CaseMode::insensitive, const MergeOptions& merge = {});

}  // namespace qdt::batch
