#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdt/graph.hpp"
#include "qdt/token.hpp"
#include "qdt/tree.hpp"

namespace qdt {

// Edit costs for graph edit distance. Substituting equal labels is free;
// differing labels cost node_substitute.
struct GedCosts {
  double node_insert = 1.0;
  double node_delete = 1.0;
  double node_substitute = 1.0;
  double edge_insert = 1.0;
  double edge_delete = 1.0;
  std::size_t node_limit = 30;
};

struct GedResult {
  double raw = 0.0;
  double normalized = 0.0;  // raw / (nodes + edges) of the larger graph
};

// Exact minimum-cost edit path, best-first search over node assignments
// with an admissible lower bound. Throws Error(size_limit) when either
// graph exceeds costs.node_limit nodes.
GedResult graph_edit_distance(const LabeledGraph& a, const LabeledGraph& b,
                              const GedCosts& costs = {});
GedResult graph_edit_distance(const QdtTree& pred, const QdtTree& gold,
                              const GedCosts& costs = {});

// Canonical-form equality of two linearizations. Throws
// Error(invalid_input) when either side fails to parse.
bool tree_exact_match(const TokenSeq& pred, const TokenSeq& gold,
                      CaseMode mode = CaseMode::insensitive);

// Fraction of predictions whose parsed depth equals the gold depth; an
// unparseable prediction counts as a mismatch. Throws
// Error(length_mismatch) on unequal or empty lists.
double tree_depth_accuracy(std::span<const TokenSeq> preds,
                           std::span<const TokenSeq> golds);

// Corpus-level BLEU, n <= 4, uniform weights, brevity penalty, with
// epsilon smoothing (1e-9) for zero n-gram matches.
double bleu4(std::span<const TokenSeq> candidates,
             std::span<const TokenSeq> references);

// Token-level LCS F-measure, beta = 1.2 (recall-weighted). Empty inputs
// score 0.
double rouge_l(const TokenSeq& candidate, const TokenSeq& reference);

// Order-sensitive canonical equality of two sub-question pairs.
bool seq_exact_match(const std::pair<TokenSeq, TokenSeq>& pred,
                     const std::pair<TokenSeq, TokenSeq>& gold,
                     CaseMode mode = CaseMode::insensitive);

using AnswerSet = std::set<std::string>;

struct AnswerSetReport {
  double avg_f1 = 0.0;
  double acc = 0.0;
  double macro_p = 0.0;
  double macro_r = 0.0;
  double macro_f1 = 0.0;
};

// Per-example P/R/F1 over answer sets; empty vs empty counts as a perfect
// match. Throws Error(length_mismatch).
AnswerSetReport answer_set_metrics(std::span<const AnswerSet> preds,
                                   std::span<const AnswerSet> golds);

}  // namespace qdt
