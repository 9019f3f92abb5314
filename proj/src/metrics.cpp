#include "qdt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "qdt/error.hpp"

namespace qdt {

namespace {

constexpr double kBleuEpsilon = 1e-9;
constexpr double kRougeBeta = 1.2;

TokenSeq canonical(const TokenSeq& seq) { return serialize(parse_linear(seq)); }

}  // namespace

bool tree_exact_match(const TokenSeq& pred, const TokenSeq& gold, CaseMode mode) {
  TokenSeq pred_canonical;
  TokenSeq gold_canonical;
  try {
    pred_canonical = canonical(pred);
    gold_canonical = canonical(gold);
  } catch (const Error& e) {
    throw Error(Errc::invalid_input, e.what());
  }
  return seq_equal(pred_canonical, gold_canonical, mode);
}

double tree_depth_accuracy(std::span<const TokenSeq> preds,
                           std::span<const TokenSeq> golds) {
  if (preds.size() != golds.size() || preds.empty()) {
    throw Error(Errc::length_mismatch,
                "need equal, nonempty prediction and gold lists");
  }
  std::size_t matches = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    int gold_depth = -1;
    int pred_depth = -2;
    try {
      gold_depth = depth(parse_linear(golds[i]));
    } catch (const Error&) {
    }
    try {
      pred_depth = depth(parse_linear(preds[i]));
    } catch (const Error&) {
    }
    if (pred_depth == gold_depth) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(preds.size());
}

double bleu4(std::span<const TokenSeq> candidates,
             std::span<const TokenSeq> references) {
  if (candidates.size() != references.size()) {
    throw Error(Errc::length_mismatch,
                "candidate and reference counts differ");
  }
  if (candidates.empty()) return 0.0;

  auto ngram_counts = [](const TokenSeq& seq, std::size_t n) {
    std::map<std::string, std::size_t> counts;
    if (seq.size() < n) return counts;
    for (std::size_t i = 0; i + n <= seq.size(); ++i) {
      std::string key;
      for (std::size_t k = 0; k < n; ++k) {
        key += seq[i + k].text;
        key.push_back('\x1f');
      }
      ++counts[key];
    }
    return counts;
  };

  double candidate_length = 0.0;
  double reference_length = 0.0;
  std::size_t matches[4] = {0, 0, 0, 0};
  std::size_t totals[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidate_length += static_cast<double>(candidates[i].size());
    reference_length += static_cast<double>(references[i].size());
    for (std::size_t n = 1; n <= 4; ++n) {
      auto cand = ngram_counts(candidates[i], n);
      auto ref = ngram_counts(references[i], n);
      for (const auto& [key, count] : cand) {
        totals[n - 1] += count;
        auto it = ref.find(key);
        if (it != ref.end()) matches[n - 1] += std::min(count, it->second);
      }
    }
  }
  if (candidate_length == 0.0) return 0.0;

  double log_precision = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    double p = totals[n] > 0 && matches[n] > 0
                   ? static_cast<double>(matches[n]) / static_cast<double>(totals[n])
                   : kBleuEpsilon;
    log_precision += 0.25 * std::log(p);
  }
  double brevity =
      candidate_length >= reference_length
          ? 1.0
          : std::exp(1.0 - reference_length / candidate_length);
  return brevity * std::exp(log_precision);
}

double rouge_l(const TokenSeq& candidate, const TokenSeq& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const std::size_t n = candidate.size();
  const std::size_t m = reference.size();
  std::vector<std::size_t> prev(m + 1, 0), cur(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      if (candidate[i - 1] == reference[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  const double lcs = static_cast<double>(prev[m]);
  if (lcs == 0.0) return 0.0;
  const double recall = lcs / static_cast<double>(m);
  const double precision = lcs / static_cast<double>(n);
  const double beta2 = kRougeBeta * kRougeBeta;
  return (1.0 + beta2) * recall * precision / (recall + beta2 * precision);
}

bool seq_exact_match(const std::pair<TokenSeq, TokenSeq>& pred,
                     const std::pair<TokenSeq, TokenSeq>& gold, CaseMode mode) {
  return seq_equal(pred.first, gold.first, mode) &&
         seq_equal(pred.second, gold.second, mode);
}

AnswerSetReport answer_set_metrics(std::span<const AnswerSet> preds,
                                   std::span<const AnswerSet> golds) {
  if (preds.size() != golds.size() || preds.empty()) {
    throw Error(Errc::length_mismatch,
                "need equal, nonempty prediction and gold lists");
  }
  AnswerSetReport report;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const AnswerSet& pred = preds[i];
    const AnswerSet& gold = golds[i];
    double p = 0.0, r = 0.0, f1 = 0.0;
    if (pred.empty() && gold.empty()) {
      p = r = f1 = 1.0;
    } else if (!pred.empty() && !gold.empty()) {
      std::size_t hits = 0;
      for (const std::string& answer : pred) {
        if (gold.count(answer) > 0) ++hits;
      }
      p = static_cast<double>(hits) / static_cast<double>(pred.size());
      r = static_cast<double>(hits) / static_cast<double>(gold.size());
      if (p + r > 0.0) f1 = 2.0 * p * r / (p + r);
    }
    report.macro_p += p;
    report.macro_r += r;
    report.macro_f1 += f1;
    report.avg_f1 += f1;
    if (pred == gold) report.acc += 1.0;
  }
  const double n = static_cast<double>(preds.size());
  report.macro_p /= n;
  report.macro_r /= n;
  report.macro_f1 /= n;
  report.avg_f1 /= n;
  report.acc /= n;
  return report;
}

}  // namespace qdt
