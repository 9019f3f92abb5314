#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qdt/decipher.hpp"
#include "qdt/rng.hpp"
#include "qdt/token.hpp"

namespace qdt {

// Per-token corruption probabilities. Must be nonnegative and sum to 1.
struct CorruptionRates {
  double replace = 0.01;
  double erase = 0.01;
  double insert_after = 0.01;
  double keep = 0.97;

  void check() const;  // throws Error(invalid_input) when malformed
};

struct TrainingRecord {
  std::string id;
  TokenSeq question;
  TokenSeq query;
  std::vector<CandidateOption> options;
  std::size_t gold_index = 0;
};

// One branch per separator of a gold linearization: the gold with every
// other separator removed. Positions index into the stripped question.
// Throws Error(no_separators).
std::vector<Branch> extract_branches(const TokenSeq& gold);

struct OptionSet {
  std::vector<CandidateOption> options;  // ascending by position
  std::size_t gold_index = 0;
};

// The gold position plus the four nearest distinct in-range positions,
// symmetric first, extended outward at the boundaries. Short questions
// yield fewer than five options.
OptionSet negative_options(const Branch& branch, const TokenSeq& question);

enum class CorruptAction { replace, erase, insert_after, keep };

// The per-token action draw used by corrupt(); exposed so the tests can
// measure the empirical action distribution on the exact code path.
CorruptAction draw_corrupt_action(SplitMix64& rng, const CorruptionRates& rates);

// Independently corrupts each word token: replace with a random branch
// word, delete, insert a random branch word after it, or keep. Separators
// are never touched. Deterministic for a fixed seed.
Query corrupt(const Branch& branch, const CorruptionRates& rates,
              std::uint64_t seed);

struct DatasetExample {
  std::string id;
  TokenSeq question;
  TokenSeq gold;  // linearized QDT
};

struct TrainingSet {
  std::vector<TrainingRecord> records;
  std::vector<std::string> diagnostics;  // skipped/invalid golds
};

// Records for a single example; the example's random stream is derived
// from (seed, example id), so the result does not depend on where the
// example sits in the dataset. Returns an empty vector and fills
// *diagnostic when the gold is unusable.
std::vector<TrainingRecord> training_records_for(const DatasetExample& example,
                                                 const CorruptionRates& rates,
                                                 std::uint64_t seed,
                                                 std::string* diagnostic);

// branches -> negative options -> corrupted queries, one record per
// branch. Invalid golds are skipped with a diagnostic. Pure in
// (examples, rates, seed); each example draws from its own derived seed.
TrainingSet generate_training_set(std::span<const DatasetExample> examples,
                                  const CorruptionRates& rates,
                                  std::uint64_t seed);

std::string training_record_to_json(const TrainingRecord& record);

}  // namespace qdt
