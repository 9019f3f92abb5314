#include "qdt/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <json.hpp>

#include "qdt/error.hpp"
#include "qdt/tree.hpp"

namespace qdt {

void CorruptionRates::check() const {
  if (replace < 0 || erase < 0 || insert_after < 0 || keep < 0) {
    throw Error(Errc::invalid_input, "corruption rates must be nonnegative");
  }
  double sum = replace + erase + insert_after + keep;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(Errc::invalid_input,
                "corruption rates must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

std::vector<Branch> extract_branches(const TokenSeq& gold) {
  std::vector<std::size_t> separator_indices;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (is_separator(gold[i].kind)) separator_indices.push_back(i);
  }
  if (separator_indices.empty()) {
    throw Error(Errc::no_separators, "gold linearization has no separator");
  }

  std::vector<Branch> branches;
  branches.reserve(separator_indices.size());
  for (std::size_t ordinal = 0; ordinal < separator_indices.size(); ++ordinal) {
    Branch branch;
    branch.ordinal = ordinal;
    branch.separator_kind = gold[separator_indices[ordinal]].kind;
    std::size_t words_before = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (is_separator(gold[i].kind)) {
        if (i != separator_indices[ordinal]) continue;
        branch.insert_position = words_before;
      } else if (i < separator_indices[ordinal]) {
        ++words_before;
      }
      branch.rendered.push_back(gold[i]);
    }
    branches.push_back(std::move(branch));
  }
  return branches;
}

OptionSet negative_options(const Branch& branch, const TokenSeq& question) {
  const std::size_t limit = question.size();  // positions 0..|Q|
  if (branch.insert_position > limit) {
    throw Error(Errc::invalid_input, "branch position out of range");
  }
  const std::size_t gold = branch.insert_position;

  std::vector<std::size_t> positions{gold};
  for (std::size_t d = 1; positions.size() < 5 && d <= limit; ++d) {
    if (gold >= d) positions.push_back(gold - d);
    if (positions.size() < 5 && gold + d <= limit) positions.push_back(gold + d);
  }
  std::sort(positions.begin(), positions.end());

  OptionSet set;
  for (std::size_t position : positions) {
    if (position == gold) set.gold_index = set.options.size();
    TokenSeq rendered;
    rendered.reserve(question.size() + 1);
    rendered.insert(rendered.end(), question.begin(),
                    question.begin() + static_cast<std::ptrdiff_t>(position));
    rendered.push_back(make_token(branch.separator_kind));
    rendered.insert(rendered.end(),
                    question.begin() + static_cast<std::ptrdiff_t>(position),
                    question.end());
    set.options.push_back(CandidateOption{position, std::move(rendered)});
  }
  return set;
}

CorruptAction draw_corrupt_action(SplitMix64& rng, const CorruptionRates& rates) {
  double u = rng.next_unit();
  if (u < rates.replace) return CorruptAction::replace;
  if (u < rates.replace + rates.erase) return CorruptAction::erase;
  if (u < rates.replace + rates.erase + rates.insert_after) {
    return CorruptAction::insert_after;
  }
  return CorruptAction::keep;
}

Query corrupt(const Branch& branch, const CorruptionRates& rates,
              std::uint64_t seed) {
  rates.check();
  SplitMix64 rng(seed);

  std::vector<std::string> pool;
  for (const Token& token : branch.rendered) {
    if (token.kind == TokenKind::word) pool.push_back(token.text);
  }

  Query query;
  query.separator_kind = branch.separator_kind;
  query.ordinal = branch.ordinal;
  for (const Token& token : branch.rendered) {
    if (token.kind != TokenKind::word) {
      query.separator_index = query.tokens.size();
      query.tokens.push_back(token);
      continue;
    }
    switch (draw_corrupt_action(rng, rates)) {
      case CorruptAction::replace:
        if (!pool.empty()) {
          query.tokens.push_back(make_word(pool[rng.next_below(pool.size())]));
        } else {
          query.tokens.push_back(token);
        }
        break;
      case CorruptAction::erase:
        break;
      case CorruptAction::insert_after:
        query.tokens.push_back(token);
        if (!pool.empty()) {
          query.tokens.push_back(make_word(pool[rng.next_below(pool.size())]));
        }
        break;
      case CorruptAction::keep:
        query.tokens.push_back(token);
        break;
    }
  }
  return query;
}

std::vector<TrainingRecord> training_records_for(const DatasetExample& example,
                                                 const CorruptionRates& rates,
                                                 std::uint64_t seed,
                                                 std::string* diagnostic) {
  ValidationReport report = validate(example.gold, &example.question);
  if (!report.valid) {
    if (diagnostic != nullptr) {
      *diagnostic = example.id + ": invalid gold linearization";
    }
    return {};
  }
  if (count_separators(example.gold) == 0) {
    if (diagnostic != nullptr) {
      *diagnostic = example.id + ": gold has no separators";
    }
    return {};
  }

  std::uint64_t example_seed = SplitMix64::derive(seed, fnv1a64(example.id));
  std::vector<TrainingRecord> records;
  for (const Branch& branch : extract_branches(example.gold)) {
    OptionSet set = negative_options(branch, example.question);
    TrainingRecord record;
    record.id = example.id + "#" + std::to_string(branch.ordinal);
    record.question = example.question;
    record.query =
        corrupt(branch, rates, SplitMix64::derive(example_seed, branch.ordinal))
            .tokens;
    record.options = std::move(set.options);
    record.gold_index = set.gold_index;
    records.push_back(std::move(record));
  }
  return records;
}

TrainingSet generate_training_set(std::span<const DatasetExample> examples,
                                  const CorruptionRates& rates,
                                  std::uint64_t seed) {
  rates.check();
  TrainingSet out;
  for (const DatasetExample& example : examples) {
    std::string diagnostic;
    std::vector<TrainingRecord> records =
        training_records_for(example, rates, seed, &diagnostic);
    if (!diagnostic.empty()) out.diagnostics.push_back(std::move(diagnostic));
    for (TrainingRecord& record : records) {
      out.records.push_back(std::move(record));
    }
  }
  return out;
}

std::string training_record_to_json(const TrainingRecord& record) {
  nlohmann::ordered_json j;
  j["id"] = record.id;
  j["question"] = join(record.question);
  j["query"] = join(record.query);
  nlohmann::ordered_json options = nlohmann::ordered_json::array();
  for (const CandidateOption& option : record.options) {
    options.push_back(join(option.rendered));
  }
  j["options"] = std::move(options);
  j["gold_index"] = record.gold_index;
  return j.dump();
}

}  // namespace qdt
