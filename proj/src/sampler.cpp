#include "qdt/sampler.hpp"

#include <array>

namespace qdt {

namespace {

constexpr std::array<const char*, 40> kVocabulary = {
    "what",   "who",     "which",  "film",    "movie",   "actor",  "team",
    "city",   "country", "river",  "school",  "player",  "won",    "wrote",
    "played", "born",    "located", "founded", "directed", "named", "the",
    "of",     "in",      "by",     "first",   "largest", "oldest", "before",
    "after",  "most",    "famous", "award",   "year",    "state",  "capital",
    "league", "band",    "album",  "author",  "book"};

struct Budget {
  std::size_t words_left;
};

std::vector<std::string> take_words(SplitMix64& rng, Budget& budget,
                                    std::size_t count) {
  std::vector<std::string> words;
  words.reserve(count);
  for (std::size_t i = 0; i < count && budget.words_left > 0; ++i) {
    words.emplace_back(kVocabulary[rng.next_below(kVocabulary.size())]);
    --budget.words_left;
  }
  return words;
}

QuestionNode gen_question(SplitMix64& rng, const SamplerConfig& config,
                          int depth_left, Budget& budget);

DescriptionNode gen_description(SplitMix64& rng, const SamplerConfig& config,
                                int depth_left, Budget& budget) {
  DescriptionNode desc;
  const bool can_nest = depth_left > 1 && budget.words_left >= 2;
  const bool use_inner =
      can_nest && rng.next_unit() < config.inner_question_prob;
  if (!use_inner) {
    std::size_t count =
        1 + rng.next_below(std::min(config.max_segment_words, budget.words_left));
    desc.segments.push_back(Segment::text(take_words(rng, budget, count)));
    return desc;
  }

  if (rng.next_unit() < 0.7) {
    std::size_t limit = std::min(config.max_segment_words, budget.words_left - 1);
    std::size_t count = 1 + rng.next_below(limit);
    desc.segments.push_back(Segment::text(take_words(rng, budget, count)));
  }
  desc.segments.push_back(
      Segment::inner_question(gen_question(rng, config, depth_left - 1, budget)));
  if (budget.words_left > 0 && rng.next_unit() < 0.5) {
    std::size_t count =
        1 + rng.next_below(std::min(config.max_segment_words, budget.words_left));
    desc.segments.push_back(Segment::text(take_words(rng, budget, count)));
  }
  // Occasionally a second inner question in the same description; the
  // grammar allows it even though it is rare in real annotations.
  if (depth_left > 1 && budget.words_left >= 2 && rng.next_unit() < 0.08) {
    desc.segments.push_back(
        Segment::inner_question(gen_question(rng, config, depth_left - 1, budget)));
  }
  return desc;
}

QuestionNode gen_question(SplitMix64& rng, const SamplerConfig& config,
                          int depth_left, Budget& budget) {
  QuestionNode node;
  std::size_t n_descriptions = 1 + rng.next_below(config.max_descriptions);
  for (std::size_t i = 0; i < n_descriptions; ++i) {
    if (i > 0 && budget.words_left == 0) break;
    node.descriptions.push_back(gen_description(rng, config, depth_left, budget));
  }
  return node;
}

}  // namespace

QdtTree sample_tree(SplitMix64& rng, const SamplerConfig& config) {
  Budget budget{config.max_words > 0 ? config.max_words : 1};
  return QdtTree{gen_question(rng, config, config.max_depth, budget)};
}

}  // namespace qdt
