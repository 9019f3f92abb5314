#pragma once

#include <cstddef>
#include <cstdint>

#include "qdt/rng.hpp"
#include "qdt/tree.hpp"

namespace qdt {

// Seeded random tree generator used by the property tests and the
// benchmark driver.
struct SamplerConfig {
  int max_depth = 3;
  std::size_t max_words = 30;
  std::size_t max_descriptions = 3;
  std::size_t max_segment_words = 4;
  double inner_question_prob = 0.35;
};

QdtTree sample_tree(SplitMix64& rng, const SamplerConfig& config = {});

}  // namespace qdt
