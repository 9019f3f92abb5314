#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "qdt/decipher.hpp"

namespace qdt {

// Scorer backed by an external process speaking the line-delimited
// protocol: request {"query": str, "options": [str...]}, response
// {"scores": [num...]} of equal length. The handle is exclusive: one
// in-flight request at a time.
class ProcessScorer : public Scorer {
 public:
  // Starts `command` via /bin/sh -c. Throws Error(scorer_failure) when the
  // process cannot be started.
  explicit ProcessScorer(std::string command);
  ~ProcessScorer() override;

  ProcessScorer(const ProcessScorer&) = delete;
  ProcessScorer& operator=(const ProcessScorer&) = delete;

  std::vector<double> score(const Query& query,
                            const std::vector<CandidateOption>& options) override;

 private:
  std::string command_;
  int pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

}  // namespace qdt
