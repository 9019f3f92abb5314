#include "qdt/process_scorer.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>

#include <json.hpp>

#include "qdt/error.hpp"

namespace qdt {

ProcessScorer::ProcessScorer(std::string command) : command_(std::move(command)) {
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
    throw Error(Errc::scorer_failure,
                "pipe: " + std::string(std::strerror(errno)));
  }
  pid_ = ::fork();
  if (pid_ < 0) {
    throw Error(Errc::scorer_failure,
                "fork: " + std::string(std::strerror(errno)));
  }
  if (pid_ == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  to_child_ = ::fdopen(to_child[1], "w");
  from_child_ = ::fdopen(from_child[0], "r");
  if (to_child_ == nullptr || from_child_ == nullptr) {
    throw Error(Errc::scorer_failure, "fdopen failed for scorer pipes");
  }
}

ProcessScorer::~ProcessScorer() {
  if (to_child_ != nullptr) std::fclose(to_child_);
  if (from_child_ != nullptr) std::fclose(from_child_);
  if (pid_ > 0) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
}

std::vector<double> ProcessScorer::score(
    const Query& query, const std::vector<CandidateOption>& options) {
  nlohmann::json request;
  request["query"] = join(query.tokens);
  nlohmann::json rendered = nlohmann::json::array();
  for (const CandidateOption& option : options) {
    rendered.push_back(join(option.rendered));
  }
  request["options"] = std::move(rendered);

  std::string line = request.dump();
  line.push_back('\n');
  if (std::fwrite(line.data(), 1, line.size(), to_child_) != line.size() ||
      std::fflush(to_child_) != 0) {
    throw Error(Errc::scorer_failure, "failed to write to scorer process");
  }

  std::string response;
  int c;
  while ((c = std::fgetc(from_child_)) != EOF && c != '\n') {
    response.push_back(static_cast<char>(c));
  }
  if (response.empty() && c == EOF) {
    throw Error(Errc::scorer_failure, "scorer process closed its output");
  }

  nlohmann::json parsed = nlohmann::json::parse(response, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object() ||
      !parsed.contains("scores") || !parsed["scores"].is_array()) {
    throw Error(Errc::scorer_failure, "malformed scorer response: " + response);
  }
  std::vector<double> scores;
  for (const auto& value : parsed["scores"]) {
    if (!value.is_number()) {
      throw Error(Errc::scorer_failure, "non-numeric score in: " + response);
    }
    scores.push_back(value.get<double>());
  }
  if (scores.size() != options.size()) {
    throw Error(Errc::scorer_failure,
                "scorer returned " + std::to_string(scores.size()) +
                    " scores for " + std::to_string(options.size()) + " options");
  }
  return scores;
}

}  // namespace qdt
