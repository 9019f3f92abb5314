// Reference plug-in scorer speaking the line-delimited protocol: reads
// {"query": str, "options": [str...]} per line and answers
// {"scores": [...]} with 1.0 for options equal to the query, 0.0 otherwise.
// Useful for exercising exec scorers end to end; equivalent to an exact
// multiple-choice model on uncorrupted clues.

#include <iostream>
#include <string>

#include <json.hpp>

int main() {
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    nlohmann::json request = nlohmann::json::parse(line, nullptr, false);
    if (request.is_discarded() || !request.contains("query") ||
        !request.contains("options")) {
      std::cout << "{\"error\":\"malformed request\"}" << std::endl;
      continue;
    }
    const std::string query = request["query"].get<std::string>();
    nlohmann::json scores = nlohmann::json::array();
    for (const auto& option : request["options"]) {
      scores.push_back(option.get<std::string>() == query ? 1.0 : 0.0);
    }
    nlohmann::json response;
    response["scores"] = std::move(scores);
    std::cout << response.dump() << std::endl;
  }
  return 0;
}
