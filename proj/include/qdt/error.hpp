#pragma once

#include <stdexcept>
#include <string>

namespace qdt {

enum class Errc {
  unbalanced_brackets,
  empty_description,
  stray_placeholder,
  question_mismatch,
  no_separators,
  atomic,
  scorer_failure,
  invalid_merge,
  length_mismatch,
  invalid_input,
  size_limit,
  syntax_error,
  arity_error,
  unknown_entity,
  ambiguous_label,
  unknown_element,
  validation_failure,
  io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace qdt
