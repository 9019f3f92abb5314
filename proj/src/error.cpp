#include "qdt/error.hpp"

namespace qdt {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::unbalanced_brackets:
      return "UnbalancedBrackets";
    case Errc::empty_description:
      return "EmptyDescription";
    case Errc::stray_placeholder:
      return "StrayPlaceholder";
    case Errc::question_mismatch:
      return "QuestionMismatch";
    case Errc::no_separators:
      return "NoSeparators";
    case Errc::atomic:
      return "Atomic";
    case Errc::scorer_failure:
      return "ScorerFailure";
    case Errc::invalid_merge:
      return "InvalidMerge";
    case Errc::length_mismatch:
      return "LengthMismatch";
    case Errc::invalid_input:
      return "InvalidInput";
    case Errc::size_limit:
      return "SizeLimit";
    case Errc::syntax_error:
      return "SyntaxError";
    case Errc::arity_error:
      return "ArityError";
    case Errc::unknown_entity:
      return "UnknownEntity";
    case Errc::ambiguous_label:
      return "AmbiguousLabel";
    case Errc::unknown_element:
      return "UnknownElement";
    case Errc::validation_failure:
      return "ValidationFailure";
    case Errc::io_error:
      return "IoError";
  }
  return "UnknownError";
}

}  // namespace qdt
