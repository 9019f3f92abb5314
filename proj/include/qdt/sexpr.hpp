#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qdt/token.hpp"

namespace qdt {

enum class SexprOp {
  op_and,
  op_join,
  op_reverse,  // R
  op_count,
  op_argmax,
  op_argmin,
  op_lt,
  op_le,
  op_gt,
  op_ge,
};

const char* sexpr_op_name(SexprOp op);
std::size_t sexpr_op_arity(SexprOp op);

struct SExpr {
  enum class Kind { apply, entity, relation, literal, klass };

  Kind kind = Kind::literal;
  SexprOp op = SexprOp::op_join;  // apply only
  std::vector<SExpr> args;        // apply only
  std::string text;               // id, dotted path, or literal text
  std::string type_tag;           // literal only ("xsd:date" etc.), may be empty

  bool operator==(const SExpr& other) const;
};

struct SexprOptions {
  // Atoms beginning with one of these prefixes are entities; atoms
  // containing a dot are relations; everything else is a literal.
  std::vector<std::string> entity_prefixes = {"m.", "g."};
};

// Recursive-descent parser with arity checks. Throws Error(syntax_error)
// with a character position or Error(arity_error).
SExpr parse_sexpr(std::string_view text, const SexprOptions& options = {});

// Plain parenthesized rendering (inverse of parse_sexpr).
std::string render(const SExpr& expr);

// Bidirectional id <-> label map. Every id has exactly one label; a label
// may belong to several ids.
class EntityLabelMap {
 public:
  void add(std::string id, std::string label);
  const std::string* label_of(const std::string& id) const;
  const std::vector<std::string>* ids_of(const std::string& label) const;
  std::size_t size() const { return label_by_id_.size(); }

  // Two-column TSV: id <TAB> label. Throws Error(io_error).
  static EntityLabelMap load_tsv(const std::filesystem::path& path);

 private:
  std::unordered_map<std::string, std::string> label_by_id_;
  std::unordered_map<std::string, std::vector<std::string>> ids_by_label_;
};

// Normalized rendering: entities become "[<label>]", relations become
// "[a, b, c d]" (dots -> comma-space, underscores -> spaces), literals are
// bracketed verbatim; operators and parentheses are untouched. Throws
// Error(unknown_entity) for ids missing from the map.
std::string normalize(const SExpr& expr, const EntityLabelMap& labels);

// Inverse of normalize. Bracketed word lists are resolved against the
// relation vocabulary; labels against the entity map (using the candidate
// ranking to break ties); anything else becomes a literal. Throws
// Error(ambiguous_label), Error(unknown_element), Error(syntax_error).
SExpr denormalize(std::string_view text, const EntityLabelMap& labels,
                  const std::set<std::string>& relation_vocab,
                  const std::vector<std::string>* candidates = nullptr,
                  const SexprOptions& options = {});

// Query-generation model input: question, linearized tree, and "; "-joined
// entity labels, joined by the delimiter. Throws
// Error(validation_failure) when the tree does not strip back to the
// question.
std::string assemble_model_input(const TokenSeq& question, const TokenSeq& qdt,
                                 std::span<const std::string> entity_labels,
                                 std::string_view delimiter = "||",
                                 CaseMode mode = CaseMode::insensitive);

}  // namespace qdt
