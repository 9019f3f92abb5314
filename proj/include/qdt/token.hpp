#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qdt {

// The three separators of the linearized tree form, plus the [INQ]
// placeholder used when an inner question is shown collapsed.
enum class TokenKind { word, sep_des, sep_inql, sep_inqr, inq_placeholder };

constexpr const char* kSepDes = "[DES]";
constexpr const char* kSepInqL = "[INQL]";
constexpr const char* kSepInqR = "[INQR]";
constexpr const char* kInqPlaceholder = "[INQ]";

const char* canonical_text(TokenKind kind);

inline bool is_separator(TokenKind kind) {
  return kind == TokenKind::sep_des || kind == TokenKind::sep_inql ||
         kind == TokenKind::sep_inqr;
}

struct Token {
  TokenKind kind = TokenKind::word;
  std::string text;

  bool operator==(const Token& other) const = default;
};

using TokenSeq = std::vector<Token>;

Token make_word(std::string text);
Token make_token(TokenKind kind);

// Whitespace tokenizer. A whitespace-delimited token exactly equal to one
// of the canonical separator strings becomes that separator; everything
// else is a word. Empty input yields an empty sequence.
TokenSeq tokenize(std::string_view text);

// Single-space join of surface forms; inverse of tokenize up to
// whitespace normalization.
std::string join(const TokenSeq& seq);

// Removes every non-word token, order preserved.
TokenSeq strip_separators(const TokenSeq& seq);

bool words_only(const TokenSeq& seq);
std::size_t count_separators(const TokenSeq& seq);

enum class CaseMode { insensitive, sensitive };

std::string lower_ascii(std::string_view text);
bool text_equal(std::string_view a, std::string_view b, CaseMode mode);
bool token_equal(const Token& a, const Token& b, CaseMode mode);
bool seq_equal(const TokenSeq& a, const TokenSeq& b, CaseMode mode);

// Token-level Levenshtein distance (unit insert/delete/substitute).
// Separators compare by kind, words by text under the given case mode.
std::size_t edit_distance(const TokenSeq& a, const TokenSeq& b, CaseMode mode);

}  // namespace qdt
