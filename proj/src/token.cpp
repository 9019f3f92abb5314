#include "qdt/token.hpp"

#include <algorithm>
#include <cctype>

namespace qdt {

const char* canonical_text(TokenKind kind) {
  switch (kind) {
    case TokenKind::sep_des:
      return kSepDes;
    case TokenKind::sep_inql:
      return kSepInqL;
    case TokenKind::sep_inqr:
      return kSepInqR;
    case TokenKind::inq_placeholder:
      return kInqPlaceholder;
    case TokenKind::word:
      break;
  }
  return "";
}

Token make_word(std::string text) {
  return Token{TokenKind::word, std::move(text)};
}

Token make_token(TokenKind kind) {
  return Token{kind, canonical_text(kind)};
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq seq;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i == start) break;
    std::string_view piece = text.substr(start, i - start);
    if (piece == kSepDes) {
      seq.push_back(make_token(TokenKind::sep_des));
    } else if (piece == kSepInqL) {
      seq.push_back(make_token(TokenKind::sep_inql));
    } else if (piece == kSepInqR) {
      seq.push_back(make_token(TokenKind::sep_inqr));
    } else if (piece == kInqPlaceholder) {
      seq.push_back(make_token(TokenKind::inq_placeholder));
    } else {
      seq.push_back(make_word(std::string(piece)));
    }
  }
  return seq;
}

std::string join(const TokenSeq& seq) {
  std::string out;
  for (const Token& token : seq) {
    if (!out.empty()) out.push_back(' ');
    out += token.text;
  }
  return out;
}

TokenSeq strip_separators(const TokenSeq& seq) {
  TokenSeq words;
  words.reserve(seq.size());
  for (const Token& token : seq) {
    if (token.kind == TokenKind::word) words.push_back(token);
  }
  return words;
}

bool words_only(const TokenSeq& seq) {
  return std::all_of(seq.begin(), seq.end(), [](const Token& token) {
    return token.kind == TokenKind::word;
  });
}

std::size_t count_separators(const TokenSeq& seq) {
  return static_cast<std::size_t>(
      std::count_if(seq.begin(), seq.end(), [](const Token& token) {
        return is_separator(token.kind);
      }));
}

std::string lower_ascii(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

bool text_equal(std::string_view a, std::string_view b, CaseMode mode) {
  if (mode == CaseMode::sensitive) return a == b;
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

bool token_equal(const Token& a, const Token& b, CaseMode mode) {
  if (a.kind != b.kind) return false;
  if (a.kind != TokenKind::word) return true;  // canonical surface forms
  return text_equal(a.text, b.text, mode);
}

bool seq_equal(const TokenSeq& a, const TokenSeq& b, CaseMode mode) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!token_equal(a[i], b[i], mode)) return false;
  }
  return true;
}

std::size_t edit_distance(const TokenSeq& a, const TokenSeq& b, CaseMode mode) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (token_equal(a[i - 1], b[j - 1], mode) ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace qdt
