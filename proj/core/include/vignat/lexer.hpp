#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vignat {

enum class TokenKind {
  Keyword,
  Identifier,
  IntegerLiteral,
  FloatLiteral,
  StringLiteral,
  Operator,
  Punctuation,
};

struct Token {
  TokenKind kind = TokenKind::Identifier;
  std::string text;
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  std::size_t begin = 0;  // byte offset into the source
  std::size_t end = 0;    // one past the last byte
};

// Maximal-munch tokenization of the supported C subset. Whitespace and
// comments are discarded; every other character belongs to exactly one
// token. Throws LexError on anything outside the subset.
std::vector<Token> lex(std::string_view source);

// Number of tokens in the source. Same failure modes as lex.
int token_count(std::string_view source);

const char* token_kind_name(TokenKind kind);
bool is_type_keyword(std::string_view text);

}  // namespace vignat
