#include "vignat/lexer.hpp"

#include <array>
#include <cctype>

#include "vignat/errors.hpp"

namespace vignat {

namespace {

constexpr std::array<std::string_view, 11> kKeywords = {
    "int", "float", "double", "char", "long", "void",
    "if",  "else",  "while",  "for",  "return",
};

constexpr std::array<std::string_view, 4> kTypeKeywords = {"int", "float", "double", "char"};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

class Cursor {
 public:
  explicit Cursor(std::string_view src) : src_(src) {}

  bool done() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

bool is_type_keyword(std::string_view text) {
  for (auto k : kTypeKeywords)
    if (k == text) return true;
  return false;
}

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "Keyword";
    case TokenKind::Identifier: return "Identifier";
    case TokenKind::IntegerLiteral: return "IntegerLiteral";
    case TokenKind::FloatLiteral: return "FloatLiteral";
    case TokenKind::StringLiteral: return "StringLiteral";
    case TokenKind::Operator: return "Operator";
    case TokenKind::Punctuation: return "Punctuation";
  }
  return "Unknown";
}

std::vector<Token> lex(std::string_view source) {
  std::vector<Token> out;
  Cursor cur(source);

  auto make = [&](TokenKind kind, std::size_t begin, int line, int column) {
    Token t;
    t.kind = kind;
    t.text = std::string(source.substr(begin, cur.pos() - begin));
    t.line = line;
    t.column = column;
    t.begin = begin;
    t.end = cur.pos();
    out.push_back(std::move(t));
  };

  while (!cur.done()) {
    char c = cur.peek();

    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      cur.advance();
      continue;
    }

    // Comments vanish before tokenization proper.
    if (c == '/' && cur.peek(1) == '/') {
      while (!cur.done() && cur.peek() != '\n') cur.advance();
      continue;
    }
    if (c == '/' && cur.peek(1) == '*') {
      int line = cur.line(), column = cur.column();
      cur.advance();
      cur.advance();
      bool closed = false;
      while (!cur.done()) {
        if (cur.peek() == '*' && cur.peek(1) == '/') {
          cur.advance();
          cur.advance();
          closed = true;
          break;
        }
        cur.advance();
      }
      if (!closed) throw LexError("unterminated block comment", line, column);
      continue;
    }

    std::size_t begin = cur.pos();
    int line = cur.line(), column = cur.column();

    if (is_ident_start(c)) {
      while (!cur.done() && is_ident_char(cur.peek())) cur.advance();
      std::string_view text = source.substr(begin, cur.pos() - begin);
      bool keyword = false;
      for (auto k : kKeywords)
        if (k == text) keyword = true;
      make(keyword ? TokenKind::Keyword : TokenKind::Identifier, begin, line, column);
      continue;
    }

    if (is_digit(c)) {
      while (!cur.done() && is_digit(cur.peek())) cur.advance();
      bool is_float = false;
      if (cur.peek() == '.' && is_digit(cur.peek(1))) {
        is_float = true;
        cur.advance();
        while (!cur.done() && is_digit(cur.peek())) cur.advance();
      }
      make(is_float ? TokenKind::FloatLiteral : TokenKind::IntegerLiteral, begin, line, column);
      continue;
    }

    if (c == '"') {
      cur.advance();
      bool closed = false;
      while (!cur.done()) {
        char s = cur.peek();
        if (s == '\n') break;
        if (s == '\\') {
          char esc = cur.peek(1);
          if (esc != '\\' && esc != '"' && esc != 'n' && esc != 't')
            throw LexError("unsupported escape sequence", cur.line(), cur.column());
          cur.advance();
          cur.advance();
          continue;
        }
        if (s == '"') {
          cur.advance();
          closed = true;
          break;
        }
        cur.advance();
      }
      if (!closed) throw LexError("unterminated string literal", line, column);
      make(TokenKind::StringLiteral, begin, line, column);
      continue;
    }

    // Two-character operators take priority over their one-character prefixes.
    char d = cur.peek(1);
    if ((c == '<' && d == '=') || (c == '>' && d == '=') || (c == '=' && d == '=') ||
        (c == '!' && d == '=') || (c == '&' && d == '&') || (c == '|' && d == '|')) {
      cur.advance();
      cur.advance();
      make(TokenKind::Operator, begin, line, column);
      continue;
    }

    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '%' || c == '<' || c == '>' ||
        c == '=' || c == '!') {
      cur.advance();
      make(TokenKind::Operator, begin, line, column);
      continue;
    }

    if (c == '(' || c == ')' || c == '{' || c == '}' || c == ',' || c == ';') {
      cur.advance();
      make(TokenKind::Punctuation, begin, line, column);
      continue;
    }

    throw LexError(std::string("unexpected character '") + c + "'", line, column);
  }

  return out;
}

int token_count(std::string_view source) { return static_cast<int>(lex(source).size()); }

}  // namespace vignat
