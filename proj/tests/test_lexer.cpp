#include "vignat/lexer.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "vignat/errors.hpp"

using namespace vignat;

namespace {

std::vector<std::string> texts(const std::vector<Token>& toks) {
  std::vector<std::string> out;
  for (const Token& t : toks) out.push_back(t.text);
  return out;
}

}  // namespace

TEST(Lexer, DeclarationStatementTokens) {
  auto toks = lex("int x = source();");
  ASSERT_EQ(toks.size(), 7u);
  EXPECT_EQ(texts(toks), (std::vector<std::string>{"int", "x", "=", "source", "(", ")", ";"}));
  EXPECT_EQ(toks[0].kind, TokenKind::Keyword);
  EXPECT_EQ(toks[1].kind, TokenKind::Identifier);
  EXPECT_EQ(toks[2].kind, TokenKind::Operator);
  EXPECT_EQ(toks[3].kind, TokenKind::Identifier);
  EXPECT_EQ(toks[4].kind, TokenKind::Punctuation);
  EXPECT_EQ(toks[6].kind, TokenKind::Punctuation);
}

TEST(Lexer, EmptyFunctionTokens) {
  EXPECT_EQ(token_count("void f() {}"), 6);
}

TEST(Lexer, DivisionExampleTokens) {
  const char* src =
      "void func() {\n"
      "  int x = source();\n"
      "  if (isEven(x)) {\n"
      "    proceed(10 / x);\n"
      "  }\n"
      "}\n";
  auto toks = lex(src);
  EXPECT_EQ(toks.size(), 29u);

  // The division argument lexes into three tokens.
  std::vector<std::string> t = texts(toks);
  auto it = std::find(t.begin(), t.end(), "10");
  ASSERT_NE(it, t.end());
  EXPECT_EQ(*(it + 1), "/");
  EXPECT_EQ(*(it + 2), "x");
}

TEST(Lexer, MaximalMunchTwoCharOperators) {
  EXPECT_EQ(texts(lex("a<=b")), (std::vector<std::string>{"a", "<=", "b"}));
  EXPECT_EQ(texts(lex("a< =b")), (std::vector<std::string>{"a", "<", "=", "b"}));
  EXPECT_EQ(texts(lex("x==-1")), (std::vector<std::string>{"x", "==", "-", "1"}));
  EXPECT_EQ(texts(lex("a&&b||c")), (std::vector<std::string>{"a", "&&", "b", "||", "c"}));
  EXPECT_EQ(lex("!=")[0].kind, TokenKind::Operator);
  EXPECT_EQ(texts(lex("a!=!b")), (std::vector<std::string>{"a", "!=", "!", "b"}));
}

TEST(Lexer, KeywordsVersusIdentifiers) {
  auto toks = lex("int interior for forty return returning");
  ASSERT_EQ(toks.size(), 6u);
  EXPECT_EQ(toks[0].kind, TokenKind::Keyword);
  EXPECT_EQ(toks[1].kind, TokenKind::Identifier);
  EXPECT_EQ(toks[2].kind, TokenKind::Keyword);
  EXPECT_EQ(toks[3].kind, TokenKind::Identifier);
  EXPECT_EQ(toks[4].kind, TokenKind::Keyword);
  EXPECT_EQ(toks[5].kind, TokenKind::Identifier);
}

TEST(Lexer, NumericLiterals) {
  auto toks = lex("42 3.25 0");
  ASSERT_EQ(toks.size(), 3u);
  EXPECT_EQ(toks[0].kind, TokenKind::IntegerLiteral);
  EXPECT_EQ(toks[1].kind, TokenKind::FloatLiteral);
  EXPECT_EQ(toks[1].text, "3.25");
  EXPECT_EQ(toks[2].kind, TokenKind::IntegerLiteral);
}

TEST(Lexer, DotWithoutFractionIsNotAFloat) {
  // "1." keeps the integer and then trips on the stray dot.
  EXPECT_THROW(lex("1."), LexError);
}

TEST(Lexer, StringLiterals) {
  auto toks = lex("\"hi\" \"a\\n\\t\\\\\\\"b\"");
  ASSERT_EQ(toks.size(), 2u);
  EXPECT_EQ(toks[0].kind, TokenKind::StringLiteral);
  EXPECT_EQ(toks[0].text, "\"hi\"");
  EXPECT_EQ(toks[1].text, "\"a\\n\\t\\\\\\\"b\"");
}

TEST(Lexer, RejectsBadStrings) {
  EXPECT_THROW(lex("\"abc"), LexError);
  EXPECT_THROW(lex("\"a\\qb\""), LexError);
  EXPECT_THROW(lex("\"line\nbreak\""), LexError);
}

TEST(Lexer, CommentsAreStripped) {
  EXPECT_EQ(token_count("int a; // trailing note\nint b;"), 6);
  EXPECT_EQ(token_count("int /* inline */ a;"), 3);
  EXPECT_EQ(token_count("/* multi\n line */ x"), 1);
  EXPECT_EQ(token_count("// only a comment"), 0);
}

TEST(Lexer, UnterminatedBlockCommentThrows) {
  try {
    lex("int a; /* open");
    FAIL() << "expected LexError";
  } catch (const LexError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 8);
  }
}

TEST(Lexer, UnexpectedCharacterReportsPosition) {
  try {
    lex("int a;\n  int @b;");
    FAIL() << "expected LexError";
  } catch (const LexError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 7);
    EXPECT_NE(std::string(e.what()).find('@'), std::string::npos);
  }
}

TEST(Lexer, LineAndColumnTracking) {
  auto toks = lex("int a;\nfloat b;");
  ASSERT_EQ(toks.size(), 6u);
  EXPECT_EQ(toks[0].line, 1);
  EXPECT_EQ(toks[0].column, 1);
  EXPECT_EQ(toks[1].column, 5);
  EXPECT_EQ(toks[3].line, 2);
  EXPECT_EQ(toks[3].column, 1);
  EXPECT_EQ(toks[4].line, 2);
  EXPECT_EQ(toks[4].column, 7);
}

TEST(Lexer, OffsetsSliceBackToTokenText) {
  std::string src = "int x = compute(a, 12) + 3; // tail\n";
  auto toks = lex(src);
  std::size_t prev_end = 0;
  for (const Token& t : toks) {
    EXPECT_EQ(src.substr(t.begin, t.end - t.begin), t.text);
    EXPECT_GE(t.begin, prev_end);
    EXPECT_LT(t.begin, t.end);
    prev_end = t.end;
  }
}

TEST(Lexer, EmptyAndWhitespaceOnlySources) {
  EXPECT_TRUE(lex("").empty());
  EXPECT_TRUE(lex("  \t\r\n \n").empty());
}

TEST(Lexer, TypeKeywordPredicate) {
  EXPECT_TRUE(is_type_keyword("int"));
  EXPECT_TRUE(is_type_keyword("double"));
  EXPECT_FALSE(is_type_keyword("void"));
  EXPECT_FALSE(is_type_keyword("return"));
  EXPECT_FALSE(is_type_keyword("uint"));
}
