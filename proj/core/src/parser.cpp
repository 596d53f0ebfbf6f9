#include "vignat/parser.hpp"

#include <utility>

#include "vignat/errors.hpp"

namespace vignat {

namespace {

bool is_return_type(const Token& t) {
  return t.kind == TokenKind::Keyword && (t.text == "void" || is_type_keyword(t.text) ||
                                          t.text == "long");
}

bool is_decl_type(const Token& t) {
  return t.kind == TokenKind::Keyword && (is_type_keyword(t.text) || t.text == "long");
}

// Recursive descent over the token stream. Nodes are created in a scratch
// arena and renumbered into pre-order ids at the end. Spans are tracked as
// token index ranges so every node's code is a verbatim, token-aligned
// slice of the source.
class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::string_view source)
      : toks_(tokens), src_(source) {}

  Ast run() {
    if (toks_.empty()) throw ParseError("empty input, expected a function definition", "", 1, 1);
    NodeId root = parse_function();
    if (pos_ < toks_.size())
      fail("trailing tokens after function body", toks_[pos_]);
    return finalize(root);
  }

 private:
  struct Span {
    std::size_t first = 0;  // token indices, inclusive
    std::size_t last = 0;
  };

  const std::vector<Token>& toks_;
  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<AstNode> arena_;
  std::vector<Span> spans_;

  [[noreturn]] void fail(const std::string& message, const Token& t) {
    throw ParseError(message + ", found '" + t.text + "'", t.text, t.line, t.column);
  }

  [[noreturn]] void fail_eof(const std::string& message) {
    const Token& last = toks_.back();
    throw ParseError(message + ", found end of input", "", last.line,
                     last.column + static_cast<int>(last.text.size()));
  }

  const Token& peek(std::size_t ahead = 0) {
    if (pos_ + ahead >= toks_.size()) fail_eof("unexpected end of input");
    return toks_[pos_ + ahead];
  }

  bool done() const { return pos_ >= toks_.size(); }

  bool at(std::string_view text) const {
    return pos_ < toks_.size() && toks_[pos_].text == text;
  }

  const Token& advance() { return toks_[pos_++]; }

  const Token& expect(std::string_view text, const std::string& what) {
    if (done()) fail_eof("expected " + what);
    if (toks_[pos_].text != text) fail("expected " + what, toks_[pos_]);
    return toks_[pos_++];
  }

  const Token& expect_kind(TokenKind kind, const std::string& what) {
    if (done()) fail_eof("expected " + what);
    if (toks_[pos_].kind != kind) fail("expected " + what, toks_[pos_]);
    return toks_[pos_++];
  }

  NodeId make(NodeKind kind, std::size_t first_token) {
    AstNode n;
    n.id = static_cast<NodeId>(arena_.size());
    n.kind = kind;
    arena_.push_back(std::move(n));
    spans_.push_back({first_token, first_token});
    return arena_.back().id;
  }

  void close(NodeId id, std::size_t last_token) { spans_[static_cast<std::size_t>(id)].last = last_token; }
  void close_here(NodeId id) { close(id, pos_ - 1); }

  AstNode& node(NodeId id) { return arena_[static_cast<std::size_t>(id)]; }

  // ---- grammar ----

  NodeId parse_function() {
    std::size_t start = pos_;
    const Token& ret = peek();
    if (!is_return_type(ret)) fail("expected a return type", ret);
    advance();
    const Token& name = expect_kind(TokenKind::Identifier, "function name");

    NodeId fn = make(NodeKind::Function, start);
    node(fn).attrs["name"] = name.text;
    node(fn).attrs["return_type"] = ret.text;

    NodeId params = parse_param_list();
    NodeId body = parse_block();
    node(fn).children = {params, body};
    close_here(fn);
    return fn;
  }

  NodeId parse_param_list() {
    std::size_t start = pos_;
    expect("(", "'('");
    NodeId list = make(NodeKind::ParamList, start);
    if (!at(")")) {
      while (true) {
        const Token& type = peek();
        if (!is_decl_type(type)) fail("expected a parameter type", type);
        std::size_t pstart = pos_;
        advance();
        const Token& pname = expect_kind(TokenKind::Identifier, "parameter name");
        NodeId param = make(NodeKind::Decl, pstart);
        node(param).attrs["name"] = pname.text;
        node(param).attrs["type"] = type.text;
        close_here(param);
        node(list).children.push_back(param);
        if (at(",")) {
          advance();
          continue;
        }
        break;
      }
    }
    expect(")", "')'");
    close_here(list);
    return list;
  }

  NodeId parse_block() {
    std::size_t start = pos_;
    expect("{", "'{'");
    NodeId block = make(NodeKind::Block, start);
    while (!at("}")) {
      if (done()) fail_eof("expected '}'");
      NodeId stmt = parse_statement();
      node(block).children.push_back(stmt);
    }
    expect("}", "'}'");
    close_here(block);
    return block;
  }

  // Statement spans exclude the terminating ';'; the enclosing block owns it.
  NodeId parse_statement() {
    const Token& t = peek();
    if (t.text == "{") return parse_block();
    if (is_decl_type(t)) {
      NodeId decl = parse_decl_core();
      expect(";", "';'");
      return decl;
    }
    if (t.text == "if") return parse_if();
    if (t.text == "while") return parse_while();
    if (t.text == "for") return parse_for();
    if (t.text == "return") return parse_return();
    if (t.kind == TokenKind::Identifier && pos_ + 1 < toks_.size() &&
        toks_[pos_ + 1].text == "=") {
      NodeId assign = parse_assign_core();
      expect(";", "';'");
      return assign;
    }
    NodeId expr = parse_expression();
    expect(";", "';'");
    return expr;
  }

  NodeId parse_decl_core() {
    std::size_t start = pos_;
    const Token& type = advance();
    const Token& name = expect_kind(TokenKind::Identifier, "a variable name");
    NodeId decl = make(NodeKind::Decl, start);
    node(decl).attrs["name"] = name.text;
    node(decl).attrs["type"] = type.text;
    if (at("=")) {
      advance();
      NodeId init = parse_expression();
      node(decl).children.push_back(init);
    }
    close_here(decl);
    return decl;
  }

  NodeId parse_assign_core() {
    std::size_t start = pos_;
    const Token& name = advance();
    NodeId lhs = make(NodeKind::Identifier, start);
    node(lhs).attrs["name"] = name.text;
    close_here(lhs);
    expect("=", "'='");
    NodeId assign = make(NodeKind::Assign, start);
    NodeId rhs = parse_expression();
    node(assign).children = {lhs, rhs};
    close_here(assign);
    return assign;
  }

  NodeId parse_condition() {
    std::size_t start = pos_;
    NodeId cond = make(NodeKind::Condition, start);
    NodeId expr = parse_expression();
    node(cond).children.push_back(expr);
    close_here(cond);
    return cond;
  }

  NodeId parse_if() {
    std::size_t start = pos_;
    advance();  // if
    NodeId stmt = make(NodeKind::If, start);
    expect("(", "'('");
    NodeId cond = parse_condition();
    expect(")", "')'");
    NodeId then_branch = parse_statement();
    node(stmt).children = {cond, then_branch};
    if (at("else")) {
      advance();
      NodeId else_branch = parse_statement();
      node(stmt).children.push_back(else_branch);
    }
    close_here(stmt);
    return stmt;
  }

  NodeId parse_while() {
    std::size_t start = pos_;
    advance();  // while
    NodeId stmt = make(NodeKind::While, start);
    expect("(", "'('");
    NodeId cond = parse_condition();
    expect(")", "')'");
    NodeId body = parse_statement();
    node(stmt).children = {cond, body};
    close_here(stmt);
    return stmt;
  }

  // Children are [init?, Condition, update?, body]; the condition is
  // mandatory so the loop always lowers to a two-way predicate.
  NodeId parse_for() {
    std::size_t start = pos_;
    advance();  // for
    NodeId stmt = make(NodeKind::For, start);
    expect("(", "'('");

    std::vector<NodeId> children;
    if (!at(";")) {
      if (is_decl_type(peek())) {
        children.push_back(parse_decl_core());
      } else if (peek().kind == TokenKind::Identifier && pos_ + 1 < toks_.size() &&
                 toks_[pos_ + 1].text == "=") {
        children.push_back(parse_assign_core());
      } else {
        children.push_back(parse_expression());
      }
    }
    expect(";", "';'");

    if (at(";")) fail("for loop requires a condition", peek());
    children.push_back(parse_condition());
    expect(";", "';'");

    if (!at(")")) {
      if (peek().kind == TokenKind::Identifier && pos_ + 1 < toks_.size() &&
          toks_[pos_ + 1].text == "=") {
        children.push_back(parse_assign_core());
      } else {
        children.push_back(parse_expression());
      }
    }
    expect(")", "')'");

    children.push_back(parse_statement());
    node(stmt).children = std::move(children);
    close_here(stmt);
    return stmt;
  }

  NodeId parse_return() {
    std::size_t start = pos_;
    advance();  // return
    NodeId stmt = make(NodeKind::Return, start);
    if (!at(";")) {
      NodeId value = parse_expression();
      node(stmt).children.push_back(value);
    }
    expect(";", "';'");
    // Span runs through the expression (or just the keyword), not the ';'.
    close(stmt, pos_ - 2);
    return stmt;
  }

  // ---- expressions, lowest precedence first ----

  NodeId parse_expression() { return parse_or(); }

  NodeId parse_binary_chain(NodeId (Parser::*next)(), std::initializer_list<std::string_view> ops) {
    std::size_t start = pos_;
    NodeId lhs = (this->*next)();
    while (!done() && toks_[pos_].kind == TokenKind::Operator) {
      bool matched = false;
      for (auto op : ops)
        if (toks_[pos_].text == op) matched = true;
      if (!matched) break;
      const Token& op = advance();
      NodeId rhs = (this->*next)();
      NodeId bin = make(NodeKind::BinaryOp, start);
      node(bin).attrs["op"] = op.text;
      node(bin).children = {lhs, rhs};
      close_here(bin);
      lhs = bin;
    }
    return lhs;
  }

  NodeId parse_or() { return parse_binary_chain(&Parser::parse_and, {"||"}); }
  NodeId parse_and() { return parse_binary_chain(&Parser::parse_equality, {"&&"}); }
  NodeId parse_equality() { return parse_binary_chain(&Parser::parse_relational, {"==", "!="}); }
  NodeId parse_relational() {
    return parse_binary_chain(&Parser::parse_additive, {"<", "<=", ">", ">="});
  }
  NodeId parse_additive() { return parse_binary_chain(&Parser::parse_multiplicative, {"+", "-"}); }
  NodeId parse_multiplicative() {
    return parse_binary_chain(&Parser::parse_unary, {"*", "/", "%"});
  }

  NodeId parse_unary() {
    if (at("-") || at("!")) {
      std::size_t start = pos_;
      const Token& op = advance();
      NodeId un = make(NodeKind::UnaryOp, start);
      node(un).attrs["op"] = op.text;
      NodeId operand = parse_unary();
      node(un).children.push_back(operand);
      close_here(un);
      return un;
    }
    return parse_primary();
  }

  NodeId parse_primary() {
    const Token& t = peek();
    if (t.kind == TokenKind::IntegerLiteral || t.kind == TokenKind::FloatLiteral ||
        t.kind == TokenKind::StringLiteral) {
      std::size_t start = pos_;
      advance();
      NodeId lit = make(NodeKind::Literal, start);
      node(lit).attrs["value"] = t.text;
      node(lit).attrs["type"] = t.kind == TokenKind::IntegerLiteral ? "int"
                                : t.kind == TokenKind::FloatLiteral ? "float"
                                                                    : "string";
      close_here(lit);
      return lit;
    }
    if (t.kind == TokenKind::Identifier) {
      std::size_t start = pos_;
      advance();
      if (at("(")) {
        advance();
        NodeId call = make(NodeKind::Call, start);
        node(call).attrs["callee"] = t.text;
        if (!at(")")) {
          while (true) {
            NodeId arg = parse_expression();
            node(call).children.push_back(arg);
            if (at(",")) {
              advance();
              continue;
            }
            break;
          }
        }
        expect(")", "')'");
        close_here(call);
        return call;
      }
      NodeId ident = make(NodeKind::Identifier, start);
      node(ident).attrs["name"] = t.text;
      close_here(ident);
      return ident;
    }
    if (t.text == "(") {
      advance();
      NodeId inner = parse_expression();
      expect(")", "')'");
      return inner;
    }
    fail("expected an expression", t);
  }

  // ---- finalize: renumber ids to pre-order and cut code slices ----

  Ast finalize(NodeId root) {
    Ast out;
    out.nodes.reserve(arena_.size());
    std::vector<NodeId> remap(arena_.size(), -1);
    renumber(root, remap, out);
    out.root = 0;
    for (AstNode& n : out.nodes)
      for (NodeId& c : n.children) c = remap[static_cast<std::size_t>(c)];
    return out;
  }

  void renumber(NodeId temp_id, std::vector<NodeId>& remap, Ast& out) {
    const AstNode& src = arena_[static_cast<std::size_t>(temp_id)];
    const Span& span = spans_[static_cast<std::size_t>(temp_id)];
    NodeId fresh = static_cast<NodeId>(out.nodes.size());
    remap[static_cast<std::size_t>(temp_id)] = fresh;

    AstNode n;
    n.id = fresh;
    n.kind = src.kind;
    n.attrs = src.attrs;
    n.children = src.children;  // remapped after the walk
    n.code_begin = toks_[span.first].begin;
    n.code_end = toks_[span.last].end;
    n.code = std::string(src_.substr(n.code_begin, n.code_end - n.code_begin));
    out.nodes.push_back(std::move(n));

    for (NodeId c : src.children) renumber(c, remap, out);
  }
};

}  // namespace

Ast parse(const std::vector<Token>& tokens, std::string_view source) {
  return Parser(tokens, source).run();
}

Ast parse_function(std::string_view source) { return parse(lex(source), source); }

}  // namespace vignat
