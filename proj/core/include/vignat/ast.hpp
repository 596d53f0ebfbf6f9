#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace vignat {

using NodeId = int;

enum class NodeKind {
  Function,
  ParamList,
  Block,
  Decl,
  Assign,
  If,
  While,
  For,
  Return,
  Call,
  BinaryOp,
  UnaryOp,
  Identifier,
  Literal,
  Condition,
};

struct AstNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::Function;
  std::string code;  // verbatim source slice covering this node's tokens
  std::vector<NodeId> children;
  std::map<std::string, std::string> attrs;
  // Half-open byte range of `code` in the original source. Zero-width for
  // nodes that own no tokens (an empty parameter list, say).
  std::size_t code_begin = 0;
  std::size_t code_end = 0;
};

// Arena-owned tree. Ids are pre-order positions, so nodes[id] is the node
// with that id and iteration order is the pre-order walk.
struct Ast {
  std::vector<AstNode> nodes;
  NodeId root = 0;

  const AstNode& node(NodeId id) const { return nodes[static_cast<std::size_t>(id)]; }
  AstNode& node(NodeId id) { return nodes[static_cast<std::size_t>(id)]; }
  int size() const { return static_cast<int>(nodes.size()); }
};

const char* node_kind_name(NodeKind kind);

// Stable JSON form: {id, kind, code, attrs, children: [...]}, children in
// source order.
std::string ast_to_json(const Ast& ast);

std::string ast_to_dot(const Ast& ast);

}  // namespace vignat
