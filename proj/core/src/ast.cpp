#include "vignat/ast.hpp"

#include <nlohmann/json.hpp>

#include "vignat/dot.hpp"

namespace vignat {

using ordered_json = nlohmann::ordered_json;

const char* node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Function: return "Function";
    case NodeKind::ParamList: return "ParamList";
    case NodeKind::Block: return "Block";
    case NodeKind::Decl: return "Decl";
    case NodeKind::Assign: return "Assign";
    case NodeKind::If: return "If";
    case NodeKind::While: return "While";
    case NodeKind::For: return "For";
    case NodeKind::Return: return "Return";
    case NodeKind::Call: return "Call";
    case NodeKind::BinaryOp: return "BinaryOp";
    case NodeKind::UnaryOp: return "UnaryOp";
    case NodeKind::Identifier: return "Identifier";
    case NodeKind::Literal: return "Literal";
    case NodeKind::Condition: return "Condition";
  }
  return "Unknown";
}

namespace {

ordered_json node_to_json(const Ast& ast, NodeId id) {
  const AstNode& n = ast.node(id);
  ordered_json j;
  j["id"] = n.id;
  j["kind"] = node_kind_name(n.kind);
  j["code"] = n.code;
  ordered_json attrs = ordered_json::object();
  for (const auto& [k, v] : n.attrs) attrs[k] = v;
  j["attrs"] = attrs;
  ordered_json children = ordered_json::array();
  for (NodeId c : n.children) children.push_back(node_to_json(ast, c));
  j["children"] = children;
  return j;
}

}  // namespace

std::string ast_to_json(const Ast& ast) {
  if (ast.nodes.empty()) return "{}";
  return node_to_json(ast, ast.root).dump(2);
}

std::string ast_to_dot(const Ast& ast) {
  std::string out = "digraph ast {\n";
  out += "  node [shape=box, fontname=\"monospace\"];\n";
  for (const AstNode& n : ast.nodes) {
    out += "  n" + std::to_string(n.id) + " [label=\"" +
           dot_escape(std::string(node_kind_name(n.kind)) + ": " + dot_truncate(n.code)) +
           "\"];\n";
  }
  for (const AstNode& n : ast.nodes)
    for (NodeId c : n.children)
      out += "  n" + std::to_string(n.id) + " -> n" + std::to_string(c) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace vignat
