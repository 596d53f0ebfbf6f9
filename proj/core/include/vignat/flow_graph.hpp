#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vignat/ast.hpp"

namespace vignat {

enum class EdgeTag { Unconditional, True, False };

struct FlowEdge {
  NodeId src = 0;
  NodeId dst = 0;
  EdgeTag tag = EdgeTag::Unconditional;
};

// Intraprocedural control flow over statement and predicate nodes of one
// function. Entry and exit are synthetic nodes with ids past the AST range.
struct FlowGraph {
  NodeId entry = -1;
  NodeId exit = -1;
  std::vector<NodeId> nodes;  // entry first, statements in syntactic order, exit last
  std::vector<FlowEdge> edges;

  bool contains(NodeId id) const;
  std::vector<NodeId> successors(NodeId id) const;
  std::vector<NodeId> predecessors(NodeId id) const;
};

// Lowers the function body. Predicates (Condition nodes) get exactly one
// true and one false out-edge; statements unreachable from entry are pruned.
FlowGraph build_cfg(const Ast& ast);

struct DefUseChain {
  std::string variable;
  NodeId def_site = 0;
  NodeId use_site = 0;

  bool operator==(const DefUseChain&) const = default;
};

// Reaching definitions over the CFG: one chain per (variable, def, use)
// where the definition reaches the use along some path with no intervening
// redefinition. Parameters count as definitions at the entry node.
std::vector<DefUseChain> reaching_definitions(const FlowGraph& cfg, const Ast& ast);

// Syntax-directed control dependence: (predicate, dependent) pairs, where a
// statement or nested predicate depends on every enclosing loop or branch
// condition. A for loop's init runs unconditionally and depends only on the
// outer context.
std::vector<std::pair<NodeId, NodeId>> control_dependence(const Ast& ast);

std::string cfg_to_dot(const FlowGraph& cfg, const Ast& ast);

}  // namespace vignat
