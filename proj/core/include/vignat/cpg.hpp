#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vignat/ast.hpp"
#include "vignat/flow_graph.hpp"

namespace vignat {

enum class EdgeClass { Ast, Cfg, Ddg, Cdg };

const char* edge_class_name(EdgeClass cls);

struct EdgeClassSet {
  bool ast = true;
  bool cfg = true;
  bool ddg = false;
  bool cdg = false;

  bool contains(EdgeClass cls) const;
  std::vector<std::string> names() const;
  // Parses "ast,cfg,ddg,cdg" (any non-empty subset, any order).
  static EdgeClassSet parse(const std::string& csv);
};

struct CpgNode {
  NodeId id = 0;
  std::string kind;
  std::string code;
};

struct CpgEdge {
  NodeId src = 0;
  NodeId dst = 0;
  EdgeClass cls = EdgeClass::Ast;
};

// One function's code property graph: every AST node, plus synthetic Entry
// and Exit when control flow is included, under up to four edge classes.
struct Cpg {
  std::string function_name;
  std::optional<int> label;
  std::vector<CpgNode> nodes;  // AST pre-order, then Entry, then Exit
  std::vector<CpgEdge> edges;

  bool has_node(NodeId id) const;
  const CpgNode& node(NodeId id) const;
};

// Merges the per-class views over the shared node set, keeping only the
// classes in `include`. Throws InconsistentInputs if any edge endpoint is
// not a known node.
Cpg compose(const Ast& ast, const FlowGraph& cfg, const std::vector<DefUseChain>& ddg,
            const std::vector<std::pair<NodeId, NodeId>>& cdg, EdgeClassSet include,
            std::string function_name, std::optional<int> label);

enum class Direction { Directed, Bidirected };

struct SimpleEdge {
  NodeId src = 0;
  NodeId dst = 0;

  bool operator==(const SimpleEdge&) const = default;
};

// Message-passing view of a Cpg: parallel edges collapsed, source-class
// self-loops dropped, and (in bidirected mode) every edge mirrored. A
// synthetic self-loop per node is implied and materialized on the adjacency
// diagonal at tensorization.
struct SimpleGraph {
  Direction direction = Direction::Bidirected;
  std::vector<NodeId> node_ids;                 // Cpg node order
  std::vector<SimpleEdge> edges;                // first-encounter order
  std::vector<std::vector<EdgeClass>> origins;  // per edge, sorted, deduped
  bool synthetic_self_loops = true;
  // In-neighbor indices per node (who node i aggregates from), sorted,
  // without the implied self-loop.
  std::vector<std::vector<int>> neighbors;

  int index_of(NodeId id) const;  // -1 if absent
};

SimpleGraph simplify(const Cpg& cpg, Direction direction);

struct Highlight {
  NodeId src = 0;
  NodeId dst = 0;
  double score = 0.0;
};

// Graphviz rendering. Edge classes get distinct styles; highlighted pairs
// are drawn once, red, labeled with their score to four decimals. The
// optional comment is emitted as a // line inside the graph.
std::string to_dot(const Cpg& cpg, const std::vector<Highlight>& highlights = {},
                   const std::string& comment = "");

std::string cpg_to_json(const Cpg& cpg);

}  // namespace vignat
