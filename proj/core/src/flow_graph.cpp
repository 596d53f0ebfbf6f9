#include "vignat/flow_graph.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>

#include "vignat/dot.hpp"
#include "vignat/errors.hpp"

namespace vignat {

bool FlowGraph::contains(NodeId id) const {
  return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
}

std::vector<NodeId> FlowGraph::successors(NodeId id) const {
  std::vector<NodeId> out;
  for (const FlowEdge& e : edges)
    if (e.src == id) out.push_back(e.dst);
  return out;
}

std::vector<NodeId> FlowGraph::predecessors(NodeId id) const {
  std::vector<NodeId> out;
  for (const FlowEdge& e : edges)
    if (e.dst == id) out.push_back(e.src);
  return out;
}

namespace {

// An edge whose destination is not known yet: the source has finished and
// control falls through to whatever comes next.
struct Pending {
  NodeId src;
  EdgeTag tag;
};

class CfgBuilder {
 public:
  explicit CfgBuilder(const Ast& ast) : ast_(ast) {}

  FlowGraph run() {
    g_.entry = ast_.size();
    g_.exit = ast_.size() + 1;
    g_.nodes.push_back(g_.entry);

    const AstNode& fn = ast_.node(ast_.root);
    if (fn.kind != NodeKind::Function || fn.children.size() != 2)
      throw UnsupportedConstruct("control flow needs a function root");

    std::vector<Pending> frontier = {{g_.entry, EdgeTag::Unconditional}};
    frontier = lower(fn.children[1], std::move(frontier));
    connect(frontier, g_.exit);
    g_.nodes.push_back(g_.exit);

    prune_unreachable();
    return g_;
  }

 private:
  const Ast& ast_;
  FlowGraph g_;

  void connect(const std::vector<Pending>& frontier, NodeId dst) {
    for (const Pending& p : frontier) g_.edges.push_back({p.src, dst, p.tag});
  }

  NodeId place(NodeId id, const std::vector<Pending>& frontier) {
    g_.nodes.push_back(id);
    connect(frontier, id);
    return id;
  }

  std::vector<Pending> lower(NodeId id, std::vector<Pending> frontier) {
    const AstNode& n = ast_.node(id);
    switch (n.kind) {
      case NodeKind::Block: {
        for (NodeId child : n.children) frontier = lower(child, std::move(frontier));
        return frontier;
      }
      case NodeKind::Decl:
      case NodeKind::Assign:
      case NodeKind::Call:
      case NodeKind::Identifier:
      case NodeKind::Literal:
      case NodeKind::BinaryOp:
      case NodeKind::UnaryOp: {
        place(id, frontier);
        return {{id, EdgeTag::Unconditional}};
      }
      case NodeKind::Return: {
        place(id, frontier);
        g_.edges.push_back({id, g_.exit, EdgeTag::Unconditional});
        return {};
      }
      case NodeKind::If: {
        NodeId cond = n.children[0];
        place(cond, frontier);
        std::vector<Pending> out = lower(n.children[1], {{cond, EdgeTag::True}});
        if (n.children.size() > 2) {
          std::vector<Pending> other = lower(n.children[2], {{cond, EdgeTag::False}});
          out.insert(out.end(), other.begin(), other.end());
        } else {
          out.push_back({cond, EdgeTag::False});
        }
        return out;
      }
      case NodeKind::While: {
        NodeId cond = n.children[0];
        place(cond, frontier);
        std::vector<Pending> body_out = lower(n.children[1], {{cond, EdgeTag::True}});
        connect(body_out, cond);
        return {{cond, EdgeTag::False}};
      }
      case NodeKind::For: {
        auto cond_it =
            std::find_if(n.children.begin(), n.children.end(), [&](NodeId c) {
              return ast_.node(c).kind == NodeKind::Condition;
            });
        std::size_t cond_pos = static_cast<std::size_t>(cond_it - n.children.begin());
        NodeId cond = n.children[cond_pos];
        NodeId body = n.children.back();
        bool has_init = cond_pos > 0;
        bool has_update = cond_pos + 2 < n.children.size();

        if (has_init) {
          place(n.children[0], frontier);
          frontier = {{n.children[0], EdgeTag::Unconditional}};
        }
        place(cond, frontier);
        std::vector<Pending> body_out = lower(body, {{cond, EdgeTag::True}});
        if (has_update) {
          NodeId update = n.children[cond_pos + 1];
          place(update, body_out);
          connect({{update, EdgeTag::Unconditional}}, cond);
        } else {
          connect(body_out, cond);
        }
        return {{cond, EdgeTag::False}};
      }
      default:
        throw UnsupportedConstruct(std::string("cannot lower ") + node_kind_name(n.kind) +
                                   " in statement position");
    }
  }

  void prune_unreachable() {
    std::set<NodeId> reachable = {g_.entry};
    bool grew = true;
    while (grew) {
      grew = false;
      for (const FlowEdge& e : g_.edges)
        if (reachable.count(e.src) && !reachable.count(e.dst)) {
          reachable.insert(e.dst);
          grew = true;
        }
    }
    reachable.insert(g_.exit);  // exit stays even for non-terminating functions

    std::vector<NodeId> kept;
    for (NodeId id : g_.nodes)
      if (reachable.count(id)) kept.push_back(id);
    g_.nodes = std::move(kept);

    std::vector<FlowEdge> edges;
    for (const FlowEdge& e : g_.edges)
      if (reachable.count(e.src) && reachable.count(e.dst)) edges.push_back(e);
    g_.edges = std::move(edges);
  }
};

void collect_identifiers(const Ast& ast, NodeId id, std::vector<std::string>& out) {
  const AstNode& n = ast.node(id);
  if (n.kind == NodeKind::Identifier) out.push_back(n.attrs.at("name"));
  for (NodeId c : n.children) collect_identifiers(ast, c, out);
}

// Variable written by a CFG node, if any.
std::optional<std::string> defined_variable(const Ast& ast, NodeId id) {
  const AstNode& n = ast.node(id);
  if (n.kind == NodeKind::Decl && !n.children.empty()) return n.attrs.at("name");
  if (n.kind == NodeKind::Assign) return ast.node(n.children[0]).attrs.at("name");
  return std::nullopt;
}

// Variables read by a CFG node. An assignment reads only its right side.
std::vector<std::string> used_variables(const Ast& ast, NodeId id) {
  const AstNode& n = ast.node(id);
  std::vector<std::string> out;
  if (n.kind == NodeKind::Assign) {
    collect_identifiers(ast, n.children[1], out);
  } else if (n.kind == NodeKind::Decl) {
    if (!n.children.empty()) collect_identifiers(ast, n.children[0], out);
  } else {
    for (NodeId c : n.children) collect_identifiers(ast, c, out);
    if (n.kind == NodeKind::Identifier) out.push_back(n.attrs.at("name"));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

FlowGraph build_cfg(const Ast& ast) { return CfgBuilder(ast).run(); }

std::vector<DefUseChain> reaching_definitions(const FlowGraph& cfg, const Ast& ast) {
  struct Def {
    NodeId site;
    std::string variable;
  };

  // Parameters are definitions made by the entry node.
  std::vector<Def> defs;
  const AstNode& fn = ast.node(ast.root);
  for (NodeId param : ast.node(fn.children[0]).children)
    defs.push_back({cfg.entry, ast.node(param).attrs.at("name")});
  for (NodeId id : cfg.nodes) {
    if (id == cfg.entry || id == cfg.exit) continue;
    if (auto var = defined_variable(ast, id)) defs.push_back({id, *var});
  }

  std::size_t count = defs.size();
  std::map<NodeId, std::vector<std::uint8_t>> in, out;
  for (NodeId id : cfg.nodes) {
    in[id] = std::vector<std::uint8_t>(count, 0);
    out[id] = std::vector<std::uint8_t>(count, 0);
  }

  auto transfer = [&](NodeId id) {
    std::vector<std::uint8_t> next = in[id];
    for (std::size_t d = 0; d < count; ++d) {
      if (defs[d].site != id) continue;
      // This node generates def d and kills every other def of the variable.
      for (std::size_t e = 0; e < count; ++e)
        if (defs[e].variable == defs[d].variable) next[e] = 0;
      next[d] = 1;
    }
    return next;
  };

  // Round-robin to fixpoint; passes are bounded by |nodes| * |defs| + 1.
  long limit = static_cast<long>(cfg.nodes.size()) * static_cast<long>(count) + 1;
  for (long pass = 0;; ++pass) {
    if (pass > limit) throw Error("reaching definitions failed to converge");
    bool changed = false;
    for (NodeId id : cfg.nodes) {
      std::vector<std::uint8_t> merged(count, 0);
      for (const FlowEdge& e : cfg.edges)
        if (e.dst == id)
          for (std::size_t d = 0; d < count; ++d)
            if (out[e.src][d]) merged[d] = 1;
      in[id] = std::move(merged);
      std::vector<std::uint8_t> next = transfer(id);
      if (next != out[id]) {
        out[id] = std::move(next);
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::vector<DefUseChain> chains;
  for (NodeId id : cfg.nodes) {
    if (id == cfg.entry || id == cfg.exit) continue;
    for (const std::string& var : used_variables(ast, id))
      for (std::size_t d = 0; d < count; ++d)
        if (in[id][d] && defs[d].variable == var)
          chains.push_back({var, defs[d].site, id});
  }
  return chains;
}

namespace {

void walk_dependents(const Ast& ast, NodeId id, std::vector<NodeId>& stack,
                     std::vector<std::pair<NodeId, NodeId>>& out) {
  const AstNode& n = ast.node(id);
  auto emit = [&](NodeId dependent) {
    for (NodeId pred : stack) out.emplace_back(pred, dependent);
  };
  switch (n.kind) {
    case NodeKind::Block:
      for (NodeId c : n.children) walk_dependents(ast, c, stack, out);
      return;
    case NodeKind::Decl:
    case NodeKind::Assign:
    case NodeKind::Return:
    case NodeKind::Call:
    case NodeKind::Identifier:
    case NodeKind::Literal:
    case NodeKind::BinaryOp:
    case NodeKind::UnaryOp:
      emit(id);
      return;
    case NodeKind::If: {
      NodeId cond = n.children[0];
      emit(cond);
      stack.push_back(cond);
      walk_dependents(ast, n.children[1], stack, out);
      if (n.children.size() > 2) walk_dependents(ast, n.children[2], stack, out);
      stack.pop_back();
      return;
    }
    case NodeKind::While: {
      NodeId cond = n.children[0];
      emit(cond);
      stack.push_back(cond);
      walk_dependents(ast, n.children[1], stack, out);
      stack.pop_back();
      return;
    }
    case NodeKind::For: {
      auto cond_it = std::find_if(n.children.begin(), n.children.end(), [&](NodeId c) {
        return ast.node(c).kind == NodeKind::Condition;
      });
      std::size_t cond_pos = static_cast<std::size_t>(cond_it - n.children.begin());
      NodeId cond = n.children[cond_pos];
      if (cond_pos > 0) walk_dependents(ast, n.children[0], stack, out);
      emit(cond);
      stack.push_back(cond);
      if (cond_pos + 2 < n.children.size()) walk_dependents(ast, n.children[cond_pos + 1], stack, out);
      walk_dependents(ast, n.children.back(), stack, out);
      stack.pop_back();
      return;
    }
    default:
      return;
  }
}

}  // namespace

std::vector<std::pair<NodeId, NodeId>> control_dependence(const Ast& ast) {
  std::vector<std::pair<NodeId, NodeId>> out;
  std::vector<NodeId> stack;
  const AstNode& fn = ast.node(ast.root);
  walk_dependents(ast, fn.children[1], stack, out);
  return out;
}

std::string cfg_to_dot(const FlowGraph& cfg, const Ast& ast) {
  std::string out = "digraph cfg {\n";
  out += "  node [shape=box, fontname=\"monospace\"];\n";
  for (NodeId id : cfg.nodes) {
    std::string label;
    if (id == cfg.entry)
      label = "Entry";
    else if (id == cfg.exit)
      label = "Exit";
    else {
      const AstNode& n = ast.node(id);
      label = std::string(node_kind_name(n.kind)) + ": " + dot_truncate(n.code);
    }
    out += "  n" + std::to_string(id) + " [label=\"" + dot_escape(label) + "\"";
    if (id == cfg.entry || id == cfg.exit) out += ", shape=ellipse";
    out += "];\n";
  }
  for (const FlowEdge& e : cfg.edges) {
    out += "  n" + std::to_string(e.src) + " -> n" + std::to_string(e.dst);
    if (e.tag == EdgeTag::True) out += " [label=\"true\"]";
    if (e.tag == EdgeTag::False) out += " [label=\"false\"]";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace vignat
