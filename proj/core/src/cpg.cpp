#include "vignat/cpg.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vignat/dot.hpp"
#include "vignat/errors.hpp"

namespace vignat {

const char* edge_class_name(EdgeClass cls) {
  switch (cls) {
    case EdgeClass::Ast: return "ast";
    case EdgeClass::Cfg: return "cfg";
    case EdgeClass::Ddg: return "ddg";
    case EdgeClass::Cdg: return "cdg";
  }
  return "?";
}

bool EdgeClassSet::contains(EdgeClass cls) const {
  switch (cls) {
    case EdgeClass::Ast: return ast;
    case EdgeClass::Cfg: return cfg;
    case EdgeClass::Ddg: return ddg;
    case EdgeClass::Cdg: return cdg;
  }
  return false;
}

std::vector<std::string> EdgeClassSet::names() const {
  std::vector<std::string> out;
  if (ast) out.push_back("ast");
  if (cfg) out.push_back("cfg");
  if (ddg) out.push_back("ddg");
  if (cdg) out.push_back("cdg");
  return out;
}

EdgeClassSet EdgeClassSet::parse(const std::string& csv) {
  EdgeClassSet set{false, false, false, false};
  std::stringstream ss(csv);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    if (item == "ast")
      set.ast = true;
    else if (item == "cfg")
      set.cfg = true;
    else if (item == "ddg")
      set.ddg = true;
    else if (item == "cdg")
      set.cdg = true;
    else
      throw Error("unknown edge class '" + item + "' (expected ast, cfg, ddg, cdg)");
    any = true;
  }
  if (!any) throw Error("edge class list is empty");
  return set;
}

bool Cpg::has_node(NodeId id) const {
  return std::any_of(nodes.begin(), nodes.end(), [&](const CpgNode& n) { return n.id == id; });
}

const CpgNode& Cpg::node(NodeId id) const {
  for (const CpgNode& n : nodes)
    if (n.id == id) return n;
  throw InconsistentInputs("unknown node id " + std::to_string(id));
}

Cpg compose(const Ast& ast, const FlowGraph& cfg, const std::vector<DefUseChain>& ddg,
            const std::vector<std::pair<NodeId, NodeId>>& cdg, EdgeClassSet include,
            std::string function_name, std::optional<int> label) {
  Cpg out;
  out.function_name = std::move(function_name);
  out.label = label;

  for (const AstNode& n : ast.nodes)
    out.nodes.push_back({n.id, node_kind_name(n.kind), n.code});
  if (include.cfg) {
    out.nodes.push_back({cfg.entry, "Entry", ""});
    out.nodes.push_back({cfg.exit, "Exit", ""});
  }

  auto known = [&](NodeId id) {
    if (id >= 0 && id < ast.size()) return true;
    return include.cfg && (id == cfg.entry || id == cfg.exit);
  };
  auto require = [&](NodeId id, const char* what) {
    if (!known(id))
      throw InconsistentInputs(std::string(what) + " references unknown node id " +
                               std::to_string(id));
  };

  if (include.ast) {
    for (const AstNode& n : ast.nodes)
      for (NodeId c : n.children) {
        require(c, "syntax edge");
        out.edges.push_back({n.id, c, EdgeClass::Ast});
      }
  }
  if (include.cfg) {
    for (const FlowEdge& e : cfg.edges) {
      require(e.src, "control flow edge");
      require(e.dst, "control flow edge");
      out.edges.push_back({e.src, e.dst, EdgeClass::Cfg});
    }
  }
  if (include.ddg) {
    for (const DefUseChain& c : ddg) {
      // Parameter definitions live on the entry node; without control flow
      // in the node set those chains have nowhere to attach.
      if (!include.cfg && (c.def_site == cfg.entry || c.def_site == cfg.exit)) continue;
      require(c.def_site, "data dependence edge");
      require(c.use_site, "data dependence edge");
      out.edges.push_back({c.def_site, c.use_site, EdgeClass::Ddg});
    }
  }
  if (include.cdg) {
    for (const auto& [pred, dep] : cdg) {
      require(pred, "control dependence edge");
      require(dep, "control dependence edge");
      out.edges.push_back({pred, dep, EdgeClass::Cdg});
    }
  }
  return out;
}

int SimpleGraph::index_of(NodeId id) const {
  for (std::size_t i = 0; i < node_ids.size(); ++i)
    if (node_ids[i] == id) return static_cast<int>(i);
  return -1;
}

SimpleGraph simplify(const Cpg& cpg, Direction direction) {
  SimpleGraph g;
  g.direction = direction;
  g.synthetic_self_loops = true;

  std::map<NodeId, int> index;
  for (const CpgNode& n : cpg.nodes) {
    index.emplace(n.id, static_cast<int>(g.node_ids.size()));
    g.node_ids.push_back(n.id);
  }

  std::map<std::pair<NodeId, NodeId>, std::size_t> seen;
  auto add = [&](NodeId src, NodeId dst, EdgeClass cls) {
    auto [it, fresh] = seen.try_emplace({src, dst}, g.edges.size());
    if (fresh) {
      g.edges.push_back({src, dst});
      g.origins.emplace_back();
    }
    auto& classes = g.origins[it->second];
    if (std::find(classes.begin(), classes.end(), cls) == classes.end()) classes.push_back(cls);
  };

  for (const CpgEdge& e : cpg.edges) {
    if (!index.count(e.src) || !index.count(e.dst))
      throw InconsistentInputs("edge endpoint not in node set");
    if (e.src == e.dst) continue;  // source-class self-loops are dropped
    add(e.src, e.dst, e.cls);
    if (direction == Direction::Bidirected) add(e.dst, e.src, e.cls);
  }

  for (auto& classes : g.origins)
    std::sort(classes.begin(), classes.end(),
              [](EdgeClass a, EdgeClass b) { return static_cast<int>(a) < static_cast<int>(b); });

  g.neighbors.assign(g.node_ids.size(), {});
  for (const SimpleEdge& e : g.edges)
    g.neighbors[static_cast<std::size_t>(index.at(e.dst))].push_back(index.at(e.src));
  for (auto& nbrs : g.neighbors) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return g;
}

namespace {

const char* edge_style(EdgeClass cls) {
  switch (cls) {
    case EdgeClass::Ast: return "color=black";
    case EdgeClass::Cfg: return "color=blue, penwidth=1.4";
    case EdgeClass::Ddg: return "color=darkgreen, style=dashed";
    case EdgeClass::Cdg: return "color=orange, style=dotted";
  }
  return "";
}

std::string format_score(double score) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", score);
  return buf;
}

}  // namespace

std::string to_dot(const Cpg& cpg, const std::vector<Highlight>& highlights,
                   const std::string& comment) {
  std::string out = "digraph cpg {\n";
  if (!comment.empty()) out += "  // " + comment + "\n";
  if (!cpg.nodes.empty()) out += "  node [shape=box, fontname=\"monospace\"];\n";

  for (const CpgNode& n : cpg.nodes) {
    std::string label = n.kind;
    if (!n.code.empty()) label += ": " + dot_truncate(n.code);
    out += "  n" + std::to_string(n.id) + " [label=\"" + dot_escape(label) + "\"";
    if (n.kind == "Entry" || n.kind == "Exit") out += ", shape=ellipse";
    out += "];\n";
  }

  // A highlight matches its exact directed pair when the Cpg has it, and
  // falls back to the reverse orientation otherwise.
  std::map<std::pair<NodeId, NodeId>, double> marked;
  if (!highlights.empty()) {
    std::map<std::pair<NodeId, NodeId>, int> present;
    for (const CpgEdge& e : cpg.edges) present[{e.src, e.dst}] = 1;
    for (const Highlight& h : highlights) {
      std::pair<NodeId, NodeId> fwd{h.src, h.dst}, rev{h.dst, h.src};
      marked.emplace(present.count(fwd) || !present.count(rev) ? fwd : rev, h.score);
    }
  }

  std::map<std::pair<NodeId, NodeId>, bool> highlight_drawn;
  for (const CpgEdge& e : cpg.edges) {
    std::pair<NodeId, NodeId> key{e.src, e.dst};
    auto hit = marked.find(key);
    if (hit != marked.end()) {
      if (highlight_drawn[key]) continue;  // one red line per highlighted pair
      highlight_drawn[key] = true;
      out += "  n" + std::to_string(e.src) + " -> n" + std::to_string(e.dst) +
             " [color=red, penwidth=2.0, label=\"" + format_score(hit->second) + "\"];\n";
      continue;
    }
    out += "  n" + std::to_string(e.src) + " -> n" + std::to_string(e.dst) + " [" +
           edge_style(e.cls) + "];\n";
  }

  out += "}\n";
  return out;
}

std::string cpg_to_json(const Cpg& cpg) {
  nlohmann::ordered_json j;
  auto nodes = nlohmann::ordered_json::array();
  for (const CpgNode& n : cpg.nodes) {
    nlohmann::ordered_json nj;
    nj["id"] = n.id;
    nj["kind"] = n.kind;
    nj["code"] = n.code;
    nodes.push_back(std::move(nj));
  }
  auto edges = nlohmann::ordered_json::array();
  for (const CpgEdge& e : cpg.edges) {
    nlohmann::ordered_json ej;
    ej["src"] = e.src;
    ej["dst"] = e.dst;
    ej["class"] = edge_class_name(e.cls);
    edges.push_back(std::move(ej));
  }
  j["nodes"] = std::move(nodes);
  j["edges"] = std::move(edges);
  if (cpg.label)
    j["label"] = *cpg.label;
  else
    j["label"] = nullptr;
  return j.dump(2);
}

}  // namespace vignat
