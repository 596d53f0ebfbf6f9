#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vignat/cpg.hpp"
#include "vignat/gnn.hpp"

namespace vignat {

// Which attention quantity ranks the edges: the raw pre-normalization
// coefficients (default) or the normalized weights.
enum class ScoreSource { Raw, Normalized };

struct ExplainedEdge {
  NodeId src = 0;
  NodeId dst = 0;
  std::string src_code;
  std::string dst_code;
  int layer = 0;
  int head = 0;
  double score = 0.0;
};

struct Explanation {
  std::string function_name;
  double probability = 0.0;
  int k = 0;
  std::vector<ExplainedEdge> edges;  // scores non-increasing
};

// Ranks the graph's real edges (self-loops excluded) by their best
// attention score across layers and heads, or within one layer when
// `layer` is set. Ties break on (layer, src, dst) ascending, so the
// ordering is total. Throws NoAttentionLayers when nothing attends.
Explanation top_k_edges(const ForwardTrace& trace, const GraphTensors& g, const Cpg& cpg, int k,
                        ScoreSource source = ScoreSource::Raw,
                        std::optional<int> layer = std::nullopt);

std::string explanation_to_json(const Explanation& explanation, const std::string& config_hash);

// The full graph with the explained edges drawn red and score-labeled.
std::string render_explanation(const Explanation& explanation, const Cpg& cpg,
                               const std::string& comment = "");

}  // namespace vignat
