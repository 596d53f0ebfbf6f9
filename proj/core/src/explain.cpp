#include "vignat/explain.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "vignat/errors.hpp"

namespace vignat {

Explanation top_k_edges(const ForwardTrace& trace, const GraphTensors& g, const Cpg& cpg, int k,
                        ScoreSource source, std::optional<int> layer) {
  if (k < 0) throw Error("k must be non-negative");

  std::vector<const AttentionRecord*> records;
  for (const AttentionRecord& rec : trace.attention)
    if (!layer || rec.layer == *layer) records.push_back(&rec);
  if (records.empty())
    throw NoAttentionLayers(layer ? "no attention records for layer " + std::to_string(*layer)
                                  : "the model has no attention layers");

  Explanation out;
  out.function_name = cpg.function_name;
  out.probability = trace.probability;
  out.k = k;

  std::vector<ExplainedEdge> scored;
  for (const auto& [i, j] : g.edge_rows) {
    // Pair (i, j): row i aggregates from row j, which is the graph edge
    // node j -> node i. Best score over the selected records wins.
    const AttentionRecord* best = nullptr;
    double best_score = 0.0;
    for (const AttentionRecord* rec : records) {
      double s = source == ScoreSource::Raw ? rec->logits.at(i, j) : rec->alpha.at(i, j);
      if (!best || s > best_score) {
        best = rec;
        best_score = s;
      }
    }
    ExplainedEdge e;
    e.src = g.node_ids[static_cast<std::size_t>(j)];
    e.dst = g.node_ids[static_cast<std::size_t>(i)];
    e.src_code = cpg.node(e.src).code;
    e.dst_code = cpg.node(e.dst).code;
    e.layer = best->layer;
    e.head = best->head;
    e.score = best_score;
    scored.push_back(std::move(e));
  }

  std::sort(scored.begin(), scored.end(), [](const ExplainedEdge& a, const ExplainedEdge& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.layer != b.layer) return a.layer < b.layer;
    if (a.src != b.src) return a.src < b.src;
    return a.dst < b.dst;
  });
  if (static_cast<int>(scored.size()) > k) scored.resize(static_cast<std::size_t>(k));
  out.edges = std::move(scored);
  return out;
}

std::string explanation_to_json(const Explanation& explanation, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["prob"] = explanation.probability;
  auto edges = nlohmann::ordered_json::array();
  for (const ExplainedEdge& e : explanation.edges) {
    nlohmann::ordered_json ej;
    ej["src"] = e.src;
    ej["dst"] = e.dst;
    ej["src_code"] = e.src_code;
    ej["dst_code"] = e.dst_code;
    ej["layer"] = e.layer;
    ej["head"] = e.head;
    ej["score"] = e.score;
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  return j.dump(2);
}

std::string render_explanation(const Explanation& explanation, const Cpg& cpg,
                               const std::string& comment) {
  std::vector<Highlight> highlights;
  for (const ExplainedEdge& e : explanation.edges) highlights.push_back({e.src, e.dst, e.score});
  return to_dot(cpg, highlights, comment);
}

}  // namespace vignat
