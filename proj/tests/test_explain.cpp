#include "vignat/explain.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "vignat/errors.hpp"
#include "vignat/featurize.hpp"
#include "vignat/parser.hpp"

using namespace vignat;

namespace {

// Three nodes on a directed cycle 10 -> 20 -> 30 -> 10, one spare row.
Cpg toy_cpg() {
  Cpg cpg;
  cpg.function_name = "toy";
  cpg.nodes = {{10, "Decl", "int a = 1"}, {20, "Assign", "a = a + 1"}, {30, "Return", "return a"}};
  cpg.edges = {{10, 20, EdgeClass::Ast}, {20, 30, EdgeClass::Cfg}, {30, 10, EdgeClass::Cfg}};
  return cpg;
}

GraphTensors toy_tensors() {
  GraphTensors g;
  g.cap = 4;
  g.valid_count = 3;
  g.x = Matrix(4, 2);
  g.valid = {1, 1, 1, 0};
  g.adj = {1, 0, 1, 0,   //
           1, 1, 0, 0,   //
           0, 1, 1, 0,   //
           0, 0, 0, 0};
  g.node_ids = {10, 20, 30, 0};
  // Pair (i, j) is the graph edge node_ids[j] -> node_ids[i].
  g.edge_rows = {{1, 0}, {2, 1}, {0, 2}};
  return g;
}

Matrix scores(double on_10_to_20, double on_20_to_30, double on_30_to_10, double diagonal) {
  Matrix m(4, 4);
  m.at(1, 0) = on_10_to_20;
  m.at(2, 1) = on_20_to_30;
  m.at(0, 2) = on_30_to_10;
  for (int i = 0; i < 3; ++i) m.at(i, i) = diagonal;
  return m;
}

AttentionRecord record(int layer, int head, Matrix logits, Matrix alpha) {
  AttentionRecord rec;
  rec.layer = layer;
  rec.head = head;
  rec.logits = std::move(logits);
  rec.alpha = std::move(alpha);
  return rec;
}

// Diagonal entries are huge on purpose: self-loop rows must never be ranked.
ForwardTrace toy_trace() {
  ForwardTrace trace;
  trace.probability = 0.75;
  trace.attention.push_back(record(0, 0, scores(0.9, 0.2, 0.5, 99.0),  //
                                   scores(0.6, 0.3, 0.1, 99.0)));
  trace.attention.push_back(record(0, 1, scores(0.9, 0.8, 0.4, 99.0),  //
                                   scores(0.2, 0.45, 0.3, 99.0)));
  trace.attention.push_back(record(1, 0, scores(0.7, 0.1, 0.95, 99.0),  //
                                   scores(0.1, 0.05, 0.9, 99.0)));
  return trace;
}

}  // namespace

TEST(TopKEdges, RanksByBestRawScoreAcrossLayersAndHeads) {
  Explanation ex = top_k_edges(toy_trace(), toy_tensors(), toy_cpg(), 5);

  EXPECT_EQ(ex.function_name, "toy");
  EXPECT_DOUBLE_EQ(ex.probability, 0.75);
  EXPECT_EQ(ex.k, 5);
  ASSERT_EQ(ex.edges.size(), 3u);  // only real edges, never self-loops

  // 30 -> 10 peaks in layer 1; 10 -> 20 ties across heads and keeps the
  // earlier record; 20 -> 30 peaks in layer 0 head 1.
  EXPECT_EQ(ex.edges[0].src, 30);
  EXPECT_EQ(ex.edges[0].dst, 10);
  EXPECT_DOUBLE_EQ(ex.edges[0].score, 0.95);
  EXPECT_EQ(ex.edges[0].layer, 1);
  EXPECT_EQ(ex.edges[0].head, 0);
  EXPECT_EQ(ex.edges[0].src_code, "return a");
  EXPECT_EQ(ex.edges[0].dst_code, "int a = 1");

  EXPECT_EQ(ex.edges[1].src, 10);
  EXPECT_EQ(ex.edges[1].dst, 20);
  EXPECT_DOUBLE_EQ(ex.edges[1].score, 0.9);
  EXPECT_EQ(ex.edges[1].layer, 0);
  EXPECT_EQ(ex.edges[1].head, 0);

  EXPECT_EQ(ex.edges[2].src, 20);
  EXPECT_EQ(ex.edges[2].dst, 30);
  EXPECT_DOUBLE_EQ(ex.edges[2].score, 0.8);
  EXPECT_EQ(ex.edges[2].layer, 0);
  EXPECT_EQ(ex.edges[2].head, 1);
}

TEST(TopKEdges, KLimitsTheList) {
  Explanation two = top_k_edges(toy_trace(), toy_tensors(), toy_cpg(), 2);
  ASSERT_EQ(two.edges.size(), 2u);
  EXPECT_DOUBLE_EQ(two.edges[0].score, 0.95);
  EXPECT_DOUBLE_EQ(two.edges[1].score, 0.9);

  Explanation none = top_k_edges(toy_trace(), toy_tensors(), toy_cpg(), 0);
  EXPECT_TRUE(none.edges.empty());
  EXPECT_EQ(none.k, 0);

  EXPECT_THROW(top_k_edges(toy_trace(), toy_tensors(), toy_cpg(), -1), Error);
}

TEST(TopKEdges, NormalizedScoresComeFromAlpha) {
  Explanation ex =
      top_k_edges(toy_trace(), toy_tensors(), toy_cpg(), 5, ScoreSource::Normalized);
  ASSERT_EQ(ex.edges.size(), 3u);
  EXPECT_DOUBLE_EQ(ex.edges[0].score, 0.9);  // 30 -> 10, layer 1
  EXPECT_EQ(ex.edges[0].src, 30);
  EXPECT_DOUBLE_EQ(ex.edges[1].score, 0.6);  // 10 -> 20, layer 0 head 0
  EXPECT_EQ(ex.edges[1].src, 10);
  EXPECT_DOUBLE_EQ(ex.edges[2].score, 0.45);  // 20 -> 30, layer 0 head 1
  EXPECT_EQ(ex.edges[2].src, 20);
  EXPECT_EQ(ex.edges[2].head, 1);
}

TEST(TopKEdges, LayerSelectorRestrictsRecords) {
  Explanation ex = top_k_edges(toy_trace(), toy_tensors(), toy_cpg(), 5, ScoreSource::Raw, 1);
  ASSERT_EQ(ex.edges.size(), 3u);
  EXPECT_DOUBLE_EQ(ex.edges[0].score, 0.95);
  EXPECT_EQ(ex.edges[0].layer, 1);
  EXPECT_DOUBLE_EQ(ex.edges[1].score, 0.7);  // 10 -> 20 inside layer 1 only
  EXPECT_EQ(ex.edges[1].layer, 1);
  EXPECT_DOUBLE_EQ(ex.edges[2].score, 0.1);

  try {
    top_k_edges(toy_trace(), toy_tensors(), toy_cpg(), 5, ScoreSource::Raw, 7);
    FAIL() << "expected NoAttentionLayers";
  } catch (const NoAttentionLayers& e) {
    EXPECT_NE(std::string(e.what()).find("layer 7"), std::string::npos);
  }
}

TEST(TopKEdges, EqualScoresFallBackToSourceThenDestination) {
  ForwardTrace trace;
  trace.probability = 0.5;
  trace.attention.push_back(record(0, 0, scores(0.5, 0.5, 0.5, 9.0),  //
                                   scores(0.5, 0.5, 0.5, 9.0)));

  Explanation ex = top_k_edges(trace, toy_tensors(), toy_cpg(), 5);
  ASSERT_EQ(ex.edges.size(), 3u);
  EXPECT_EQ(ex.edges[0].src, 10);
  EXPECT_EQ(ex.edges[1].src, 20);
  EXPECT_EQ(ex.edges[2].src, 30);
}

TEST(TopKEdges, ThrowsWithoutAttention) {
  ForwardTrace convolution_only;
  convolution_only.probability = 0.4;
  EXPECT_THROW(top_k_edges(convolution_only, toy_tensors(), toy_cpg(), 3), NoAttentionLayers);
}

TEST(ExplanationJson, CarriesEdgesAndOptionalConfigHash) {
  Explanation ex = top_k_edges(toy_trace(), toy_tensors(), toy_cpg(), 2);
  std::string text = explanation_to_json(ex, "cafebabe12345678");

  nlohmann::json j = nlohmann::json::parse(text);
  EXPECT_DOUBLE_EQ(j["prob"].get<double>(), 0.75);
  EXPECT_EQ(j["config_hash"], "cafebabe12345678");
  ASSERT_EQ(j["edges"].size(), 2u);
  EXPECT_EQ(j["edges"][0]["src"], 30);
  EXPECT_EQ(j["edges"][0]["dst"], 10);
  EXPECT_EQ(j["edges"][0]["src_code"], "return a");
  EXPECT_EQ(j["edges"][0]["dst_code"], "int a = 1");
  EXPECT_EQ(j["edges"][0]["layer"], 1);
  EXPECT_EQ(j["edges"][0]["head"], 0);
  EXPECT_DOUBLE_EQ(j["edges"][0]["score"].get<double>(), 0.95);

  // Key order is stable for byte-identical artifacts.
  EXPECT_LT(text.find("\"prob\""), text.find("\"edges\""));
  EXPECT_LT(text.find("\"edges\""), text.find("\"config_hash\""));

  std::string bare = explanation_to_json(ex, "");
  EXPECT_EQ(nlohmann::json::parse(bare).count("config_hash"), 0u);
}

TEST(RenderExplanation, HighlightsChosenEdgesInRed) {
  Explanation ex = top_k_edges(toy_trace(), toy_tensors(), toy_cpg(), 1);
  std::string dot = render_explanation(ex, toy_cpg(), "run 42");

  EXPECT_NE(dot.find("red"), std::string::npos);
  EXPECT_NE(dot.find("0.9500"), std::string::npos);
  EXPECT_NE(dot.find("// run 42"), std::string::npos);

  // Exactly the one chosen edge is highlighted.
  std::size_t reds = 0;
  for (std::size_t pos = dot.find("red"); pos != std::string::npos; pos = dot.find("red", pos + 1))
    ++reds;
  EXPECT_EQ(reds, 1u);
}

TEST(TopKEdges, AgreesWithRealPipeline) {
  SourceFunction fn;
  fn.name = "real";
  fn.source = "int real(int a) { if (a > 1) { a = a - 1; } return a; }";
  fn.label = 1;

  Ast ast = parse_function(fn.source);
  FlowGraph cfg = build_cfg(ast);
  Cpg cpg = compose(ast, cfg, reaching_definitions(cfg, ast), control_dependence(ast),
                    EdgeClassSet{true, true, true, true}, fn.name, fn.label);
  SimpleGraph simple = simplify(cpg, Direction::Bidirected);

  Vocab vocab = build_vocab({fn}, 1);
  Rng rng(9);
  EmbeddingTable table = init_embedding(vocab.size(), 4, rng);
  GraphTensors g = tensorize(simple, cpg, vocab, table, 32);

  LayerSpec spec;
  spec.kind = LayerKind::Gat;
  spec.in_dim = 4;
  spec.out_dim = 4;
  spec.heads = 2;
  std::vector<LayerSpec> specs = {spec};
  ModelParams params = init_params(specs, vocab.size(), 4, rng);
  ForwardTrace trace = forward(g, params, specs);

  Explanation ex = top_k_edges(trace, g, cpg, 5);
  ASSERT_EQ(ex.edges.size(), 5u);
  for (std::size_t i = 1; i < ex.edges.size(); ++i)
    EXPECT_GE(ex.edges[i - 1].score, ex.edges[i].score);

  // Every reported edge is a real simple-graph edge with matching codes.
  std::set<std::pair<NodeId, NodeId>> known;
  for (const SimpleEdge& e : simple.edges) known.insert({e.src, e.dst});
  for (const ExplainedEdge& e : ex.edges) {
    EXPECT_TRUE(known.count({e.src, e.dst})) << e.src << "->" << e.dst;
    EXPECT_EQ(e.src_code, cpg.node(e.src).code);
    EXPECT_EQ(e.dst_code, cpg.node(e.dst).code);
  }
}
