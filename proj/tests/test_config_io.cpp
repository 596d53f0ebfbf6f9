#include "vignat/config.hpp"

#include <gtest/gtest.h>

#include <cctype>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vignat/errors.hpp"
#include "vignat/model_io.hpp"

using namespace vignat;

namespace {

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

Model small_model() {
  Model m;
  m.config = default_config();
  m.config.embed_dim = 4;
  m.config.model.hidden_dim = 3;
  m.config.model.layers = 2;
  m.config.model.heads = 2;

  SourceFunction f;
  f.name = "f";
  f.source = "int f(int a) { return a + 1; }";
  m.vocab = build_vocab({f}, 1);

  Rng rng(31);
  std::vector<LayerSpec> specs = make_layer_specs(m.config);
  m.params = init_params(specs, m.vocab.size(), m.config.embed_dim, rng);
  return m;
}

bool params_identical(const ModelParams& a, const ModelParams& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    if (a.layers[l].weight.data != b.layers[l].weight.data) return false;
    if (a.layers[l].attention != b.layers[l].attention) return false;
  }
  return a.readout_weight == b.readout_weight && a.readout_bias == b.readout_bias &&
         a.embedding.weights.data == b.embedding.weights.data &&
         a.embedding.trainable == b.embedding.trainable;
}

}  // namespace

TEST(DefaultConfig, MatchesDocumentedValues) {
  PipelineConfig cfg = default_config();
  EXPECT_EQ(cfg.embed_dim, 64);
  EXPECT_EQ(cfg.node_cap, 64);
  EXPECT_EQ(cfg.max_tokens, 1200);
  EXPECT_EQ(cfg.min_count, 1);
  EXPECT_EQ(cfg.classes.names(), (std::vector<std::string>{"ast", "cfg"}));
  EXPECT_EQ(cfg.direction, Direction::Bidirected);

  EXPECT_EQ(cfg.model.kind, LayerKind::Gat);
  EXPECT_EQ(cfg.model.layers, 2);
  EXPECT_EQ(cfg.model.hidden_dim, 64);
  EXPECT_EQ(cfg.model.heads, 1);
  EXPECT_DOUBLE_EQ(cfg.model.leaky_slope, 0.2);
  EXPECT_EQ(cfg.model.activation, Activation::ReLU);
  EXPECT_FALSE(cfg.model.gcn_normalize);

  EXPECT_DOUBLE_EQ(cfg.train.learning_rate, 1e-4);
  EXPECT_EQ(cfg.train.epochs, 100);
  EXPECT_EQ(cfg.train.batch_size, 8);
  EXPECT_EQ(cfg.train.optimizer, OptimizerKind::AdaptiveMoment);
  EXPECT_DOUBLE_EQ(cfg.train.beta1, 0.9);
  EXPECT_DOUBLE_EQ(cfg.train.beta2, 0.999);
  EXPECT_DOUBLE_EQ(cfg.train.epsilon, 1e-8);
  EXPECT_DOUBLE_EQ(cfg.train.train_fraction, 0.8);
  EXPECT_DOUBLE_EQ(cfg.train.test_fraction, 0.2);

  EXPECT_DOUBLE_EQ(cfg.threshold, 0.5);
  EXPECT_EQ(cfg.seed, 42u);
}

TEST(ConfigFromJson, AppliesPartialOverridesOverDefaults) {
  PipelineConfig cfg = config_from_json_text(
      R"({"embed_dim": 8,
          "classes": ["ddg", "ast"],
          "direction": "directed",
          "model": {"kind": "gcn", "layers": 1, "gcn_normalize": true},
          "train": {"epochs": 3, "optimizer": "gd"}})");

  EXPECT_EQ(cfg.embed_dim, 8);
  EXPECT_EQ(cfg.classes.names(), (std::vector<std::string>{"ast", "ddg"}));
  EXPECT_EQ(cfg.direction, Direction::Directed);
  EXPECT_EQ(cfg.model.kind, LayerKind::Gcn);
  EXPECT_EQ(cfg.model.layers, 1);
  EXPECT_TRUE(cfg.model.gcn_normalize);
  EXPECT_EQ(cfg.train.epochs, 3);
  EXPECT_EQ(cfg.train.optimizer, OptimizerKind::GradientDescent);

  // Everything not mentioned keeps its default.
  EXPECT_EQ(cfg.node_cap, 64);
  EXPECT_EQ(cfg.model.hidden_dim, 64);
  EXPECT_DOUBLE_EQ(cfg.train.learning_rate, 1e-4);
}

TEST(ConfigFromJson, RejectsUnknownKeysAtEveryLevel) {
  std::string top = error_message([] { config_from_json_text(R"({"embed_dims": 8})"); });
  EXPECT_NE(top.find("unknown key 'embed_dims'"), std::string::npos);

  std::string model = error_message([] { config_from_json_text(R"({"model": {"head": 2}})"); });
  EXPECT_NE(model.find("unknown key 'head'"), std::string::npos);
  EXPECT_NE(model.find("config.model"), std::string::npos);

  std::string train = error_message([] { config_from_json_text(R"({"train": {"lr": 0.1}})"); });
  EXPECT_NE(train.find("unknown key 'lr'"), std::string::npos);
  EXPECT_NE(train.find("config.train"), std::string::npos);
}

TEST(ConfigFromJson, RejectsInvalidValues) {
  EXPECT_THROW(config_from_json_text("{"), Error);
  EXPECT_THROW(config_from_json_text(R"({"embed_dim": "big"})"), Error);
  EXPECT_THROW(config_from_json_text(R"({"embed_dim": 0})"), Error);
  EXPECT_THROW(config_from_json_text(R"({"model": {"kind": "transformer"}})"), Error);
  EXPECT_THROW(config_from_json_text(R"({"model": {"activation": "tanh"}})"), Error);
  EXPECT_THROW(config_from_json_text(R"({"model": {"layers": 0}})"), Error);
  EXPECT_THROW(config_from_json_text(R"({"direction": "sideways"})"), Error);
  EXPECT_THROW(config_from_json_text(R"({"classes": ["ast", "xyz"]})"), Error);
  EXPECT_THROW(config_from_json_text(R"({"classes": "ast"})"), Error);
  EXPECT_THROW(config_from_json_text(R"({"train": {"batch_size": 0}})"), Error);
  EXPECT_THROW(config_from_json_text(R"({"train": {"optimizer": "sgd-momentum"}})"), Error);
}

TEST(ConfigJson, CanonicalRenderingIsIdempotent) {
  PipelineConfig cfg = default_config();
  std::string once = config_to_json(cfg);
  std::string twice = config_to_json(config_from_json_text(once));
  EXPECT_EQ(once, twice);

  // Stable key order anchors the hash and the saved artifacts.
  EXPECT_LT(once.find("\"embed_dim\""), once.find("\"node_cap\""));
  EXPECT_LT(once.find("\"classes\""), once.find("\"model\""));
  EXPECT_LT(once.find("\"model\""), once.find("\"train\""));
  EXPECT_LT(once.find("\"train\""), once.find("\"seed\""));
}

TEST(ConfigIo, LoadsFromFileAndReportsMissing) {
  std::string path = ::testing::TempDir() + "cfg.json";
  {
    std::ofstream out(path);
    out << R"({"node_cap": 9})";
  }
  EXPECT_EQ(load_config(path).node_cap, 9);
  EXPECT_THROW(load_config(::testing::TempDir() + "no_such_config.json"), IoError);
}

TEST(ConfigHash, StableFormatAndDiscrimination) {
  PipelineConfig cfg = default_config();
  std::string h = config_hash(cfg);
  ASSERT_EQ(h.size(), 16u);
  for (char c : h) EXPECT_TRUE(std::isxdigit(static_cast<unsigned char>(c))) << h;

  EXPECT_EQ(config_hash(cfg), h);

  PipelineConfig other = cfg;
  other.threshold = 0.75;
  EXPECT_NE(config_hash(other), h);
}

TEST(MakeLayerSpecs, ExpandsTheModelSection) {
  PipelineConfig cfg = default_config();
  cfg.embed_dim = 8;
  cfg.model.layers = 3;
  cfg.model.hidden_dim = 16;
  cfg.model.heads = 4;
  cfg.model.leaky_slope = 0.3;

  std::vector<LayerSpec> specs = make_layer_specs(cfg);
  ASSERT_EQ(specs.size(), 3u);
  EXPECT_EQ(specs[0].in_dim, 8);
  EXPECT_EQ(specs[1].in_dim, 16);
  EXPECT_EQ(specs[2].in_dim, 16);
  for (const LayerSpec& s : specs) {
    EXPECT_EQ(s.kind, LayerKind::Gat);
    EXPECT_EQ(s.out_dim, 16);
    EXPECT_EQ(s.heads, 4);
    EXPECT_DOUBLE_EQ(s.leaky_slope, 0.3);
  }

  // Convolution ignores the head count but keeps the normalization flag.
  cfg.model.kind = LayerKind::Gcn;
  cfg.model.gcn_normalize = true;
  for (const LayerSpec& s : make_layer_specs(cfg)) {
    EXPECT_EQ(s.heads, 1);
    EXPECT_TRUE(s.normalize_adjacency);
  }
}

TEST(ModelJson, RoundTripsBitForBit) {
  Model m = small_model();
  std::string text = model_to_json(m);

  EXPECT_NE(text.find("\"format\": \"vignat-model\""), std::string::npos);
  EXPECT_NE(text.find("\"version\": 1"), std::string::npos);

  Model back = model_from_json(text);
  EXPECT_TRUE(params_identical(back.params, m.params));
  EXPECT_EQ(back.vocab.index_to_token, m.vocab.index_to_token);
  EXPECT_EQ(config_to_json(back.config), config_to_json(m.config));

  // And the same through a file.
  std::string path = ::testing::TempDir() + "model.json";
  save_model(m, path);
  Model loaded = load_model(path);
  EXPECT_TRUE(params_identical(loaded.params, m.params));
  EXPECT_THROW(load_model(::testing::TempDir() + "no_model.json"), IoError);
}

TEST(ModelJson, ValidatesStructure) {
  Model m = small_model();
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(model_to_json(m));

  EXPECT_THROW(model_from_json("{"), Error);

  nlohmann::ordered_json wrong_format = j;
  wrong_format["format"] = "other";
  std::string msg = error_message([&] { model_from_json(wrong_format.dump()); });
  EXPECT_NE(msg.find("not a model file"), std::string::npos);

  nlohmann::ordered_json missing_layer = j;
  missing_layer["layers"].erase(1);
  msg = error_message([&] { model_from_json(missing_layer.dump()); });
  EXPECT_NE(msg.find("layer count"), std::string::npos);

  nlohmann::ordered_json short_embedding = j;
  short_embedding["embedding"].erase(0);
  msg = error_message([&] { model_from_json(short_embedding.dump()); });
  EXPECT_NE(msg.find("embedding rows"), std::string::npos);

  nlohmann::ordered_json ragged = j;
  ragged["embedding"][1].erase(0);
  EXPECT_THROW(model_from_json(ragged.dump()), Error);
}

TEST(VocabJson, RoundTripsAndValidates) {
  SourceFunction f;
  f.name = "f";
  f.source = "int f(int a) { return a + a; }";
  Vocab vocab = build_vocab({f}, 1);

  Vocab back = vocab_from_json(vocab_to_json(vocab));
  EXPECT_EQ(back.index_to_token, vocab.index_to_token);
  EXPECT_EQ(back.index_of("a"), vocab.index_of("a"));

  EXPECT_THROW(vocab_from_json("[]"), Error);
  EXPECT_THROW(vocab_from_json(R"({"a": 0, "b": 1})"), Error);        // reserved rows missing
  EXPECT_THROW(vocab_from_json(R"({"<pad>": 0, "<unk>": 2, "x": 1})"), Error);
  EXPECT_THROW(vocab_from_json(R"({"<pad>": 0, "<unk>": 1, "x": 3})"), Error);   // gap
  EXPECT_THROW(vocab_from_json(R"({"<pad>": 0, "<unk>": 1, "x": 1})"), Error);   // duplicate
  EXPECT_EQ(vocab_from_json(R"({"<pad>": 0, "<unk>": 1})").size(), 2);
}

TEST(MetricsJson, CarriesCountsAndOptionalHash) {
  Metrics m = metrics_from_counts(3, 1, 2, 4);
  std::string text = metrics_to_json(m, "deadbeefdeadbeef");

  nlohmann::json j = nlohmann::json::parse(text);
  EXPECT_DOUBLE_EQ(j["accuracy"].get<double>(), 0.7);
  EXPECT_DOUBLE_EQ(j["precision"].get<double>(), 0.75);
  EXPECT_DOUBLE_EQ(j["recall"].get<double>(), 0.6);
  EXPECT_EQ(j["tp"], 3);
  EXPECT_EQ(j["fp"], 1);
  EXPECT_EQ(j["fn"], 2);
  EXPECT_EQ(j["tn"], 4);
  EXPECT_EQ(j["config_hash"], "deadbeefdeadbeef");

  EXPECT_EQ(nlohmann::json::parse(metrics_to_json(m, "")).count("config_hash"), 0u);
}
