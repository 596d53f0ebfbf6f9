#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vignat/cpg.hpp"
#include "vignat/gnn.hpp"
#include "vignat/train.hpp"

namespace vignat {

struct ModelConfig {
  LayerKind kind = LayerKind::Gat;
  int layers = 2;
  int hidden_dim = 64;
  int heads = 1;
  double leaky_slope = 0.2;
  Activation activation = Activation::ReLU;
  bool gcn_normalize = false;
};

// Everything that shapes an experiment. One master seed feeds every stage
// through purpose-derived sub-seeds.
struct PipelineConfig {
  int embed_dim = 64;
  int node_cap = 64;
  int max_tokens = 1200;
  int min_count = 1;
  EdgeClassSet classes{true, true, false, false};
  Direction direction = Direction::Bidirected;
  ModelConfig model;
  TrainConfig train;
  double threshold = 0.5;
  std::uint64_t seed = 42;
};

PipelineConfig default_config();

// Strict JSON loading: missing keys fall back to defaults, unknown keys are
// an error. Nested objects follow the same rule.
PipelineConfig load_config(const std::string& path);
PipelineConfig config_from_json_text(const std::string& text);

// Canonical rendering of the effective config; embedded in artifacts.
std::string config_to_json(const PipelineConfig& cfg);

// 16 hex characters of FNV-1a over the canonical rendering.
std::string config_hash(const PipelineConfig& cfg);

std::vector<LayerSpec> make_layer_specs(const PipelineConfig& cfg);

const char* activation_name(Activation a);
const char* layer_kind_name(LayerKind k);
const char* direction_name(Direction d);
const char* optimizer_name(OptimizerKind k);

}  // namespace vignat
