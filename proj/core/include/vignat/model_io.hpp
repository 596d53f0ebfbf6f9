#pragma once

#include <string>

#include "vignat/config.hpp"
#include "vignat/featurize.hpp"
#include "vignat/gnn.hpp"
#include "vignat/train.hpp"

namespace vignat {

// Everything inference needs: the effective config, the token table the
// model was trained against, and the trained parameters.
struct Model {
  PipelineConfig config;
  Vocab vocab;
  ModelParams params;
};

std::vector<LayerSpec> model_specs(const Model& model);

// Serialization round-trips bit for bit: doubles are written in shortest
// form and read back to the same value.
std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

std::string vocab_to_json(const Vocab& vocab);
Vocab vocab_from_json(const std::string& text);

std::string metrics_to_json(const Metrics& metrics, const std::string& config_hash);

}  // namespace vignat
