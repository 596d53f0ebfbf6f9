#include "vignat/model_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vignat/errors.hpp"

namespace vignat {

using ordered_json = nlohmann::ordered_json;

std::vector<LayerSpec> model_specs(const Model& model) { return make_layer_specs(model.config); }

namespace {

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < m.rows; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(m.at(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error("expected a matrix (array of rows)");
  int rows = static_cast<int>(j.size());
  int cols = rows > 0 ? static_cast<int>(j.at(0).size()) : 0;
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<int>(row.size()) != cols) throw Error("ragged matrix in model file");
    for (int c = 0; c < cols; ++c) m.at(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

ordered_json vocab_json(const Vocab& vocab) {
  ordered_json j = ordered_json::object();
  for (int i = 0; i < vocab.size(); ++i) j[vocab.index_to_token[static_cast<std::size_t>(i)]] = i;
  return j;
}

Vocab vocab_from(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("vocab must be an object of token to index");
  Vocab v;
  v.index_to_token.assign(j.size(), "");
  for (auto it = j.begin(); it != j.end(); ++it) {
    int idx = it.value().get<int>();
    if (idx < 0 || idx >= static_cast<int>(j.size()) ||
        !v.index_to_token[static_cast<std::size_t>(idx)].empty())
      throw Error("vocab indices must cover 0..n-1 exactly once");
    v.index_to_token[static_cast<std::size_t>(idx)] = it.key();
    v.token_to_index[it.key()] = idx;
  }
  if (v.size() < 2 || v.index_to_token[0] != "<pad>" || v.index_to_token[1] != "<unk>")
    throw Error("vocab must reserve <pad> at 0 and <unk> at 1");
  return v;
}

}  // namespace

std::string vocab_to_json(const Vocab& vocab) { return vocab_json(vocab).dump(2); }

Vocab vocab_from_json(const std::string& text) {
  try {
    return vocab_from(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid vocab JSON: ") + e.what());
  }
}

std::string model_to_json(const Model& model) {
  ordered_json j;
  j["format"] = "vignat-model";
  j["version"] = 1;
  j["config_hash"] = config_hash(model.config);
  j["config"] = ordered_json::parse(config_to_json(model.config));
  j["vocab"] = vocab_json(model.vocab);
  j["embedding"] = matrix_to_json(model.params.embedding.weights);
  j["embedding_trainable"] = model.params.embedding.trainable;

  ordered_json layers = ordered_json::array();
  for (const LayerParams& lp : model.params.layers) {
    ordered_json lj;
    lj["weight"] = matrix_to_json(lp.weight);
    ordered_json heads = ordered_json::array();
    for (const auto& a : lp.attention) heads.push_back(a);
    lj["attention"] = std::move(heads);
    layers.push_back(std::move(lj));
  }
  j["layers"] = std::move(layers);
  j["readout_weight"] = model.params.readout_weight;
  j["readout_bias"] = model.params.readout_bias;
  return j.dump(2);
}

Model model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != "vignat-model")
      throw Error("not a model file (missing format marker)");

    Model m;
    m.config = config_from_json_text(j.at("config").dump());
    m.vocab = vocab_from(j.at("vocab"));
    m.params.embedding.weights = matrix_from_json(j.at("embedding"));
    m.params.embedding.trainable = j.value("embedding_trainable", true);
    for (const auto& lj : j.at("layers")) {
      LayerParams lp;
      lp.weight = matrix_from_json(lj.at("weight"));
      for (const auto& a : lj.at("attention"))
        lp.attention.push_back(a.get<std::vector<double>>());
      m.params.layers.push_back(std::move(lp));
    }
    m.params.readout_weight = j.at("readout_weight").get<std::vector<double>>();
    m.params.readout_bias = j.at("readout_bias").get<double>();

    if (m.params.layers.size() != static_cast<std::size_t>(m.config.model.layers))
      throw Error("model file layer count does not match its config");
    if (m.params.embedding.weights.rows != m.vocab.size())
      throw Error("embedding rows do not match the vocab");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid model file: ") + e.what());
  }
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << model_to_json(model) << '\n';
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

std::string metrics_to_json(const Metrics& metrics, const std::string& config_hash) {
  ordered_json j;
  j["accuracy"] = metrics.accuracy;
  j["precision"] = metrics.precision;
  j["recall"] = metrics.recall;
  j["f1"] = metrics.f1;
  j["tp"] = metrics.tp;
  j["fp"] = metrics.fp;
  j["fn"] = metrics.fn;
  j["tn"] = metrics.tn;
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  return j.dump(2);
}

}  // namespace vignat
