#include "vignat/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vignat/errors.hpp"

namespace vignat {

using ordered_json = nlohmann::ordered_json;

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::ReLU: return "relu";
    case Activation::LeakyReLU: return "leaky_relu";
    case Activation::Identity: return "identity";
  }
  return "?";
}

const char* layer_kind_name(LayerKind k) { return k == LayerKind::Gat ? "gat" : "gcn"; }
const char* direction_name(Direction d) {
  return d == Direction::Directed ? "directed" : "bidirected";
}
const char* optimizer_name(OptimizerKind k) {
  return k == OptimizerKind::AdaptiveMoment ? "adam" : "gd";
}

namespace {

Activation activation_from(const std::string& s) {
  if (s == "relu") return Activation::ReLU;
  if (s == "leaky_relu") return Activation::LeakyReLU;
  if (s == "identity") return Activation::Identity;
  throw Error("unknown activation '" + s + "'");
}

LayerKind kind_from(const std::string& s) {
  if (s == "gat") return LayerKind::Gat;
  if (s == "gcn") return LayerKind::Gcn;
  throw Error("unknown model kind '" + s + "'");
}

Direction direction_from(const std::string& s) {
  if (s == "directed") return Direction::Directed;
  if (s == "bidirected") return Direction::Bidirected;
  throw Error("unknown direction '" + s + "'");
}

OptimizerKind optimizer_from(const std::string& s) {
  if (s == "adam") return OptimizerKind::AdaptiveMoment;
  if (s == "gd") return OptimizerKind::GradientDescent;
  throw Error("unknown optimizer '" + s + "'");
}

// Consumes recognized keys and complains about leftovers, so typos in a
// config file cannot silently fall back to defaults.
class KeyReader {
 public:
  KeyReader(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw Error(where_ + " must be a JSON object");
  }

  template <typename T, typename Fn>
  void read(const char* key, T& out, Fn&& convert) {
    seen_.push_back(key);
    if (j_.contains(key)) out = convert(j_.at(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const std::string& k : seen_)
        if (k == it.key()) known = true;
      if (!known) throw Error("unknown key '" + it.key() + "' in " + where_);
    }
  }

 private:
  const nlohmann::json& j_;
  std::string where_;
  std::vector<std::string> seen_;
};

std::string as_string(const nlohmann::json& v) { return v.get<std::string>(); }

void read_config_keys(const nlohmann::json& j, PipelineConfig& cfg) {
  KeyReader top(j, "config");
  top.read("embed_dim", cfg.embed_dim, [](const auto& v) { return v.template get<int>(); });
  top.read("node_cap", cfg.node_cap, [](const auto& v) { return v.template get<int>(); });
  top.read("max_tokens", cfg.max_tokens, [](const auto& v) { return v.template get<int>(); });
  top.read("min_count", cfg.min_count, [](const auto& v) { return v.template get<int>(); });
  top.read("classes", cfg.classes, [](const auto& v) {
    if (!v.is_array()) throw Error("'classes' must be an array of edge class names");
    std::string csv;
    for (const auto& item : v) {
      if (!csv.empty()) csv += ',';
      csv += item.template get<std::string>();
    }
    return EdgeClassSet::parse(csv);
  });
  top.read("direction", cfg.direction, [](const auto& v) { return direction_from(as_string(v)); });
  top.read("threshold", cfg.threshold, [](const auto& v) { return v.template get<double>(); });
  top.read("seed", cfg.seed, [](const auto& v) { return v.template get<std::uint64_t>(); });

  if (j.contains("model")) {
    KeyReader m(j.at("model"), "config.model");
    m.read("kind", cfg.model.kind, [](const auto& v) { return kind_from(as_string(v)); });
    m.read("layers", cfg.model.layers, [](const auto& v) { return v.template get<int>(); });
    m.read("hidden_dim", cfg.model.hidden_dim, [](const auto& v) { return v.template get<int>(); });
    m.read("heads", cfg.model.heads, [](const auto& v) { return v.template get<int>(); });
    m.read("leaky_slope", cfg.model.leaky_slope,
           [](const auto& v) { return v.template get<double>(); });
    m.read("activation", cfg.model.activation,
           [](const auto& v) { return activation_from(as_string(v)); });
    m.read("gcn_normalize", cfg.model.gcn_normalize,
           [](const auto& v) { return v.template get<bool>(); });
    m.finish();
  }
  if (j.contains("train")) {
    KeyReader t(j.at("train"), "config.train");
    t.read("learning_rate", cfg.train.learning_rate,
           [](const auto& v) { return v.template get<double>(); });
    t.read("epochs", cfg.train.epochs, [](const auto& v) { return v.template get<int>(); });
    t.read("batch_size", cfg.train.batch_size, [](const auto& v) { return v.template get<int>(); });
    t.read("optimizer", cfg.train.optimizer,
           [](const auto& v) { return optimizer_from(as_string(v)); });
    t.read("beta1", cfg.train.beta1, [](const auto& v) { return v.template get<double>(); });
    t.read("beta2", cfg.train.beta2, [](const auto& v) { return v.template get<double>(); });
    t.read("epsilon", cfg.train.epsilon, [](const auto& v) { return v.template get<double>(); });
    t.read("train_fraction", cfg.train.train_fraction,
           [](const auto& v) { return v.template get<double>(); });
    t.read("test_fraction", cfg.train.test_fraction,
           [](const auto& v) { return v.template get<double>(); });
    t.finish();
  }

  // Nested objects were consumed above; register their keys so the
  // unknown-key check accepts them.
  int sink = 0;
  top.read("model", sink, [](const auto&) { return 0; });
  top.read("train", sink, [](const auto&) { return 0; });
  top.finish();
}

}  // namespace

PipelineConfig default_config() { return PipelineConfig{}; }

PipelineConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }

  PipelineConfig cfg;
  try {
    read_config_keys(j, cfg);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid config value: ") + e.what());
  }

  if (cfg.embed_dim <= 0 || cfg.node_cap <= 0 || cfg.max_tokens <= 0 || cfg.min_count <= 0)
    throw Error("embed_dim, node_cap, max_tokens, min_count must be positive");
  if (cfg.model.layers <= 0 || cfg.model.hidden_dim <= 0 || cfg.model.heads <= 0)
    throw Error("model.layers, model.hidden_dim, model.heads must be positive");
  if (cfg.train.epochs < 0 || cfg.train.batch_size <= 0)
    throw Error("train.epochs must be non-negative and train.batch_size positive");
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json(const PipelineConfig& cfg) {
  ordered_json j;
  j["embed_dim"] = cfg.embed_dim;
  j["node_cap"] = cfg.node_cap;
  j["max_tokens"] = cfg.max_tokens;
  j["min_count"] = cfg.min_count;
  j["classes"] = cfg.classes.names();
  j["direction"] = direction_name(cfg.direction);
  ordered_json m;
  m["kind"] = layer_kind_name(cfg.model.kind);
  m["layers"] = cfg.model.layers;
  m["hidden_dim"] = cfg.model.hidden_dim;
  m["heads"] = cfg.model.heads;
  m["leaky_slope"] = cfg.model.leaky_slope;
  m["activation"] = activation_name(cfg.model.activation);
  m["gcn_normalize"] = cfg.model.gcn_normalize;
  j["model"] = std::move(m);
  ordered_json t;
  t["learning_rate"] = cfg.train.learning_rate;
  t["epochs"] = cfg.train.epochs;
  t["batch_size"] = cfg.train.batch_size;
  t["optimizer"] = optimizer_name(cfg.train.optimizer);
  t["beta1"] = cfg.train.beta1;
  t["beta2"] = cfg.train.beta2;
  t["epsilon"] = cfg.train.epsilon;
  t["train_fraction"] = cfg.train.train_fraction;
  t["test_fraction"] = cfg.train.test_fraction;
  j["train"] = std::move(t);
  j["threshold"] = cfg.threshold;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

std::string config_hash(const PipelineConfig& cfg) {
  std::string canon = config_to_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : canon) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<LayerSpec> make_layer_specs(const PipelineConfig& cfg) {
  std::vector<LayerSpec> specs;
  for (int l = 0; l < cfg.model.layers; ++l) {
    LayerSpec s;
    s.kind = cfg.model.kind;
    s.in_dim = l == 0 ? cfg.embed_dim : cfg.model.hidden_dim;
    s.out_dim = cfg.model.hidden_dim;
    s.activation = cfg.model.activation;
    s.leaky_slope = cfg.model.leaky_slope;
    s.heads = cfg.model.kind == LayerKind::Gat ? cfg.model.heads : 1;
    s.normalize_adjacency = cfg.model.gcn_normalize;
    specs.push_back(s);
  }
  return specs;
}

}  // namespace vignat
