#pragma once

#include <optional>
#include <string>

#include "vignat/config.hpp"
#include "vignat/cpg.hpp"
#include "vignat/featurize.hpp"
#include "vignat/model_io.hpp"

namespace vignat {

// Logging goes to stderr and never into artifacts. VIGNAT_LOG picks the
// level: quiet, info (default), debug.
int log_level();
void log_info(const std::string& message);
void log_debug(const std::string& message);

struct ParseArgs {
  std::string file;
  std::string emit = "ast-json";  // ast-json | ast-dot | cfg-dot
  std::string out;                // empty writes to stdout
};

struct GraphArgs {
  std::string file;
  std::string classes;  // CSV override; empty uses the config
  std::string emit = "dot";  // dot | json
  std::string out;
};

struct TrainCmdArgs {
  std::string data;
  std::string out = "model.json";
};

struct EvalArgs {
  std::string model;
  std::string data;
  std::string out;
};

struct PredictArgs {
  std::string model;
  std::string file;
  std::string out;
};

struct ExplainArgs {
  std::string model;
  std::string file;
  int k = 5;
  std::string emit = "dot";  // dot | json
  std::string score = "raw";  // raw | normalized
  std::optional<int> layer;
  std::string out;
};

struct SynthArgs {
  int count = 200;
  double rate = 0.5;
  std::uint64_t seed = 7;
  std::string out = "synthetic.jsonl";
};

// Full source-to-graph path for one function under a config.
struct BuiltGraph {
  Ast ast;
  Cpg cpg;
  SimpleGraph simple;
};
BuiltGraph build_graph(const std::string& source, const PipelineConfig& cfg,
                       std::optional<int> label);
GraphTensors featurize_function(const SourceFunction& f, const PipelineConfig& cfg,
                                const Vocab& vocab, const EmbeddingTable& table);

// Commands return process exit status: 0 on success. Failures throw.
int run_parse(const PipelineConfig& cfg, const ParseArgs& args);
int run_graph(const PipelineConfig& cfg, const GraphArgs& args);
int run_train(const PipelineConfig& cfg, const TrainCmdArgs& args);
int run_eval(const PipelineConfig& cfg, const EvalArgs& args);
int run_predict(const PipelineConfig& cfg, const PredictArgs& args);
int run_explain(const PipelineConfig& cfg, const ExplainArgs& args);
int run_synth(const PipelineConfig& cfg, const SynthArgs& args);

}  // namespace vignat
