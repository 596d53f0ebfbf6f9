// Command line front end: parse and graph single functions, train and
// evaluate classifiers over JSONL corpora, explain predictions, and
// generate synthetic datasets.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vignat/errors.hpp"
#include "vignat/pipeline.hpp"

namespace {

struct GlobalOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
};

vignat::PipelineConfig effective_config(const GlobalOpts& g) {
  vignat::PipelineConfig cfg =
      g.config_path.empty() ? vignat::default_config() : vignat::load_config(g.config_path);
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.train.seed = *g.seed;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"code property graph vulnerability classifier"};
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--config", global.config_path, "JSON config file")->expected(1);
  app.add_option("--seed", global.seed, "master seed override");
  app.add_option("--out", global.out, "output path (default stdout or command default)");

  vignat::ParseArgs parse_args;
  auto* parse_cmd = app.add_subcommand("parse", "parse one function and emit its syntax tree");
  parse_cmd->add_option("file", parse_args.file, "C source file with one function")->required();
  parse_cmd->add_option("--emit", parse_args.emit, "ast-json, ast-dot, or cfg-dot");

  vignat::GraphArgs graph_args;
  auto* graph_cmd = app.add_subcommand("graph", "emit the code property graph");
  graph_cmd->add_option("file", graph_args.file, "C source file with one function")->required();
  graph_cmd->add_option("--classes", graph_args.classes,
                        "comma list of edge classes (ast,cfg,ddg,cdg)");
  graph_cmd->add_option("--emit", graph_args.emit, "dot or json");

  vignat::TrainCmdArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "train a classifier on a JSONL corpus");
  train_cmd->add_option("--data", train_args.data, "JSONL file of {func, target}")->required();

  vignat::EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on a JSONL corpus");
  eval_cmd->add_option("--model", eval_args.model, "model JSON file")->required();
  eval_cmd->add_option("--data", eval_args.data, "JSONL file of {func, target}")->required();

  vignat::PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand("predict", "score one function");
  predict_cmd->add_option("--model", predict_args.model, "model JSON file")->required();
  predict_cmd->add_option("file", predict_args.file, "C source file with one function")
      ->required();

  vignat::ExplainArgs explain_args;
  auto* explain_cmd = app.add_subcommand("explain", "rank the most attended edges");
  explain_cmd->add_option("--model", explain_args.model, "model JSON file")->required();
  explain_cmd->add_option("file", explain_args.file, "C source file with one function")
      ->required();
  explain_cmd->add_option("--k", explain_args.k, "edges to report");
  explain_cmd->add_option("--emit", explain_args.emit, "dot or json");
  explain_cmd->add_option("--score", explain_args.score, "raw or normalized coefficients");
  explain_cmd->add_option("--layer", explain_args.layer, "restrict to one layer");

  vignat::SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "generate a labeled synthetic corpus");
  synth_cmd->add_option("--count", synth_args.count, "number of functions");
  synth_cmd->add_option("--rate", synth_args.rate, "positive fraction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    vignat::PipelineConfig cfg = effective_config(global);
    if (parse_cmd->parsed()) {
      parse_args.out = global.out;
      return vignat::run_parse(cfg, parse_args);
    }
    if (graph_cmd->parsed()) {
      graph_args.out = global.out;
      return vignat::run_graph(cfg, graph_args);
    }
    if (train_cmd->parsed()) {
      if (!global.out.empty()) train_args.out = global.out;
      return vignat::run_train(cfg, train_args);
    }
    if (eval_cmd->parsed()) {
      eval_args.out = global.out;
      return vignat::run_eval(cfg, eval_args);
    }
    if (predict_cmd->parsed()) {
      predict_args.out = global.out;
      return vignat::run_predict(cfg, predict_args);
    }
    if (explain_cmd->parsed()) {
      explain_args.out = global.out;
      return vignat::run_explain(cfg, explain_args);
    }
    if (synth_cmd->parsed()) {
      if (synth_args.count <= 0) throw vignat::Error("--count must be positive");
      if (global.seed) synth_args.seed = *global.seed;
      if (!global.out.empty()) synth_args.out = global.out;
      return vignat::run_synth(cfg, synth_args);
    }
  } catch (const vignat::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
