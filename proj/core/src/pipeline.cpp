#include "vignat/pipeline.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vignat/dataset.hpp"
#include "vignat/errors.hpp"
#include "vignat/explain.hpp"
#include "vignat/train.hpp"

namespace vignat {

int log_level() {
  static int level = [] {
    const char* env = std::getenv("VIGNAT_LOG");
    if (!env) return 1;
    std::string v(env);
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
  }();
  return level;
}

void log_info(const std::string& message) {
  if (log_level() >= 1) std::cerr << message << '\n';
}

void log_debug(const std::string& message) {
  if (log_level() >= 2) std::cerr << message << '\n';
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + out_path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

std::string format_metrics(const Metrics& m, const std::string& title) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%s: accuracy=%.4f precision=%.4f recall=%.4f f1=%.4f "
                "(tp=%ld fp=%ld fn=%ld tn=%ld)",
                title.c_str(), m.accuracy, m.precision, m.recall, m.f1, m.tp, m.fp, m.fn, m.tn);
  return buf;
}

ScoreSource score_source_from(const std::string& s) {
  if (s == "raw") return ScoreSource::Raw;
  if (s == "normalized") return ScoreSource::Normalized;
  throw Error("unknown score source '" + s + "' (expected raw or normalized)");
}

}  // namespace

BuiltGraph build_graph(const std::string& source, const PipelineConfig& cfg,
                       std::optional<int> label) {
  BuiltGraph out;
  out.ast = parse_function(source);
  FlowGraph cfg_graph = build_cfg(out.ast);
  std::vector<DefUseChain> chains;
  std::vector<std::pair<NodeId, NodeId>> deps;
  if (cfg.classes.ddg) chains = reaching_definitions(cfg_graph, out.ast);
  if (cfg.classes.cdg) deps = control_dependence(out.ast);
  out.cpg = compose(out.ast, cfg_graph, chains, deps, cfg.classes,
                    out.ast.node(out.ast.root).attrs.at("name"), label);
  out.simple = simplify(out.cpg, cfg.direction);
  return out;
}

GraphTensors featurize_function(const SourceFunction& f, const PipelineConfig& cfg,
                                const Vocab& vocab, const EmbeddingTable& table) {
  BuiltGraph built = build_graph(f.source, cfg, f.label);
  return tensorize(built.simple, built.cpg, vocab, table, cfg.node_cap);
}

int run_parse(const PipelineConfig& cfg, const ParseArgs& args) {
  (void)cfg;
  std::string source = read_file(args.file);
  Ast ast = parse_function(source);
  if (args.emit == "ast-json") {
    emit(ast_to_json(ast), args.out);
  } else if (args.emit == "ast-dot") {
    emit(ast_to_dot(ast), args.out);
  } else if (args.emit == "cfg-dot") {
    emit(cfg_to_dot(build_cfg(ast), ast), args.out);
  } else {
    throw Error("unknown emit format '" + args.emit + "'");
  }
  return 0;
}

int run_graph(const PipelineConfig& cfg, const GraphArgs& args) {
  PipelineConfig effective = cfg;
  if (!args.classes.empty()) effective.classes = EdgeClassSet::parse(args.classes);
  std::string source = read_file(args.file);
  BuiltGraph built = build_graph(source, effective, std::nullopt);
  if (args.emit == "dot") {
    emit(to_dot(built.cpg), args.out);
  } else if (args.emit == "json") {
    emit(cpg_to_json(built.cpg), args.out);
  } else {
    throw Error("unknown emit format '" + args.emit + "'");
  }
  return 0;
}

int run_train(const PipelineConfig& cfg, const TrainCmdArgs& args) {
  IngestResult ingest = ingest_jsonl(args.data);
  log_info("ingested " + std::to_string(ingest.functions.size()) + " functions, skipped " +
           std::to_string(ingest.skipped) + " of " + std::to_string(ingest.total) + " lines");
  for (const std::string& reason : ingest.skip_reasons) log_debug("skip: " + reason);

  std::vector<SourceFunction> corpus = filter_corpus(ingest.functions, cfg.max_tokens);
  log_info("kept " + std::to_string(corpus.size()) + " functions under " +
           std::to_string(cfg.max_tokens) + " tokens");
  if (corpus.empty()) throw EmptyCorpus("no usable functions in " + args.data);

  auto [train_side, test_side] =
      split(corpus, cfg.train.train_fraction, cfg.train.test_fraction, cfg.seed);
  log_info("split: " + std::to_string(train_side.size()) + " train, " +
           std::to_string(test_side.size()) + " test");

  Vocab vocab = build_vocab(train_side, cfg.min_count);
  log_info("vocab size " + std::to_string(vocab.size()));

  std::vector<LayerSpec> specs = make_layer_specs(cfg);
  Rng init_rng(derive_seed(cfg.seed, "init"));
  ModelParams params = init_params(specs, vocab.size(), cfg.embed_dim, init_rng);

  auto featurize_all = [&](const std::vector<SourceFunction>& fns) {
    std::vector<GraphTensors> out;
    for (const SourceFunction& f : fns)
      out.push_back(featurize_function(f, cfg, vocab, params.embedding));
    return out;
  };
  std::vector<GraphTensors> train_graphs = featurize_all(train_side);
  std::vector<GraphTensors> test_graphs = featurize_all(test_side);

  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  TrainResult result = train(train_graphs, std::move(params), specs, tc);
  if (!result.loss_history.empty()) {
    log_info("loss: first epoch " + std::to_string(result.loss_history.front()) +
             ", last epoch " + std::to_string(result.loss_history.back()));
  }

  Metrics on_train = evaluate(result.params, specs, train_graphs, cfg.threshold);
  Metrics on_test = evaluate(result.params, specs, test_graphs, cfg.threshold);
  log_info(format_metrics(on_train, "train"));
  log_info(format_metrics(on_test, "test"));

  Model model{cfg, std::move(vocab), std::move(result.params)};
  save_model(model, args.out);
  log_info("wrote " + args.out);
  return 0;
}

int run_eval(const PipelineConfig& cfg, const EvalArgs& args) {
  (void)cfg;
  Model model = load_model(args.model);
  std::vector<LayerSpec> specs = model_specs(model);

  IngestResult ingest = ingest_jsonl(args.data);
  log_info("ingested " + std::to_string(ingest.functions.size()) + " functions, skipped " +
           std::to_string(ingest.skipped));
  if (ingest.functions.empty()) throw EmptyCorpus("no usable functions in " + args.data);

  std::vector<GraphTensors> graphs;
  for (const SourceFunction& f : ingest.functions)
    graphs.push_back(featurize_function(f, model.config, model.vocab, model.params.embedding));

  Metrics m = evaluate(model.params, specs, std::move(graphs), model.config.threshold);
  log_info(format_metrics(m, "eval"));
  emit(metrics_to_json(m, config_hash(model.config)), args.out);
  return 0;
}

int run_predict(const PipelineConfig& cfg, const PredictArgs& args) {
  (void)cfg;
  Model model = load_model(args.model);
  SourceFunction f;
  f.source = read_file(args.file);

  GraphTensors tensors = featurize_function(f, model.config, model.vocab, model.params.embedding);
  ForwardTrace trace = forward(tensors, model.params, model_specs(model));

  nlohmann::ordered_json j;
  j["prob"] = trace.probability;
  j["label"] = trace.probability >= model.config.threshold ? 1 : 0;
  j["config_hash"] = config_hash(model.config);
  emit(j.dump(2), args.out);
  return 0;
}

int run_explain(const PipelineConfig& cfg, const ExplainArgs& args) {
  (void)cfg;
  Model model = load_model(args.model);
  std::string source = read_file(args.file);

  BuiltGraph built = build_graph(source, model.config, std::nullopt);
  GraphTensors tensors =
      tensorize(built.simple, built.cpg, model.vocab, model.params.embedding,
                model.config.node_cap);
  ForwardTrace trace = forward(tensors, model.params, model_specs(model));
  Explanation explanation = top_k_edges(trace, tensors, built.cpg, args.k,
                                        score_source_from(args.score), args.layer);
  log_info("prob " + std::to_string(explanation.probability) + ", top " +
           std::to_string(explanation.edges.size()) + " edges");

  std::string hash = config_hash(model.config);
  if (args.emit == "dot") {
    emit(render_explanation(explanation, built.cpg, "config " + hash), args.out);
  } else if (args.emit == "json") {
    emit(explanation_to_json(explanation, hash), args.out);
  } else {
    throw Error("unknown emit format '" + args.emit + "'");
  }
  return 0;
}

int run_synth(const PipelineConfig& cfg, const SynthArgs& args) {
  (void)cfg;
  SyntheticSpec spec;
  spec.count = args.count;
  spec.positive_rate = args.rate;
  spec.seed = args.seed;
  std::vector<SourceFunction> functions = gen_synthetic(spec);
  write_jsonl(functions, args.out);
  log_info("wrote " + std::to_string(functions.size()) + " functions to " + args.out);
  return 0;
}

}  // namespace vignat
