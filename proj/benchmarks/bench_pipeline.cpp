// Microbenchmarks for the hot path: source -> graph -> tensors -> gradients.
// Inputs come from the synthetic generator so runs are self-contained.

#include <benchmark/benchmark.h>

#include <vector>

#include "vignat/config.hpp"
#include "vignat/dataset.hpp"
#include "vignat/featurize.hpp"
#include "vignat/gnn.hpp"
#include "vignat/parser.hpp"
#include "vignat/pipeline.hpp"
#include "vignat/train.hpp"

namespace {

std::vector<vignat::SourceFunction> corpus() {
  vignat::SyntheticSpec spec;
  spec.count = 64;
  spec.seed = 17;
  return vignat::gen_synthetic(spec);
}

void BM_ParseFunction(benchmark::State& state) {
  std::vector<vignat::SourceFunction> fns = corpus();
  std::size_t i = 0;
  for (auto _ : state) {
    vignat::Ast ast = vignat::parse_function(fns[i].source);
    benchmark::DoNotOptimize(ast.nodes.data());
    i = (i + 1) % fns.size();
  }
}
BENCHMARK(BM_ParseFunction);

void BM_BuildGraph(benchmark::State& state) {
  std::vector<vignat::SourceFunction> fns = corpus();
  vignat::PipelineConfig cfg = vignat::default_config();
  cfg.classes = vignat::EdgeClassSet{true, true, true, true};
  std::size_t i = 0;
  for (auto _ : state) {
    vignat::BuiltGraph built = vignat::build_graph(fns[i].source, cfg, fns[i].label);
    benchmark::DoNotOptimize(built.simple.edges.data());
    i = (i + 1) % fns.size();
  }
}
BENCHMARK(BM_BuildGraph);

void BM_Tensorize(benchmark::State& state) {
  std::vector<vignat::SourceFunction> fns = corpus();
  vignat::PipelineConfig cfg = vignat::default_config();
  vignat::Vocab vocab = vignat::build_vocab(fns, cfg.min_count);
  vignat::Rng rng(3);
  vignat::EmbeddingTable table = vignat::init_embedding(vocab.size(), cfg.embed_dim, rng);

  struct Prepared {
    vignat::Cpg cpg;
    vignat::SimpleGraph simple;
  };
  std::vector<Prepared> graphs;
  for (const vignat::SourceFunction& f : fns) {
    vignat::BuiltGraph built = vignat::build_graph(f.source, cfg, f.label);
    graphs.push_back({std::move(built.cpg), std::move(built.simple)});
  }

  std::size_t i = 0;
  for (auto _ : state) {
    vignat::GraphTensors t =
        vignat::tensorize(graphs[i].simple, graphs[i].cpg, vocab, table, cfg.node_cap);
    benchmark::DoNotOptimize(t.x.data.data());
    i = (i + 1) % graphs.size();
  }
}
BENCHMARK(BM_Tensorize);

void BM_ForwardBackward(benchmark::State& state) {
  std::vector<vignat::SourceFunction> fns = corpus();
  vignat::PipelineConfig cfg = vignat::default_config();
  vignat::Vocab vocab = vignat::build_vocab(fns, cfg.min_count);
  std::vector<vignat::LayerSpec> specs = vignat::make_layer_specs(cfg);
  vignat::Rng rng(vignat::derive_seed(cfg.seed, "init"));
  vignat::ModelParams params = vignat::init_params(specs, vocab.size(), cfg.embed_dim, rng);

  std::vector<vignat::GraphTensors> graphs;
  for (const vignat::SourceFunction& f : fns)
    graphs.push_back(vignat::featurize_function(f, cfg, vocab, params.embedding));

  std::size_t i = 0;
  for (auto _ : state) {
    const vignat::GraphTensors& g = graphs[i];
    vignat::ForwardTrace trace = vignat::forward(g, params, specs);
    auto [loss, dlogit] = vignat::bce_loss(trace.probability, g.label.value_or(0));
    benchmark::DoNotOptimize(loss);
    vignat::Gradients grads = vignat::backward(trace, g, params, specs, dlogit);
    benchmark::DoNotOptimize(grads.readout_bias);
    i = (i + 1) % graphs.size();
  }
}
BENCHMARK(BM_ForwardBackward);

}  // namespace

BENCHMARK_MAIN();
