#include "vignat/train.hpp"

#include <algorithm>
#include <cmath>

#include "vignat/errors.hpp"

namespace vignat {

std::pair<double, double> bce_loss(double probability, int label) {
  double clamped = std::min(std::max(probability, 1e-7), 1.0 - 1e-7);
  double loss = label == 1 ? -std::log(clamped) : -std::log(1.0 - clamped);
  return {loss, probability - static_cast<double>(label)};
}

std::pair<std::vector<SourceFunction>, std::vector<SourceFunction>> split(
    const std::vector<SourceFunction>& corpus, double train_fraction, double test_fraction,
    std::uint64_t seed) {
  if (std::fabs(train_fraction + test_fraction - 1.0) > 1e-9)
    throw Error("split fractions must sum to 1");

  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].label) throw Error("split requires labeled functions");
    (*corpus[i].label == 1 ? positives : negatives).push_back(i);
  }

  Rng rng(derive_seed(seed, "split"));
  std::vector<SourceFunction> train_side, test_side;
  for (std::vector<std::size_t>* cls : {&positives, &negatives}) {
    rng.shuffle(*cls);
    std::size_t n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(cls->size())));
    for (std::size_t i = 0; i < cls->size(); ++i)
      (i < n_test ? test_side : train_side).push_back(corpus[(*cls)[i]]);
  }

  if (train_side.empty() || test_side.empty())
    throw TooFewSamples("stratified split left an empty side");
  return {std::move(train_side), std::move(test_side)};
}

namespace {

// One optimizer step over every parameter block. Blocks are visited in a
// fixed order so state lines up across steps.
class Optimizer {
 public:
  Optimizer(const TrainConfig& cfg, const ModelParams& params)
      : cfg_(cfg), m_(zero_gradients(params)), v_(zero_gradients(params)) {}

  void step(ModelParams& params, Gradients& grads) {
    ++t_;
    bias1_ = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    bias2_ = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));

    for (std::size_t l = 0; l < params.layers.size(); ++l) {
      update(params.layers[l].weight.data, grads.layers[l].weight.data,
             m_.layers[l].weight.data, v_.layers[l].weight.data);
      for (std::size_t k = 0; k < params.layers[l].attention.size(); ++k)
        update(params.layers[l].attention[k], grads.layers[l].attention[k],
               m_.layers[l].attention[k], v_.layers[l].attention[k]);
    }
    update(params.readout_weight, grads.readout_weight, m_.readout_weight, v_.readout_weight);
    update_one(params.readout_bias, grads.readout_bias, m_.readout_bias, v_.readout_bias);

    if (params.embedding.trainable) {
      update(params.embedding.weights.data, grads.embedding.data, m_.embedding.data,
             v_.embedding.data);
      // The padding row sees only zero gradients, but pin it anyway.
      for (int c = 0; c < params.embedding.weights.cols; ++c)
        params.embedding.weights.at(Vocab::kPad, c) = 0.0;
    }
  }

 private:
  void update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
              std::vector<double>& v) {
    for (std::size_t i = 0; i < p.size(); ++i) update_one(p[i], g[i], m[i], v[i]);
  }

  void update_one(double& p, double g, double& m, double& v) {
    if (cfg_.optimizer == OptimizerKind::GradientDescent) {
      p -= cfg_.learning_rate * g;
      return;
    }
    m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
    v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g * g;
    double m_hat = m / bias1_;
    double v_hat = v / bias2_;
    p -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
  }

  const TrainConfig& cfg_;
  Gradients m_, v_;
  long t_ = 0;
  double bias1_ = 1.0, bias2_ = 1.0;
};

}  // namespace

TrainResult train(std::vector<GraphTensors> graphs, ModelParams initial,
                  const std::vector<LayerSpec>& specs, const TrainConfig& cfg) {
  if (graphs.empty()) throw TooFewSamples("nothing to train on");
  for (const GraphTensors& g : graphs)
    if (!g.label) throw Error("training requires labeled graphs");

  TrainResult result;
  result.params = std::move(initial);
  Optimizer opt(cfg, result.params);

  Rng shuffler(derive_seed(cfg.seed, "shuffle"));
  std::vector<std::size_t> order(graphs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  long step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffler.shuffle(order);
    double epoch_loss = 0.0;

    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      Gradients batch = zero_gradients(result.params);

      for (std::size_t b = start; b < stop; ++b) {
        GraphTensors& g = graphs[order[b]];
        refresh_features(g, result.params.embedding);
        ForwardTrace trace = forward(g, result.params, specs);
        auto [loss, dlogit] = bce_loss(trace.probability, *g.label);
        if (!std::isfinite(loss)) throw NonFiniteLoss(step);
        epoch_loss += loss;

        Gradients grads = backward(trace, g, result.params, specs, dlogit);
        scatter_embedding_gradient(g, grads.x, batch.embedding);
        accumulate(batch, grads);
      }

      scale(batch, 1.0 / static_cast<double>(stop - start));
      opt.step(result.params, batch);
      ++step;
    }

    result.loss_history.push_back(epoch_loss / static_cast<double>(graphs.size()));
  }
  return result;
}

Metrics metrics_from_counts(long tp, long fp, long fn, long tn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  long total = tp + fp + fn + tn;
  m.accuracy = total > 0 ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
  m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

Metrics evaluate(const ModelParams& params, const std::vector<LayerSpec>& specs,
                 std::vector<GraphTensors> graphs, double threshold) {
  long tp = 0, fp = 0, fn = 0, tn = 0;
  for (GraphTensors& g : graphs) {
    if (!g.label) throw Error("evaluation requires labeled graphs");
    refresh_features(g, params.embedding);
    ForwardTrace trace = forward(g, params, specs);
    bool predicted = trace.probability >= threshold;
    bool actual = *g.label == 1;
    if (predicted && actual)
      ++tp;
    else if (predicted && !actual)
      ++fp;
    else if (!predicted && actual)
      ++fn;
    else
      ++tn;
  }
  return metrics_from_counts(tp, fp, fn, tn);
}

}  // namespace vignat
