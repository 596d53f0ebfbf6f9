#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vignat/gnn.hpp"
#include "vignat/parser.hpp"

namespace vignat {

enum class OptimizerKind { AdaptiveMoment, GradientDescent };

struct TrainConfig {
  double learning_rate = 1e-4;
  int epochs = 100;
  int batch_size = 8;
  std::uint64_t seed = 42;
  OptimizerKind optimizer = OptimizerKind::AdaptiveMoment;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double train_fraction = 0.8;
  double test_fraction = 0.2;
};

// Binary cross-entropy on the logistic output. Returns the loss and the
// gradient w.r.t. the pre-link logit (which is probability - label). The
// probability is clamped away from 0 and 1 inside the logs only.
std::pair<double, double> bce_loss(double probability, int label);

// Deterministic stratified split: each class contributes
// round(test_fraction * class size) samples to the test side. Throws
// TooFewSamples if either side ends up empty.
std::pair<std::vector<SourceFunction>, std::vector<SourceFunction>> split(
    const std::vector<SourceFunction>& corpus, double train_fraction, double test_fraction,
    std::uint64_t seed);

struct TrainResult {
  ModelParams params;
  std::vector<double> loss_history;  // mean loss per epoch
};

// Mini-batch training with per-epoch reshuffling. Batch gradients are the
// mean over the batch; updates run serially so one seed gives one model,
// bit for bit. Throws NonFiniteLoss with the offending step index.
TrainResult train(std::vector<GraphTensors> graphs, ModelParams initial,
                  const std::vector<LayerSpec>& specs, const TrainConfig& cfg);

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long tp = 0, fp = 0, fn = 0, tn = 0;
};

// Division by zero (no positive predictions, no positive labels) yields 0.
Metrics metrics_from_counts(long tp, long fp, long fn, long tn);

// Threshold rule: predicted positive when probability >= threshold.
Metrics evaluate(const ModelParams& params, const std::vector<LayerSpec>& specs,
                 std::vector<GraphTensors> graphs, double threshold);

}  // namespace vignat
