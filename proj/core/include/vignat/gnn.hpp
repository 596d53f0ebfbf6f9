#pragma once

#include <vector>

#include "vignat/featurize.hpp"
#include "vignat/matrix.hpp"

namespace vignat {

enum class LayerKind { Gat, Gcn };
enum class Activation { ReLU, LeakyReLU, Identity };

struct LayerSpec {
  LayerKind kind = LayerKind::Gat;
  int in_dim = 0;
  int out_dim = 0;
  Activation activation = Activation::ReLU;
  double leaky_slope = 0.2;  // slope for attention logits and LeakyReLU activations
  int heads = 1;             // attention heads; outputs are averaged pre-activation
  bool normalize_adjacency = false;  // convolution only: symmetric degree normalization
};

struct LayerParams {
  Matrix weight;  // out_dim x in_dim
  std::vector<std::vector<double>> attention;  // per head, length 2 * out_dim
};

struct ModelParams {
  std::vector<LayerParams> layers;
  std::vector<double> readout_weight;  // last layer width
  double readout_bias = 0.0;
  EmbeddingTable embedding;
};

// Glorot-uniform weights, zero bias, U(-0.1, 0.1) embeddings with a pinned
// zero padding row. Draw order is fixed so one seed means one model.
ModelParams init_params(const std::vector<LayerSpec>& specs, int vocab_size, int embed_dim,
                        Rng& rng);

struct LayerGrads {
  Matrix weight;
  std::vector<std::vector<double>> attention;
};

struct Gradients {
  std::vector<LayerGrads> layers;
  std::vector<double> readout_weight;
  double readout_bias = 0.0;
  Matrix x;          // loss gradient w.r.t. the input features
  Matrix embedding;  // filled by scatter_embedding_gradient
};

Gradients zero_gradients(const ModelParams& params);
void accumulate(Gradients& into, const Gradients& g);
void scale(Gradients& g, double factor);

struct AttentionRecord {
  int layer = 0;
  int head = 0;
  // cap x cap, defined where adj is set (self-loops included), 0 elsewhere.
  Matrix logits;  // pre-normalization attention coefficients
  Matrix alpha;   // rows over neighborhoods sum to 1 on valid rows
};

struct ForwardTrace {
  std::vector<Matrix> h;  // h[0] is the input features, h[l] layer l's output
  std::vector<AttentionRecord> attention;
  std::vector<double> pooled;
  double logit = 0.0;
  double probability = 0.5;
};

// Attention logits for one head: LeakyReLU(a . [W h_i || W h_j]) on every
// (i, j) with j in N(i); the shared linear map is applied inside.
Matrix gat_logits(const Matrix& h_prev, const LayerParams& params, const LayerSpec& spec,
                  const GraphTensors& g, int head);

// Neighborhood softmax with max subtraction. Masked entries are exactly 0.
// Throws EmptyNeighborhood if a valid row has no neighbors at all.
Matrix attention_softmax(const Matrix& logits, const GraphTensors& g);

// sigma((1/K) sum_k sum_{j in N(i)} alpha^k_ij W h_j).
Matrix gat_aggregate(const Matrix& h_prev, const std::vector<Matrix>& alpha_per_head,
                     const LayerParams& params, const LayerSpec& spec, const GraphTensors& g);

// sigma(A . ReLU(W h)), optionally with symmetric degree normalization of A.
Matrix gcn_layer(const Matrix& h_prev, const LayerParams& params, const LayerSpec& spec,
                 const GraphTensors& g);

struct ReadoutResult {
  std::vector<double> pooled;  // masked mean over valid rows
  double logit = 0.0;
};

ReadoutResult readout(const Matrix& h_last, const GraphTensors& g, const ModelParams& params);

double logistic(double x);

// Full forward pass. Attention rows are checked to sum to 1 on the way.
ForwardTrace forward(const GraphTensors& g, const ModelParams& params,
                     const std::vector<LayerSpec>& specs);

// Exact reverse-mode gradients for every parameter and the input features,
// given dLoss/dLogit. Mirrors forward step by step; no autodiff involved.
Gradients backward(const ForwardTrace& trace, const GraphTensors& g, const ModelParams& params,
                   const std::vector<LayerSpec>& specs, double dlogit);

// Routes dLoss/dX into the token table: each valid row contributes its
// gradient, split evenly over the row's tokens. The padding row stays zero.
void scatter_embedding_gradient(const GraphTensors& g, const Matrix& dx, Matrix& grad);

}  // namespace vignat
