#include "vignat/gnn.hpp"

#include <cmath>

#include "vignat/errors.hpp"

namespace vignat {

namespace {

double leaky(double x, double slope) { return x > 0.0 ? x : slope * x; }

// Derivative of the layer activation recovered from its output. Works
// because every supported activation is monotone and sign-preserving.
double act_deriv(Activation act, double out, double slope) {
  switch (act) {
    case Activation::ReLU: return out > 0.0 ? 1.0 : 0.0;
    case Activation::LeakyReLU: return out > 0.0 ? 1.0 : slope;
    case Activation::Identity: return 1.0;
  }
  return 1.0;
}

double apply_act(Activation act, double x, double slope) {
  switch (act) {
    case Activation::ReLU: return x > 0.0 ? x : 0.0;
    case Activation::LeakyReLU: return leaky(x, slope);
    case Activation::Identity: return x;
  }
  return x;
}

void check_input(const Matrix& h, const LayerSpec& spec, const GraphTensors& g) {
  if (h.cols != spec.in_dim) throw ShapeMismatch("layer input width does not match spec");
  if (h.rows != g.cap) throw ShapeMismatch("layer input rows do not match the node cap");
}

// Degree coefficients for the convolution layer; identity when
// normalization is off. Degrees count the self-loop, so they never vanish
// on valid rows.
std::vector<double> degree_scale(const GraphTensors& g) {
  std::vector<double> inv_sqrt(static_cast<std::size_t>(g.cap), 0.0);
  for (int i = 0; i < g.cap; ++i) {
    if (!g.valid[static_cast<std::size_t>(i)]) continue;
    int deg = 0;
    for (int j = 0; j < g.cap; ++j)
      if (g.edge(i, j)) ++deg;
    if (deg > 0) inv_sqrt[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(static_cast<double>(deg));
  }
  return inv_sqrt;
}

}  // namespace

ModelParams init_params(const std::vector<LayerSpec>& specs, int vocab_size, int embed_dim,
                        Rng& rng) {
  ModelParams p;
  for (const LayerSpec& spec : specs) {
    LayerParams lp;
    lp.weight = glorot_uniform(spec.out_dim, spec.in_dim, spec.in_dim, spec.out_dim, rng);
    if (spec.kind == LayerKind::Gat) {
      for (int k = 0; k < spec.heads; ++k) {
        Matrix a = glorot_uniform(1, 2 * spec.out_dim, 2 * spec.out_dim, 1, rng);
        lp.attention.push_back(std::move(a.data));
      }
    }
    p.layers.push_back(std::move(lp));
  }
  int last = specs.empty() ? embed_dim : specs.back().out_dim;
  Matrix r = glorot_uniform(1, last, last, 1, rng);
  p.readout_weight = std::move(r.data);
  p.readout_bias = 0.0;
  p.embedding = init_embedding(vocab_size, embed_dim, rng);
  return p;
}

Gradients zero_gradients(const ModelParams& params) {
  Gradients g;
  for (const LayerParams& lp : params.layers) {
    LayerGrads lg;
    lg.weight = Matrix(lp.weight.rows, lp.weight.cols);
    for (const auto& a : lp.attention) lg.attention.emplace_back(a.size(), 0.0);
    g.layers.push_back(std::move(lg));
  }
  g.readout_weight.assign(params.readout_weight.size(), 0.0);
  g.readout_bias = 0.0;
  g.embedding = Matrix(params.embedding.weights.rows, params.embedding.weights.cols);
  return g;
}

void accumulate(Gradients& into, const Gradients& g) {
  for (std::size_t l = 0; l < into.layers.size(); ++l) {
    for (std::size_t i = 0; i < into.layers[l].weight.data.size(); ++i)
      into.layers[l].weight.data[i] += g.layers[l].weight.data[i];
    for (std::size_t k = 0; k < into.layers[l].attention.size(); ++k)
      for (std::size_t i = 0; i < into.layers[l].attention[k].size(); ++i)
        into.layers[l].attention[k][i] += g.layers[l].attention[k][i];
  }
  for (std::size_t i = 0; i < into.readout_weight.size(); ++i)
    into.readout_weight[i] += g.readout_weight[i];
  into.readout_bias += g.readout_bias;
  for (std::size_t i = 0; i < into.embedding.data.size(); ++i)
    into.embedding.data[i] += g.embedding.data[i];
}

void scale(Gradients& g, double factor) {
  for (LayerGrads& lg : g.layers) {
    for (double& v : lg.weight.data) v *= factor;
    for (auto& a : lg.attention)
      for (double& v : a) v *= factor;
  }
  for (double& v : g.readout_weight) v *= factor;
  g.readout_bias *= factor;
  for (double& v : g.x.data) v *= factor;
  for (double& v : g.embedding.data) v *= factor;
}

Matrix gat_logits(const Matrix& h_prev, const LayerParams& params, const LayerSpec& spec,
                  const GraphTensors& g, int head) {
  check_input(h_prev, spec, g);
  const std::vector<double>& a = params.attention[static_cast<std::size_t>(head)];
  if (static_cast<int>(a.size()) != 2 * spec.out_dim)
    throw ShapeMismatch("attention vector length is not twice the layer width");

  Matrix z = matmul_nt(h_prev, params.weight);  // cap x out

  // a . [z_i || z_j] splits into a source and a destination half.
  Matrix e(g.cap, g.cap);
  std::vector<double> src_part(static_cast<std::size_t>(g.cap), 0.0);
  std::vector<double> dst_part(static_cast<std::size_t>(g.cap), 0.0);
  for (int i = 0; i < g.cap; ++i) {
    const double* zi = z.row(i);
    double s = 0.0, d = 0.0;
    for (int c = 0; c < spec.out_dim; ++c) {
      s += a[static_cast<std::size_t>(c)] * zi[c];
      d += a[static_cast<std::size_t>(spec.out_dim + c)] * zi[c];
    }
    src_part[static_cast<std::size_t>(i)] = s;
    dst_part[static_cast<std::size_t>(i)] = d;
  }
  for (int i = 0; i < g.cap; ++i)
    for (int j = 0; j < g.cap; ++j)
      if (g.edge(i, j))
        e.at(i, j) = leaky(src_part[static_cast<std::size_t>(i)] +
                               dst_part[static_cast<std::size_t>(j)],
                           spec.leaky_slope);
  return e;
}

Matrix attention_softmax(const Matrix& logits, const GraphTensors& g) {
  Matrix alpha(g.cap, g.cap);
  for (int i = 0; i < g.cap; ++i) {
    if (!g.valid[static_cast<std::size_t>(i)]) continue;
    double max = 0.0;
    bool any = false;
    for (int j = 0; j < g.cap; ++j)
      if (g.edge(i, j)) {
        double v = logits.at(i, j);
        max = any ? (v > max ? v : max) : v;
        any = true;
      }
    if (!any)
      throw EmptyNeighborhood("node row " + std::to_string(i) + " has an empty neighborhood");
    double total = 0.0;
    for (int j = 0; j < g.cap; ++j)
      if (g.edge(i, j)) {
        double w = std::exp(logits.at(i, j) - max);
        alpha.at(i, j) = w;
        total += w;
      }
    for (int j = 0; j < g.cap; ++j)
      if (g.edge(i, j)) alpha.at(i, j) /= total;
  }
  return alpha;
}

Matrix gat_aggregate(const Matrix& h_prev, const std::vector<Matrix>& alpha_per_head,
                     const LayerParams& params, const LayerSpec& spec, const GraphTensors& g) {
  check_input(h_prev, spec, g);
  if (static_cast<int>(alpha_per_head.size()) != spec.heads)
    throw ShapeMismatch("one attention matrix per head required");

  Matrix z = matmul_nt(h_prev, params.weight);
  Matrix out(g.cap, spec.out_dim);
  double head_scale = 1.0 / static_cast<double>(spec.heads);

  for (int k = 0; k < spec.heads; ++k) {
    const Matrix& alpha = alpha_per_head[static_cast<std::size_t>(k)];
    for (int i = 0; i < g.cap; ++i) {
      if (!g.valid[static_cast<std::size_t>(i)]) continue;
      double* oi = out.row(i);
      for (int j = 0; j < g.cap; ++j) {
        if (!g.edge(i, j)) continue;
        double w = alpha.at(i, j) * head_scale;
        if (w == 0.0) continue;
        const double* zj = z.row(j);
        for (int c = 0; c < spec.out_dim; ++c) oi[c] += w * zj[c];
      }
    }
  }
  for (int i = 0; i < g.cap; ++i) {
    if (!g.valid[static_cast<std::size_t>(i)]) continue;
    double* oi = out.row(i);
    for (int c = 0; c < spec.out_dim; ++c) oi[c] = apply_act(spec.activation, oi[c], spec.leaky_slope);
  }
  return out;
}

Matrix gcn_layer(const Matrix& h_prev, const LayerParams& params, const LayerSpec& spec,
                 const GraphTensors& g) {
  check_input(h_prev, spec, g);
  Matrix p = matmul_nt(h_prev, params.weight);
  for (double& v : p.data) v = v > 0.0 ? v : 0.0;  // inner ReLU

  std::vector<double> inv_sqrt;
  if (spec.normalize_adjacency) inv_sqrt = degree_scale(g);

  Matrix out(g.cap, spec.out_dim);
  for (int i = 0; i < g.cap; ++i) {
    if (!g.valid[static_cast<std::size_t>(i)]) continue;
    double* oi = out.row(i);
    for (int j = 0; j < g.cap; ++j) {
      if (!g.edge(i, j)) continue;
      double coef = 1.0;
      if (spec.normalize_adjacency)
        coef = inv_sqrt[static_cast<std::size_t>(i)] * inv_sqrt[static_cast<std::size_t>(j)];
      const double* pj = p.row(j);
      for (int c = 0; c < spec.out_dim; ++c) oi[c] += coef * pj[c];
    }
    for (int c = 0; c < spec.out_dim; ++c) oi[c] = apply_act(spec.activation, oi[c], spec.leaky_slope);
  }
  return out;
}

ReadoutResult readout(const Matrix& h_last, const GraphTensors& g, const ModelParams& params) {
  if (static_cast<int>(params.readout_weight.size()) != h_last.cols)
    throw ShapeMismatch("readout width does not match the last layer");
  ReadoutResult r;
  r.pooled.assign(static_cast<std::size_t>(h_last.cols), 0.0);
  int count = 0;
  for (int i = 0; i < h_last.rows; ++i) {
    if (!g.valid[static_cast<std::size_t>(i)]) continue;
    ++count;
    const double* hi = h_last.row(i);
    for (int c = 0; c < h_last.cols; ++c) r.pooled[static_cast<std::size_t>(c)] += hi[c];
  }
  if (count > 0)
    for (double& v : r.pooled) v /= static_cast<double>(count);
  r.logit = dot(r.pooled, params.readout_weight) + params.readout_bias;
  return r;
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

ForwardTrace forward(const GraphTensors& g, const ModelParams& params,
                     const std::vector<LayerSpec>& specs) {
  if (params.layers.size() != specs.size())
    throw ShapeMismatch("parameter blocks do not match layer specs");

  ForwardTrace trace;
  trace.h.push_back(g.x);

  for (std::size_t l = 0; l < specs.size(); ++l) {
    const LayerSpec& spec = specs[l];
    const LayerParams& lp = params.layers[l];
    const Matrix& h_prev = trace.h.back();

    if (spec.kind == LayerKind::Gat) {
      std::vector<Matrix> alphas;
      for (int k = 0; k < spec.heads; ++k) {
        AttentionRecord rec;
        rec.layer = static_cast<int>(l);
        rec.head = k;
        rec.logits = gat_logits(h_prev, lp, spec, g, k);
        rec.alpha = attention_softmax(rec.logits, g);
        // Neighborhood softmax must leave every valid row stochastic.
        for (int i = 0; i < g.cap; ++i) {
          if (!g.valid[static_cast<std::size_t>(i)]) continue;
          double sum = 0.0;
          for (int j = 0; j < g.cap; ++j) sum += rec.alpha.at(i, j);
          if (!(std::fabs(sum - 1.0) <= 1e-6))
            throw Error("attention row failed to normalize");
        }
        alphas.push_back(rec.alpha);
        trace.attention.push_back(std::move(rec));
      }
      trace.h.push_back(gat_aggregate(h_prev, alphas, lp, spec, g));
    } else {
      trace.h.push_back(gcn_layer(h_prev, lp, spec, g));
    }
  }

  ReadoutResult r = readout(trace.h.back(), g, params);
  trace.pooled = std::move(r.pooled);
  trace.logit = r.logit;
  trace.probability = logistic(trace.logit);
  return trace;
}

Gradients backward(const ForwardTrace& trace, const GraphTensors& g, const ModelParams& params,
                   const std::vector<LayerSpec>& specs, double dlogit) {
  Gradients grads = zero_gradients(params);

  // Readout: logit = w . pooled + b, pooled = mean over valid rows.
  int valid_count = 0;
  for (int i = 0; i < g.cap; ++i)
    if (g.valid[static_cast<std::size_t>(i)]) ++valid_count;

  for (std::size_t c = 0; c < trace.pooled.size(); ++c)
    grads.readout_weight[c] = dlogit * trace.pooled[c];
  grads.readout_bias = dlogit;

  const Matrix& h_last = trace.h.back();
  Matrix dh(h_last.rows, h_last.cols);
  if (valid_count > 0) {
    double inv = dlogit / static_cast<double>(valid_count);
    for (int i = 0; i < g.cap; ++i) {
      if (!g.valid[static_cast<std::size_t>(i)]) continue;
      double* di = dh.row(i);
      for (int c = 0; c < h_last.cols; ++c)
        di[c] = inv * params.readout_weight[static_cast<std::size_t>(c)];
    }
  }

  for (int l = static_cast<int>(specs.size()) - 1; l >= 0; --l) {
    const LayerSpec& spec = specs[static_cast<std::size_t>(l)];
    const LayerParams& lp = params.layers[static_cast<std::size_t>(l)];
    LayerGrads& lg = grads.layers[static_cast<std::size_t>(l)];
    const Matrix& h_prev = trace.h[static_cast<std::size_t>(l)];
    const Matrix& h_out = trace.h[static_cast<std::size_t>(l) + 1];

    // Through the layer activation, using the stored outputs.
    Matrix du(g.cap, spec.out_dim);
    for (int i = 0; i < g.cap; ++i) {
      if (!g.valid[static_cast<std::size_t>(i)]) continue;
      double* dui = du.row(i);
      const double* dhi = dh.row(i);
      const double* hi = h_out.row(i);
      for (int c = 0; c < spec.out_dim; ++c)
        dui[c] = dhi[c] * act_deriv(spec.activation, hi[c], spec.leaky_slope);
    }

    Matrix dz(g.cap, spec.out_dim);

    if (spec.kind == LayerKind::Gat) {
      Matrix z = matmul_nt(h_prev, lp.weight);
      double head_scale = 1.0 / static_cast<double>(spec.heads);

      for (int k = 0; k < spec.heads; ++k) {
        const AttentionRecord* rec = nullptr;
        for (const AttentionRecord& r : trace.attention)
          if (r.layer == l && r.head == k) rec = &r;
        if (!rec) throw ShapeMismatch("missing attention record for a layer and head");

        const std::vector<double>& a = lp.attention[static_cast<std::size_t>(k)];
        std::vector<double>& da = lg.attention[static_cast<std::size_t>(k)];

        for (int i = 0; i < g.cap; ++i) {
          if (!g.valid[static_cast<std::size_t>(i)]) continue;
          const double* dui = du.row(i);

          // u_i += (1/K) sum_j alpha_ij z_j: branch into alpha and z.
          double dot_sum = 0.0;  // sum_m alpha_im dalpha_im, for the softmax jacobian
          std::vector<double> dalpha(static_cast<std::size_t>(g.cap), 0.0);
          for (int j = 0; j < g.cap; ++j) {
            if (!g.edge(i, j)) continue;
            const double* zj = z.row(j);
            double dot_duz = 0.0;
            for (int c = 0; c < spec.out_dim; ++c) dot_duz += dui[c] * zj[c];
            double dal = head_scale * dot_duz;
            dalpha[static_cast<std::size_t>(j)] = dal;
            dot_sum += rec->alpha.at(i, j) * dal;

            double w = head_scale * rec->alpha.at(i, j);
            double* dzj = dz.row(j);
            for (int c = 0; c < spec.out_dim; ++c) dzj[c] += w * dui[c];
          }

          for (int j = 0; j < g.cap; ++j) {
            if (!g.edge(i, j)) continue;
            // Softmax jacobian, then the attention nonlinearity. The logit
            // sign recovers the pre-nonlinearity sign (the slope keeps it).
            double de = rec->alpha.at(i, j) * (dalpha[static_cast<std::size_t>(j)] - dot_sum);
            double ds = de * (rec->logits.at(i, j) > 0.0 ? 1.0 : spec.leaky_slope);
            if (ds == 0.0) continue;

            const double* zi = z.row(i);
            const double* zj = z.row(j);
            double* dzi = dz.row(i);
            double* dzj = dz.row(j);
            for (int c = 0; c < spec.out_dim; ++c) {
              da[static_cast<std::size_t>(c)] += ds * zi[c];
              da[static_cast<std::size_t>(spec.out_dim + c)] += ds * zj[c];
              dzi[c] += ds * a[static_cast<std::size_t>(c)];
              dzj[c] += ds * a[static_cast<std::size_t>(spec.out_dim + c)];
            }
          }
        }
      }

      // z = h_prev W^T: dW = dz^T h_prev, dh_prev = dz W.
      Matrix dw = matmul_tn(dz, h_prev);
      for (std::size_t i = 0; i < dw.data.size(); ++i) lg.weight.data[i] += dw.data[i];
      dh = matmul_nn(dz, lp.weight);
    } else {
      // out = act(A . ReLU(h_prev W^T))
      Matrix p = matmul_nt(h_prev, lp.weight);
      std::vector<double> inv_sqrt;
      if (spec.normalize_adjacency) inv_sqrt = degree_scale(g);

      Matrix dy(g.cap, spec.out_dim);
      for (int i = 0; i < g.cap; ++i) {
        if (!g.valid[static_cast<std::size_t>(i)]) continue;
        const double* dui = du.row(i);
        for (int j = 0; j < g.cap; ++j) {
          if (!g.edge(i, j)) continue;
          double coef = 1.0;
          if (spec.normalize_adjacency)
            coef = inv_sqrt[static_cast<std::size_t>(i)] * inv_sqrt[static_cast<std::size_t>(j)];
          double* dyj = dy.row(j);
          for (int c = 0; c < spec.out_dim; ++c) dyj[c] += coef * dui[c];
        }
      }
      // Inner ReLU gate, recomputed from p. Derivative at exactly 0 is 0.
      Matrix dp(g.cap, spec.out_dim);
      for (std::size_t i = 0; i < dp.data.size(); ++i)
        dp.data[i] = p.data[i] > 0.0 ? dy.data[i] : 0.0;

      Matrix dw = matmul_tn(dp, h_prev);
      for (std::size_t i = 0; i < dw.data.size(); ++i) lg.weight.data[i] += dw.data[i];
      dh = matmul_nn(dp, lp.weight);
    }

    // Padding rows carry no signal by construction; keep them exactly zero.
    for (int i = 0; i < g.cap; ++i)
      if (!g.valid[static_cast<std::size_t>(i)])
        for (int c = 0; c < dh.cols; ++c) dh.at(i, c) = 0.0;
  }

  grads.x = std::move(dh);
  return grads;
}

void scatter_embedding_gradient(const GraphTensors& g, const Matrix& dx, Matrix& grad) {
  for (std::size_t row = 0; row < g.node_tokens.size(); ++row) {
    const std::vector<int>& tokens = g.node_tokens[row];
    if (tokens.empty()) continue;
    double inv = 1.0 / static_cast<double>(tokens.size());
    const double* d = dx.row(static_cast<int>(row));
    for (int t : tokens) {
      if (t == Vocab::kPad) continue;
      double* gr = grad.row(t);
      for (int c = 0; c < dx.cols; ++c) gr[c] += inv * d[c];
    }
  }
  for (int c = 0; c < grad.cols; ++c) grad.at(Vocab::kPad, c) = 0.0;
}

}  // namespace vignat
