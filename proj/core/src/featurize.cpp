#include "vignat/featurize.hpp"

#include <algorithm>
#include <map>

#include "vignat/errors.hpp"
#include "vignat/lexer.hpp"

namespace vignat {

int Vocab::index_of(std::string_view token) const {
  auto it = token_to_index.find(std::string(token));
  return it == token_to_index.end() ? kUnk : it->second;
}

Vocab build_vocab(const std::vector<SourceFunction>& corpus, int min_count) {
  if (corpus.empty()) throw EmptyCorpus("cannot build a vocabulary from an empty corpus");

  std::map<std::string, long> freq;
  for (const SourceFunction& f : corpus)
    for (const Token& t : lex(f.source)) ++freq[t.text];

  std::vector<std::pair<std::string, long>> entries;
  for (auto& [token, count] : freq)
    if (count >= min_count) entries.emplace_back(token, count);
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocab v;
  v.index_to_token = {"<pad>", "<unk>"};
  v.token_to_index = {{"<pad>", Vocab::kPad}, {"<unk>", Vocab::kUnk}};
  for (auto& [token, count] : entries) {
    v.token_to_index[token] = v.size();
    v.index_to_token.push_back(token);
  }
  return v;
}

EmbeddingTable init_embedding(int vocab_size, int dim, Rng& rng) {
  EmbeddingTable table;
  table.weights = Matrix(vocab_size, dim);
  for (double& w : table.weights.data) w = rng.uniform(-0.1, 0.1);
  for (int c = 0; c < dim; ++c) table.weights.at(Vocab::kPad, c) = 0.0;
  return table;
}

namespace {

std::vector<int> code_token_indices(std::string_view code, const Vocab& vocab) {
  std::vector<int> out;
  for (const Token& t : lex(code)) out.push_back(vocab.index_of(t.text));
  return out;
}

std::vector<double> mean_embedding(const std::vector<int>& tokens, const EmbeddingTable& table) {
  std::vector<double> out(static_cast<std::size_t>(table.dim()), 0.0);
  if (tokens.empty()) return out;
  for (int idx : tokens) {
    const double* row = table.weights.row(idx);
    for (int c = 0; c < table.dim(); ++c) out[static_cast<std::size_t>(c)] += row[c];
  }
  double inv = 1.0 / static_cast<double>(tokens.size());
  for (double& v : out) v *= inv;
  return out;
}

}  // namespace

std::vector<double> embed_node(std::string_view code, const Vocab& vocab,
                               const EmbeddingTable& table) {
  return mean_embedding(code_token_indices(code, vocab), table);
}

GraphTensors tensorize(const SimpleGraph& g, const Cpg& cpg, const Vocab& vocab,
                       const EmbeddingTable& table, int cap) {
  if (cap <= 0) throw ShapeMismatch("node cap must be positive");
  GraphTensors t;
  t.cap = cap;
  t.valid_count = std::min<int>(cap, static_cast<int>(g.node_ids.size()));
  t.x = Matrix(cap, table.dim());
  t.adj.assign(static_cast<std::size_t>(cap) * cap, 0);
  t.valid.assign(static_cast<std::size_t>(cap), 0);
  t.label = cpg.label;

  std::map<NodeId, int> row_of;
  for (int i = 0; i < t.valid_count; ++i) {
    NodeId id = g.node_ids[static_cast<std::size_t>(i)];
    row_of[id] = i;
    t.node_ids.push_back(id);
    t.node_tokens.push_back(code_token_indices(cpg.node(id).code, vocab));
    t.valid[static_cast<std::size_t>(i)] = 1;
    t.adj[static_cast<std::size_t>(i) * cap + i] = 1;
  }

  for (const SimpleEdge& e : g.edges) {
    auto s = row_of.find(e.src), d = row_of.find(e.dst);
    if (s == row_of.end() || d == row_of.end()) continue;  // truncated away
    t.adj[static_cast<std::size_t>(d->second) * cap + s->second] = 1;
    t.edge_rows.emplace_back(d->second, s->second);
  }

  refresh_features(t, table);
  return t;
}

void refresh_features(GraphTensors& tensors, const EmbeddingTable& table) {
  if (tensors.node_tokens.empty()) return;
  for (int i = 0; i < tensors.valid_count; ++i) {
    std::vector<double> row = mean_embedding(tensors.node_tokens[static_cast<std::size_t>(i)], table);
    for (int c = 0; c < tensors.x.cols; ++c) tensors.x.at(i, c) = row[static_cast<std::size_t>(c)];
  }
}

std::vector<SourceFunction> filter_corpus(const std::vector<SourceFunction>& corpus,
                                          int max_tokens) {
  std::vector<SourceFunction> out;
  for (const SourceFunction& f : corpus)
    if (token_count(f.source) < max_tokens) out.push_back(f);
  return out;
}

}  // namespace vignat
