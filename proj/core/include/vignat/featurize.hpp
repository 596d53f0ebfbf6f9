#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vignat/cpg.hpp"
#include "vignat/matrix.hpp"
#include "vignat/parser.hpp"

namespace vignat {

// Token table. Index 0 is the padding token and index 1 the unknown token;
// real tokens start at 2, most frequent first, ties broken lexicographically.
struct Vocab {
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  std::unordered_map<std::string, int> token_to_index;
  std::vector<std::string> index_to_token;

  int index_of(std::string_view token) const;
  int size() const { return static_cast<int>(index_to_token.size()); }
};

Vocab build_vocab(const std::vector<SourceFunction>& corpus, int min_count);

// Trainable token embeddings. Row 0 backs the padding token and stays zero
// through init and every update.
struct EmbeddingTable {
  Matrix weights;  // vocab size x dim
  bool trainable = true;

  int dim() const { return weights.cols; }
};

EmbeddingTable init_embedding(int vocab_size, int dim, Rng& rng);

// Mean of the embeddings of the code slice's tokens; unknown tokens map to
// the unknown row, token-free code (Entry/Exit) to the zero vector.
std::vector<double> embed_node(std::string_view code, const Vocab& vocab,
                               const EmbeddingTable& table);

// Fixed-size tensors for one graph. Row i of x and row/column i of adj are
// zero for i >= valid_count; the adjacency diagonal is set exactly on valid
// rows. adj is row-major: adj[i*cap+j] = 1 means i aggregates from j.
struct GraphTensors {
  int cap = 0;
  int valid_count = 0;
  Matrix x;
  std::vector<std::uint8_t> adj;
  std::vector<std::uint8_t> valid;
  std::optional<int> label;
  std::vector<NodeId> node_ids;               // row -> Cpg node id
  std::vector<std::vector<int>> node_tokens;  // row -> vocab indices of its code
  // Attention pairs (i, j): i aggregates from j, i != j, both rows valid.
  // Pair (i, j) corresponds to the simple edge node_ids[j] -> node_ids[i].
  std::vector<std::pair<int, int>> edge_rows;

  bool edge(int i, int j) const {
    return adj[static_cast<std::size_t>(i) * cap + j] != 0;
  }
};

// Keeps the first `cap` nodes (graph order, which is AST pre-order plus
// Entry/Exit); edges touching truncated nodes are dropped.
GraphTensors tensorize(const SimpleGraph& g, const Cpg& cpg, const Vocab& vocab,
                       const EmbeddingTable& table, int cap);

// Recomputes x from the current table. No-op for tensors built without
// token lists (hand-made fixtures).
void refresh_features(GraphTensors& tensors, const EmbeddingTable& table);

// Keeps functions whose token count is strictly below the limit.
std::vector<SourceFunction> filter_corpus(const std::vector<SourceFunction>& corpus,
                                          int max_tokens);

}  // namespace vignat
