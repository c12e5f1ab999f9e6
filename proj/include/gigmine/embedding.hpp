#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gigmine/graph.hpp"

namespace gigmine {

/// Vocabulary used by walks: artists take [0, A), venues [A, A + V).
std::uint32_t vocab_index(const BipartiteGraph& g, NodeRef n);
NodeRef vocab_node(const BipartiteGraph& g, std::uint32_t token);

using Walk = std::vector<std::uint32_t>;

struct WalkOptions {
  std::size_t walks_per_node = 40;
  std::size_t length = 10;  // steps; a walk holds length + 1 nodes
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// Uniform random walk of up to `length` steps from `start`; stops early at
/// a node without neighbors.
Walk random_walk(const BipartiteGraph& g, NodeRef start, std::size_t length, std::mt19937_64& rng);

/// walks_per_node walks from every node, rounds in order and nodes shuffled
/// within a round. Each walk draws from its own seeded stream, so the output
/// does not depend on the thread count.
std::vector<Walk> sample_walks(const BipartiteGraph& g, const WalkOptions& opts);

struct EmbeddingOptions {
  std::size_t dim = 128;
  std::size_t window = 5;
  std::size_t negative = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to 1e-4 of this
  std::uint64_t seed = 0;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Embeddings {
  RowMatrix vectors;         // one row per token
  std::vector<double> epoch_loss;  // mean skip-gram loss per training pair, per epoch

  Eigen::VectorXd row(std::uint32_t token) const { return vectors.row(token).transpose(); }
};

/// Skip-gram with negative sampling over the walks, single-threaded and
/// deterministic for a given seed.
Embeddings train_embeddings(const std::vector<Walk>& walks, std::size_t vocab_size, const EmbeddingOptions& opts);

/// Cosine similarity; 0 when either vector is zero.
double cosine_similarity(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Cosine similarity of the two nodes' vectors; throws UnknownNodeError when
/// a node has no vector.
double score_embedding(const Embeddings& emb, const BipartiteGraph& g, NodeRef u, NodeRef w);

}  // namespace gigmine
