#include "gigmine/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gigmine/error.hpp"
#include "gigmine/parallel.hpp"

namespace gigmine {

namespace {

std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double log_sigmoid(double z) { return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z)); }

double sigmoid_of(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

std::uint32_t vocab_index(const BipartiteGraph& g, NodeRef n) {
  if (!g.contains(n)) throw UnknownNodeError("node index " + std::to_string(n.index) + " not in graph");
  return n.side == Side::artist ? n.index : static_cast<std::uint32_t>(g.artist_count()) + n.index;
}

NodeRef vocab_node(const BipartiteGraph& g, std::uint32_t token) {
  const auto a = static_cast<std::uint32_t>(g.artist_count());
  if (token < a) return artist_node(token);
  if (token - a >= g.venue_count()) throw UnknownNodeError("token " + std::to_string(token) + " out of range");
  return venue_node(token - a);
}

Walk random_walk(const BipartiteGraph& g, NodeRef start, std::size_t length, std::mt19937_64& rng) {
  Walk w;
  w.reserve(length + 1);
  NodeRef cur = start;
  w.push_back(vocab_index(g, cur));
  for (std::size_t s = 0; s < length; ++s) {
    auto nb = g.neighbors(cur);
    if (nb.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
    cur = NodeRef{opposite(cur.side), nb[pick(rng)]};
    w.push_back(vocab_index(g, cur));
  }
  return w;
}

std::vector<Walk> sample_walks(const BipartiteGraph& g, const WalkOptions& opts) {
  const std::size_t n = g.artist_count() + g.venue_count();
  std::vector<Walk> walks(n * opts.walks_per_node);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::mt19937_64 shuffle_rng(opts.seed);
  std::vector<std::vector<std::uint32_t>> round_order(opts.walks_per_node);
  for (auto& ro : round_order) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    ro = order;
  }
  parallel_for(opts.walks_per_node, opts.threads, [&](std::size_t r) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t token = round_order[r][i];
      std::mt19937_64 rng(mix(opts.seed ^ mix(r * 0x100000001ULL + token)));
      walks[r * n + i] = random_walk(g, vocab_node(g, token), opts.length, rng);
    }
  });
  return walks;
}

Embeddings train_embeddings(const std::vector<Walk>& walks, std::size_t vocab_size, const EmbeddingOptions& opts) {
  if (walks.empty()) throw InvalidArgument("train_embeddings: no walks");
  if (opts.dim == 0 || opts.epochs == 0) throw InvalidArgument("train_embeddings: dim and epochs must be positive");
  std::mt19937_64 rng(opts.seed);
  const auto dim = static_cast<Eigen::Index>(opts.dim);
  const auto V = static_cast<Eigen::Index>(vocab_size);

  Embeddings emb;
  emb.vectors.resize(V, dim);
  std::uniform_real_distribution<double> init(-0.5, 0.5);
  for (Eigen::Index i = 0; i < V; ++i)
    for (Eigen::Index d = 0; d < dim; ++d) emb.vectors(i, d) = init(rng) / static_cast<double>(dim);
  RowMatrix context = RowMatrix::Zero(V, dim);

  std::vector<double> freq(vocab_size, 0.0);
  std::size_t tokens = 0;
  for (const auto& w : walks) {
    for (auto t : w) {
      if (t >= vocab_size) throw InvalidArgument("train_embeddings: token outside vocabulary");
      freq[t] += 1.0;
    }
    tokens += w.size();
  }
  // Negative-sampling distribution: unigram counts to the 3/4 power, laid
  // out as a lookup table so each draw is one uniform index.
  for (auto& f : freq) f = std::pow(f, 0.75);
  const double mass = std::accumulate(freq.begin(), freq.end(), 0.0);
  const std::size_t table_size = std::max<std::size_t>(1 << 20, 16 * vocab_size);
  std::vector<std::uint32_t> table(table_size);
  {
    std::size_t t = 0;
    double cum = 0.0;
    for (std::uint32_t tok = 0; tok < vocab_size && t < table_size; ++tok) {
      cum += freq[tok] / mass;
      const auto upto = std::min(table_size, static_cast<std::size_t>(std::llround(cum * static_cast<double>(table_size))));
      for (; t < upto; ++t) table[t] = tok;
    }
    std::uint32_t last = 0;
    for (std::uint32_t tok = 0; tok < vocab_size; ++tok)
      if (freq[tok] > 0.0) last = tok;
    for (; t < table_size; ++t) table[t] = last;
  }
  std::uniform_int_distribution<std::size_t> noise(0, table_size - 1);

  const double total = static_cast<double>(tokens) * static_cast<double>(opts.epochs);
  double processed = 0.0;
  const std::size_t D = opts.dim;
  std::vector<double> grad(D);
  std::uniform_int_distribution<std::size_t> shrink(0, opts.window > 0 ? opts.window - 1 : 0);
  double* in = emb.vectors.data();
  double* out = context.data();

  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    double loss = 0.0;
    std::size_t pairs = 0;
    for (const auto& w : walks) {
      for (std::size_t i = 0; i < w.size(); ++i, processed += 1.0) {
        const double lr = opts.learning_rate * std::max(1e-4, 1.0 - processed / total);
        const std::size_t b = shrink(rng);
        const std::size_t span = opts.window - b;
        const std::size_t lo = i >= span ? i - span : 0;
        const std::size_t hi = std::min(w.size() - 1, i + span);
        double* c = in + static_cast<std::size_t>(w[i]) * D;
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          std::fill(grad.begin(), grad.end(), 0.0);
          for (std::size_t s = 0; s <= opts.negative; ++s) {
            std::uint32_t target;
            double label;
            if (s == 0) {
              target = w[j];
              label = 1.0;
            } else {
              target = table[noise(rng)];
              if (target == w[j]) continue;
              label = 0.0;
            }
            double* o = out + static_cast<std::size_t>(target) * D;
            double f = 0.0;
            for (std::size_t d = 0; d < D; ++d) f += c[d] * o[d];
            loss -= label > 0.0 ? log_sigmoid(f) : log_sigmoid(-f);
            const double g = (label - sigmoid_of(f)) * lr;
            for (std::size_t d = 0; d < D; ++d) {
              grad[d] += g * o[d];
              o[d] += g * c[d];
            }
          }
          for (std::size_t d = 0; d < D; ++d) c[d] += grad[d];
          ++pairs;
        }
      }
    }
    emb.epoch_loss.push_back(pairs ? loss / static_cast<double>(pairs) : 0.0);
  }
  return emb;
}

double cosine_similarity(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) throw InvalidArgument("cosine_similarity: dimension mismatch");
  const double nx = x.norm(), ny = y.norm();
  if (nx == 0.0 || ny == 0.0) return 0.0;
  return std::clamp(x.dot(y) / (nx * ny), -1.0, 1.0);
}

double score_embedding(const Embeddings& emb, const BipartiteGraph& g, NodeRef u, NodeRef w) {
  const auto tu = vocab_index(g, u), tw = vocab_index(g, w);
  if (tu >= emb.vectors.rows() || tw >= emb.vectors.rows()) throw UnknownNodeError("score_embedding: node has no vector");
  return cosine_similarity(emb.row(tu), emb.row(tw));
}

}  // namespace gigmine
