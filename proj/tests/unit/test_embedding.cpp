#include "doctest.h"

#include <cmath>
#include <random>

#include "gigmine/embedding.hpp"
#include "gigmine/error.hpp"
#include "gigmine/link_prediction.hpp"
#include "gigmine/synth.hpp"
#include "support.hpp"

using namespace gigmine;
using testing::Pairs;

namespace {

// Two disconnected 6x6 bicliques.
BipartiteGraph two_cliques() {
  Pairs p;
  for (std::uint32_t b = 0; b < 2; ++b)
    for (std::uint32_t i = 0; i < 6; ++i)
      for (std::uint32_t j = 0; j < 6; ++j) p.emplace_back(b * 6 + i, b * 6 + j);
  return graph_from_pairs(12, 12, p);
}

EmbeddingOptions small_options() {
  EmbeddingOptions o;
  o.dim = 16;
  o.epochs = 5;
  o.seed = 3;
  return o;
}

}  // namespace

TEST_CASE("a single edge forces alternating walks") {
  const auto g = graph_from_pairs(1, 1, Pairs{{0, 0}});
  WalkOptions o;
  o.walks_per_node = 3;
  const auto walks = sample_walks(g, o);
  CHECK(walks.size() == 6);
  for (const auto& w : walks) {
    CHECK(w.size() == 11);
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] != w[i - 1]);
  }
}

TEST_CASE("walks stop at isolated nodes and count nodes times walks") {
  const auto g = graph_from_pairs(3, 2, Pairs{{0, 0}, {1, 0}, {1, 1}});
  const auto walks = sample_walks(g, WalkOptions{});
  CHECK(walks.size() == 5 * 40);
  std::size_t singletons = 0;
  for (const auto& w : walks) singletons += w.size() == 1;
  CHECK(singletons == 40);  // artist a2 has no edges
}

TEST_CASE("walk transitions are uniform over neighbors") {
  const auto g = graph_from_pairs(1, 5, Pairs{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}});
  std::mt19937_64 rng(1);
  const int n = 100000;
  std::vector<int> hits(5, 0);
  for (int i = 0; i < n; ++i) {
    const auto w = random_walk(g, artist_node(0), 1, rng);
    ++hits[vocab_node(g, w[1]).index];
  }
  const double p = 0.2, sigma = std::sqrt(n * p * (1 - p));
  for (int h : hits) CHECK(std::abs(h - n * p) < 3 * sigma);
}

TEST_CASE("walks do not depend on the thread count") {
  std::mt19937_64 rng(4);
  const auto g = graph_from_pairs(20, 20, testing::random_pairs(rng, 20, 20, 0.2));
  WalkOptions o;
  o.seed = 8;
  const auto one = sample_walks(g, o);
  o.threads = 4;
  CHECK(sample_walks(g, o) == one);
}

TEST_CASE("embeddings separate disconnected cliques") {
  const auto g = two_cliques();
  WalkOptions wo;
  wo.seed = 2;
  const auto walks = sample_walks(g, wo);
  const auto emb = train_embeddings(walks, 24, small_options());
  REQUIRE(emb.vectors.rows() == 24);
  CHECK(emb.vectors.allFinite());
  for (Eigen::Index i = 0; i < 24; ++i) CHECK(emb.vectors.row(i).norm() > 0.0);

  double intra = 0, inter = 0;
  int n_intra = 0, n_inter = 0;
  for (std::uint32_t a = 0; a < 12; ++a)
    for (std::uint32_t v = 0; v < 12; ++v) {
      const double s = score_embedding(emb, g, artist_node(a), venue_node(v));
      CHECK(s == doctest::Approx(score_embedding(emb, g, venue_node(v), artist_node(a))));
      if (a / 6 == v / 6) intra += s, ++n_intra;
      else inter += s, ++n_inter;
    }
  CHECK(intra / n_intra > inter / n_inter);

  // Same seed, same vectors.
  CHECK(train_embeddings(walks, 24, small_options()).vectors == emb.vectors);
  CHECK_THROWS_AS(score_embedding(emb, g, artist_node(40), venue_node(0)), UnknownNodeError);
  CHECK_THROWS_AS(train_embeddings({}, 24, small_options()), InvalidArgument);
}

TEST_CASE("training loss falls across epochs") {
  // Stochastic negatives make per-epoch loss noisy once it plateaus, so only
  // allow small upticks after the initial drop.
  CommunitySpec cs;
  cs.n_artists = cs.n_venues = 400;
  cs.communities = 4;
  cs.min_degree = 3;
  cs.max_degree = 8;
  cs.seed = 1;
  const auto g = community_bipartite_graph(cs);
  auto o = small_options();
  o.epochs = 6;
  const auto emb = train_embeddings(sample_walks(g, WalkOptions{}), 800, o);
  const auto& loss = emb.epoch_loss;
  REQUIRE(loss.size() == 6);
  CHECK(loss.back() < 0.8 * loss.front());
  for (std::size_t e = 1; e < loss.size(); ++e) CHECK(loss[e] <= loss[e - 1] * 1.005);
}

TEST_CASE("cosine similarity") {
  Eigen::VectorXd x(3), y(3), z(3);
  x << 1, 2, 3;
  y << -2, 1, 0;
  z << 0, 0, 0;
  CHECK(cosine_similarity(x, x) == doctest::Approx(1.0));
  CHECK(cosine_similarity(x, y) == 0.0);
  CHECK(cosine_similarity(x, z) == 0.0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd a(8), b(8);
    for (int d = 0; d < 8; ++d) a(d) = g(rng), b(d) = g(rng);
    double dot = 0, na = 0, nb = 0;
    for (int d = 0; d < 8; ++d) dot += a(d) * b(d), na += a(d) * a(d), nb += b(d) * b(d);
    CHECK(cosine_similarity(a, b) == doctest::Approx(dot / std::sqrt(na * nb)).epsilon(1e-12));
    CHECK(cosine_similarity(a, b) == cosine_similarity(b, a));
  }
}

TEST_CASE("embedding scores in a link-prediction table") {
  const auto g = two_cliques();
  const auto emb = train_embeddings(sample_walks(g, WalkOptions{}), 24, small_options());
  const auto t = score_embeddings(g, emb, EdgeSet{{0, 0}, {0, 11}});
  CHECK(t.at(0, 0) == doctest::Approx(score_embedding(emb, g, artist_node(0), venue_node(0))));
  for (double s : t.scores) CHECK((s >= -1.0 && s <= 1.0));
}
