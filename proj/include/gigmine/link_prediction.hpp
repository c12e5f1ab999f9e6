#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gigmine/embedding.hpp"
#include "gigmine/graph.hpp"
#include "gigmine/ingest.hpp"
#include "json.hpp"

namespace gigmine {

/// (artist index, venue index) pairs, sorted and unique.
using EdgeSet = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

enum class SplitKind { temporal, random };

struct SplitSpec {
  SplitKind kind = SplitKind::temporal;
  int train_end_year = 2015;
  std::vector<int> test_years{2016, 2017};
  double hidden_fraction = 0.20;
  std::uint64_t seed = 0;
  std::uint64_t core_k = 5;
};

struct TemporalSplit {
  BipartiteGraph train;
  EdgeSet test;
  std::size_t test_events = 0;             // events in the test years
  std::size_t test_events_on_core = 0;     // ... whose artist and venue survived the core filter
  std::size_t test_pairs_unseen_node = 0;  // distinct test pairs dropped for an unknown endpoint
  std::size_t test_pairs_in_train = 0;     // distinct test pairs already linked in training
};

/// Train graph from events up to `train_end_year`, reduced by
/// recursive_core_filter(core_k); test edges are the new pairs among
/// surviving nodes in `test_years`. Throws InvalidArgument when either side
/// ends up empty.
TemporalSplit make_temporal_split(const Corpus& corpus, const SplitSpec& spec);

struct RandomSplit {
  BipartiteGraph train;  // same node set as the input graph
  EdgeSet hidden;
};

/// Hides round(hidden_fraction * edges) uniformly chosen edges.
RandomSplit make_random_split(const BipartiteGraph& graph, const SplitSpec& spec);

// Pairwise heuristics over arbitrary nodes, following the set formulas
// literally; CN and Jaccard use neighbors-of-neighbors on one side.
std::size_t score_common_neighbors(const BipartiteGraph& g, NodeRef u, NodeRef w);
double score_jaccard(const BipartiteGraph& g, NodeRef u, NodeRef w);
std::size_t score_preferential_attachment(const BipartiteGraph& g, NodeRef u, NodeRef w);

struct LinkScoreTable {
  std::string predictor;
  EdgeSet pairs;
  std::vector<double> scores;  // aligned with pairs

  /// Throws InvalidArgument when the pair was not scored.
  double at(std::uint32_t artist, std::uint32_t venue) const;

 private:
  mutable std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Batch CN / Jaccard / PA for (artist, venue) candidates. Neighbor-of-
/// neighbor sets are materialized once per distinct endpoint.
struct HeuristicScores {
  LinkScoreTable cn, jaccard, pa;
};
HeuristicScores score_heuristics(const BipartiteGraph& g, const EdgeSet& candidates);

/// Entry (a, v) of the rank-k reconstruction of the binary biadjacency
/// matrix of `train`.
LinkScoreTable score_svd(const BipartiteGraph& train, const EdgeSet& candidates, std::size_t k = 25,
                         std::uint64_t seed = 0);

/// Cosine similarity of the two node embeddings.
LinkScoreTable score_embeddings(const BipartiteGraph& train, const Embeddings& emb, const EdgeSet& candidates);

/// `count` distinct (artist, venue) pairs that are neither edges of `train`
/// nor in `exclude`, uniform over such pairs. Returns all of them when fewer
/// than `count` exist.
EdgeSet sample_negatives(const BipartiteGraph& train, const EdgeSet& exclude, std::size_t count, std::uint64_t seed);

/// ROC AUC of the table's scores with `positives` as the positive class.
double evaluate_linkpred(const LinkScoreTable& scores, const EdgeSet& positives, const EdgeSet& negatives);

struct Task2Config {
  SplitSpec temporal{};
  double hidden_fraction = 0.20;
  std::size_t random_splits = 3;
  std::size_t svd_k = 25;
  WalkOptions walks{};
  EmbeddingOptions embedding{};
  std::size_t negatives_per_positive = 10;
  std::size_t min_negatives = 100000;
  bool exhaustive = false;
  std::vector<std::string> predictors{"common_neighbors", "jaccard", "preferential_attachment", "svd",
                                      "node_similarity"};
  std::uint64_t seed = 42;
  std::size_t threads = 1;

  nlohmann::json to_json() const;
};

struct PredictorAuc {
  std::string predictor;
  double auc = 0.0;                // mean over splits
  std::vector<double> per_split;
};

struct Task2Result {
  std::string task;  // FCST or PRED
  std::vector<PredictorAuc> rows;
  std::size_t train_artists = 0, train_venues = 0, train_edges = 0, train_events = 0;
  std::size_t positives = 0, negatives = 0;
  nlohmann::json split_details;

  nlohmann::json to_json() const;
};

/// Scores every configured predictor on one train graph / positive set.
std::vector<std::pair<std::string, double>> evaluate_predictors(const BipartiteGraph& train, const EdgeSet& positives,
                                                                const EdgeSet& negatives, const Task2Config& cfg,
                                                                std::uint64_t seed);

/// Forecasting on the temporal split, then prediction on random splits of
/// the same node set.
std::vector<Task2Result> run_task2(const Corpus& corpus, const Task2Config& cfg);

/// Graph over every corpus event whose artist and venue are both in `nodes`,
/// keeping its node order.
BipartiteGraph restrict_to_nodes(const Corpus& corpus, const BipartiteGraph& nodes);

}  // namespace gigmine
