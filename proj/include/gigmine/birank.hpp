#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gigmine/graph.hpp"
#include "gigmine/ingest.hpp"
#include "gigmine/labeling.hpp"
#include "json.hpp"

namespace gigmine {

/// Query vectors for BiRank, indexed by dense node index. Each side sums to 1.
struct SeedScores {
  std::vector<double> artist;
  std::vector<double> venue;
};

/// log(deg + 1) normalized per side, natural log. Throws InvalidArgument
/// when a side has no nodes or no edges.
SeedScores seed_scores(const BipartiteGraph& g);

struct TemporalWeights {
  std::vector<double> edge_weight;  // aligned with g.edges()
  double delta = 0.85;
  int ref_year = 2017;
};

/// delta^(ref_year - first_year) per edge, optionally times the edge's
/// event count. Throws InvalidArgument for delta outside (0, 1] or an edge
/// newer than ref_year.
TemporalWeights temporal_weights(const BipartiteGraph& g, double delta = 0.85, int ref_year = 2017,
                                 bool count_scaled = false);

struct BiRankOptions {
  double alpha = 0.85;  // artist-side damping
  double beta = 0.85;   // venue-side damping
  double tol = 1e-8;
  std::size_t max_iter = 200;
  bool start_uniform = false;  // start from 1/n vectors instead of the seeds
};

struct BiRankResult {
  std::vector<double> artist_scores;
  std::vector<double> venue_scores;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> deltas;  // max per-side L1 change, per iteration
};

/// Iterates p = beta S^T u + (1-beta) p0, u = alpha S p + (1-alpha) u0 with
/// S = Du^-1/2 W Dp^-1/2. Nodes without weighted edges keep only their
/// seed term.
BiRankResult birank(const BipartiteGraph& g, const TemporalWeights& weights, const SeedScores& seeds,
                    const BiRankOptions& opts = {});

/// 1 for the largest score; equal scores share a rank and the next distinct
/// score takes the next integer.
std::vector<std::size_t> dense_rank(std::span<const double> scores);

struct ArtistRank {
  ArtistId artist;
  std::size_t rank = 0;
  double score = 0.0;
};

struct YearRanking {
  int year = 0;
  std::vector<ArtistRank> ranks;  // sorted by rank, then artist id
};

struct TrajectoryOptions {
  int window_years = 3;
  double delta = 0.85;
  bool count_scaled = false;
  BiRankOptions birank{};
  std::size_t threads = 1;
};

struct Trajectories {
  std::vector<YearRanking> years;
  std::vector<int> skipped_years;  // windows without events
};

/// One BiRank per year Y over the events in [Y - window + 1, Y], with
/// ref_year = Y. Years run from the first full window to the last event
/// year. Throws InvalidArgument when the corpus spans fewer years than the
/// window.
Trajectories yearly_trajectories(const Corpus& corpus, const TrajectoryOptions& opts = {});

/// Rank of `artist` in each year it appears, in year order.
std::vector<std::pair<int, std::size_t>> trajectory_of(const Trajectories& t, const ArtistId& artist);

struct ScoreHistogram {
  std::vector<double> edges;     // bins + 1 shared edges
  std::vector<double> positive;  // relative frequency per bin
  std::vector<double> negative;
  std::size_t positive_count = 0, negative_count = 0;
  double positive_mean = 0.0, negative_mean = 0.0;
  double positive_median = 0.0, negative_median = 0.0;

  nlohmann::json to_json() const;
};

/// Per-class relative-frequency histograms over equal-width shared bins.
/// Throws InvalidArgument when either class is empty.
ScoreHistogram score_histogram(std::span<const double> scores, const std::vector<bool>& positive,
                               std::size_t bins = 20);
/// Artist scores of `result` split by `labels`; every artist of `g` must be
/// labeled.
ScoreHistogram score_histogram(const BiRankResult& result, const BipartiteGraph& g, const Labeling& labels,
                               std::size_t bins = 20);

struct Task3Config {
  double delta = 0.85;
  std::optional<int> ref_year;  // latest event year when unset
  bool count_scaled = false;
  BiRankOptions birank{};
  int window_years = 3;
  std::size_t top_k = 10;
  std::size_t bins = 20;
  std::size_t threads = 1;

  nlohmann::json to_json() const;
};

struct Task3Output {
  nlohmann::json report;
  Trajectories trajectories;
};

Task3Output run_task3(const Corpus& corpus, const Labeling& labels, const Task3Config& cfg);

/// `artist_id,year,rank,score` rows.
std::string trajectories_csv(const Trajectories& t);

}  // namespace gigmine
