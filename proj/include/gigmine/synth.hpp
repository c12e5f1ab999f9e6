#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "gigmine/graph.hpp"
#include "gigmine/ingest.hpp"
#include "json.hpp"

namespace gigmine {

struct PlantedSignal {
  double success_venue_bias = 3.0;  // hub-venue weight multiplier for positives before their change point
  double positive_fraction = 0.15;
  std::size_t future_edge_count = 50;
  std::size_t trajectory_artists = 3;
};

struct GenSpec {
  std::size_t n_artists = 2000;
  std::size_t n_venues = 2000;
  int first_year = 2007;
  int last_year = 2017;  // the last two years are the test years
  std::uint64_t seed = 0;
  double heavy_tail_exponent = 2.2;
  std::uint32_t min_concerts = 10;
  std::uint32_t max_concerts = 2000;
  PlantedSignal planted{};

  double hub_fraction = 0.05;
  double test_share = 0.15;  // share of events beyond the first 10 placed in the test years
  std::size_t pre2007_artists = 20;
  int pre2007_first_year = 2003;
  int trajectory_start_year = 2010;  // ramps over six years from here
  std::size_t route_count = 3;
  std::size_t route_length = 4;
  std::size_t tours_per_route = 60;
  std::size_t n_cities = 0;  // 0: derived from n_venues
  std::size_t indie_labels = 20;
  // An artist's n-th event goes to a venue it has not played with probability
  // venue_novelty / (venue_novelty + n), otherwise it repeats a past event's
  // venue. Each event's venue is still marginally a fresh draw.
  double venue_novelty = 20.0;

  int train_end_year() const { return last_year - 2; }
  nlohmann::json to_json() const;
  static GenSpec from_json(const nlohmann::json& j);
};

struct GeneratedCorpus {
  std::string events_csv;
  std::string releases_csv;
  std::string labels_csv;
  nlohmann::json manifest;

  /// Writes events.csv, releases.csv, labels.csv and manifest.json.
  void write(const std::filesystem::path& dir) const;
  LoadedCorpus load() const;
};

/// Seeded corpus with planted ground truth. Throws InvalidArgument for an
/// infeasible spec.
GeneratedCorpus generate(const GenSpec& spec);

/// Discrete power law P(k) ~ k^-exponent for k >= k_min, by inverse CDF of
/// the continuous approximation, capped at k_max.
std::uint32_t sample_concert_count(std::mt19937_64& rng, double exponent, std::uint32_t k_min, std::uint32_t k_max);

struct CommunitySpec {
  std::size_t n_artists = 1000;
  std::size_t n_venues = 800;
  std::size_t communities = 10;
  std::size_t min_degree = 6;
  std::size_t max_degree = 20;
  double p_in = 0.9;  // chance that an artist's edge stays inside its community
  std::uint64_t seed = 0;
};

/// Planted-partition bipartite graph: artists and venues split into equal
/// communities; each artist links mostly inside its own.
BipartiteGraph community_bipartite_graph(const CommunitySpec& spec);

}  // namespace gigmine
