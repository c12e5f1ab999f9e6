#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gigmine/ingest.hpp"

namespace gigmine {

/// A city is the (city, state, country) triple, so Portland OR and Portland
/// ME stay apart.
struct CityKey {
  std::string city;
  std::optional<std::string> state;
  std::string country;

  friend auto operator<=>(const CityKey&, const CityKey&) = default;
  friend bool operator==(const CityKey&, const CityKey&) = default;

  /// "city, state, country", skipping an absent state.
  std::string display() const;
};

struct CitySequence {
  ArtistId artist;
  std::vector<CityKey> cities;
};

/// Drops each city equal to the one before it.
std::vector<CityKey> collapse_repeats(std::vector<CityKey> cities);

/// Per-artist city itinerary ordered by (date, event id), repeats collapsed.
/// Sorted by artist id.
std::vector<CitySequence> city_sequences(const Corpus& corpus, std::size_t threads = 1);

struct RouteCount {
  std::size_t n = 0;
  std::size_t rank = 0;       // 1-based within n
  std::vector<CityKey> route;  // min(route, reversed route)
  std::size_t count = 0;       // forward + reverse
  std::size_t forward = 0, reverse = 0;
  bool bidirectional = false;
};

/// Contiguous n-grams for every n in `n_values`, merged with their reverses.
/// Per n, the top_k routes by count (ties by route order). A palindromic
/// route is counted once per occurrence and reported as bidirectional.
std::vector<RouteCount> mine_routes(std::span<const CitySequence> sequences, const std::vector<std::size_t>& n_values = {4, 5},
                                    std::size_t top_k = 20);

/// `n,rank,route,count,bidirectional` with pipe-separated cities.
std::string routes_csv(std::span<const RouteCount> routes);

}  // namespace gigmine
